#ifndef LOOPBV_ALGEBRA_HPP
#define LOOPBV_ALGEBRA_HPP

#include "loopbv/rings.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace loopbv {

struct Generator {
    std::string name;
    long degree = 0;

    bool odd() const { return degree % 2 != 0; }
};

// Exponent vector indexed by generator position in the presentation.
// Odd generators carry exponent <= 1; products that would square an odd
// generator vanish. operator< is a plain container order for map keys,
// not the monomial order (see Presentation::monomial_less).
struct Monomial {
    std::vector<int> e;

    bool operator<(const Monomial &o) const { return e < o.e; }
    bool operator==(const Monomial &o) const { return e == o.e; }
    bool operator!=(const Monomial &o) const { return e != o.e; }
    int total_exponent() const;
    bool is_unit() const { return total_exponent() == 0; }
};

// Exact linear combination of monomials. No zero coefficients are stored;
// equality is decided on normal forms only.
struct Element {
    std::map<Monomial, Rat> terms;

    bool is_zero() const { return terms.empty(); }
    bool operator==(const Element &o) const { return terms == o.terms; }
    bool operator!=(const Element &o) const { return terms != o.terms; }
};

Element operator+(const Element &a, const Element &b);
Element operator-(const Element &a, const Element &b);
Element operator-(const Element &a);
Element operator*(const Rat &c, const Element &a);

struct RewriteRule {
    Monomial lhs;
    Element rhs; // strictly smaller monomials, same degree
};

struct TorsionRule {
    Int modulus; // positive
    Monomial monomial;
};

// Exponent caps for generators that no relation bounds. All "for all"
// sweeps are quantified over the window and every report records it.
struct DegreeWindow {
    int default_cap = 6;
    std::map<std::string, int> caps;

    int cap_for(const std::string &name) const;
    std::string str() const;
};

struct BasisEntry {
    Monomial mon;
    Int annihilator; // 0 = free, m > 0 = m-torsion
};

struct GradedPiece {
    std::vector<BasisEntry> entries;
    bool window_truncated = false; // completeness not certified in this degree
};

// Finitely presented Z-graded graded-commutative algebra: generators with
// degrees, oriented monomial rewrites and integer-torsion rules. A torsion
// rule (m, mu) reduces the coefficient of any monomial divisible by mu
// modulo m. Immutable after construction; all operations are pure.
class Presentation {
  public:
    Presentation(std::string name, std::vector<Generator> gens, CoeffRing ring,
                 std::vector<std::string> precedence = {});

    void add_rewrite(const Monomial &lhs, Element rhs);
    void add_torsion(const Int &modulus, const Monomial &mon);
    // convenience: parse "w·c^2" style strings
    void add_rewrite(const std::string &lhs, const Element &rhs);
    void add_torsion(const Int &modulus, const std::string &mon);
    void validate() const;

    const std::string &name() const { return name_; }
    const std::vector<Generator> &generators() const { return gens_; }
    const std::vector<RewriteRule> &rewrites() const { return rewrites_; }
    const std::vector<TorsionRule> &torsion() const { return torsion_; }
    const CoeffRing &ring() const { return ring_; }
    const std::vector<int> &precedence() const { return precedence_; }

    int gen_index(const std::string &name) const; // -1 if absent
    long degree(const Monomial &m) const;
    std::optional<long> homogeneous_degree(const Element &x) const; // nullopt if zero or mixed

    // monomial utilities
    Monomial unit() const;
    Monomial gen_monomial(int gi) const;
    Monomial parse_monomial(const std::string &s) const;
    std::string monomial_str(const Monomial &m) const;
    std::string element_str(const Element &x) const;
    Element parse_element(const std::string &s) const;

    // Koszul-signed product of monomials; nullopt when an odd generator
    // would acquire exponent 2.
    std::optional<std::pair<int, Monomial>> mono_mul(const Monomial &a, const Monomial &b) const;
    static bool divides(const Monomial &a, const Monomial &b);
    static Monomial quotient(const Monomial &b, const Monomial &a);

    // degree-lexicographic order with the declared generator precedence
    bool monomial_less(const Monomial &a, const Monomial &b) const;

    // element constructors
    Element zero() const { return {}; }
    Element from_monomial(const Monomial &m, const Rat &c = 1) const;
    Element from_int(const Rat &c) const;
    Element gen_element(const std::string &name) const;

    // core operations
    Element normal_form(const Element &x) const;
    Element multiply(const Element &a, const Element &b) const;
    Element power(const Element &a, int k) const;
    Element scale(const Rat &c, const Element &a) const;

    // gcd of applicable torsion moduli folded with the ring modulus;
    // 0 means free, 1 means the monomial vanishes
    Int annihilator(const Monomial &m) const;
    bool is_normal_form_monomial(const Monomial &m) const;

    // graded piece enumeration within the window
    GradedPiece basis_in_degree(long d, const DegreeWindow &w) const;
    // every normal-form window monomial, sorted by (degree, monomial order)
    std::vector<BasisEntry> window_basis(const DegreeWindow &w) const;
    // every exponent tuple within the window caps, reducible words included
    std::vector<Monomial> window_words(const DegreeWindow &w) const;

    // exponent cap from relations alone (odd parity, single-generator power
    // rules); nullopt if only the window bounds the generator
    std::optional<int> intrinsic_cap(int gi) const;

    Presentation renamed(const std::string &new_name,
                         const std::vector<std::string> &new_gen_names) const;

  private:
    std::string name_;
    std::vector<Generator> gens_;
    CoeffRing ring_;
    std::vector<RewriteRule> rewrites_;
    std::vector<TorsionRule> torsion_;
    std::vector<int> precedence_; // rank -> generator index

    void normalize_coeffs(Element &x) const;
    void enumerate(const DegreeWindow &w, const std::vector<int> &caps,
                   std::vector<BasisEntry> &out) const;
    std::vector<int> effective_caps(const DegreeWindow &w) const;
};

struct ConfluenceFailure {
    Monomial peak;
    Element left, right;
    std::string rules; // which pair of rules diverged
};

struct ConfluenceReport {
    std::string window;
    long monomials_checked = 0;
    std::vector<ConfluenceFailure> failures;
    bool ok() const { return failures.empty(); }
};

// For every window monomial reducible in more than one way, reduce one step
// each way and compare normal forms. Failures are report entries, not errors.
ConfluenceReport check_local_confluence(const Presentation &p, const DegreeWindow &w);

} // namespace loopbv

#endif
