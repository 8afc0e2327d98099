#ifndef LOOPBV_CPN_HPP
#define LOOPBV_CPN_HPP

#include "loopbv/bv.hpp"
#include "loopbv/hopf.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace loopbv {

// A presented BV algebra instance together with its action data. The
// flagship instances are the string-topology algebras of CP^n in the shifted
// grading (|c| = -2, |w| = -1, |v| = 2n, shift m = 2n).
struct StringBVInstance {
    std::string name;
    int n = 0;
    std::shared_ptr<const Presentation> pres;
    BVOperator delta;
    ActionTable actions;
    CpnHopf hopf;         // empty for non-CP^n instances
    int grading_shift = 0;
    int wi = -1, ci = -1, vi = -1; // role indices of the exterior / degree -2 / top generator

    const Presentation &p() const { return *pres; }
};

// Λ[w] ⊗ Z[c,v] / <c^{n+1}, (n+1)c^n·v, w·c^n> with the closed-form Δ:
// Δ(c^p·v^q) = 0,
// Δ(c^p·w·v^q) = [(n-p)+q(n+1)]c^p·v^q + (q+1)·C(n+1,2)·c^{n+p}·v^{q+1}
StringBVInstance build_theorem_a(int n, CoeffRing coeff = CoeffRing::integers());

// μ_n = 0, μ_{n-1} = 1, μ_i = μ_{i-1} + μ_1 - μ_0;  solves to μ_i = n - i
std::vector<Int> solve_mu(int n);

struct derivation_error : usage_error {
    using usage_error::usage_error;
};

// Rebuild Δ from the seed data (Δ(c^i) = 0, Δ(c^i·w) from the μ vector)
// by induction on the v-exponent, and compare against the closed form.
BVOperator derive_theorem_a(int n, const DegreeWindow &w, bool compare_with_closed = true);

struct substitution_error : usage_error {
    using usage_error::usage_error;
};

// Change of generators: `images[i]` gives the new name of generator i and
// its image in the source instance. The target carries the transported
// relations; construction fails unless every relation maps to 0 and the
// transported Δ is expressible in the image basis.
StringBVInstance substitute(const StringBVInstance &inst, const std::string &new_name,
                            const std::vector<std::pair<std::string, Element>> &images,
                            const DegreeWindow &w);

StringBVInstance change_coefficients(const StringBVInstance &inst, CoeffRing target);

// the S^2 instance: a := c, b := w, v := v + c·v^2 at n = 1
StringBVInstance build_s2(const DegreeWindow &w);
// the rational instance: x := c, u := -w, t := v over Q
StringBVInstance build_cpn_rational(int n, const DegreeWindow &w);

// window basis entries of an instance, sorted by (degree, monomial order)
std::vector<BasisEntry> instance_basis(const StringBVInstance &inst, const DegreeWindow &w);

} // namespace loopbv

#endif
