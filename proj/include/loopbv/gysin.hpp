#ifndef LOOPBV_GYSIN_HPP
#define LOOPBV_GYSIN_HPP

#include "loopbv/cpn.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace loopbv {

// Polynomial in u truncated at u^{n+1}: a class in H^*(CP^n).
struct CohClass {
    int n = 0;
    std::vector<Int> c; // coefficients of u^0..u^n

    static CohClass one(int n);
    bool operator==(const CohClass &o) const { return n == o.n && c == o.c; }
    std::string str() const;
};

CohClass coh_mul(const CohClass &a, const CohClass &b);
CohClass coh_pow(const CohClass &a, int k);
CohClass coh_inverse(const CohClass &a); // requires constant term ±1

// coefficient of u^k, i.e. the pairing <class, [CP^k]>
Int pair_top(const CohClass &cls, int k);

// Sum of line-bundle powers (γ*)^{⊗k} over CP^base, plus tangent markers
// TCP^m (rank m, Chern class (1+u)^{m+1}) and complement markers γ_m^⊥
// (rank m, Chern class (1-u)^{-1}). Ranks are bookkept honestly: the
// degree-raising operator needs c_{d-1} of the actual rank d.
struct BundleSpec {
    int base = 0;
    std::vector<Int> summands;
    std::vector<int> tangents;
    std::vector<int> perps;

    int rank() const;
    static BundleSpec over(int base) { return BundleSpec{base, {}, {}, {}}; }
    BundleSpec &with_summand(const Int &k);
    BundleSpec &with_tangent(int m);
    BundleSpec &with_perp(int m);
};

// product of (1 + k·u) over the summands, times the marker classes,
// truncated in H^*(CP^n)
CohClass total_chern(const BundleSpec &b, int n);
// union of two bundles over the same base
BundleSpec direct_sum(const BundleSpec &a, const BundleSpec &b);

// degree -> (free rank, torsion moduli)
struct GradedGroup {
    std::map<long, std::pair<long, std::vector<Int>>> groups;

    void add_free(long degree);
    void add_torsion(long degree, const Int &m);
    bool operator==(const GradedGroup &o) const { return groups == o.groups; }
};

// Integer combination of the Gysin basis classes a_i (from the base) and
// b_i (from the connecting map) of a sphere bundle.
struct SphereClass {
    std::map<std::pair<char, int>, Int> terms; // ('a'|'b', i) -> coefficient

    static SphereClass single(char kind, int i, const Int &coef = 1);
    bool is_zero() const { return terms.empty(); }
    bool operator==(const SphereClass &o) const { return terms == o.terms; }
    std::string str() const;
};

// Homology of the unit sphere bundle, computed from kernels/cokernels of
// cap product with the Euler class on the basis [CP^0..CP^m].
struct SphereBundleHomology {
    BundleSpec bundle;
    int m = 0;                 // base dimension
    int d = 0;                 // bundle rank
    Int euler_coefficient = 0; // <e(ξ), -> as a multiple of u^d
    GradedGroup groups;
    std::vector<int> a_classes;        // indices i with a_i present
    std::map<int, Int> b_classes;      // index -> 0 (free) or torsion order
    long a_degree(int i) const { return 2L * i; }
    long b_degree(int i) const { return 2L * i + 2L * d - 1; }

    // canonical form: coefficients of torsion b-classes reduced into [0, m)
    SphereClass normalize(const SphereClass &x) const;
};

SphereBundleHomology gysin_homology(const BundleSpec &b);

// The circle rotates the ξ summand of S(ξ⊕η); the induced degree-raising
// operator is ∂ ∘ (c_{d-1}(ξ)c_e(η) ∩ -) ∘ π_*. It annihilates b-classes
// and sends a_i to the pairing coefficient times b_{i-d-e+1}.
SphereClass degree_raising(const BundleSpec &xi, const BundleSpec &eta, const SphereClass &x);
// the pairing coefficient c_{d-1}(ξ)·c_e(η) alone
Int degree_raising_coefficient(const BundleSpec &xi, const BundleSpec &eta);

// For each j, the magnitude constraint λ_j = ±(j+1) is resolved against the
// congruence λ_j ≡ 1 (mod j+2) coming from the Euler pairing 1 of the
// complement bundle; the unique solution is λ_j = -(j+1).
std::vector<Int> solve_lambda(int n); // λ_1..λ_n

struct TheoremD {
    int n = 0;
    SphereBundleHomology homology; // of S(TCP^n)
    std::vector<Int> lambda;       // λ_0..λ_n, λ_0 = -1
    Int rs_coefficient;            // C(n+1,2)

    SphereClass e_act(int j, const SphereClass &x) const;
    SphereClass degree_raise(const SphereClass &x) const;
    SphereClass cap_u(const SphereClass &x) const;
};

TheoremD build_theorem_d(int n);

// Module-action data recovered from the sphere-bundle tables through the
// compactification splitting and the dictionary c^i = [CP^{n-i}], c^i·w = a_{n-i-1},
// c^i·v = b_{n-i}; the odd action values acquire the (-1)^{|α|} twist.
struct TheoremBSeed {
    int n = 0;
    std::map<std::string, Element> omega_values;       // E name -> E·1
    std::map<std::pair<int, int>, Element> e_values;   // (j, i) -> e_{2j+1}(c^i·w)
    Int delta_w_torsion;                               // coefficient of c^n·v in Δ(w)
    Int mu_top = 1;                                    // μ_{n-1}
};

// derive the seed and compare it against the instance's stored tables
TheoremBSeed derive_theorem_b_from_d(int n, const StringBVInstance &target,
                                     AuditReport *comparison = nullptr);

// the full pipeline D -> C -> B -> A with certificates
struct PipelineResult {
    int n = 0;
    std::vector<Int> mu;     // μ_0..μ_n
    std::vector<Int> lambda; // λ_0..λ_n
    Int constant_n_plus_1;
    Int constant_binom;
    AuditReport seed_comparison;
    AuditReport operator_comparison;
    bool ok() const { return seed_comparison.ok() && operator_comparison.ok(); }
};
PipelineResult run_pipeline(int n, const DegreeWindow &w);

} // namespace loopbv

#endif
