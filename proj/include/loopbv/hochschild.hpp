#ifndef LOOPBV_HOCHSCHILD_HPP
#define LOOPBV_HOCHSCHILD_HPP

#include "loopbv/cpn.hpp"

#include <optional>

namespace loopbv {

// The Hochschild-cohomology BV algebra of CP^n over Z:
// Z[x,u,t]/<x^{n+1}, u^2, (n+1)x^n·t, u·x^n> with |x| = -2, |u| = -1,
// |t| = 2n, Δ(t^k·x^l) = 0 and Δ(t^k·u·x^l) = (-(k+1)n - k + l)·t^k·x^l.
StringBVInstance build_hochschild(int n);

// candidate isomorphism c ↦ ε₁x, w ↦ ε₂u, v ↦ ε₃t + α·x^n·t^2
struct IsoCandidate {
    int eps1 = 1, eps2 = 1, eps3 = 1;
    Int alpha = 0;
};

struct IsoDecision {
    int n = 0;
    std::optional<IsoCandidate> iso;
    std::string obstruction;        // rendered element, set when iso is absent
    Element obstruction_element;    // over the Hochschild algebra
    long candidates_checked = 0;
};

// Enumerate all 8(n+1) degree-admissible candidates; accept the first that
// maps the relations to zero and intertwines Δ on every window basis
// monomial. When all fail, report the Δ(w)-residual of the distinguished
// ring isomorphism c ↦ x, w ↦ -u, v ↦ t (the C(n+1,2)·x^n·t obstruction).
IsoDecision decide_bv_iso(int n, const DegreeWindow &w);

// verify via basis enumeration that the graded pieces in degrees -1, -2 and
// 2n are as used by the candidate family: rank-1 free, rank-1 free, and
// free ⊕ Z/(n+1)
AuditReport candidate_completeness_check(int n);

// re-verify a candidate as a ring map on all window basis pairs
AuditReport verify_candidate_ring_hom(int n, const IsoCandidate &cand, const DegreeWindow &w);

// the transported-Δ residuals of a candidate on window basis monomials;
// empty failure list means the candidate intertwines Δ
AuditReport verify_candidate_delta(int n, const IsoCandidate &cand, const DegreeWindow &w);

} // namespace loopbv

#endif
