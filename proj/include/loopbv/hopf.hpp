#ifndef LOOPBV_HOPF_HPP
#define LOOPBV_HOPF_HPP

#include "loopbv/algebra.hpp"
#include "loopbv/report.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace loopbv {

struct StringBVInstance; // cpn.hpp

// Hopf algebra data for one side of the pair H_*(ΩU(n+1)) / H_*(U(n+1)):
// a free graded-commutative presentation plus coproduct, counit and (on the
// Ω side) the homology suspension σ(E_{2i}) = e_{2i+1}.
struct HopfData {
    std::shared_ptr<const Presentation> algebra;
    // generator index -> list of (left, right) tensor factors of D(gen)
    std::map<int, std::vector<std::pair<Element, Element>>> coproduct;
    std::map<int, Rat> counit;            // generator index -> ε(gen)
    std::map<int, std::string> suspension; // Ω generator -> partner generator name
};

// graded tensor square, used to check coassociativity and the counit laws
struct Tensor2 {
    std::map<std::pair<Monomial, Monomial>, Rat> terms;
    bool operator==(const Tensor2 &o) const { return terms == o.terms; }
};
struct Tensor3 {
    std::map<std::tuple<Monomial, Monomial, Monomial>, Rat> terms;
    bool operator==(const Tensor3 &o) const { return terms == o.terms; }
};

Tensor2 tensor2_mul(const Presentation &p, const Tensor2 &a, const Tensor2 &b);
// multiplicative extension of the generator coproduct table
Tensor2 coproduct(const HopfData &h, const Element &x);
Tensor3 coproduct_left(const HopfData &h, const Tensor2 &t);  // (D ⊗ 1)
Tensor3 coproduct_right(const HopfData &h, const Tensor2 &t); // (1 ⊗ D)
Element counit_left(const HopfData &h, const Tensor2 &t);     // (ε ⊗ 1)
Element counit_right(const HopfData &h, const Tensor2 &t);    // (1 ⊗ ε)

// all monomials of total exponent <= max_len (the Hopf-side window)
std::vector<Monomial> hopf_window_monomials(const Presentation &p, int max_len);

// coassociativity, counit laws, primitivity of the exterior generators
AuditReport check_hopf_data(const HopfData &h, int max_len);

struct CpnHopf {
    HopfData omega; // Z[E0, E2, ..., E2n]
    HopfData g;     // Lambda[e1, e3, ..., e{2n+1}]
};
CpnHopf make_cpn_hopf(int n);

// Action data on the CP^n instance: the classes E_{2i}·1 and the
// values of the odd generators on the module generators.
struct ActionTable {
    std::map<std::string, Element> omega_values;                      // E name -> E·1
    std::map<std::pair<std::string, std::string>, Element> g_values;  // (e name, gen) -> value
};

// ∂_w: kills w-free monomials, strips w otherwise
Element partial_w(const StringBVInstance &inst, const Element &x);
// e_{2j+1}·x = (j+1)·c^{n-j}·v·∂_w(x)
Element e_act(const StringBVInstance &inst, int j, const Element &x);
// a ↦ a·1, multiplicative on the Ω side
Element omega_unit_image(const StringBVInstance &inst, const Element &hopf_el);
// the Ω action defined through the unit image: a·x = (a·1)·x
Element omega_act(const StringBVInstance &inst, const Element &hopf_el, const Element &x);
// Δ(v·x) = [(n+1)v + C(n+1,2)c^n·v^2]·∂_w x + v·Δ(x)
Element delta_v_multiple(const StringBVInstance &inst, const Element &x);

// audit the four module-action laws and the unit-image corollary over the
// window: a(x·y)=(ax)·y=x·(ay), Δ(ax)=aΔx+Σa₁σ(a₂)x,
// b(x·y)=Σ(-1)^{|b₂||x|}(b₁x)·(b₂y), Δ(bx)=(-1)^{|b|}bΔx
AuditReport check_action_laws(const StringBVInstance &inst, const DegreeWindow &w,
                              int jobs = 1);

} // namespace loopbv

#endif
