#ifndef LOOPBV_BV_HPP
#define LOOPBV_BV_HPP

#include "loopbv/algebra.hpp"
#include "loopbv/report.hpp"

#include <functional>
#include <map>
#include <memory>

namespace loopbv {

// Degree +1 operator on a presented algebra, given by its values on basis
// monomials: either a closed-form rule or a finite table, extended linearly.
struct BVOperator {
    std::shared_ptr<const Presentation> algebra;
    std::map<Monomial, Element> table;
    std::function<Element(const Monomial &)> closed; // takes precedence when set
    std::string closed_name;                         // identifies a built-in rule

    // value on a normal-form basis monomial; throws window_error outside a
    // table's domain
    Element value_on(const Monomial &m) const;
};

// linear extension of the rule; output in normal form
Element apply_delta(const BVOperator &op, const Element &x);

// {a,b} = (-1)^{|a|} Δ(a·b) - (-1)^{|a|} (Δa)·b - a·(Δb);  a, b homogeneous
Element bracket(const BVOperator &op, const Element &a, const Element &b);

// the seven-term identity: returns Δ(x·y·z) - (six-term RHS); zero means the
// identity holds on this triple
Element check_bv_identity(const BVOperator &op, const Element &x, const Element &y,
                          const Element &z);
// the six-term right hand side alone (used when solving for Δ(x·y·z))
Element bv_identity_rhs(const BVOperator &op, const Element &x, const Element &y,
                        const Element &z);

// Δ∘Δ on every window basis monomial
AuditReport check_delta_squared(const BVOperator &op, const DegreeWindow &w, int jobs = 1);

// operator well-formedness: Δ(1) = 0, degree shift +1, m·Δ(x) = 0 on
// m-torsion monomials
AuditReport check_operator_contract(const BVOperator &op, const DegreeWindow &w);

// Eq-residual sweep over all window basis triples
AuditReport check_bv_identity_window(const BVOperator &op, const DegreeWindow &w, int jobs = 1);

// bracket antisymmetry / graded Leibniz / graded Jacobi over the window
AuditReport check_bracket_axioms(const BVOperator &op, const DegreeWindow &w, int jobs = 1);

// equality of two operators on every window basis monomial
AuditReport compare_operators(const BVOperator &a, const BVOperator &b, const DegreeWindow &w,
                              const std::string &label = "operator-compare");

// Two factorizations of the same word assigned different values.
struct seed_conflict_error : usage_error {
    Monomial word;
    Element left, right;
    seed_conflict_error(std::string msg, Monomial w, Element l, Element r)
        : usage_error(std::move(msg)), word(std::move(w)), left(std::move(l)),
          right(std::move(r)) {}
};

// Extend Δ from its values on words of length <= 2 to the whole window by
// instantiating the BV identity on (first letter)·(rest)·(last letter), then
// verify the result against every other two-letter split.
BVOperator extend_delta_by_bv(const std::map<Monomial, Element> &seed,
                              std::shared_ptr<const Presentation> p, const DegreeWindow &w);

// run independent work items on `jobs` threads, deterministically merging
// results in index order
void parallel_sweep(long count, int jobs, const std::function<void(long)> &work);

} // namespace loopbv

#endif
