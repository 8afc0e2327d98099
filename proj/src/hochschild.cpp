#include "loopbv/hochschild.hpp"

namespace loopbv {

StringBVInstance build_hochschild(int n) {
    if (n < 1)
        throw usage_error("build_hochschild requires n >= 1");
    std::string name = "hochschild:" + std::to_string(n);
    auto p = std::make_shared<Presentation>(
        name, std::vector<Generator>{{"u", -1}, {"x", -2}, {"t", 2L * n}},
        CoeffRing::integers());
    int ui = p->gen_index("u"), xi = p->gen_index("x"), ti = p->gen_index("t");
    Monomial xn1 = p->unit(), uxn = p->unit(), xnt = p->unit();
    xn1.e[xi] = n + 1;
    uxn.e[ui] = 1;
    uxn.e[xi] = n;
    xnt.e[xi] = n;
    xnt.e[ti] = 1;
    p->add_rewrite(xn1, p->zero()); // x^{n+1}; u^2 = 0 is carried by |u| odd
    p->add_rewrite(uxn, p->zero());
    p->add_torsion(n + 1, xnt);
    p->validate();

    StringBVInstance inst;
    inst.name = name;
    inst.n = n;
    inst.pres = p;
    inst.grading_shift = 2 * n;
    inst.wi = ui;
    inst.ci = xi;
    inst.vi = ti;
    inst.delta.algebra = p;
    inst.delta.closed_name = "hochschild:" + std::to_string(n);
    std::shared_ptr<const Presentation> pres = p;
    inst.delta.closed = [n, pres, ui, xi, ti](const Monomial &m) -> Element {
        if (m.e[ui] == 0)
            return pres->zero(); // Δ(t^k·x^l) = 0
        int k = m.e[ti], l = m.e[xi];
        Monomial out = pres->unit();
        out.e[ti] = k;
        out.e[xi] = l;
        return pres->from_monomial(out, Rat(-(k + 1) * n - k + l));
    };
    return inst;
}

namespace {

// c ↦ ε₁x, w ↦ ε₂u, v ↦ ε₃t + α·x^n·t^2 as a map on string-side monomials
Element apply_candidate(const StringBVInstance &a, const StringBVInstance &h,
                        const IsoCandidate &cand, const Monomial &m) {
    const Presentation &hp = h.p();
    Element r = hp.from_int(1);
    Element ximg = hp.scale(cand.eps1, hp.gen_element("x"));
    Element uimg = hp.scale(cand.eps2, hp.gen_element("u"));
    Element timg = hp.normal_form(
        hp.scale(cand.eps3, hp.gen_element("t")) +
        hp.scale(Rat(cand.alpha), hp.multiply(hp.power(hp.gen_element("x"), h.n),
                                              hp.power(hp.gen_element("t"), 2))));
    for (int k = 0; k < m.e[a.wi]; ++k)
        r = hp.multiply(r, uimg);
    for (int k = 0; k < m.e[a.ci]; ++k)
        r = hp.multiply(r, ximg);
    for (int k = 0; k < m.e[a.vi]; ++k)
        r = hp.multiply(r, timg);
    return r;
}

Element apply_candidate_elem(const StringBVInstance &a, const StringBVInstance &h,
                             const IsoCandidate &cand, const Element &x) {
    Element r;
    for (const auto &[m, c] : x.terms)
        r = r + c * apply_candidate(a, h, cand, m);
    return h.p().normal_form(r);
}

bool relations_map_to_zero(const StringBVInstance &a, const StringBVInstance &h,
                           const IsoCandidate &cand) {
    const Presentation &ap = a.p();
    const Presentation &hp = h.p();
    for (const auto &r : ap.rewrites()) {
        Element lhs = apply_candidate(a, h, cand, r.lhs);
        Element rhs;
        for (const auto &[m, c] : r.rhs.terms)
            rhs = rhs + c * apply_candidate(a, h, cand, m);
        if (!hp.normal_form(lhs - rhs).is_zero())
            return false;
    }
    for (const auto &t : ap.torsion())
        if (!hp.scale(t.modulus, apply_candidate(a, h, cand, t.monomial)).is_zero())
            return false;
    return true;
}

} // namespace

AuditReport verify_candidate_delta(int n, const IsoCandidate &cand, const DegreeWindow &w) {
    StringBVInstance a = build_theorem_a(n);
    StringBVInstance h = build_hochschild(n);
    AuditReport rep;
    rep.window = w.str();
    rep.checks_run.push_back("candidate-delta");
    for (const auto &b : a.p().window_basis(w)) {
        Element lhs = apply_candidate_elem(a, h, cand, a.delta.value_on(b.mon));
        Element rhs = apply_delta(h.delta, apply_candidate(a, h, cand, b.mon));
        ++rep.checked;
        Element res = h.p().normal_form(lhs - rhs);
        if (!res.is_zero())
            rep.failures.push_back({"candidate-delta",
                                    {a.p().monomial_str(b.mon)},
                                    h.p().element_str(res),
                                    ""});
    }
    return rep;
}

AuditReport verify_candidate_ring_hom(int n, const IsoCandidate &cand, const DegreeWindow &w) {
    StringBVInstance a = build_theorem_a(n);
    StringBVInstance h = build_hochschild(n);
    AuditReport rep;
    rep.window = w.str();
    rep.checks_run.push_back("candidate-ring-hom");
    auto basis = a.p().window_basis(w);
    for (const auto &b1 : basis)
        for (const auto &b2 : basis) {
            Element prod = a.p().multiply(a.p().from_monomial(b1.mon),
                                          a.p().from_monomial(b2.mon));
            Element lhs = apply_candidate_elem(a, h, cand, prod);
            Element rhs = h.p().multiply(apply_candidate(a, h, cand, b1.mon),
                                         apply_candidate(a, h, cand, b2.mon));
            ++rep.checked;
            Element res = h.p().normal_form(lhs - rhs);
            if (!res.is_zero())
                rep.failures.push_back({"candidate-ring-hom",
                                        {a.p().monomial_str(b1.mon),
                                         a.p().monomial_str(b2.mon)},
                                        h.p().element_str(res),
                                        ""});
        }
    return rep;
}

IsoDecision decide_bv_iso(int n, const DegreeWindow &w) {
    if (n < 1)
        throw usage_error("decide_bv_iso requires n >= 1");
    StringBVInstance a = build_theorem_a(n);
    StringBVInstance h = build_hochschild(n);
    IsoDecision d;
    d.n = n;
    for (int e1 : {1, -1})
        for (int e2 : {1, -1})
            for (int e3 : {1, -1})
                for (int al = 0; al <= n; ++al) {
                    IsoCandidate cand{e1, e2, e3, al};
                    ++d.candidates_checked;
                    if (!relations_map_to_zero(a, h, cand))
                        continue;
                    if (verify_candidate_delta(n, cand, w).ok()) {
                        d.iso = cand;
                        return d;
                    }
                }
    // no candidate works; report the Δ(w)-residual of the distinguished
    // ring isomorphism c ↦ x, w ↦ -u, v ↦ t
    IsoCandidate ring_iso{1, -1, 1, 0};
    Monomial wmon = a.p().unit();
    wmon.e[a.wi] = 1;
    Element lhs = apply_candidate_elem(a, h, ring_iso, a.delta.value_on(wmon));
    Element rhs = apply_delta(h.delta, apply_candidate(a, h, ring_iso, wmon));
    d.obstruction_element = h.p().normal_form(lhs - rhs);
    d.obstruction = h.p().element_str(d.obstruction_element);
    return d;
}

AuditReport candidate_completeness_check(int n) {
    StringBVInstance a = build_theorem_a(n);
    StringBVInstance h = build_hochschild(n);
    AuditReport rep;
    rep.checks_run.push_back("candidate-completeness");
    DegreeWindow w{4, {}};
    rep.window = w.str();

    struct Expected {
        long degree;
        size_t free_count;
        std::vector<Int> torsion;
    };
    std::vector<Expected> shape = {
        {-1, 1, {}}, {-2, 1, {}}, {2L * n, 1, {Int(n + 1)}}};
    for (const auto &[inst_name, inst] :
         std::initializer_list<std::pair<std::string, const StringBVInstance *>>{
             {"string", &a}, {"hochschild", &h}}) {
        for (const auto &exp : shape) {
            GradedPiece piece = inst->p().basis_in_degree(exp.degree, w);
            size_t free_count = 0;
            std::vector<Int> torsion;
            for (const auto &b : piece.entries)
                b.annihilator == 0 ? (void)++free_count : torsion.push_back(b.annihilator);
            ++rep.checked;
            if (piece.window_truncated || free_count != exp.free_count ||
                torsion != exp.torsion)
                rep.failures.push_back(
                    {"candidate-completeness",
                     {inst_name, "degree " + std::to_string(exp.degree)},
                     "",
                     "unexpected graded piece"});
        }
    }
    return rep;
}

} // namespace loopbv
