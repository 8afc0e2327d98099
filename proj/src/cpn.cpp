#include "loopbv/cpn.hpp"

#include <algorithm>
#include <sstream>

namespace loopbv {

namespace {

std::shared_ptr<Presentation> make_cpn_presentation(int n, CoeffRing ring,
                                                    const std::string &name) {
    auto p = std::make_shared<Presentation>(
        name, std::vector<Generator>{{"w", -1}, {"c", -2}, {"v", 2L * n}}, ring);
    int wi = p->gen_index("w"), ci = p->gen_index("c"), vi = p->gen_index("v");
    Monomial cn1 = p->unit(), wcn = p->unit(), cnv = p->unit();
    cn1.e[ci] = n + 1;
    wcn.e[wi] = 1;
    wcn.e[ci] = n;
    cnv.e[ci] = n;
    cnv.e[vi] = 1;
    p->add_rewrite(cn1, p->zero());
    p->add_rewrite(wcn, p->zero());
    p->add_torsion(n + 1, cnv);
    p->validate();
    return p;
}

Element cwv_element(const Presentation &p, int wi, int ci, int vi, const Rat &coef, int eps,
                    int cp, int q) {
    Monomial m = p.unit();
    m.e[wi] = eps;
    m.e[ci] = cp;
    m.e[vi] = q;
    return p.from_monomial(m, coef);
}

std::function<Element(const Monomial &)>
make_theorem_a_closed(int n, std::shared_ptr<const Presentation> pres) {
    int wi = pres->gen_index("w"), ci = pres->gen_index("c"), vi = pres->gen_index("v");
    Int half = binomial(n + 1, 2);
    return [n, pres, wi, ci, vi, half](const Monomial &m) -> Element {
        const Presentation &p = *pres;
        if (m.e[wi] == 0)
            return p.zero(); // Δ(c^p·v^q) = 0
        int cp = m.e[ci], q = m.e[vi];
        Rat lead = Rat((n - cp) + q * (n + 1));
        Element r = cwv_element(p, wi, ci, vi, lead, 0, cp, q);
        r = r + cwv_element(p, wi, ci, vi, Rat((q + 1) * half), 0, n + cp, q + 1);
        return p.normal_form(r);
    };
}

ActionTable make_theorem_b_actions(int n, const Presentation &p) {
    ActionTable t;
    int wi = p.gen_index("w"), ci = p.gen_index("c"), vi = p.gen_index("v");
    for (int i = 0; i <= n; ++i) {
        Element val = cwv_element(p, wi, ci, vi, 1, 0, n - i, 1); // c^{n-i}·v
        if (i == 0)
            val = p.normal_form(val + p.from_int(1)); // E_0·1 = 1 + c^n·v
        t.omega_values["E" + std::to_string(2 * i)] = val;
    }
    for (int j = 0; j <= n; ++j) {
        std::string e = "e" + std::to_string(2 * j + 1);
        t.g_values[{e, "w"}] =
            p.normal_form(cwv_element(p, wi, ci, vi, Rat(j + 1), 0, n - j, 1));
        t.g_values[{e, "c"}] = p.zero();
        t.g_values[{e, "v"}] = p.zero();
    }
    return t;
}

} // namespace

StringBVInstance build_theorem_a(int n, CoeffRing coeff) {
    if (n < 1)
        throw usage_error("build_theorem_a requires n >= 1");
    std::string name = "cpn:" + std::to_string(n) + ":Z";
    auto pres = make_cpn_presentation(n, CoeffRing::integers(), name);

    StringBVInstance inst;
    inst.name = name;
    inst.n = n;
    inst.pres = pres;
    inst.grading_shift = 2 * n;
    inst.wi = pres->gen_index("w");
    inst.ci = pres->gen_index("c");
    inst.vi = pres->gen_index("v");
    inst.delta.algebra = pres;
    inst.delta.closed = make_theorem_a_closed(n, pres);
    inst.delta.closed_name = "theorem_a:" + std::to_string(n);
    inst.actions = make_theorem_b_actions(n, *pres);
    inst.hopf = make_cpn_hopf(n);
    if (coeff != CoeffRing::integers())
        return change_coefficients(inst, coeff);
    return inst;
}

std::vector<Int> solve_mu(int n) {
    if (n < 1)
        throw usage_error("solve_mu requires n >= 1");
    // general solution of mu_i = mu_{i-1} + (mu_1 - mu_0) is
    // mu_i = mu_0 + i*d; the boundary data mu_n = 0, mu_{n-1} = 1 pins d = -1
    Int d, mu0;
    if (n == 1) {
        mu0 = 1; // boundary values only
        d = -1;
    } else {
        d = Int(0) - Int(1);           // (mu_n) - (mu_{n-1})
        mu0 = Int(0) - Int(n) * d;     // from mu_0 + n*d = 0
        if (mu0 + Int(n - 1) * d != 1)
            throw std::logic_error("solve_mu: inconsistent boundary data");
    }
    std::vector<Int> mu;
    for (int i = 0; i <= n; ++i)
        mu.push_back(mu0 + Int(i) * d);
    for (int i = 0; i <= n; ++i)
        if (mu[i] != n - i)
            throw std::logic_error("solve_mu: closed form mu_i = n - i violated");
    return mu;
}

BVOperator derive_theorem_a(int n, const DegreeWindow &w, bool compare_with_closed) {
    StringBVInstance closed = build_theorem_a(n);
    const Presentation &p = closed.p();
    int wi = closed.wi, ci = closed.ci, vi = closed.vi;
    std::vector<Int> mu = solve_mu(n);
    Int half = binomial(n + 1, 2);

    // the v-multiplication factor (n+1)v + C(n+1,2) c^n·v^2
    Element v_mult = p.normal_form(cwv_element(p, wi, ci, vi, Rat(n + 1), 0, 0, 1) +
                                   cwv_element(p, wi, ci, vi, Rat(half), 0, n, 2));
    Element v = cwv_element(p, wi, ci, vi, 1, 0, 0, 1);

    std::map<Monomial, Element> table;
    std::function<Element(const Monomial &)> derived = [&](const Monomial &m) -> Element {
        auto it = table.find(m);
        if (it != table.end())
            return it->second;
        Element val;
        int q = m.e[vi];
        if (q == 0) {
            if (m.e[wi] == 0)
                val = p.zero(); // seed: Δ(c^i) = 0
            else
                val = p.normal_form(
                    cwv_element(p, wi, ci, vi, Rat(half), 0, n + m.e[ci], 1) +
                    cwv_element(p, wi, ci, vi, Rat(mu[m.e[ci]]), 0, m.e[ci], 0));
        } else {
            // Δ(v·x) = [(n+1)v + C c^n·v^2]·∂_w x + v·Δ(x), recursion on q
            Monomial x = m;
            x.e[vi] -= 1;
            Element dw;
            if (x.e[wi] == 1) {
                Monomial strip = x;
                strip.e[wi] = 0;
                dw = p.from_monomial(strip);
            }
            val = p.normal_form(p.multiply(v_mult, dw) +
                                p.multiply(v, derived(x)));
        }
        table[m] = val;
        return val;
    };
    for (const auto &b : p.window_basis(w))
        (void)derived(b.mon);

    BVOperator op;
    op.algebra = closed.pres;
    op.table = table;
    if (compare_with_closed) {
        AuditReport cmp = compare_operators(op, closed.delta, w, "derived-vs-closed");
        if (!cmp.ok()) {
            const Certificate &f = cmp.failures.front();
            throw derivation_error("derived Δ disagrees with the closed form at " +
                                   f.inputs.at(0) + ": " + f.note);
        }
    }
    return op;
}

/******** Generator substitution ********/

namespace {

// phi(m) for a monomial of the renamed presentation: the product of the
// generator images, taken in normal order
Element apply_images(const Presentation &src, const std::vector<Element> &images,
                     const std::vector<int> &precedence, const Monomial &m) {
    Element r = src.from_int(1);
    for (int gi : precedence)
        for (int k = 0; k < m.e[gi]; ++k)
            r = src.multiply(r, images[gi]);
    return r;
}

Monomial leading_monomial(const Presentation &p, const Element &x) {
    auto it = x.terms.begin();
    Monomial best = it->first;
    for (const auto &[m, c] : x.terms)
        if (p.monomial_less(best, m))
            best = m;
    return best;
}

} // namespace

StringBVInstance substitute(const StringBVInstance &inst, const std::string &new_name,
                            const std::vector<std::pair<std::string, Element>> &images,
                            const DegreeWindow &w) {
    const Presentation &src = inst.p();
    size_t ng = src.generators().size();
    if (images.size() != ng)
        throw usage_error("substitute: need one image per generator");

    std::vector<std::string> names;
    std::vector<Element> vals;
    for (size_t i = 0; i < ng; ++i) {
        names.push_back(images[i].first);
        Element v = src.normal_form(images[i].second);
        auto d = src.homogeneous_degree(v);
        if (!d || *d != src.generators()[i].degree)
            throw substitution_error("image of " + names.back() + " is not homogeneous of degree " +
                                     std::to_string(src.generators()[i].degree));
        vals.push_back(v);
    }

    auto target =
        std::make_shared<Presentation>(src.renamed(new_name, names));

    // every relation of the target must map to zero
    for (const auto &r : target->rewrites()) {
        Element lhs = apply_images(src, vals, src.precedence(), r.lhs);
        Element rhs;
        for (const auto &[m, c] : r.rhs.terms)
            rhs = rhs + c * apply_images(src, vals, src.precedence(), m);
        Element residual = src.normal_form(lhs - rhs);
        if (!residual.is_zero())
            throw substitution_error("not a homomorphism: relation " +
                                     target->monomial_str(r.lhs) + " maps to " +
                                     src.element_str(residual));
    }
    for (const auto &t : target->torsion()) {
        Element residual =
            src.scale(t.modulus, apply_images(src, vals, src.precedence(), t.monomial));
        if (!residual.is_zero())
            throw substitution_error("not a homomorphism: torsion relation " +
                                     int_str(t.modulus) + "·" +
                                     target->monomial_str(t.monomial) + " maps to " +
                                     src.element_str(residual));
    }

    // Express an element of the source in the phi-image of a target graded
    // piece. The free part is a square integer system solved by exact
    // elimination (|det| = 1 certifies that the images generate, per the
    // "images form a basis" requirement); the torsion part is triangular
    // with leading coefficients invertible modulo the annihilator.
    DegreeWindow wide = w;
    wide.default_cap = w.default_cap + 1; // Δ raises the v-exponent by one
    DegreeWindow solve_win = w;
    solve_win.default_cap = w.default_cap + 2;
    auto express = [&](Element y, long deg) -> Element {
        struct Col {
            Monomial basis_mon;
            Element image;
            Int ann;
        };
        std::vector<Col> cols;
        for (const auto &b : target->basis_in_degree(deg, solve_win).entries)
            cols.push_back(
                {b.mon, apply_images(src, vals, src.precedence(), b.mon), b.annihilator});
        std::vector<BasisEntry> src_piece = src.basis_in_degree(deg, solve_win).entries;

        std::vector<Monomial> frows;
        long src_torsion = 0;
        for (const auto &s : src_piece)
            s.annihilator == 0 ? frows.push_back(s.mon) : (void)++src_torsion;
        std::vector<size_t> fcols, tcols;
        for (size_t i = 0; i < cols.size(); ++i)
            (cols[i].ann == 0 ? fcols : tcols).push_back(i);
        if (frows.size() != fcols.size() || (long)tcols.size() != src_torsion)
            throw substitution_error("images do not form a basis in degree " +
                                     std::to_string(deg) + " (rank mismatch)");

        // free stage: exact Gaussian elimination on the square system
        size_t nf = frows.size();
        std::vector<std::vector<Rat>> A(nf, std::vector<Rat>(nf + 1, Rat(0)));
        for (size_t r = 0; r < nf; ++r) {
            for (size_t k = 0; k < nf; ++k) {
                auto it = cols[fcols[k]].image.terms.find(frows[r]);
                if (it != cols[fcols[k]].image.terms.end())
                    A[r][k] = it->second;
            }
            auto ity = y.terms.find(frows[r]);
            if (ity != y.terms.end())
                A[r][nf] = ity->second;
        }
        Rat det = 1;
        for (size_t col = 0; col < nf; ++col) {
            size_t piv = col;
            while (piv < nf && A[piv][col] == 0)
                ++piv;
            if (piv == nf)
                throw substitution_error("images do not form a basis in degree " +
                                         std::to_string(deg) + " (singular free part)");
            if (piv != col)
                std::swap(A[piv], A[col]);
            det *= A[col][col];
            for (size_t r = 0; r < nf; ++r) {
                if (r == col || A[r][col] == 0)
                    continue;
                Rat f = A[r][col] / A[col][col];
                for (size_t k = col; k <= nf; ++k)
                    A[r][k] -= f * A[col][k];
            }
        }
        if (src.ring().kind != RingKind::Q && det != 1 && det != -1)
            throw substitution_error("images do not form a basis in degree " +
                                     std::to_string(deg) + " (free determinant " +
                                     rat_str(det) + ")");
        Element out;
        for (size_t k = 0; k < nf; ++k) {
            Rat a = A[k][nf] / A[k][k];
            if (src.ring().kind != RingKind::Q && a.get_den() != 1)
                throw substitution_error("transported value is not in the image lattice");
            if (a == 0)
                continue;
            y = src.normal_form(y - a * cols[fcols[k]].image);
            out = out + a * target->from_monomial(cols[fcols[k]].basis_mon);
        }

        // torsion stage: greedy on distinct leading monomials
        std::sort(tcols.begin(), tcols.end(), [&](size_t a, size_t b) {
            return src.monomial_less(leading_monomial(src, cols[b].image),
                                     leading_monomial(src, cols[a].image));
        });
        for (size_t idx = 0; idx < tcols.size(); ++idx) {
            const Col &col = cols[tcols[idx]];
            if (col.image.is_zero())
                throw substitution_error("images do not form a basis: " +
                                         target->monomial_str(col.basis_mon) + " maps to 0");
            Monomial lead = leading_monomial(src, col.image);
            if (idx + 1 < tcols.size() &&
                lead == leading_monomial(src, cols[tcols[idx + 1]].image))
                throw substitution_error("images do not form a basis in degree " +
                                         std::to_string(deg) + " (torsion collision)");
            auto it = y.terms.find(lead);
            if (it == y.terms.end())
                continue;
            Rat lc = col.image.terms.at(lead);
            Int inv;
            if (mpz_invert(inv.get_mpz_t(), lc.get_num().get_mpz_t(), col.ann.get_mpz_t()) == 0)
                throw substitution_error("torsion leading coefficient not invertible mod " +
                                         int_str(col.ann));
            Rat a = Rat(mod_residue(it->second.get_num() * inv, col.ann));
            if (a == 0)
                continue;
            y = src.normal_form(y - a * col.image);
            out = out + a * target->from_monomial(col.basis_mon);
        }
        if (!y.is_zero())
            throw substitution_error("transported value lies outside the image span: " +
                                     src.element_str(y));
        return target->normal_form(out);
    };

    StringBVInstance out;
    out.name = new_name;
    out.n = inst.n;
    out.pres = target;
    out.grading_shift = inst.grading_shift;
    out.wi = inst.wi;
    out.ci = inst.ci;
    out.vi = inst.vi;
    out.delta.algebra = target;
    // the table is built one step beyond the requested window so that
    // Δ∘Δ sweeps over the window stay inside the domain
    for (const auto &b : target->window_basis(wide)) {
        Element y = apply_delta(inst.delta, apply_images(src, vals, src.precedence(), b.mon));
        if (y.is_zero()) {
            out.delta.table[b.mon] = target->zero();
            continue;
        }
        out.delta.table[b.mon] = express(y, target->degree(b.mon) + 1);
    }
    out.delta.table[target->unit()] = target->zero();
    return out;
}

StringBVInstance change_coefficients(const StringBVInstance &inst, CoeffRing target) {
    const Presentation &src = inst.p();
    std::string base = inst.name.substr(0, inst.name.rfind(':'));
    std::string name = base + ":" + target.str();

    std::vector<Generator> gens = src.generators();
    std::vector<std::string> prec;
    for (int gi : src.precedence())
        prec.push_back(gens[gi].name);
    auto p = std::make_shared<Presentation>(name, gens, target, prec);
    for (const auto &r : src.rewrites())
        p->add_rewrite(r.lhs, r.rhs);
    for (const auto &t : src.torsion()) {
        if (target.kind == RingKind::Q) {
            p->add_rewrite(t.monomial, p->zero()); // m·x = 0 forces x = 0 over Q
        } else if (target.kind == RingKind::Zmod) {
            Int g = gcd(t.modulus, target.modulus);
            if (g == 1)
                p->add_rewrite(t.monomial, p->zero());
            else
                p->add_torsion(g, t.monomial);
        } else {
            p->add_torsion(t.modulus, t.monomial);
        }
    }
    p->validate();

    StringBVInstance out;
    out.name = name;
    out.n = inst.n;
    out.pres = p;
    out.grading_shift = inst.grading_shift;
    out.wi = inst.wi;
    out.ci = inst.ci;
    out.vi = inst.vi;
    out.hopf = inst.hopf;
    out.delta.algebra = p;
    out.delta.closed_name = inst.delta.closed_name;
    if (inst.delta.closed_name.rfind("theorem_a:", 0) == 0) {
        out.delta.closed = make_theorem_a_closed(inst.n, p);
    } else if (inst.delta.closed) {
        auto f = inst.delta.closed;
        std::shared_ptr<const Presentation> pp = p;
        out.delta.closed = [f, pp](const Monomial &m) { return pp->normal_form(f(m)); };
    } else {
        for (const auto &[m, v] : inst.delta.table)
            out.delta.table[m] = p->normal_form(v);
    }
    for (const auto &[k, v] : inst.actions.omega_values)
        out.actions.omega_values[k] = p->normal_form(v);
    for (const auto &[k, v] : inst.actions.g_values)
        out.actions.g_values[k] = p->normal_form(v);
    return out;
}

StringBVInstance build_s2(const DegreeWindow &w) {
    StringBVInstance base = build_theorem_a(1);
    const Presentation &p = base.p();
    Element vv = p.gen_element("v");
    Element cv2 = p.multiply(p.gen_element("c"), p.power(vv, 2));
    // a := c, b := w, and v replaced by v + c·v^2
    std::vector<std::pair<std::string, Element>> images = {
        {"b", p.gen_element("w")}, {"a", p.gen_element("c")}, {"v", p.normal_form(vv + cv2)}};
    return substitute(base, "s2", images, w);
}

StringBVInstance build_cpn_rational(int n, const DegreeWindow &w) {
    StringBVInstance base = change_coefficients(build_theorem_a(n), CoeffRing::rationals());
    const Presentation &p = base.p();
    // x := c, u := -w, t := v
    std::vector<std::pair<std::string, Element>> images = {
        {"u", p.scale(-1, p.gen_element("w"))},
        {"x", p.gen_element("c")},
        {"t", p.gen_element("v")}};
    return substitute(base, "cpn-rational:" + std::to_string(n), images, w);
}

std::vector<BasisEntry> instance_basis(const StringBVInstance &inst, const DegreeWindow &w) {
    return inst.p().window_basis(w);
}

} // namespace loopbv
