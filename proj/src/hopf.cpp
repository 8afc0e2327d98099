#include "loopbv/hopf.hpp"

#include "loopbv/bv.hpp"
#include "loopbv/cpn.hpp"

#include <atomic>
#include <mutex>

namespace loopbv {

/******** Tensor machinery ********/

Tensor2 tensor2_mul(const Presentation &p, const Tensor2 &a, const Tensor2 &b) {
    Tensor2 r;
    for (const auto &[ma, ca] : a.terms)
        for (const auto &[mb, cb] : b.terms) {
            auto l = p.mono_mul(ma.first, mb.first);
            auto rr = p.mono_mul(ma.second, mb.second);
            if (!l || !rr)
                continue;
            // (x1 (x) x2)·(y1 (x) y2) = (-1)^{|x2||y1|} x1y1 (x) x2y2
            int s = sign_pow(p.degree(ma.second) * p.degree(mb.first)) * l->first * rr->first;
            Rat add = ca * cb * s;
            auto key = std::make_pair(l->second, rr->second);
            Rat sum = r.terms[key] + add;
            if (sum == 0)
                r.terms.erase(key);
            else
                r.terms[key] = sum;
        }
    return r;
}

namespace {

Tensor2 tensor_of(const Element &a, const Element &b) {
    Tensor2 r;
    for (const auto &[ma, ca] : a.terms)
        for (const auto &[mb, cb] : b.terms)
            r.terms[{ma, mb}] = ca * cb;
    return r;
}

void tensor2_accumulate(Tensor2 &into, const Tensor2 &t, const Rat &c) {
    for (const auto &[k, v] : t.terms) {
        Rat sum = into.terms[k] + c * v;
        if (sum == 0)
            into.terms.erase(k);
        else
            into.terms[k] = sum;
    }
}

Rat counit_of_monomial(const HopfData &h, const Monomial &m) {
    Rat r = 1;
    for (int gi = 0; gi < (int)m.e.size(); ++gi)
        for (int k = 0; k < m.e[gi]; ++k) {
            auto it = h.counit.find(gi);
            r *= (it == h.counit.end() ? Rat(0) : it->second);
        }
    return r;
}

} // namespace

Tensor2 coproduct(const HopfData &h, const Element &x) {
    const Presentation &p = *h.algebra;
    Tensor2 out;
    for (const auto &[m, c] : x.terms) {
        Tensor2 t = tensor_of(p.from_int(1), p.from_int(1));
        for (int gi = 0; gi < (int)m.e.size(); ++gi)
            for (int k = 0; k < m.e[gi]; ++k) {
                auto it = h.coproduct.find(gi);
                if (it == h.coproduct.end())
                    throw usage_error("no coproduct for generator " + p.generators()[gi].name);
                Tensor2 dg;
                for (const auto &[l, r] : it->second)
                    tensor2_accumulate(dg, tensor_of(l, r), 1);
                t = tensor2_mul(p, t, dg);
            }
        tensor2_accumulate(out, t, c);
    }
    return out;
}

Tensor3 coproduct_left(const HopfData &h, const Tensor2 &t) {
    const Presentation &p = *h.algebra;
    Tensor3 out;
    for (const auto &[k, c] : t.terms) {
        Tensor2 dl = coproduct(h, p.from_monomial(k.first));
        for (const auto &[k2, c2] : dl.terms) {
            auto key = std::make_tuple(k2.first, k2.second, k.second);
            Rat sum = out.terms[key] + c * c2;
            if (sum == 0)
                out.terms.erase(key);
            else
                out.terms[key] = sum;
        }
    }
    return out;
}

Tensor3 coproduct_right(const HopfData &h, const Tensor2 &t) {
    const Presentation &p = *h.algebra;
    Tensor3 out;
    for (const auto &[k, c] : t.terms) {
        Tensor2 dr = coproduct(h, p.from_monomial(k.second));
        for (const auto &[k2, c2] : dr.terms) {
            auto key = std::make_tuple(k.first, k2.first, k2.second);
            Rat sum = out.terms[key] + c * c2;
            if (sum == 0)
                out.terms.erase(key);
            else
                out.terms[key] = sum;
        }
    }
    return out;
}

Element counit_left(const HopfData &h, const Tensor2 &t) {
    Element r;
    for (const auto &[k, c] : t.terms) {
        Rat e = counit_of_monomial(h, k.first) * c;
        if (e == 0)
            continue;
        Rat sum = r.terms[k.second] + e;
        if (sum == 0)
            r.terms.erase(k.second);
        else
            r.terms[k.second] = sum;
    }
    return r;
}

Element counit_right(const HopfData &h, const Tensor2 &t) {
    Element r;
    for (const auto &[k, c] : t.terms) {
        Rat e = counit_of_monomial(h, k.second) * c;
        if (e == 0)
            continue;
        Rat sum = r.terms[k.first] + e;
        if (sum == 0)
            r.terms.erase(k.first);
        else
            r.terms[k.first] = sum;
    }
    return r;
}

std::vector<Monomial> hopf_window_monomials(const Presentation &p, int max_len) {
    std::vector<Monomial> out;
    Monomial m = p.unit();
    auto rec = [&](auto &&self, int gi, int remaining) -> void {
        if (gi == (int)p.generators().size()) {
            out.push_back(m);
            return;
        }
        int cap = p.generators()[gi].odd() ? 1 : remaining;
        for (int e = 0; e <= cap && e <= remaining; ++e) {
            m.e[gi] = e;
            self(self, gi + 1, remaining - e);
        }
        m.e[gi] = 0;
    };
    rec(rec, 0, max_len);
    return out;
}

AuditReport check_hopf_data(const HopfData &h, int max_len) {
    const Presentation &p = *h.algebra;
    AuditReport rep;
    rep.window = "hopf word length <= " + std::to_string(max_len);
    rep.checks_run = {"coassociativity", "counit", "primitivity"};
    for (const Monomial &m : hopf_window_monomials(p, max_len)) {
        Element x = p.from_monomial(m);
        Tensor2 d = coproduct(h, x);
        ++rep.checked;
        if (!(coproduct_left(h, d) == coproduct_right(h, d)))
            rep.failures.push_back(
                {"coassociativity", {p.monomial_str(m)}, "", "(D(x)1)D != (1(x)D)D"});
        if (!(counit_left(h, d) == x) || !(counit_right(h, d) == x))
            rep.failures.push_back({"counit", {p.monomial_str(m)}, "", "counit law fails"});
    }
    for (int gi = 0; gi < (int)p.generators().size(); ++gi) {
        if (!p.generators()[gi].odd())
            continue;
        Element g = p.from_monomial(p.gen_monomial(gi));
        Tensor2 expect = tensor_of(g, p.from_int(1));
        tensor2_accumulate(expect, tensor_of(p.from_int(1), g), 1);
        ++rep.checked;
        if (!(coproduct(h, g) == expect))
            rep.failures.push_back({"primitivity",
                                    {p.generators()[gi].name},
                                    "",
                                    "exterior generator is not primitive"});
    }
    return rep;
}

CpnHopf make_cpn_hopf(int n) {
    CpnHopf h;
    {
        std::vector<Generator> gens;
        for (int i = 0; i <= n; ++i)
            gens.push_back({"E" + std::to_string(2 * i), 2L * i});
        auto p = std::make_shared<Presentation>("omega-u:" + std::to_string(n + 1), gens,
                                                CoeffRing::integers());
        h.omega.algebra = p;
        for (int i = 0; i <= n; ++i) {
            std::vector<std::pair<Element, Element>> pairs;
            for (int j = 0; j <= i; ++j)
                pairs.push_back({p->from_monomial(p->gen_monomial(j)),
                                 p->from_monomial(p->gen_monomial(i - j))});
            h.omega.coproduct[i] = pairs;
            h.omega.counit[i] = (i == 0) ? 1 : 0;
            h.omega.suspension[i] = "e" + std::to_string(2 * i + 1);
        }
    }
    {
        std::vector<Generator> gens;
        for (int j = 0; j <= n; ++j)
            gens.push_back({"e" + std::to_string(2 * j + 1), 2L * j + 1});
        auto p = std::make_shared<Presentation>("u:" + std::to_string(n + 1), gens,
                                                CoeffRing::integers());
        h.g.algebra = p;
        for (int j = 0; j <= n; ++j) {
            h.g.coproduct[j] = {{p->from_monomial(p->gen_monomial(j)), p->from_int(1)},
                                {p->from_int(1), p->from_monomial(p->gen_monomial(j))}};
            h.g.counit[j] = 0;
        }
    }
    return h;
}

/******** Module actions on the CP^n instance ********/

Element partial_w(const StringBVInstance &inst, const Element &x) {
    const Presentation &p = inst.p();
    if (inst.wi < 0)
        throw usage_error("instance has no exterior role generator");
    Element r;
    for (const auto &[m, c] : p.normal_form(x).terms) {
        if (m.e[inst.wi] != 1)
            continue;
        Monomial s = m;
        s.e[inst.wi] = 0;
        r = r + p.from_monomial(s, c);
    }
    return p.normal_form(r);
}

Element e_act(const StringBVInstance &inst, int j, const Element &x) {
    const Presentation &p = inst.p();
    if (j < 0 || j > inst.n)
        throw usage_error("e_{2j+1} requires 0 <= j <= n");
    Monomial f = p.unit();
    f.e[inst.ci] = inst.n - j;
    f.e[inst.vi] = 1;
    return p.multiply(p.from_monomial(f, Rat(j + 1)), partial_w(inst, x));
}

Element omega_unit_image(const StringBVInstance &inst, const Element &hopf_el) {
    const Presentation &hp = *inst.hopf.omega.algebra;
    const Presentation &p = inst.p();
    Element out;
    for (const auto &[m, c] : hopf_el.terms) {
        Element v = p.from_int(1);
        for (int gi = 0; gi < (int)m.e.size(); ++gi)
            for (int k = 0; k < m.e[gi]; ++k) {
                auto it = inst.actions.omega_values.find(hp.generators()[gi].name);
                if (it == inst.actions.omega_values.end())
                    throw window_error("no stored action value for " +
                                       hp.generators()[gi].name);
                v = p.multiply(v, it->second);
            }
        out = out + c * v;
    }
    return p.normal_form(out);
}

Element omega_act(const StringBVInstance &inst, const Element &hopf_el, const Element &x) {
    return inst.p().multiply(omega_unit_image(inst, hopf_el), x);
}

Element delta_v_multiple(const StringBVInstance &inst, const Element &x) {
    const Presentation &p = inst.p();
    Monomial v = p.unit(), cnv2 = p.unit();
    v.e[inst.vi] = 1;
    cnv2.e[inst.ci] = inst.n;
    cnv2.e[inst.vi] = 2;
    Element mult = p.normal_form(p.from_monomial(v, Rat(inst.n + 1)) +
                                 p.from_monomial(cnv2, binomial(inst.n + 1, 2)));
    return p.normal_form(p.multiply(mult, partial_w(inst, x)) +
                         p.multiply(p.from_monomial(v), apply_delta(inst.delta, x)));
}

namespace {

// action of a product of exterior generators, letter by letter
Element g_act(const StringBVInstance &inst, const Element &g_el, const Element &x) {
    const Presentation &gp = *inst.hopf.g.algebra;
    const Presentation &p = inst.p();
    Element out;
    for (const auto &[m, c] : g_el.terms) {
        Element v = x;
        for (int rank = (int)gp.precedence().size() - 1; rank >= 0; --rank) {
            int gi = gp.precedence()[rank];
            for (int k = 0; k < m.e[gi]; ++k)
                v = e_act(inst, gi, v); // generator index == suspension index j
        }
        out = out + c * v;
    }
    return p.normal_form(out);
}

int suspension_index(const Monomial &m) {
    // the coproduct tables of E_{2i} only produce single-generator factors
    for (int gi = 0; gi < (int)m.e.size(); ++gi)
        if (m.e[gi] == 1)
            return gi;
    return -1; // unit
}

} // namespace

AuditReport check_action_laws(const StringBVInstance &inst, const DegreeWindow &w, int jobs) {
    const Presentation &p = inst.p();
    const Presentation &hp = *inst.hopf.omega.algebra;
    AuditReport rep;
    rep.window = w.str();
    rep.checks_run = {"omega-product", "omega-delta", "g-cartan", "g-delta", "unit-image"};
    auto basis = p.window_basis(w);
    long nb = (long)basis.size();
    std::mutex mu;
    std::atomic<long> truncated{0};
    auto record = [&](const char *check, std::vector<std::string> in, const Element &res) {
        if (res.is_zero())
            return;
        std::lock_guard<std::mutex> lock(mu);
        rep.failures.push_back({check, std::move(in), p.element_str(res), ""});
    };

    // Eq: a(x·y) = (ax)·y = x·(ay) for the polynomial generators
    for (int i = 0; i <= inst.n; ++i) {
        Element a = hp.from_monomial(hp.gen_monomial(i));
        std::string an = hp.generators()[i].name;
        parallel_sweep(nb * nb, jobs, [&](long idx) {
            const auto &bx = basis[idx / nb], &by = basis[idx % nb];
            Element x = p.from_monomial(bx.mon), y = p.from_monomial(by.mon);
            try {
                Element xy = p.multiply(x, y);
                Element ax_y = p.multiply(omega_act(inst, a, x), y);
                record("omega-product", {an, p.monomial_str(bx.mon), p.monomial_str(by.mon)},
                       p.normal_form(omega_act(inst, a, xy) - ax_y));
                record("omega-product", {an, p.monomial_str(bx.mon), p.monomial_str(by.mon)},
                       p.normal_form(ax_y - p.multiply(x, omega_act(inst, a, y))));
            } catch (const window_error &) {
                ++truncated;
            }
        });
        rep.checked += 2 * nb * nb;
    }

    // Eq: Δ(ax) = aΔ(x) + Σ a₁·σ(a₂)·x
    for (int i = 0; i <= inst.n; ++i) {
        Element a = hp.from_monomial(hp.gen_monomial(i));
        std::string an = hp.generators()[i].name;
        parallel_sweep(nb, jobs, [&](long idx) {
            Element x = p.from_monomial(basis[idx].mon);
            try {
                Element lhs = apply_delta(inst.delta, omega_act(inst, a, x));
                Element rhs = omega_act(inst, a, apply_delta(inst.delta, x));
                for (const auto &[l, r] : inst.hopf.omega.coproduct.at(i)) {
                    for (const auto &[rm, rc] : r.terms) {
                        int gi = suspension_index(rm);
                        if (gi < 0)
                            continue; // σ of the unit part vanishes
                        rhs = rhs + rc * omega_act(inst, l, e_act(inst, gi, x));
                    }
                }
                record("omega-delta", {an, p.monomial_str(basis[idx].mon)},
                       p.normal_form(lhs - rhs));
            } catch (const window_error &) {
                ++truncated;
            }
        });
        rep.checked += nb;
    }

    // Eq: b(x·y) = Σ (-1)^{|b₂||x|} (b₁x)·(b₂y) for the primitive generators
    const Presentation &gp = *inst.hopf.g.algebra;
    for (int j = 0; j <= inst.n; ++j) {
        Element b = gp.from_monomial(gp.gen_monomial(j));
        std::string bn = gp.generators()[j].name;
        parallel_sweep(nb * nb, jobs, [&](long idx) {
            const auto &bx = basis[idx / nb], &by = basis[idx % nb];
            Element x = p.from_monomial(bx.mon), y = p.from_monomial(by.mon);
            try {
                Element lhs = g_act(inst, b, p.multiply(x, y));
                Element rhs;
                for (const auto &[l, r] : inst.hopf.g.coproduct.at(j)) {
                    long dr = gp.homogeneous_degree(r).value_or(0);
                    long dx = p.degree(bx.mon);
                    rhs = rhs + Rat(sign_pow(dr * dx)) *
                                    p.multiply(g_act(inst, l, x), g_act(inst, r, y));
                }
                record("g-cartan", {bn, p.monomial_str(bx.mon), p.monomial_str(by.mon)},
                       p.normal_form(lhs - rhs));
            } catch (const window_error &) {
                ++truncated;
            }
        });
        rep.checked += nb * nb;
    }

    // Eq: Δ(bx) = (-1)^{|b|} bΔ(x), |b| odd
    for (int j = 0; j <= inst.n; ++j) {
        Element b = gp.from_monomial(gp.gen_monomial(j));
        std::string bn = gp.generators()[j].name;
        parallel_sweep(nb, jobs, [&](long idx) {
            Element x = p.from_monomial(basis[idx].mon);
            try {
                Element lhs = apply_delta(inst.delta, g_act(inst, b, x));
                Element rhs = p.scale(-1, g_act(inst, b, apply_delta(inst.delta, x)));
                record("g-delta", {bn, p.monomial_str(basis[idx].mon)},
                       p.normal_form(lhs - rhs));
            } catch (const window_error &) {
                ++truncated;
            }
        });
        rep.checked += nb;
    }

    // Corollary: a ↦ a·1 is a ring homomorphism with Δ-trivial image
    for (const Monomial &am : hopf_window_monomials(hp, 2)) {
        Element a = hp.from_monomial(am);
        try {
            Element a1 = omega_unit_image(inst, a);
            record("unit-image", {hp.monomial_str(am), "Δ(a·1)"},
                   apply_delta(inst.delta, a1));
        } catch (const window_error &) {
            ++truncated;
        }
        ++rep.checked;
    }
    for (int i = 0; i <= inst.n; ++i)
        for (int j = 0; j <= inst.n; ++j) {
            Element a = hp.from_monomial(hp.gen_monomial(i));
            Element b = hp.from_monomial(hp.gen_monomial(j));
            Element lhs = p.multiply(omega_unit_image(inst, a), omega_unit_image(inst, b));
            Element rhs = omega_unit_image(inst, hp.multiply(a, b));
            record("unit-image",
                   {hp.generators()[i].name, hp.generators()[j].name},
                   p.normal_form(lhs - rhs));
            ++rep.checked;
        }

    rep.truncated = truncated.load();
    std::sort(rep.failures.begin(), rep.failures.end(), [](const Certificate &a,
                                                           const Certificate &b) {
        return std::tie(a.check, a.inputs) < std::tie(b.check, b.inputs);
    });
    return rep;
}

} // namespace loopbv
