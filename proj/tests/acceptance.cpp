// Acceptance suite: one line per criterion, exit 0 iff everything passes.
// All checks are exact integer identities; tolerance is zero throughout.

#include "loopbv/cli.hpp"
#include "loopbv/gysin.hpp"
#include "loopbv/hochschild.hpp"
#include "loopbv/json_io.hpp"

#include <iostream>
#include <sstream>
#include <thread>

using namespace loopbv;

namespace {

int failures = 0;

void report(int idx, const std::string &label, bool ok, const std::string &detail = "") {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << "criterion " << idx << ": " << label;
    if (!detail.empty())
        std::cout << "  (" << detail << ")";
    std::cout << std::endl;
    if (!ok)
        ++failures;
}

int jobs() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : (int)std::min(hw, 8u);
}

// 1. Δ² = 0 and the BV identity on every basis monomial / triple,
//    n = 1..5, coefficients Z, window q <= 6
void criterion_bv_axioms() {
    DegreeWindow w{6, {}};
    bool ok = true;
    std::ostringstream detail;
    long checked = 0;
    for (int n = 1; n <= 5 && ok; ++n) {
        StringBVInstance inst = build_theorem_a(n);
        AuditReport dsq = check_delta_squared(inst.delta, w, jobs());
        AuditReport bv = check_bv_identity_window(inst.delta, w, jobs());
        checked += dsq.checked + bv.checked;
        if (!dsq.ok() || !bv.ok()) {
            ok = false;
            detail << "n = " << n << ": " << (dsq.ok() ? bv.text() : dsq.text());
        }
    }
    if (ok)
        detail << checked << " exact checks";
    report(1, "BV axioms (delta^2 = 0 and the seven-term identity), n = 1..5, q <= 6", ok,
           detail.str());
}

// 2. the closed-form Δ table and the order-2/vanishing trichotomy of its
//    torsion term
void criterion_theorem_a_table() {
    DegreeWindow w{6, {}};
    bool ok = true;
    std::ostringstream detail;
    for (int n = 1; n <= 5 && ok; ++n) {
        StringBVInstance inst = build_theorem_a(n);
        const Presentation &p = inst.p();
        Int half = binomial(n + 1, 2);
        for (const auto &b : p.window_basis(w)) {
            int eps = b.mon.e[inst.wi], cp = b.mon.e[inst.ci], q = b.mon.e[inst.vi];
            Element got = inst.delta.value_on(b.mon);
            Element expect;
            if (eps == 1) {
                Element lead = p.multiply(p.power(p.gen_element("c"), cp),
                                          p.power(p.gen_element("v"), q));
                Element tor = p.multiply(p.power(p.gen_element("c"), n + cp),
                                         p.power(p.gen_element("v"), q + 1));
                expect = p.normal_form(p.scale(Rat((n - cp) + q * (n + 1)), lead) +
                                       p.scale(Rat((q + 1) * half), tor));
            }
            if (got != expect) {
                ok = false;
                detail << "n = " << n << " at " << p.monomial_str(b.mon);
                break;
            }
        }
        // trichotomy of C(n+1,2)·c^{n+p}·v^{q+1}: zero when p > 0 or n even,
        // order exactly 2 otherwise
        for (int cp = 0; cp <= n && ok; ++cp)
            for (int q = 0; q <= 3 && ok; ++q) {
                Element term =
                    p.scale(Rat(half), p.multiply(p.power(p.gen_element("c"), n + cp),
                                                  p.power(p.gen_element("v"), q + 1)));
                bool vanishes = term.is_zero();
                bool order2 = !vanishes && p.scale(2, term).is_zero();
                bool expect_vanish = (cp > 0) || (n % 2 == 0);
                if (vanishes != expect_vanish || (!expect_vanish && !order2)) {
                    ok = false;
                    detail << "trichotomy at n = " << n << ", p = " << cp << ", q = " << q;
                }
            }
    }
    report(2, "closed-form Δ table and torsion-term trichotomy, n = 1..5", ok, detail.str());
}

// 3. the Gerstenhaber brackets of the generators
void criterion_gerstenhaber() {
    bool ok = true;
    std::ostringstream detail;
    for (int n = 1; n <= 5 && ok; ++n) {
        StringBVInstance inst = build_theorem_a(n);
        const Presentation &p = inst.p();
        Element c = p.gen_element("c"), w = p.gen_element("w"), v = p.gen_element("v");
        Element vw = p.normal_form(
            p.scale(n + 1, v) +
            p.scale(Rat(binomial(n + 1, 2)), p.multiply(p.power(c, n), p.power(v, 2))));
        struct Case {
            Element got, expect;
            const char *label;
        } cases[] = {
            {bracket(inst.delta, c, w), p.scale(-1, c), "{c,w} = -c"},
            {bracket(inst.delta, w, c), c, "{w,c} = c"},
            {bracket(inst.delta, v, w), vw, "{v,w}"},
            {bracket(inst.delta, w, v), p.scale(-1, vw), "{w,v}"},
            {bracket(inst.delta, c, c), p.zero(), "{c,c} = 0"},
            {bracket(inst.delta, c, v), p.zero(), "{c,v} = 0"},
            {bracket(inst.delta, v, c), p.zero(), "{v,c} = 0"},
            {bracket(inst.delta, v, v), p.zero(), "{v,v} = 0"},
            {bracket(inst.delta, w, w), p.zero(), "{w,w} = 0"},
        };
        for (const auto &cs : cases)
            if (cs.got != cs.expect) {
                ok = false;
                detail << "n = " << n << ": " << cs.label;
                break;
            }
    }
    report(3, "Gerstenhaber corollary on the generators, n = 1..5", ok, detail.str());
}

// 4. the pipeline D -> C -> B -> A with mu and lambda certificates
void criterion_pipeline() {
    DegreeWindow w{6, {}};
    bool ok = true;
    std::ostringstream detail;
    for (int n = 1; n <= 5; ++n) {
        PipelineResult r = run_pipeline(n, w);
        bool mu_ok = true, lambda_ok = true;
        for (int i = 0; i <= n; ++i)
            if (r.mu[i] != n - i)
                mu_ok = false;
        for (int j = 0; j <= n; ++j)
            if (r.lambda[j] != -(j + 1))
                lambda_ok = false;
        if (!r.ok() || !mu_ok || !lambda_ok) {
            ok = false;
            detail << "n = " << n << " "
                   << (r.ok() ? "certificate mismatch" : r.operator_comparison.text());
            break;
        }
    }
    if (ok)
        detail << "mu_i = n-i, lambda_j = -(j+1) certified for n = 1..5";
    report(4, "pipeline derives the closed form from the sphere-bundle data", ok, detail.str());
}

// 5. the S^2 table (k <= 10) and the rational CP^n table (n <= 4)
void criterion_recoveries() {
    bool ok = true;
    std::ostringstream detail;
    {
        DegreeWindow w{11, {}};
        StringBVInstance s2 = build_s2(w);
        const Presentation &p = s2.p();
        for (int k = 0; k <= 10 && ok; ++k) {
            Element vk = p.power(p.gen_element("v"), k);
            Element got = apply_delta(s2.delta, p.multiply(p.gen_element("b"), vk));
            Element expect = p.normal_form(
                p.scale(2 * k + 1, vk) +
                p.multiply(p.gen_element("a"), p.power(p.gen_element("v"), k + 1)));
            if (got != expect ||
                !apply_delta(s2.delta, vk).is_zero() ||
                !apply_delta(s2.delta, p.multiply(p.gen_element("a"), vk)).is_zero()) {
                ok = false;
                detail << "S^2 table at k = " << k;
            }
        }
    }
    for (int n = 1; n <= 4 && ok; ++n) {
        DegreeWindow w{5, {}};
        StringBVInstance y = build_cpn_rational(n, w);
        const Presentation &p = y.p();
        for (int k = 0; k <= 4 && ok; ++k)
            for (int l = 0; l <= n && ok; ++l) {
                Element m = p.multiply(
                    p.power(p.gen_element("t"), k),
                    p.multiply(p.gen_element("u"), p.power(p.gen_element("x"), l)));
                Element expect = p.scale(Rat(-(k + 1) * n - k + l),
                                         p.multiply(p.power(p.gen_element("t"), k),
                                                    p.power(p.gen_element("x"), l)));
                if (apply_delta(y.delta, m) != expect) {
                    ok = false;
                    detail << "rational table at n = " << n << ", k = " << k << ", l = " << l;
                }
            }
    }
    report(5, "recoveries: the S^2 table (k <= 10) and the rational table (n <= 4)", ok, detail.str());
}

// 6. the Hochschild dichotomy with the displayed obstruction
void criterion_hochschild() {
    DegreeWindow w{3, {}};
    bool ok = true;
    std::ostringstream detail;
    for (int n = 1; n <= 4 && ok; ++n) {
        IsoDecision d = decide_bv_iso(n, w);
        if (n % 2 == 0) {
            if (!d.iso) {
                ok = false;
                detail << "no witness at even n = " << n;
            }
        } else {
            StringBVInstance h = build_hochschild(n);
            Element expect = h.p().normal_form(
                h.p().scale(Rat(binomial(n + 1, 2)),
                            h.p().multiply(h.p().power(h.p().gen_element("x"), n),
                                           h.p().gen_element("t"))));
            bool obstruction_ok = !d.iso && !d.obstruction_element.is_zero() &&
                                  (d.obstruction_element == expect ||
                                   d.obstruction_element == h.p().scale(-1, expect));
            if (!obstruction_ok) {
                ok = false;
                detail << "odd n = " << n << ": obstruction " << d.obstruction;
            }
        }
        if (!d.iso && d.candidates_checked != 8 * (n + 1)) {
            ok = false;
            detail << "candidate scan not exhaustive at n = " << n;
        }
    }
    report(6, "Hochschild dichotomy: witness for n = 2, 4; C(n+1,2)x^n·t obstruction for "
              "n = 1, 3",
           ok, detail.str());
}

// 7. characteristic classes and Gysin homology tables
void criterion_characteristic_classes() {
    bool ok = true;
    std::ostringstream detail;
    for (int n = 1; n <= 10 && ok; ++n) {
        CohClass c = total_chern(BundleSpec::over(n).with_tangent(n), n);
        if (pair_top(c, n) != n + 1 || pair_top(c, n - 1) != binomial(n + 1, 2)) {
            ok = false;
            detail << "pairings at n = " << n;
        }
    }
    for (int n = 1; n <= 6 && ok; ++n) {
        SphereBundleHomology h = gysin_homology(BundleSpec::over(n).with_tangent(n));
        GradedGroup expect;
        for (int i = 0; i <= n - 1; ++i)
            expect.add_free(2 * i);
        expect.add_torsion(2 * n - 1, n + 1);
        for (int i = 1; i <= n; ++i)
            expect.add_free(2 * i + 2 * n - 1);
        if (!(h.groups == expect)) {
            ok = false;
            detail << "S(TCP^n) groups at n = " << n;
        }
        SphereBundleHomology r =
            gysin_homology(BundleSpec::over(n).with_tangent(n).with_summand(1));
        GradedGroup expect2;
        for (int i = 0; i <= n; ++i) {
            expect2.add_free(2 * i);
            expect2.add_free(2 * i + 2 * (n + 1) - 1);
        }
        if (!(r.groups == expect2)) {
            ok = false;
            detail << "restricted-bundle groups at n = " << n;
        }
    }
    report(7, "Chern pairings (n <= 10) and Gysin homology tables (n <= 6)", ok, detail.str());
}

// 8. the four module-action laws and the unit-image corollary
void criterion_action_laws() {
    DegreeWindow w{4, {}};
    bool ok = true;
    std::ostringstream detail;
    for (int n = 1; n <= 3; ++n) {
        StringBVInstance inst = build_theorem_a(n);
        AuditReport r = check_action_laws(inst, w, jobs());
        if (!r.ok()) {
            ok = false;
            detail << "n = " << n << ": " << r.text();
            break;
        }
    }
    report(8, "module-action laws and the unit-image corollary, n = 1..3", ok, detail.str());
}

// 9. confluence of the built-in presentations, the adversarial fixture,
//    and fault detection through the verify command
void criterion_robustness() {
    bool ok = true;
    std::ostringstream detail;
    {
        std::ostringstream out, err;
        int code = run_cli({"confluence", "--qmax", "5"}, out, err);
        if (code != 0) {
            ok = false;
            detail << "built-in confluence audit failed";
        }
    }
    {
        std::ostringstream out, err;
        int code = run_cli({"confluence", "--instances", "cpn:2:Z", "--fixture", "--qmax", "3"},
                           out, err);
        if (code != 1 || out.str().find("fixture:adversarial") == std::string::npos) {
            ok = false;
            detail << "adversarial fixture not flagged";
        }
    }
    for (const char *fault : {"delta-w", "delta-cv"}) {
        std::ostringstream out, err;
        int code = run_cli({"verify", "--n", "2", "--qmax", "3",
                            "--inject-fault", fault, "--format", "json"},
                           out, err);
        bool has_certificate = false;
        try {
            json j = json::parse(out.str());
            has_certificate = j.at("failures").size() > 0;
        } catch (...) {
        }
        if (code != 1 || !has_certificate) {
            ok = false;
            detail << "fault " << fault << " not caught";
        }
    }
    report(9, "confluence audits and fault-injection detection", ok, detail.str());
}

} // namespace

int main() {
    criterion_bv_axioms();
    criterion_theorem_a_table();
    criterion_gerstenhaber();
    criterion_pipeline();
    criterion_recoveries();
    criterion_hochschild();
    criterion_characteristic_classes();
    criterion_action_laws();
    criterion_robustness();
    std::cout << (failures == 0 ? "acceptance: all criteria passed"
                                : "acceptance: FAILURES present")
              << std::endl;
    return failures == 0 ? 0 : 1;
}
