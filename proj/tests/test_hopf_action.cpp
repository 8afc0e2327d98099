#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "loopbv/cpn.hpp"
#include "loopbv/hopf.hpp"

using namespace loopbv;

namespace {
Element el(const StringBVInstance &i, const std::string &s) { return i.p().parse_element(s); }
} // namespace

TEST_CASE("cpn Hopf data: coassociativity, counit, primitivity, stated tables") {
    for (int n = 1; n <= 3; ++n) {
        CpnHopf h = make_cpn_hopf(n);
        CHECK(check_hopf_data(h.omega, 3).ok());
        CHECK(check_hopf_data(h.g, 3).ok());

        // D(E_{2i}) = sum_j E_{2j} (x) E_{2i-2j} and sigma(E_{2i}) = e_{2i+1}
        const Presentation &hp = *h.omega.algebra;
        for (int i = 0; i <= n; ++i) {
            const auto &pairs = h.omega.coproduct.at(i);
            REQUIRE((int)pairs.size() == i + 1);
            for (int j = 0; j <= i; ++j) {
                CHECK(pairs[j].first == hp.from_monomial(hp.gen_monomial(j)));
                CHECK(pairs[j].second == hp.from_monomial(hp.gen_monomial(i - j)));
            }
            CHECK(h.omega.suspension.at(i) == "e" + std::to_string(2 * i + 1));
        }
    }
}

TEST_CASE("partial_w strips the exterior letter") {
    StringBVInstance i2 = build_theorem_a(2);
    CHECK(partial_w(i2, el(i2, "w·c·v")) == el(i2, "c·v"));
    CHECK(partial_w(i2, el(i2, "v^3")) == i2.p().zero());
    CHECK(partial_w(i2, el(i2, "w")) == el(i2, "1"));
}

TEST_CASE("omega action through the unit image") {
    StringBVInstance i1 = build_theorem_a(1);
    const Presentation &hp = *i1.hopf.omega.algebra;
    // E_2·1 = c^{n-1}·v = v at n = 1
    CHECK(omega_unit_image(i1, hp.gen_element("E2")) == el(i1, "v"));
    // E_0·v = (1 + c·v)·v = v + c·v^2
    CHECK(omega_act(i1, hp.gen_element("E0"), el(i1, "v")) == el(i1, "v + c·v^2"));
    // the Hopf unit acts as the identity
    CHECK(omega_act(i1, hp.from_int(1), el(i1, "w·v")) == el(i1, "w·v"));
}

TEST_CASE("e action closed form") {
    StringBVInstance i2 = build_theorem_a(2);
    for (int j = 0; j <= 2; ++j) {
        Element expect = i2.p().normal_form(
            i2.p().scale(j + 1, i2.p().multiply(i2.p().power(el(i2, "c"), 2 - j), el(i2, "v"))));
        CHECK(e_act(i2, j, el(i2, "w")) == expect);
        CHECK(e_act(i2, j, el(i2, "c·v")) == i2.p().zero());
        CHECK(e_act(i2, j, el(i2, "v^2")) == i2.p().zero());
    }
    // e_3·(c·w) = 2·c^2·v at n = 2 (i = 1, ∂_w(c·w) = c)
    CHECK(e_act(i2, 1, el(i2, "w·c")) == el(i2, "2·c^2·v"));
}

TEST_CASE("delta_v_multiple agrees with the closed form") {
    StringBVInstance i1 = build_theorem_a(1);
    // x = w, n = 1: [(2)v + c·v^2]·1 + v·(1 + c·v) = 3v + 2c·v^2 = 3v
    CHECK(delta_v_multiple(i1, el(i1, "w")) == el(i1, "3·v"));
    CHECK(delta_v_multiple(i1, el(i1, "w")) == apply_delta(i1.delta, el(i1, "w·v")));
    // x = c^p v^q: reduces to v·Δ(x) = 0
    CHECK(delta_v_multiple(i1, el(i1, "c·v")) == i1.p().zero());
    CHECK(delta_v_multiple(i1, el(i1, "1")) == i1.p().zero());

    DegreeWindow w{4, {}};
    for (int n = 1; n <= 3; ++n) {
        StringBVInstance inst = build_theorem_a(n);
        const Presentation &p = inst.p();
        Element v = p.gen_element("v");
        for (const auto &b : p.window_basis(w)) {
            Element x = p.from_monomial(b.mon);
            CHECK(delta_v_multiple(inst, x) == apply_delta(inst.delta, p.multiply(v, x)));
        }
    }
}

TEST_CASE("module action laws hold on the CP^n instances") {
    DegreeWindow w{3, {}};
    for (int n = 1; n <= 3; ++n) {
        StringBVInstance inst = build_theorem_a(n);
        AuditReport r = check_action_laws(inst, w, 2);
        INFO(r.text());
        CHECK(r.ok());
        CHECK(r.checked > 0);
    }
}

TEST_CASE("corollary: delta vanishes on the unit image") {
    for (int n = 1; n <= 3; ++n) {
        StringBVInstance inst = build_theorem_a(n);
        const Presentation &hp = *inst.hopf.omega.algebra;
        for (int i = 0; i <= n; ++i) {
            Element a1 = omega_unit_image(inst, hp.gen_element("E" + std::to_string(2 * i)));
            CHECK(apply_delta(inst.delta, a1) == inst.p().zero());
        }
    }
}

TEST_CASE("a fault in the action data is caught by the law audit") {
    StringBVInstance inst = build_theorem_a(2);
    inst.actions.omega_values["E2"] =
        inst.p().normal_form(inst.actions.omega_values["E2"] + el(inst, "v"));
    DegreeWindow w{3, {}};
    AuditReport r = check_action_laws(inst, w, 1);
    CHECK_FALSE(r.ok());
}
