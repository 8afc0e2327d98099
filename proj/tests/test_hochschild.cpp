#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "loopbv/hochschild.hpp"

using namespace loopbv;

namespace {
Element el(const StringBVInstance &i, const std::string &s) { return i.p().parse_element(s); }
} // namespace

TEST_CASE("build_hochschild: presentation and delta") {
    StringBVInstance h2 = build_hochschild(2);
    const Presentation &p = h2.p();
    CHECK(apply_delta(h2.delta, el(h2, "u")) == el(h2, "-2")); // Δ(u) = -n·1
    CHECK(apply_delta(h2.delta, el(h2, "t^2·x")) == p.zero());
    CHECK(apply_delta(h2.delta, el(h2, "x")) == p.zero());

    StringBVInstance h1 = build_hochschild(1);
    CHECK(apply_delta(h1.delta, el(h1, "t·u")) == el(h1, "-3·t"));

    // its BV axioms hold as well
    DegreeWindow w{4, {}};
    for (int n = 1; n <= 3; ++n) {
        StringBVInstance h = build_hochschild(n);
        CHECK(check_delta_squared(h.delta, w).ok());
        CHECK(check_operator_contract(h.delta, w).ok());
        CHECK(check_bv_identity_window(h.delta, DegreeWindow{3, {}}, 2).ok());
    }
}

TEST_CASE("decide_bv_iso: the even/odd dichotomy") {
    DegreeWindow w{3, {}};

    IsoDecision d2 = decide_bv_iso(2, w);
    CHECK(d2.candidates_checked <= 8 * 3);
    REQUIRE(d2.iso.has_value());
    CHECK(d2.iso->eps1 == 1);
    CHECK(d2.iso->eps2 == -1);
    CHECK(d2.iso->eps3 == 1);
    CHECK(d2.iso->alpha == 0);

    IsoDecision d4 = decide_bv_iso(4, w);
    CHECK(d4.iso.has_value());

    for (int n : {1, 3}) {
        IsoDecision d = decide_bv_iso(n, w);
        CHECK_FALSE(d.iso.has_value());
        CHECK(d.candidates_checked == 8 * (n + 1));
        // the obstruction element is C(n+1,2)·x^n·t up to sign
        StringBVInstance h = build_hochschild(n);
        Element expect = h.p().normal_form(
            h.p().scale(Rat(binomial(n + 1, 2)),
                        h.p().multiply(h.p().power(h.p().gen_element("x"), n),
                                       h.p().gen_element("t"))));
        CHECK((d.obstruction_element == expect ||
               d.obstruction_element == h.p().scale(-1, expect)));
        CHECK_FALSE(d.obstruction_element.is_zero());
    }
}

TEST_CASE("dichotomy over the full range and witness re-verification") {
    DegreeWindow w{3, {}};
    for (int n = 1; n <= 6; ++n) {
        IsoDecision d = decide_bv_iso(n, w);
        CHECK(d.iso.has_value() == (n % 2 == 0));
        if (d.iso) {
            CHECK(verify_candidate_ring_hom(n, *d.iso, w).ok());
            CHECK(verify_candidate_delta(n, *d.iso, w).ok());
        }
    }
}

TEST_CASE("the distinguished ring isomorphism exists for every n") {
    DegreeWindow w{3, {}};
    IsoCandidate ring_iso{1, -1, 1, 0};
    for (int n = 1; n <= 6; ++n) {
        CHECK(verify_candidate_ring_hom(n, ring_iso, w).ok());
        // it intertwines Δ exactly when n is even
        CHECK(verify_candidate_delta(n, ring_iso, w).ok() == (n % 2 == 0));
    }
}

TEST_CASE("candidate_completeness_check certifies the generator degrees") {
    for (int n = 1; n <= 4; ++n) {
        AuditReport r = candidate_completeness_check(n);
        INFO(r.text());
        CHECK(r.ok());
    }
    // the pieces themselves: degree -1 is {w} / {u}, degree -2 is {c} / {x},
    // degree 2n is {v, c^n·v^2 (torsion n+1)} / {t, x^n·t^2 (torsion n+1)}
    StringBVInstance a = build_theorem_a(3);
    DegreeWindow w{4, {}};
    GradedPiece p6 = a.p().basis_in_degree(6, w);
    REQUIRE(p6.entries.size() == 2);
    CHECK(a.p().monomial_str(p6.entries[0].mon) == "v");
    CHECK(p6.entries[0].annihilator == 0);
    CHECK(a.p().monomial_str(p6.entries[1].mon) == "c^3·v^2");
    CHECK(p6.entries[1].annihilator == 4);
}
