#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "sgred/reduced_systems.hpp"

using namespace sgred;

namespace {

ReducedConstants generic_constants(Rng& rng) {
    ReducedConstants c;
    c.nu = Cx{1.0, 0.0} + 0.4 * rng.box();
    c.k = Cx{1.0, 0.0} + 0.4 * rng.box();
    c.K5 = rng.box(0.7);
    c.K6 = rng.box(0.7);
    c.K7 = rng.box(0.7);
    return c;
}

const ReducedCase all_cases[4] = {ReducedCase::tri, ReducedCase::rat, ReducedCase::exp_,
                                  ReducedCase::zer};

}  // namespace

TEST_CASE("printed coefficient families") {
    ReducedConstants c;
    c.K5 = {1.0, 0.0};
    // zer with K5 = 1: f5 is the constant -8, g6 = -8 K7 + 32 xi.
    c.K7 = {0.4, 0.0};
    auto zer = coefficient_family(ReducedCase::zer, c);
    CHECK(std::abs(zer.f5(Cx{2.3, 0.4}, 0).value() - Cx{-8.0, 0.0}) < 1e-15);
    Cx xi{0.7, 0.2};
    CHECK(std::abs(zer.g6(xi, 0).value() - (-8.0 * c.K7 + 32.0 * xi)) < 1e-13);

    // rat at xi = 2 with K5 = 1, K6 = 0: f5 = -1/2, f6 = 1/8.
    c.K6 = {};
    auto rat = coefficient_family(ReducedCase::rat, c);
    CHECK(std::abs(rat.f5(Cx{2.0, 0.0}, 0).value() - Cx{-0.5, 0.0}) < 1e-15);
    CHECK(std::abs(rat.f6(Cx{2.0, 0.0}, 0).value() - Cx{0.125, 0.0}) < 1e-15);
}

TEST_CASE("g3 equals f1' for every family") {
    Rng rng(3);
    for (ReducedCase cs : all_cases) {
        ReducedConstants c = generic_constants(rng);
        auto fam = coefficient_family(cs, c, true);
        for (int i = 0; i < 16; ++i) {
            Cx xi = Cx{0.5, 0.25} + Cx(0.09 * i, -0.02 * i);
            Cx f1p = fam.f1(xi, 1).derivative(1);
            Cx g3 = fam.g3(xi, 0).value();
            CHECK(std::abs(g3 - f1p) < 1e-12 * (1.0 + std::abs(g3)));
            CHECK(std::abs(fam.g5(xi, 0).value()) == 0.0);
        }
    }
}

TEST_CASE("family poles are rejected") {
    ReducedConstants c;
    auto rat = coefficient_family(ReducedCase::rat, c);
    CHECK_THROWS_AS(rat.f1(Cx{}, 1), Error);
    auto tri = coefficient_family(ReducedCase::tri, c);
    CHECK_THROWS_AS(tri.f1(Cx{}, 1), Error);  // sinh(k xi) = 0 at xi = 0
}

TEST_CASE("no-log residuals vanish for the solved families") {
    Rng rng(5);
    for (ReducedCase cs : all_cases) {
        ReducedConstants c = generic_constants(rng);
        auto fam = coefficient_family(cs, c, true);
        for (int i = 0; i < 16; ++i) {
            Cx xi = Cx{0.45, 0.2} + Cx(0.1 * i, -0.03 * i);
            for (int branch : {+1, -1}) {
                auto q = nolog_residuals(fam, xi, branch);
                CHECK(q.Q2.rel() < 1e-10);
                CHECK(q.Q4a.rel() < 1e-10);
                CHECK(q.Q4b.rel() < 1e-10);
            }
        }
    }
}

TEST_CASE("perturbed families are caught by the no-log conditions") {
    // g5 = 0.1 shifts Q2 by exactly +- 0.1 i.
    ReducedConstants c;
    c.K5 = {0.3, 0.1};
    auto fam = coefficient_family(ReducedCase::rat, c);
    Cx xi{1.3, 0.2};
    auto q = nolog_residuals(fam, xi, +1);
    Cx shifted = q.Q2.value + I * 0.1;
    CHECK(std::abs(shifted - I * 0.1) < 1e-14);

    // f1 = 1/xi with constant nonzero f5 violates Q4^(2) = +-i (f5' + 2 f1 f5).
    Cx f5c{0.7, 0.0};
    Cx expected = I * (2.0 * f5c / xi);
    CHECK(std::abs(expected) > 0.1);
}

TEST_CASE("reduced rhs fixed points and direct substitution") {
    ReducedConstants c;
    c.nu = {1.0, 0.0};
    // all K zero: constant-slope state is stationary
    auto [u1, v1] = reduced_rhs(ReducedCase::zer, c, {Cx{0.3, 0.1}, {2, 0}, {0, 0}, {5, 0}, {0, 0}});
    CHECK(std::abs(u1) == 0.0);
    CHECK(std::abs(v1) == 0.0);

    // K6 = 1 at the origin: U''' = 8, V''' = 8 K7
    c.K6 = {1.0, 0.0};
    c.K7 = {0.25, -0.5};
    auto [u2, v2] = reduced_rhs(ReducedCase::zer, c, {Cx{}, {}, {}, {}, {}});
    CHECK(std::abs(u2 - Cx{8.0, 0.0}) < 1e-15);
    CHECK(std::abs(v2 - 8.0 * c.K7) < 1e-15);

    // poles are guarded
    CHECK_THROWS_AS(reduced_rhs(ReducedCase::rat, c, {Cx{}, {}, {}, {}, {}}), Error);
}

TEST_CASE("family rhs agrees with the printed systems") {
    Rng rng(7);
    for (ReducedCase cs : {ReducedCase::tri, ReducedCase::rat, ReducedCase::zer}) {
        ReducedConstants c = generic_constants(rng);
        if (cs != ReducedCase::zer) c.K7 = {};  // printed tri/rat have K7 removed
        auto fam = coefficient_family(cs, c, true);
        for (int trial = 0; trial < 10; ++trial) {
            ReducedState s{Cx{0.9, 0.3} + 0.2 * rng.box(), rng.box(), rng.box(), rng.box(),
                           rng.box()};
            auto [a1, b1] = reduced_rhs(cs, c, s);
            auto [a2, b2] = family_rhs(fam, s);
            CHECK(std::abs(a1 - a2) < 1e-12 * (1.0 + std::abs(a1)));
            CHECK(std::abs(b1 - b2) < 1e-12 * (1.0 + std::abs(b1)));
        }
    }
    // exp: the printed system carries k-rescaled constants
    // (K5 -> k K5, K6 -> k^2 K6, K7 -> k K7 relative to the family).
    {
        ReducedConstants cf = generic_constants(rng);
        ReducedConstants cs_ = cf;
        cs_.K5 = cf.k * cf.K5;
        cs_.K6 = cf.k * cf.k * cf.K6;
        cs_.K7 = cf.k * cf.K7;
        auto fam = coefficient_family(ReducedCase::exp_, cf, true);
        for (int trial = 0; trial < 10; ++trial) {
            ReducedState s{Cx{0.5, 0.2} + 0.2 * rng.box(), rng.box(), rng.box(), rng.box(),
                           rng.box()};
            auto [a1, b1] = reduced_rhs(ReducedCase::exp_, cs_, s);
            auto [a2, b2] = family_rhs(fam, s);
            CHECK(std::abs(a1 - a2) < 1e-12 * (1.0 + std::abs(a1)));
            CHECK(std::abs(b1 - b2) < 1e-12 * (1.0 + std::abs(b1)));
        }
    }
}

TEST_CASE("gauge structure of the right-hand sides") {
    // Probing with basis states shows the U-equation carries no U'V', U' or
    // V''-alone terms and the U'V'' coefficient is exactly -2 (the fixed
    // gauge); likewise the V-equation has coefficient 2 nu^2 on U'U''.
    Rng rng(19);
    for (ReducedCase cs : all_cases) {
        ReducedConstants c = generic_constants(rng);
        Cx xi{0.8, 0.35};
        auto at = [&](Cx up, Cx upp, Cx vp, Cx vpp) {
            return reduced_rhs(cs, c, {xi, up, upp, vp, vpp});
        };
        Cx base_u = at(0, 0, 0, 0).first;
        // coefficient of U'V'' via second difference
        Cx c_upvpp = at(1, 0, 0, 1).first - at(1, 0, 0, 0).first - at(0, 0, 0, 1).first + base_u;
        CHECK(std::abs(c_upvpp - Cx{-2.0, 0.0}) < 1e-12);
        // no U'V' coupling in the U-equation (f2 = 0)
        Cx c_upvp = at(1, 0, 1, 0).first - at(1, 0, 0, 0).first - at(0, 0, 1, 0).first + base_u;
        CHECK(std::abs(c_upvp) < 1e-12);
        // no bare U' term (f3 = 0): the U' dependence is exactly bilinear
        Cx lin_up = at(1, 0, 0, 0).first - base_u;
        CHECK(std::abs(lin_up) < 1e-12);
        // V-equation: U'U'' coefficient equals 2 nu^2 (c_u = c_v = 1)
        Cx base_v = at(0, 0, 0, 0).second;
        Cx c_upupp =
            at(1, 1, 0, 0).second - at(1, 0, 0, 0).second - at(0, 1, 0, 0).second + base_v;
        CHECK(std::abs(c_upupp - 2.0 * c.nu * c.nu) < 1e-12 * (1.0 + std::abs(c.nu * c.nu)));
        // no U''-alone term in the V-equation (f4 = 0)
        Cx lin_upp_v = at(0, 1, 0, 0).second - base_v;
        double f1mag = std::abs(coefficient_family(cs, c, true).f1(xi, 0).value());
        CHECK(std::abs(lin_upp_v) < 1e-12 * (1.0 + f1mag));
    }
}

TEST_CASE("first integrals at printed sample points") {
    ReducedConstants c;
    c.nu = {1.0, 0.0};
    ReducedState s{Cx{}, {2, 0}, {0, 0}, {0.37, 0.0}, {0, 0}};
    auto [K2, K4] = first_integrals(ReducedCase::zer, c, s);
    CHECK(std::abs(K2 - Cx{-4.0, 0.0}) < 1e-15);
    CHECK(std::abs(K4) < 1e-15);
}

TEST_CASE("first integrals are exactly conserved by the flow") {
    // Dissipation oracle: substitute the local Taylor solution into an
    // independent jet transcription of the printed K2, K4 and require every
    // xi-derivative coefficient to vanish.
    Rng rng(29);
    for (ReducedCase cs : all_cases) {
        for (int trial = 0; trial < 13; ++trial) {
            ReducedConstants c = generic_constants(rng);
            if (cs == ReducedCase::tri || cs == ReducedCase::rat) c.K7 = {};
            ReducedState s{Cx{0.8, 0.25} + 0.15 * rng.box(), rng.box(), rng.box(), rng.box(),
                           rng.box()};
            const int n = 4;
            StateJets js = taylor_state(cs, c, s, n + 1);
            Jet1 up = js.up.truncated(n), vp = js.vp.truncated(n);
            Jet1 upp = js.upp.truncated(n), vpp = js.vpp.truncated(n);
            Jet1 xi = Jet1::variable(s.xi, n);
            Cx nu2 = c.nu * c.nu, k = c.k, K5 = c.K5, K6 = c.K6, K7 = c.K7;
            Jet1 K2j(n), K4j(n);
            switch (cs) {
                case ReducedCase::tri: {
                    Jet1 co = coth(k * xi), sh = sinh(k * xi);
                    K2j = -nu2 * up * up + vpp + k * (co * vp) + K5 * K5 * k * k * (co * co);
                    Jet1 a = c.nu * (sh * upp) / k - K5 * k * recip(sh);
                    Jet1 b = (sh * vpp) / k;
                    K4j = a * a + b * b - 4.0 * K5 * c.nu * (up * vp) - vp * vp -
                          4.0 * K6 * c.nu * up - 4.0 * K5 * k * (co * (K5 * vp + K6));
                    break;
                }
                case ReducedCase::rat: {
                    Jet1 ix = recip(xi);
                    K2j = -nu2 * up * up + vpp + vp * ix + K5 * K5 * (ix * ix);
                    Jet1 a = c.nu * (xi * upp) - K5 * ix;
                    Jet1 b = xi * vpp;
                    K4j = a * a + b * b - 4.0 * c.nu * K5 * (up * vp) - vp * vp -
                          4.0 * c.nu * K6 * up - 4.0 * K5 * ((K5 * vp + K6) * ix);
                    break;
                }
                case ReducedCase::exp_: {
                    Jet1 e2 = exp(-2.0 * k * xi);
                    K2j = -nu2 * up * up + vpp + k * vp + 4.0 * K5 * K5 * (e2 * e2) +
                          4.0 * K7 * e2;
                    K4j = recip(e2) * (nu2 * (upp * upp) + vpp * vpp) -
                          8.0 * c.nu * K5 * k * (upp + 2.0 * (up * vp)) -
                          8.0 * c.nu * (2.0 * K6 + K5 * k * k) * up - 16.0 * K7 * k * vp -
                          32.0 * K5 * ((K5 * k * vp + K6) * e2);
                    break;
                }
                case ReducedCase::zer: {
                    K2j = -nu2 * up * up + vpp + 16.0 * K5 * K5 * (xi * xi) - 8.0 * K7 * xi;
                    K4j = nu2 * (upp * upp) + vpp * vpp -
                          8.0 * c.nu * K5 * (upp + 2.0 * (up * vp)) - 16.0 * c.nu * K6 * up +
                          (64.0 * K5 * K5 * xi - 16.0 * K7) * vp + 64.0 * K5 * K6 * xi;
                    break;
                }
            }
            double s2 = std::max(1.0, std::abs(K2j.value()));
            double s4 = std::max(1.0, std::abs(K4j.value()));
            // both derivative coefficients available from the order-(n+1)
            // solution must vanish
            for (int m = 1; m <= 2; ++m) {
                CHECK(std::abs(K2j[m]) / s2 < 1e-11);
                CHECK(std::abs(K4j[m]) / s4 < 1e-11);
            }
            // and the values agree with the library transcription
            auto [k20, k40] = first_integrals(cs, c, s);
            CHECK(std::abs(K2j.value() - k20) < 1e-12 * s2);
            CHECK(std::abs(K4j.value() - k40) < 1e-12 * s4);
        }
    }
}

TEST_CASE("taylor state matches the rhs derivatives") {
    // The numerically differentiated U'' along the local solution matches the
    // returned U''' (the trajectory finite-difference oracle).
    ReducedConstants c;
    c.nu = {1.1, 0.2};
    c.k = {0.9, 0.1};
    c.K5 = {0.3, -0.2};
    c.K6 = {0.1, 0.4};
    ReducedState s{Cx{0.7, 0.3}, {0.4, -0.1}, {0.2, 0.3}, {-0.5, 0.1}, {0.3, 0.2}};
    StateJets js = taylor_state(ReducedCase::tri, c, s, 6);
    auto [uppp, vppp] = reduced_rhs(ReducedCase::tri, c, s);
    double h = 1e-4;
    auto eval = [&](const Jet1& j, double e) {
        Cx acc{};
        for (int m = j.order(); m >= 0; --m) acc = acc * e + j[m];
        return acc;
    };
    Cx fd = (eval(js.upp, h) - eval(js.upp, -h)) / (2.0 * h);
    CHECK(std::abs(fd - uppp) < 1e-6 * (1.0 + std::abs(uppp)));
}

TEST_CASE("integral monomials") {
    auto w2 = integral_monomials(2);
    CHECK(w2.size() == 5);
    auto w4 = integral_monomials(4);
    CHECK(w4.size() == 14);

    // Generating-function oracle: the lambda^w Taylor coefficient of
    // 1/((1-l^2 U'')(1-l^2 V'')(1-l U')(1-l V')) is the sum of the returned
    // monomials evaluated at random values.
    Rng rng(31);
    for (int weight : {2, 4}) {
        Cx upp = rng.box(), vpp = rng.box(), up = rng.box(), vp = rng.box();
        int n = weight;
        Jet1 lam = Jet1::variable(Cx{}, n);
        Jet1 one = Jet1::constant(1.0, n);
        Jet1 gen = recip(one - lam * lam * upp) * recip(one - lam * lam * vpp) *
                   recip(one - lam * up) * recip(one - lam * vp);
        Cx direct = gen[n];
        Cx summed{};
        for (const auto& m : integral_monomials(weight)) {
            Cx term{1.0, 0.0};
            for (int i = 0; i < m.upp; ++i) term *= upp;
            for (int i = 0; i < m.vpp; ++i) term *= vpp;
            for (int i = 0; i < m.up; ++i) term *= up;
            for (int i = 0; i < m.vp; ++i) term *= vp;
            summed += term;
        }
        CHECK(std::abs(direct - summed) < 1e-12 * (1.0 + std::abs(direct)));
    }

    // every term of the printed zer K2/K4 matches a monomial of its weight
    // (structure check on exponents)
    for (const auto& m : integral_monomials(4))
        CHECK(2 * m.upp + 2 * m.vpp + m.up + m.vp == 4);
}

TEST_CASE("elliptic relation variants") {
    ReducedConstants c;
    c.nu = {1.0, 0.0};
    c.K2 = {0.7, -0.3};
    c.K4 = {0.2, 0.5};
    ReducedState s{Cx{}, {}, {}, {0.4, 0.1}, {}};
    // U' = U'' = 0, K6 = 0: corrected residual is K2^2 - K4.
    Residual corr = elliptic_relation(c, s, EllipticVariant::corrected);
    CHECK(std::abs(corr.value - (c.K2 * c.K2 - c.K4)) < 1e-15);
    Residual prin = elliptic_relation(c, s, EllipticVariant::as_printed);
    CHECK(std::abs((prin.value - corr.value) - (c.K2 - c.K2 * c.K2)) < 1e-15);

    c.K5 = {0.1, 0.0};
    CHECK_THROWS_AS(elliptic_relation(c, s, EllipticVariant::corrected), Error);
}

TEST_CASE("K7 translation maps between the untranslated and printed systems") {
    Rng rng(37);
    for (ReducedCase cs : {ReducedCase::tri, ReducedCase::rat}) {
        ReducedConstants c = generic_constants(rng);
        auto fam = coefficient_family(cs, c, /*keep_k7=*/true);
        ReducedConstants sys = translate_constants_k7zero(cs, c);
        for (int trial = 0; trial < 8; ++trial) {
            ReducedState full{Cx{0.9, 0.3} + 0.2 * rng.box(), rng.box(), rng.box(), rng.box(),
                              rng.box()};
            ReducedState w = translate_state_k7zero(cs, c, full);
            auto [a1, b1] = family_rhs(fam, full);
            auto [a2, b2] = reduced_rhs(cs, sys, w);
            CHECK(std::abs(a1 - a2) < 1e-12 * (1.0 + std::abs(a1)));
            CHECK(std::abs(b1 - b2) < 1e-12 * (1.0 + std::abs(b1)));
        }
    }
}
