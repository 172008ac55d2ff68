#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sgred/jet1.hpp"
#include "sgred/jet2.hpp"
#include "sgred/jet3.hpp"

using namespace sgred;

namespace {

double dist(Cx a, Cx b) { return std::abs(a - b); }

// Nested central differences of a scalar callable, for the composition oracle.
template <class F>
Cx fd1(F f, Cx x, double h = 1e-5) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}
template <class F>
Cx fd2(F f, Cx x, double h = 1e-4) {
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

}  // namespace

TEST_CASE("truncated product and quotient") {
    // eps * eps at order 2
    Jet1 eps = Jet1::variable(Cx{}, 2);
    Jet1 sq = eps * eps;
    CHECK(dist(sq[0], 0.0) == 0.0);
    CHECK(dist(sq[1], 0.0) == 0.0);
    CHECK(dist(sq[2], 1.0) == 0.0);

    // (1+eps)/(1-eps) at order 3: long-division oracle on truncated polynomials
    // gives (1, 2, 2, 2).
    Jet1 num = Jet1::constant(1.0, 3) + Jet1::variable(Cx{}, 3);
    Jet1 den = Jet1::constant(1.0, 3) - Jet1::variable(Cx{}, 3);
    Jet1 q = num / den;
    CHECK(dist(q[0], 1.0) < 1e-15);
    CHECK(dist(q[1], 2.0) < 1e-15);
    CHECK(dist(q[2], 2.0) < 1e-15);
    CHECK(dist(q[3], 2.0) < 1e-15);
}

TEST_CASE("division by a singular jet is rejected") {
    Jet1 a = Jet1::constant(1.0, 2);
    Jet1 b = Jet1::variable(Cx{0.0, 0.0}, 2);  // zero constant term
    CHECK_THROWS_AS(a / b, Error);
    Jet1 c = Jet1::variable(Cx{1e-15, 0.0}, 2);
    CHECK_THROWS_AS(a / c, Error);
}

TEST_CASE("elementary functions") {
    // exp of (0, 1) at order 3 -> (1, 1, 1/2, 1/6)
    Jet1 e = exp(Jet1::variable(Cx{}, 3));
    CHECK(dist(e[0], 1.0) < 1e-15);
    CHECK(dist(e[1], 1.0) < 1e-15);
    CHECK(dist(e[2], 0.5) < 1e-15);
    CHECK(dist(e[3], 1.0 / 6.0) < 1e-15);

    // coth at z0 = 1, order 1: derivative is 1 - coth^2.
    Jet1 ct = coth(Jet1::variable(Cx{1.0, 0.0}, 1));
    double c1 = std::cosh(1.0) / std::sinh(1.0);
    CHECK(dist(ct[0], c1) < 1e-14);
    CHECK(dist(ct.derivative(1), 1.0 - c1 * c1) < 1e-14);
    // finite-difference cross-check at step 1e-6
    auto cothf = [](Cx z) { return std::cosh(z) / std::sinh(z); };
    CHECK(dist(ct.derivative(1), fd1(cothf, Cx{1.0, 0.0}, 1e-6)) < 1e-8);

    CHECK_THROWS_AS(log(Jet1::constant(Cx{}, 2)), Error);
    CHECK_THROWS_AS(recip(Jet1::constant(Cx{}, 2)), Error);
    CHECK_THROWS_AS(coth(Jet1::constant(Cx{}, 2)), Error);
}

TEST_CASE("composition matches nested finite differences") {
    Rng rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        Cx z0 = Cx{1.2, 0.0} + rng.box(0.3);
        // g = exp, f in {log, sqrt, sinh}
        Jet1 g = exp(Jet1::variable(z0, 2));
        int pick = static_cast<int>(rng.next_u64() % 3);
        Jet1 comp = pick == 0 ? log(g) : pick == 1 ? sqrt(g) : sinh(g);
        auto scalar = [pick](Cx z) {
            Cx e = std::exp(z);
            return pick == 0 ? std::log(e) : pick == 1 ? std::sqrt(e) : std::sinh(e);
        };
        Cx d1v = fd1(scalar, z0);
        Cx d2v = fd2(scalar, z0, 5e-4);
        CHECK(dist(comp.derivative(1), d1v) / (1.0 + std::abs(d1v)) < 1e-6);
        CHECK(dist(comp.derivative(2), d2v) / (1.0 + std::abs(d2v)) < 1e-6);
    }
}

TEST_CASE("integer powers and reciprocals") {
    Jet1 a = Jet1::variable(Cx{1.3, -0.4}, 3);
    Jet1 p3 = pow_n(a, 3);
    Jet1 direct = a * a * a;
    for (int m = 0; m <= 3; ++m) CHECK(dist(p3[m], direct[m]) < 1e-14 * (1.0 + std::abs(direct[m])));
    Jet1 pm2 = pow_n(a, -2);
    Jet1 rec2 = recip(a * a);
    for (int m = 0; m <= 3; ++m) CHECK(dist(pm2[m], rec2[m]) < 1e-13 * (1.0 + std::abs(rec2[m])));
    CHECK_THROWS_AS(pow_n(Jet1::variable(Cx{}, 2), -1), Error);
}

TEST_CASE("branch warnings are counted near the cut, never thrown") {
    reset_branch_warnings();
    (void)log(Jet1::variable(Cx{1.0, 0.1}, 2));
    CHECK(branch_warning_count() == 0);
    (void)log(Jet1::variable(Cx{-1.0, 1e-9}, 2));  // hugs the negative axis
    CHECK(branch_warning_count() == 1);
    (void)sqrt(Jet1::variable(Cx{-2.0, 1e-9}, 2));
    CHECK(branch_warning_count() == 2);
    reset_branch_warnings();
    CHECK(branch_warning_count() == 0);
}

TEST_CASE("Leibniz rule holds coefficientwise") {
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        Jet1 a(4), b(4);
        for (int m = 0; m <= 4; ++m) {
            a[m] = rng.box();
            b[m] = rng.box();
        }
        Jet1 prod = a * b;
        Jet1 dprod = prod.differentiated();
        Jet1 rule = a.truncated(3) * b.differentiated() + b.truncated(3) * a.differentiated();
        for (int m = 0; m <= 3; ++m)
            CHECK(dist(dprod[m], rule[m]) < 1e-12 * (1.0 + std::abs(rule[m])));
    }
}

TEST_CASE("schwarzian") {
    // homography (2x+3)/(x+1) has schwarzian zero
    Jet1 x = Jet1::variable(Cx{}, 3);
    Jet1 h = (2.0 * x + Cx{3.0, 0.0}) / (x + Cx{1.0, 0.0});
    CHECK(std::abs(schwarzian(h)) < 1e-13);

    // {tan; x} = 2 at any point; cross-checked by finite differences
    Jet1 t = tan(Jet1::variable(Cx{0.3, 0.0}, 3));
    CHECK(dist(schwarzian(t), 2.0) < 1e-12);
    auto tanf = [](Cx z) { return std::tan(z); };
    Cx f1 = fd1(tanf, Cx{0.3, 0.0});
    Cx f2 = fd2(tanf, Cx{0.3, 0.0});
    auto tanf3 = [&](Cx z) { return fd2(tanf, z, 2e-3); };
    Cx f3 = fd1(tanf3, Cx{0.3, 0.0}, 2e-3);
    CHECK(dist(f3 / f1 - 1.5 * (f2 / f1) * (f2 / f1), 2.0) < 1e-4);

    // {e^x; x} = -1/2 everywhere
    Jet1 e = exp(Jet1::variable(Cx{-0.7, 1.1}, 3));
    CHECK(dist(schwarzian(e), -0.5) < 1e-12);

    CHECK_THROWS_AS(schwarzian(Jet1::constant(1.0, 3)), Error);
}

TEST_CASE("trivariate jets: nilpotency is exact") {
    Cx x0{0.3, 0.1}, y0{-0.2, 0.4}, t0{0.7, -0.3};
    Jet3 ex = Jet3::var_x(x0, y0, t0) - x0;
    Jet3 ey = Jet3::var_y(x0, y0, t0) - y0;
    Jet3 et = Jet3::var_t(x0, y0, t0) - t0;
    Jet3 zero = ex * ey * et * ex;
    for (int m = 0; m < 8; ++m) CHECK(zero[m] == Cx{});

    // any product of four increment factors dies bitwise
    Jet3 z2 = ey * et * ey * et;
    for (int m = 0; m < 8; ++m) CHECK(z2[m] == Cx{});
}

TEST_CASE("trivariate jets: log of exp is the identity") {
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        Jet3 a;
        a = Jet3::constant(rng.box(0.8), {});
        for (int m = 1; m < 8; ++m) a[m] = rng.box(0.8);
        Jet3 b = log(exp(a));
        for (int m = 0; m < 8; ++m) CHECK(dist(a[m], b[m]) < 1e-12);
    }
}

TEST_CASE("trivariate jets carry mixed partials of closed forms") {
    // u = x y t: the only surviving partials are the products.
    Cx x0{1.0, 0.0}, y0{1.0, 0.0}, t0{1.0, 0.0};
    Jet3 u = Jet3::var_x(x0, y0, t0) * Jet3::var_y(x0, y0, t0) * Jet3::var_t(x0, y0, t0);
    CHECK(dist(u.d(1, 1, 1), 1.0) == 0.0);
    CHECK(dist(u.d(1, 1, 0), t0) == 0.0);
    CHECK(dist(u.d(1, 0, 0), y0 * t0) == 0.0);
}

TEST_CASE("bivariate jets: partials and elementary functions") {
    Jet2 p = Jet2::var_p(Cx{0.4, 0.1}, 3, 1);
    Jet2 t = Jet2::var_t(Cx{0.2, -0.1}, 3, 1);
    Jet2 f = exp(p * t);
    // d^2/dp^2 of exp(pt) = t^2 exp(pt); d/dpdt = (1 + pt) exp(pt)
    Cx p0{0.4, 0.1}, t0{0.2, -0.1};
    Cx e = std::exp(p0 * t0);
    CHECK(dist(f.d(2, 0), t0 * t0 * e) < 1e-13);
    CHECK(dist(f.d(1, 1), (1.0 + p0 * t0) * e) < 1e-13);
    CHECK(dist(f.d(3, 1), t0 * t0 * (3.0 + p0 * t0) * e) < 1e-12);
}
