#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "sgred/sg2d.hpp"

using namespace sgred;

namespace {

Jet3 vx(Cx x0, Cx y0, Cx t0) { return Jet3::var_x(x0, y0, t0); }
Jet3 vy(Cx x0, Cx y0, Cx t0) { return Jet3::var_y(x0, y0, t0); }
Jet3 vt(Cx x0, Cx y0, Cx t0) { return Jet3::var_t(x0, y0, t0); }

}  // namespace

TEST_CASE("pde residual on closed-form fields") {
    Cx p{1.0, 0.0};
    // separable fields: u = x + y + t, v = t^3
    {
        FieldSample s;
        s.u = vx(1, 2, 3) + vy(1, 2, 3) + vt(1, 2, 3);
        s.v = vt(1, 2, 3) * vt(1, 2, 3) * vt(1, 2, 3);
        s.nu = p;
        PdeResidual r = pde_residual(s);
        CHECK(std::abs(r.e1) == 0.0);
        CHECK(std::abs(r.e2) == 0.0);
    }
    // u = x y t, v = 0: E1 = u_xyt = 1; E2 = -(u_x u_y)_t = -2 x y t = -2 at (1,1,1)
    {
        FieldSample s;
        s.u = vx(1, 1, 1) * vy(1, 1, 1) * vt(1, 1, 1);
        s.v = Jet3::constant(Cx{}, {1, 1, 1});
        s.nu = p;
        PdeResidual r = pde_residual(s);
        CHECK(std::abs(r.e1 - Cx{1.0, 0.0}) < 1e-15);
        CHECK(std::abs(r.e2 - Cx{-2.0, 0.0}) < 1e-15);
    }
}

TEST_CASE("t-only gauge leaves the residuals unchanged") {
    Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        FieldSample s;
        s.nu = Cx{1.0, 0.0} + 0.3 * rng.box();
        for (int m = 0; m < 8; ++m) {
            s.u[m] = rng.box();
            s.v[m] = rng.box();
        }
        PdeResidual before = pde_residual(s);
        // v -> v + g(t): shifts only the value and pure-t slots
        s.v[0] += rng.box();
        s.v[Jet3::T] += rng.box();
        PdeResidual after = pde_residual(s);
        CHECK(std::abs(before.e1 - after.e1) == 0.0);
        CHECK(std::abs(before.e2 - after.e2) == 0.0);
    }
}

TEST_CASE("conformal rescaling keeps a zero-residual sample at zero") {
    // u separable stays separable under x -> 2x.
    for (double scale : {1.0, 2.0}) {
        FieldSample s;
        Cx x0{0.5, 0.1};
        s.u = scale * vx(x0, 2, 3) + vy(x0, 2, 3) + vt(x0, 2, 3);
        s.v = vt(x0, 2, 3) * vt(x0, 2, 3);
        s.nu = {1.2, 0.1};
        PdeResidual r = pde_residual(s);
        CHECK(std::abs(r.e1) == 0.0);
        CHECK(std::abs(r.e2) == 0.0);
    }
}

TEST_CASE("v proportional to i nu u test generator") {
    Rng rng(43);
    Jet3 u;
    u = Jet3::constant(rng.box(), {});
    for (int m = 1; m < 8; ++m) u[m] = rng.box();
    FieldSample s = make_vinu_sample(u, Cx{1.1, -0.2}, +1);
    CHECK(std::abs(s.v[3] - I * s.nu * u[3]) < 1e-15);
}

TEST_CASE("rotation to (u, v) variables") {
    Cx nu{2.0, 0.0};
    auto r1 = rotate_variables(nu, nu, Cx{1.0, 0.0}, nu, {Cx{1, 0}, Cx{2, 0}, Cx{3, 0}});
    CHECK(std::abs(r1.u - Cx{1.0, 0.0}) < 1e-15);
    CHECK(std::abs(r1.v) < 1e-15);
    CHECK(std::abs(r1.xyt[0] - Cx{3.0, 0.0}) < 1e-15);  // sigma X + Y
    CHECK(std::abs(r1.xyt[1] - Cx{-1.0, 0.0}) < 1e-15);

    auto r2 = rotate_variables(Cx{1, 0}, Cx{-1, 0}, Cx{0.0, 1.0}, Cx{1, 0}, {});
    CHECK(std::abs(r2.u) < 1e-15);
    CHECK(std::abs(r2.v - I) < 1e-15);

    CHECK_THROWS_AS(rotate_variables(Cx{1, 0}, Cx{1, 0}, Cx{1.1, 0}, Cx{1, 0}, {}), Error);

    // round trip (u, v) -> (phi, psi) -> (u, v)
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Cx u = rng.box(), v = rng.box(), nu2 = rng.box_away_from_zero(1.5, 0.3);
        auto [phi, psi] = rotate_fields_inverse(u, v, nu2);
        auto back = rotate_variables(phi, psi, Cx{1.0, 0.0}, nu2, {});
        CHECK(std::abs(back.u - u) < 1e-14);
        CHECK(std::abs(back.v - v) < 1e-14);
    }
}

TEST_CASE("indicial determinant") {
    CHECK(std::abs(indicial_det(Cx{}, Cx{1.0, 0.0})) == 0.0);
    // j = 3, nu = 1: det [[0, 12i], [6, 6i]] = -72 i
    CHECK(std::abs(indicial_det(Cx{3.0, 0.0}, Cx{1.0, 0.0}) - Cx{0.0, -72.0}) < 1e-12);
    // factorised form at random points
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        Cx j = rng.box(3.0), nu = rng.box_away_from_zero(2.0, 0.2);
        Cx fact = I * nu * j * j * (j - 1.0) * (j - 2.0) * (j + 1.0) * (j - 4.0);
        Cx det = indicial_det(j, nu);
        CHECK(std::abs(det - fact) < 1e-12 * std::max({std::abs(det), std::abs(fact), 1.0}));
    }
}

TEST_CASE("fuchs indices are nu independent") {
    Rng rng(9);
    const double expected[6] = {-1, 0, 0, 1, 2, 4};
    for (int trial = 0; trial < 20; ++trial) {
        Cx nu = rng.box_away_from_zero(2.5, 0.2);
        auto idx = fuchs_indices(nu);
        REQUIRE(idx.size() == 6);
        Cx sum{};
        for (std::size_t i = 0; i < 6; ++i) {
            CHECK(std::abs(idx[i] - Cx(expected[i], 0.0)) < 1e-9);
            sum += idx[i];
        }
        CHECK(std::abs(sum - Cx{6.0, 0.0}) < 1e-8);
    }
    CHECK_THROWS_AS(fuchs_indices(Cx{}), Error);
}

TEST_CASE("leading-order families") {
    Cx nu{1.7, 0.4};
    for (Cx a : {I, -I}) {
        auto r = verify_leading_order({a, Cx{1.0, 0.0}}, nu);
        CHECK(std::abs(r[0]) < 1e-13);
        CHECK(std::abs(r[1]) < 1e-13);
    }
    auto bad = verify_leading_order({Cx{1.0, 0.0}, Cx{1.0, 0.0}}, nu);
    CHECK(std::abs(bad[1]) > 1.0);
}
