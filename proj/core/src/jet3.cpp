#include "sgred/jet3.hpp"

#include <cmath>

#include "series.hpp"

namespace sgred {

Jet3 Jet3::constant(Cx value, std::array<Cx, 3> base) {
    Jet3 j;
    j.c_[0] = value;
    j.base_ = base;
    return j;
}

Jet3 Jet3::var_x(Cx x0, Cx y0, Cx t0) {
    Jet3 j = constant(x0, {x0, y0, t0});
    j.c_[X] = 1.0;
    return j;
}

Jet3 Jet3::var_y(Cx x0, Cx y0, Cx t0) {
    Jet3 j = constant(y0, {x0, y0, t0});
    j.c_[Y] = 1.0;
    return j;
}

Jet3 Jet3::var_t(Cx x0, Cx y0, Cx t0) {
    Jet3 j = constant(t0, {x0, y0, t0});
    j.c_[T] = 1.0;
    return j;
}

Jet3& Jet3::operator+=(const Jet3& o) {
    for (int m = 0; m < 8; ++m) c_[static_cast<std::size_t>(m)] += o.c_[static_cast<std::size_t>(m)];
    return *this;
}

Jet3& Jet3::operator-=(const Jet3& o) {
    for (int m = 0; m < 8; ++m) c_[static_cast<std::size_t>(m)] -= o.c_[static_cast<std::size_t>(m)];
    return *this;
}

Jet3& Jet3::operator+=(Cx s) {
    c_[0] += s;
    return *this;
}

Jet3& Jet3::operator-=(Cx s) {
    c_[0] -= s;
    return *this;
}

Jet3& Jet3::operator*=(Cx s) {
    for (auto& c : c_) c *= s;
    return *this;
}

Jet3 operator-(Jet3 a) {
    for (auto& c : a.c_) c = -c;
    return a;
}

Jet3 operator-(Cx s, const Jet3& a) {
    Jet3 r = -a;
    r += s;
    return r;
}

Jet3 operator*(const Jet3& a, const Jet3& b) {
    // A term a_I b_J survives exactly when the multi-indices are disjoint;
    // this is where the degree cap (and nilpotency) lives.
    Jet3 r;
    r = Jet3::constant(Cx{}, a.base());
    for (int i = 0; i < 8; ++i) {
        if (a[i] == Cx{}) continue;
        for (int j = 0; j < 8; ++j) {
            if ((i & j) == 0) r[i | j] += a[i] * b[j];
        }
    }
    return r;
}

namespace {

// f(a0 + N) = sum_{m<=3} f^(m)(a0) N^m / m!  (N nilpotent of degree 4).
Jet3 compose_table(const std::vector<Cx>& table, const Jet3& a) {
    Jet3 nil = a;
    nil -= a.value();
    Jet3 r = Jet3::constant(table[3], a.base());
    for (int k = 2; k >= 0; --k) {
        r = r * nil;
        r += table[static_cast<std::size_t>(k)];
    }
    return r;
}

Jet3 elementary(detail::Elem f, const Jet3& a) {
    return compose_table(detail::taylor_table(f, a.value(), 3), a);
}

}  // namespace

Jet3 operator/(const Jet3& a, const Jet3& b) { return a * recip(b); }
Jet3 operator/(Cx s, const Jet3& b) { return s * recip(b); }

Jet3 recip(const Jet3& a, double eps_sing) {
    require(std::abs(a.value()) >= eps_sing, errc::division_by_singular_jet,
            "divisor constant term below eps_sing");
    return elementary(detail::Elem::recip, a);
}

Jet3 exp(const Jet3& a) { return elementary(detail::Elem::exp, a); }
Jet3 log(const Jet3& a) { return elementary(detail::Elem::log, a); }
Jet3 sqrt(const Jet3& a) { return elementary(detail::Elem::sqrt, a); }
Jet3 sin(const Jet3& a) { return elementary(detail::Elem::sin, a); }
Jet3 cos(const Jet3& a) { return elementary(detail::Elem::cos, a); }
Jet3 sinh(const Jet3& a) { return elementary(detail::Elem::sinh, a); }
Jet3 cosh(const Jet3& a) { return elementary(detail::Elem::cosh, a); }
Jet3 tan(const Jet3& a) { return sin(a) / cos(a); }
Jet3 tanh(const Jet3& a) { return sinh(a) / cosh(a); }

Jet3 coth(const Jet3& a) {
    Jet3 s = sinh(a);
    require(std::abs(s.value()) >= kEpsSing, errc::domain_error, "coth at a pole of coth");
    return cosh(a) / s;
}

Jet3 pow_n(const Jet3& a, int n) {
    if (n < 0) return recip(pow_n(a, -n));
    Jet3 r = Jet3::constant(1.0, a.base());
    Jet3 base = a;
    int e = n;
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

}  // namespace sgred
