#include "sgred/jet2.hpp"

#include <cmath>

#include "series.hpp"

namespace sgred {

Jet2 Jet2::constant(Cx value, int order_p, int order_t) {
    Jet2 j(order_p, order_t);
    j.at(0, 0) = value;
    return j;
}

Jet2 Jet2::var_p(Cx p0, int order_p, int order_t) {
    Jet2 j = constant(p0, order_p, order_t);
    if (order_p >= 1) j.at(1, 0) = 1.0;
    return j;
}

Jet2 Jet2::var_t(Cx t0, int order_p, int order_t) {
    Jet2 j = constant(t0, order_p, order_t);
    if (order_t >= 1) j.at(0, 1) = 1.0;
    return j;
}

Cx Jet2::d(int i, int j) const {
    require(i >= 0 && i <= np_ && j >= 0 && j <= nt_, errc::out_of_range,
            "partial beyond jet orders");
    double fact = 1.0;
    for (int k = 2; k <= i; ++k) fact *= k;
    for (int k = 2; k <= j; ++k) fact *= k;
    return c_[idx(i, j)] * fact;
}

static void check_same_shape(const Jet2& a, const Jet2& b) {
    require(a.order_p() == b.order_p() && a.order_t() == b.order_t(), errc::domain_error,
            "jet shape mismatch");
}

Jet2& Jet2::operator+=(const Jet2& o) {
    check_same_shape(*this, o);
    for (std::size_t m = 0; m < c_.size(); ++m) c_[m] += o.c_[m];
    return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
    check_same_shape(*this, o);
    for (std::size_t m = 0; m < c_.size(); ++m) c_[m] -= o.c_[m];
    return *this;
}

Jet2& Jet2::operator+=(Cx s) {
    c_[0] += s;
    return *this;
}

Jet2& Jet2::operator-=(Cx s) {
    c_[0] -= s;
    return *this;
}

Jet2& Jet2::operator*=(Cx s) {
    for (auto& c : c_) c *= s;
    return *this;
}

Jet2 operator-(Jet2 a) {
    for (auto& c : a.c_) c = -c;
    return a;
}

Jet2 operator-(Cx s, const Jet2& a) {
    Jet2 r = -a;
    r += s;
    return r;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
    check_same_shape(a, b);
    Jet2 r(a.np_, a.nt_);
    for (int i = 0; i <= a.np_; ++i)
        for (int j = 0; j <= a.nt_; ++j) {
            Cx av = a.at(i, j);
            if (av == Cx{}) continue;
            for (int k = 0; i + k <= a.np_; ++k)
                for (int l = 0; j + l <= a.nt_; ++l) r.at(i + k, j + l) += av * b.at(k, l);
        }
    return r;
}

namespace {

Jet2 compose_table(const std::vector<Cx>& table, const Jet2& a) {
    int n = a.order_p() + a.order_t();
    Jet2 nil = a;
    nil -= a.value();
    Jet2 r = Jet2::constant(table[static_cast<std::size_t>(n)], a.order_p(), a.order_t());
    for (int k = n - 1; k >= 0; --k) {
        r = r * nil;
        r += table[static_cast<std::size_t>(k)];
    }
    return r;
}

Jet2 elementary(detail::Elem f, const Jet2& a) {
    return compose_table(detail::taylor_table(f, a.value(), a.order_p() + a.order_t()), a);
}

}  // namespace

Jet2 operator/(const Jet2& a, const Jet2& b) { return a * recip(b); }
Jet2 operator/(Cx s, const Jet2& b) { return s * recip(b); }

Jet2 recip(const Jet2& a, double eps_sing) {
    require(std::abs(a.value()) >= eps_sing, errc::division_by_singular_jet,
            "divisor constant term below eps_sing");
    return elementary(detail::Elem::recip, a);
}

Jet2 exp(const Jet2& a) { return elementary(detail::Elem::exp, a); }
Jet2 log(const Jet2& a) { return elementary(detail::Elem::log, a); }
Jet2 sqrt(const Jet2& a) { return elementary(detail::Elem::sqrt, a); }
Jet2 sin(const Jet2& a) { return elementary(detail::Elem::sin, a); }
Jet2 cos(const Jet2& a) { return elementary(detail::Elem::cos, a); }
Jet2 sinh(const Jet2& a) { return elementary(detail::Elem::sinh, a); }
Jet2 cosh(const Jet2& a) { return elementary(detail::Elem::cosh, a); }
Jet2 tan(const Jet2& a) { return sin(a) / cos(a); }
Jet2 tanh(const Jet2& a) { return sinh(a) / cosh(a); }

Jet2 coth(const Jet2& a) {
    Jet2 s = sinh(a);
    require(std::abs(s.value()) >= kEpsSing, errc::domain_error, "coth at a pole of coth");
    return cosh(a) / s;
}

Jet2 pow_n(const Jet2& a, int n) {
    if (n < 0) return recip(pow_n(a, -n));
    Jet2 r = Jet2::constant(1.0, a.order_p(), a.order_t());
    Jet2 base = a;
    int e = n;
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

}  // namespace sgred
