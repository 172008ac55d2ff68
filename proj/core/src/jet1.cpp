#include "sgred/jet1.hpp"

#include <cmath>

#include "series.hpp"

namespace sgred {

long branch_warning_count() { return detail::branch_warning_counter(); }
void reset_branch_warnings() { detail::branch_warning_counter() = 0; }

Jet1 Jet1::constant(Cx value, int order) {
    Jet1 j(order);
    j.c_[0] = value;
    return j;
}

Jet1 Jet1::variable(Cx value, int order) {
    Jet1 j(order);
    j.c_[0] = value;
    if (order >= 1) j.c_[1] = 1.0;
    return j;
}

Cx Jet1::derivative(int m) const {
    require(m >= 0 && m <= order(), errc::out_of_range, "derivative order beyond jet order");
    double fact = 1.0;
    for (int k = 2; k <= m; ++k) fact *= k;
    return c_[static_cast<std::size_t>(m)] * fact;
}

Jet1 Jet1::differentiated() const {
    require(order() >= 1, errc::out_of_range, "cannot differentiate an order-0 jet");
    Jet1 r(order() - 1);
    for (int m = 1; m <= order(); ++m)
        r.c_[static_cast<std::size_t>(m - 1)] = c_[static_cast<std::size_t>(m)] * static_cast<double>(m);
    return r;
}

Jet1 Jet1::integrated(Cx c0) const {
    Jet1 r(order() + 1);
    r.c_[0] = c0;
    for (int m = 0; m <= order(); ++m)
        r.c_[static_cast<std::size_t>(m + 1)] = c_[static_cast<std::size_t>(m)] / static_cast<double>(m + 1);
    return r;
}

Jet1 Jet1::truncated(int order) const {
    Jet1 r(order);
    int n = std::min(order, this->order());
    for (int m = 0; m <= n; ++m) r.c_[static_cast<std::size_t>(m)] = c_[static_cast<std::size_t>(m)];
    return r;
}

static void check_same_order(const Jet1& a, const Jet1& b) {
    require(a.order() == b.order(), errc::domain_error, "jet order mismatch");
}

Jet1& Jet1::operator+=(const Jet1& o) {
    check_same_order(*this, o);
    for (std::size_t m = 0; m < c_.size(); ++m) c_[m] += o.c_[m];
    return *this;
}

Jet1& Jet1::operator-=(const Jet1& o) {
    check_same_order(*this, o);
    for (std::size_t m = 0; m < c_.size(); ++m) c_[m] -= o.c_[m];
    return *this;
}

Jet1& Jet1::operator+=(Cx s) {
    c_[0] += s;
    return *this;
}

Jet1& Jet1::operator-=(Cx s) {
    c_[0] -= s;
    return *this;
}

Jet1& Jet1::operator*=(Cx s) {
    for (auto& c : c_) c *= s;
    return *this;
}

Jet1 operator-(Jet1 a) {
    for (auto& c : a.c_) c = -c;
    return a;
}

Jet1 operator-(Cx s, const Jet1& a) {
    Jet1 r = -a;
    r += s;
    return r;
}

Jet1 operator*(const Jet1& a, const Jet1& b) {
    check_same_order(a, b);
    Jet1 r(a.order());
    for (int i = 0; i <= a.order(); ++i) {
        if (a.c_[static_cast<std::size_t>(i)] == Cx{}) continue;
        for (int j = 0; i + j <= a.order(); ++j)
            r.c_[static_cast<std::size_t>(i + j)] +=
                a.c_[static_cast<std::size_t>(i)] * b.c_[static_cast<std::size_t>(j)];
    }
    return r;
}

namespace {

// Horner evaluation of sum_k table[k] * N^k where N = a - a0 has no constant
// term, truncated at the jet order.
Jet1 compose_table(const std::vector<Cx>& table, const Jet1& a) {
    int n = a.order();
    Jet1 nil = a;
    nil -= a.value();
    Jet1 r = Jet1::constant(table[static_cast<std::size_t>(n)], n);
    for (int k = n - 1; k >= 0; --k) {
        r = r * nil;
        r += table[static_cast<std::size_t>(k)];
    }
    return r;
}

Jet1 elementary(detail::Elem f, const Jet1& a) {
    return compose_table(detail::taylor_table(f, a.value(), a.order()), a);
}

}  // namespace

Jet1 operator/(const Jet1& a, const Jet1& b) { return a * recip(b); }

Jet1 operator/(Cx s, const Jet1& b) { return s * recip(b); }

Jet1 recip(const Jet1& a, double eps_sing) {
    require(std::abs(a.value()) >= eps_sing, errc::division_by_singular_jet,
            "divisor constant term below eps_sing");
    return elementary(detail::Elem::recip, a);
}

Jet1 exp(const Jet1& a) { return elementary(detail::Elem::exp, a); }
Jet1 log(const Jet1& a) { return elementary(detail::Elem::log, a); }
Jet1 sqrt(const Jet1& a) { return elementary(detail::Elem::sqrt, a); }
Jet1 sin(const Jet1& a) { return elementary(detail::Elem::sin, a); }
Jet1 cos(const Jet1& a) { return elementary(detail::Elem::cos, a); }
Jet1 sinh(const Jet1& a) { return elementary(detail::Elem::sinh, a); }
Jet1 cosh(const Jet1& a) { return elementary(detail::Elem::cosh, a); }

Jet1 tan(const Jet1& a) { return sin(a) / cos(a); }
Jet1 tanh(const Jet1& a) { return sinh(a) / cosh(a); }

Jet1 coth(const Jet1& a) {
    Jet1 s = sinh(a);
    require(std::abs(s.value()) >= kEpsSing, errc::domain_error, "coth at a pole of coth");
    return cosh(a) / s;
}

Jet1 pow_n(const Jet1& a, int n) {
    if (n < 0) return recip(pow_n(a, -n));
    Jet1 r = Jet1::constant(1.0, a.order());
    Jet1 base = a;
    int e = n;
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

Cx schwarzian(const Jet1& a, double eps_sing) {
    require(a.order() >= 3, errc::out_of_range, "schwarzian needs a jet of order >= 3");
    Cx f1 = a.derivative(1);
    require(std::abs(f1) >= eps_sing, errc::degenerate_jet, "schwarzian of a critical jet");
    Cx f2 = a.derivative(2);
    Cx f3 = a.derivative(3);
    Cx q = f2 / f1;
    return f3 / f1 - 1.5 * q * q;
}

}  // namespace sgred
