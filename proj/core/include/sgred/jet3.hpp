#ifndef SGRED_JET3_HPP
#define SGRED_JET3_HPP

#include <array>

#include "sgred/types.hpp"

namespace sgred {

// Trivariate truncated Taylor expansion of degree <= 1 per variable about a
// base point (x0, y0, t0): eight complex coefficients indexed by the bitmask
// (x = bit 0, y = bit 1, t = bit 2).  Since every exponent is 0 or 1 the
// stored coefficients are the mixed partials themselves, and any product of
// four first-order increments vanishes identically (nilpotency degree 4).
class Jet3 {
  public:
    static constexpr int X = 1, Y = 2, T = 4;

    Jet3() { c_.fill(Cx{}); }

    static Jet3 constant(Cx value, std::array<Cx, 3> base = {});
    // Seed jets of the three coordinates at a base point.
    static Jet3 var_x(Cx x0, Cx y0, Cx t0);
    static Jet3 var_y(Cx x0, Cx y0, Cx t0);
    static Jet3 var_t(Cx x0, Cx y0, Cx t0);

    const std::array<Cx, 3>& base() const { return base_; }

    Cx& operator[](int mask) { return c_[static_cast<std::size_t>(mask)]; }
    const Cx& operator[](int mask) const { return c_[static_cast<std::size_t>(mask)]; }

    Cx value() const { return c_[0]; }
    // Mixed partial d^(a+b+c) / dx^a dy^b dt^c with each of a,b,c in {0,1}.
    Cx d(int dx, int dy, int dt) const { return c_[static_cast<std::size_t>(dx * X + dy * Y + dt * T)]; }

    Jet3& operator+=(const Jet3& o);
    Jet3& operator-=(const Jet3& o);
    Jet3& operator+=(Cx s);
    Jet3& operator-=(Cx s);
    Jet3& operator*=(Cx s);

    friend Jet3 operator+(Jet3 a, const Jet3& b) { return a += b; }
    friend Jet3 operator-(Jet3 a, const Jet3& b) { return a -= b; }
    friend Jet3 operator+(Jet3 a, Cx s) { return a += s; }
    friend Jet3 operator+(Cx s, Jet3 a) { return a += s; }
    friend Jet3 operator-(Jet3 a, Cx s) { return a -= s; }
    friend Jet3 operator-(Cx s, const Jet3& a);
    friend Jet3 operator*(Jet3 a, Cx s) { return a *= s; }
    friend Jet3 operator*(Cx s, Jet3 a) { return a *= s; }
    friend Jet3 operator*(const Jet3& a, const Jet3& b);
    friend Jet3 operator/(const Jet3& a, const Jet3& b);
    friend Jet3 operator/(Cx s, const Jet3& b);
    friend Jet3 operator/(Jet3 a, Cx s) { return a *= (1.0 / s); }
    friend Jet3 operator-(Jet3 a);

  private:
    std::array<Cx, 8> c_{};
    std::array<Cx, 3> base_{};
};

Jet3 exp(const Jet3& a);
Jet3 log(const Jet3& a);
Jet3 sqrt(const Jet3& a);
Jet3 recip(const Jet3& a, double eps_sing = kEpsSing);
Jet3 pow_n(const Jet3& a, int n);
Jet3 sin(const Jet3& a);
Jet3 cos(const Jet3& a);
Jet3 tan(const Jet3& a);
Jet3 sinh(const Jet3& a);
Jet3 cosh(const Jet3& a);
Jet3 tanh(const Jet3& a);
Jet3 coth(const Jet3& a);

}  // namespace sgred

#endif
