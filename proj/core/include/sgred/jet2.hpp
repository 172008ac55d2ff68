#ifndef SGRED_JET2_HPP
#define SGRED_JET2_HPP

#include <vector>

#include "sgred/types.hpp"

namespace sgred {

// Bivariate truncated Taylor expansion with independent order caps per
// variable, used where one direction needs more than first-order data (the
// F(p,t)/G(p,t) systems, schwarzians of two-variable fields).  Coefficients
// are Taylor coefficients c_{ij}, value = sum c_{ij} ep^i et^j.
class Jet2 {
  public:
    Jet2() = default;
    Jet2(int order_p, int order_t)
        : np_(order_p), nt_(order_t),
          c_(static_cast<std::size_t>((order_p + 1) * (order_t + 1)), Cx{}) {}

    static Jet2 constant(Cx value, int order_p, int order_t);
    static Jet2 var_p(Cx p0, int order_p, int order_t);
    static Jet2 var_t(Cx t0, int order_p, int order_t);

    int order_p() const { return np_; }
    int order_t() const { return nt_; }

    Cx& at(int i, int j) { return c_[idx(i, j)]; }
    const Cx& at(int i, int j) const { return c_[idx(i, j)]; }

    Cx value() const { return c_[0]; }
    // Mixed partial d^(i+j) / dp^i dt^j (Taylor coefficient times i! j!).
    Cx d(int i, int j) const;

    Jet2& operator+=(const Jet2& o);
    Jet2& operator-=(const Jet2& o);
    Jet2& operator+=(Cx s);
    Jet2& operator-=(Cx s);
    Jet2& operator*=(Cx s);

    friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
    friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
    friend Jet2 operator+(Jet2 a, Cx s) { return a += s; }
    friend Jet2 operator+(Cx s, Jet2 a) { return a += s; }
    friend Jet2 operator-(Jet2 a, Cx s) { return a -= s; }
    friend Jet2 operator-(Cx s, const Jet2& a);
    friend Jet2 operator*(Jet2 a, Cx s) { return a *= s; }
    friend Jet2 operator*(Cx s, Jet2 a) { return a *= s; }
    friend Jet2 operator*(const Jet2& a, const Jet2& b);
    friend Jet2 operator/(const Jet2& a, const Jet2& b);
    friend Jet2 operator/(Cx s, const Jet2& b);
    friend Jet2 operator/(Jet2 a, Cx s) { return a *= (1.0 / s); }
    friend Jet2 operator-(Jet2 a);

  private:
    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(i * (nt_ + 1) + j);
    }

    int np_ = 0, nt_ = 0;
    std::vector<Cx> c_{Cx{}};
};

Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sqrt(const Jet2& a);
Jet2 recip(const Jet2& a, double eps_sing = kEpsSing);
Jet2 pow_n(const Jet2& a, int n);
Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 tan(const Jet2& a);
Jet2 sinh(const Jet2& a);
Jet2 cosh(const Jet2& a);
Jet2 tanh(const Jet2& a);
Jet2 coth(const Jet2& a);

}  // namespace sgred

#endif
