#ifndef SGRED_JET1_HPP
#define SGRED_JET1_HPP

#include <vector>

#include "sgred/types.hpp"

namespace sgred {

// Univariate truncated Taylor expansion about an expansion point: the stored
// coefficients c_m are Taylor coefficients, value = sum c_m eps^m, closed at a
// fixed order.  All arithmetic and elementary functions propagate derivatives
// exactly (no truncation error below the stored order).
class Jet1 {
  public:
    Jet1() = default;
    explicit Jet1(int order) : c_(static_cast<std::size_t>(order) + 1, Cx{}) {}

    static Jet1 constant(Cx value, int order);
    // value + eps: the jet of the independent variable itself.
    static Jet1 variable(Cx value, int order);

    int order() const { return static_cast<int>(c_.size()) - 1; }

    Cx& operator[](int m) { return c_[static_cast<std::size_t>(m)]; }
    const Cx& operator[](int m) const { return c_[static_cast<std::size_t>(m)]; }

    Cx value() const { return c_[0]; }
    // m-th derivative (Taylor coefficient times m!).
    Cx derivative(int m) const;

    // d/deps, one order lower.
    Jet1 differentiated() const;
    // Antiderivative with constant term c0, one order higher.
    Jet1 integrated(Cx c0) const;
    // Same coefficients truncated/extended (extension pads zeros).
    Jet1 truncated(int order) const;

    Jet1& operator+=(const Jet1& o);
    Jet1& operator-=(const Jet1& o);
    Jet1& operator+=(Cx s);
    Jet1& operator-=(Cx s);
    Jet1& operator*=(Cx s);

    friend Jet1 operator+(Jet1 a, const Jet1& b) { return a += b; }
    friend Jet1 operator-(Jet1 a, const Jet1& b) { return a -= b; }
    friend Jet1 operator+(Jet1 a, Cx s) { return a += s; }
    friend Jet1 operator+(Cx s, Jet1 a) { return a += s; }
    friend Jet1 operator-(Jet1 a, Cx s) { return a -= s; }
    friend Jet1 operator-(Cx s, const Jet1& a);
    friend Jet1 operator*(Jet1 a, Cx s) { return a *= s; }
    friend Jet1 operator*(Cx s, Jet1 a) { return a *= s; }
    friend Jet1 operator*(const Jet1& a, const Jet1& b);
    friend Jet1 operator/(const Jet1& a, const Jet1& b);
    friend Jet1 operator/(Cx s, const Jet1& b);
    friend Jet1 operator/(Jet1 a, Cx s) { return a *= (1.0 / s); }
    friend Jet1 operator-(Jet1 a);

  private:
    std::vector<Cx> c_;
};

// Elementary functions.  The constant term must lie in the domain of f
// (DomainError otherwise); log and sqrt take the principal branch and bump the
// thread-local branch-warning counter near the cut.
Jet1 exp(const Jet1& a);
Jet1 log(const Jet1& a);
Jet1 sqrt(const Jet1& a);
Jet1 recip(const Jet1& a, double eps_sing = kEpsSing);
Jet1 pow_n(const Jet1& a, int n);
Jet1 sin(const Jet1& a);
Jet1 cos(const Jet1& a);
Jet1 tan(const Jet1& a);
Jet1 sinh(const Jet1& a);
Jet1 cosh(const Jet1& a);
Jet1 tanh(const Jet1& a);
Jet1 coth(const Jet1& a);

// f'''/f' - (3/2) (f''/f')^2 read off a jet of order >= 3.
Cx schwarzian(const Jet1& a, double eps_sing = kEpsSing);

// Branch-warning bookkeeping (thread local, reported and never fatal).
long branch_warning_count();
void reset_branch_warnings();

}  // namespace sgred

#endif
