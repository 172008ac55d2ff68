#include "sgred/reduced_systems.hpp"

#include <cmath>

namespace sgred {

namespace {
inline Cx coth(Cx z) { return std::cosh(z) / std::sinh(z); }
}  // namespace

const char* case_name(ReducedCase c) {
    switch (c) {
        case ReducedCase::tri: return "tri";
        case ReducedCase::rat: return "rat";
        case ReducedCase::exp_: return "exp";
        case ReducedCase::zer: return "zer";
    }
    return "?";
}

ReducedCase case_from_name(const std::string& name) {
    if (name == "tri") return ReducedCase::tri;
    if (name == "rat") return ReducedCase::rat;
    if (name == "exp") return ReducedCase::exp_;
    if (name == "zer") return ReducedCase::zer;
    fail(errc::config_error, "unknown reduced case '" + name + "'");
}

static void check_constants(ReducedCase cs, const ReducedConstants& c) {
    require(std::abs(c.nu) > 0.0, errc::domain_error, "nu must be nonzero");
    if (cs == ReducedCase::tri || cs == ReducedCase::exp_)
        require(std::abs(c.k) > 0.0, errc::domain_error, "k must be nonzero for tri/exp");
}

CoefficientFamily::CoefficientFamily(ReducedCase cs, const ReducedConstants& c, bool keep_k7)
    : case_(cs), c_(c), keep_k7_(keep_k7) {
    check_constants(cs, c);
}

CoefficientFamily coefficient_family(ReducedCase cs, const ReducedConstants& c, bool keep_k7) {
    return CoefficientFamily(cs, c, keep_k7);
}

Cx CoefficientFamily::effective_k7() const {
    if (case_ == ReducedCase::tri || case_ == ReducedCase::rat) return keep_k7_ ? c_.K7 : Cx{};
    return c_.K7;
}

Jet1 CoefficientFamily::xi_jet(Cx xi, int order) const {
    switch (case_) {
        case ReducedCase::tri:
            require(std::abs(std::sinh(c_.k * xi)) > kEpsPole, errc::domain_error,
                    "tri family pole: sinh(k xi) = 0");
            break;
        case ReducedCase::rat:
            require(std::abs(xi) > kEpsPole, errc::domain_error, "rat family pole: xi = 0");
            break;
        default: break;
    }
    return Jet1::variable(xi, order);
}

Jet1 CoefficientFamily::f1(Cx xi, int order) const {
    Jet1 x = xi_jet(xi, order);
    switch (case_) {
        case ReducedCase::tri: return c_.k * coth(c_.k * x);
        case ReducedCase::rat: return recip(x);
        case ReducedCase::exp_: return Jet1::constant(c_.k, order);
        case ReducedCase::zer: return Jet1(order);
    }
    return Jet1(order);
}

Jet1 CoefficientFamily::g3(Cx xi, int order) const {
    Jet1 x = xi_jet(xi, order);
    switch (case_) {
        case ReducedCase::tri: {
            Jet1 co = coth(c_.k * x);
            return c_.k * c_.k * (Cx{1.0, 0.0} - co * co);
        }
        case ReducedCase::rat: return -recip(x * x);
        default: return Jet1(order);
    }
}

Jet1 CoefficientFamily::g5(Cx xi, int order) const {
    (void)xi_jet(xi, order);
    return Jet1(order);
}

Jet1 CoefficientFamily::f5(Cx xi, int order) const {
    Jet1 x = xi_jet(xi, order);
    switch (case_) {
        case ReducedCase::tri: return 2.0 * c_.K5 * g3(xi, order);
        case ReducedCase::rat: return -2.0 * c_.K5 * recip(x * x);
        case ReducedCase::exp_:
            return -8.0 * c_.K5 * c_.k * c_.k * exp(-2.0 * c_.k * x);
        case ReducedCase::zer: return Jet1::constant(-8.0 * c_.K5, order);
    }
    return Jet1(order);
}

Jet1 CoefficientFamily::f6(Cx xi, int order) const {
    Jet1 x = xi_jet(xi, order);
    switch (case_) {
        case ReducedCase::tri: {
            Jet1 co = coth(c_.k * x);
            return g3(xi, order) * (2.0 * c_.K6 - c_.K5 * c_.k * co);
        }
        case ReducedCase::rat:
            return -2.0 * c_.K6 * recip(x * x) + c_.K5 * recip(x * x * x);
        case ReducedCase::exp_:
            return -8.0 * c_.K6 * c_.k * c_.k * exp(-2.0 * c_.k * x);
        case ReducedCase::zer: return Jet1::constant(-8.0 * c_.K6, order);
    }
    return Jet1(order);
}

Jet1 CoefficientFamily::g6(Cx xi, int order) const {
    Jet1 x = xi_jet(xi, order);
    Cx K7 = effective_k7();
    switch (case_) {
        case ReducedCase::tri: {
            Jet1 co = coth(c_.k * x);
            return g3(xi, order) * (2.0 * K7 + 2.0 * c_.K5 * c_.K5 * c_.k * co);
        }
        case ReducedCase::rat:
            return -2.0 * K7 * recip(x * x) - 2.0 * c_.K5 * c_.K5 * recip(x * x * x);
        case ReducedCase::exp_: {
            Jet1 e2 = exp(-2.0 * c_.k * x);
            return -8.0 * K7 * c_.k * c_.k * e2 -
                   16.0 * c_.K5 * c_.K5 * c_.k * c_.k * c_.k * e2 * e2;
        }
        case ReducedCase::zer:
            return Jet1::constant(-8.0 * K7, order) + 32.0 * c_.K5 * c_.K5 * x;
    }
    return Jet1(order);
}

NologResiduals nolog_residuals(const CoefficientFamily& fam, Cx xi, int branch) {
    Cx sgn = branch >= 0 ? I : -I;
    Jet1 f1 = fam.f1(xi, 2);
    Jet1 f5 = fam.f5(xi, 1);
    Jet1 f6 = fam.f6(xi, 1);
    Jet1 g6 = fam.g6(xi, 1);
    Cx g3 = fam.g3(xi, 0).value();
    Cx g5 = fam.g5(xi, 0).value();

    Cx f1v = f1.value(), f1p = f1.derivative(1), f1pp = f1.derivative(2);
    Cx f5v = f5.value(), f5p = f5.derivative(1);
    Cx f6v = f6.value(), f6p = f6.derivative(1);
    Cx g6v = g6.value(), g6p = g6.derivative(1);

    NologResiduals r;
    {
        TermScale ts;
        r.Q2.value = ts.sum({g3, -f1p, sgn * g5});
        r.Q2.scale = ts.scale();
    }
    {
        TermScale ts;
        r.Q4a.value = ts.sum({f1pp, 2.0 * f1v * f1p, sgn * f5p, sgn * 2.0 * f1v * f5v});
        r.Q4a.scale = ts.scale();
    }
    {
        TermScale ts;
        r.Q4b.value = ts.sum({g6p, 2.0 * f1v * g6v, -0.5 * f5v * f5v, sgn * f6p,
                              sgn * 2.0 * f1v * f6v, sgn * 0.5 * f5v * f1p});
        r.Q4b.scale = ts.scale();
    }
    return r;
}

namespace {

// The printed reduced systems and first integrals, written once over a
// generic scalar so that the same text serves point evaluation and the Taylor
// recursion.  S is Cx or Jet1.
template <class S>
struct RhsTerms {
    S uppp, vppp;
};

Cx value_of(Cx z) { return z; }
Cx value_of(const Jet1& j) { return j.value(); }

template <class S>
void check_pole(ReducedCase cs, const ReducedConstants& c, const S& xi, double eps_pole) {
    Cx x0 = value_of(xi);
    if (cs == ReducedCase::tri)
        require(std::abs(std::sinh(c.k * x0)) > eps_pole, errc::singular_point,
                "within eps_pole of a tri coefficient pole");
    if (cs == ReducedCase::rat)
        require(std::abs(x0) > eps_pole, errc::singular_point,
                "within eps_pole of the rat coefficient pole xi = 0");
}

template <class S, class SS>
RhsTerms<S> rhs_t(ReducedCase cs, const ReducedConstants& c, const S& xi, const SS& up,
                  const SS& upp, const SS& vp, const SS& vpp, double eps_pole) {
    check_pole(cs, c, xi, eps_pole);
    Cx nu = c.nu, k = c.k, K5 = c.K5, K6 = c.K6, K7 = c.K7;
    Cx nu2 = nu * nu, inv_nu = 1.0 / nu;
    RhsTerms<S> r;
    switch (cs) {
        case ReducedCase::tri: {
            auto co = coth(k * xi);
            auto g3v = k * k * (1.0 - co * co);
            r.uppp = -(2.0 * (up * vpp) + k * (co * upp) +
                       inv_nu * (g3v * (2.0 * K5 * vp + 2.0 * K6 - K5 * k * co)));
            r.vppp = 2.0 * nu2 * (up * upp) - k * (co * vpp) -
                     g3v * (vp + 2.0 * K5 * K5 * k * co);
            break;
        }
        case ReducedCase::rat: {
            auto ix = 1.0 / xi;
            auto ix2 = ix * ix, ix3 = ix2 * ix;
            r.uppp = -(2.0 * (up * vpp)) - upp * ix +
                     2.0 * inv_nu * ((K5 * vp + K6) * ix2) - inv_nu * K5 * ix3;
            r.vppp = 2.0 * nu2 * (up * upp) - vpp * ix + vp * ix2 + 2.0 * K5 * K5 * ix3;
            break;
        }
        case ReducedCase::exp_: {
            auto e2 = exp(-2.0 * k * xi);
            r.uppp = -(2.0 * (up * vpp)) - k * upp + 8.0 * inv_nu * (e2 * (K5 * k * vp + K6));
            r.vppp = 2.0 * nu2 * (up * upp) - k * vpp + 16.0 * K5 * K5 * k * (e2 * e2) +
                     8.0 * K7 * k * e2;
            break;
        }
        case ReducedCase::zer: {
            r.uppp = -(2.0 * (up * vpp)) + 8.0 * inv_nu * (K5 * vp + K6);
            r.vppp = 2.0 * nu2 * (up * upp) - 32.0 * K5 * K5 * xi + 8.0 * K7;
            break;
        }
    }
    return r;
}

// Additive terms of K2 and K4 as printed, kept separate for residual scaling.
template <class S, class SS>
std::pair<std::vector<SS>, std::vector<SS>> integral_terms_t(ReducedCase cs,
                                                             const ReducedConstants& c,
                                                             const S& xi, const SS& up,
                                                             const SS& upp, const SS& vp,
                                                             const SS& vpp, double eps_pole) {
    check_pole(cs, c, xi, eps_pole);
    Cx nu = c.nu, k = c.k, K5 = c.K5, K6 = c.K6, K7 = c.K7;
    Cx nu2 = nu * nu;
    std::vector<SS> k2, k4;
    switch (cs) {
        case ReducedCase::tri: {
            auto co = coth(k * xi);
            auto sh = sinh(k * xi);
            k2 = {-nu2 * (up * up), vpp, k * (co * vp), K5 * K5 * k * k * (co * co)};
            auto a = nu * (sh * upp) / k - K5 * k / sh;
            auto b = (sh * vpp) / k;
            k4 = {a * a,
                  b * b,
                  -4.0 * K5 * nu * (up * vp),
                  -(vp * vp),
                  -4.0 * K6 * nu * up,
                  -4.0 * K5 * k * (co * (K5 * vp + K6))};
            break;
        }
        case ReducedCase::rat: {
            auto ix = 1.0 / xi;
            auto a = nu * (xi * upp) - K5 * ix;
            auto b = xi * vpp;
            k2 = {-nu2 * (up * up), vpp, vp * ix, K5 * K5 * (ix * ix)};
            k4 = {a * a,
                  b * b,
                  -4.0 * nu * K5 * (up * vp),
                  -(vp * vp),
                  -4.0 * nu * K6 * up,
                  -4.0 * K5 * ((K5 * vp + K6) * ix)};
            break;
        }
        case ReducedCase::exp_: {
            auto e2 = exp(-2.0 * k * xi);
            auto e2inv = exp(2.0 * k * xi);
            k2 = {-nu2 * (up * up), vpp, k * vp, 4.0 * K5 * K5 * (e2 * e2), 4.0 * K7 * e2};
            k4 = {e2inv * (nu2 * (upp * upp) + vpp * vpp),
                  -8.0 * nu * K5 * k * (upp + 2.0 * (up * vp)),
                  -8.0 * nu * (2.0 * K6 + K5 * k * k) * up,
                  -16.0 * K7 * k * vp,
                  -32.0 * K5 * ((K5 * k * vp + K6) * e2)};
            break;
        }
        case ReducedCase::zer: {
            k2 = {-nu2 * (up * up), vpp, 16.0 * K5 * K5 * (xi * xi), -8.0 * K7 * xi};
            k4 = {nu2 * (upp * upp),
                  vpp * vpp,
                  -8.0 * nu * K5 * (upp + 2.0 * (up * vp)),
                  -16.0 * nu * K6 * up,
                  (64.0 * K5 * K5 * xi - 16.0 * K7) * vp,
                  64.0 * K5 * K6 * xi};
            break;
        }
    }
    return {std::move(k2), std::move(k4)};
}

}  // namespace

std::pair<Cx, Cx> reduced_rhs(ReducedCase cs, const ReducedConstants& c, const ReducedState& s,
                              double eps_pole) {
    check_constants(cs, c);
    auto r = rhs_t<Cx, Cx>(cs, c, s.xi, s.up, s.upp, s.vp, s.vpp, eps_pole);
    return {r.uppp, r.vppp};
}

std::pair<Cx, Cx> family_rhs(const CoefficientFamily& fam, const ReducedState& s,
                             double eps_pole) {
    const ReducedConstants& c = fam.constants();
    Cx x0 = s.xi;
    if (fam.reduced_case() == ReducedCase::tri)
        require(std::abs(std::sinh(c.k * x0)) > eps_pole, errc::singular_point,
                "within eps_pole of a tri coefficient pole");
    if (fam.reduced_case() == ReducedCase::rat)
        require(std::abs(x0) > eps_pole, errc::singular_point,
                "within eps_pole of the rat coefficient pole xi = 0");

    Cx f1 = fam.f1(x0, 0).value();
    Cx g3 = fam.g3(x0, 0).value();
    Cx g5 = fam.g5(x0, 0).value();
    Cx f5 = fam.f5(x0, 0).value();
    Cx f6 = fam.f6(x0, 0).value();
    Cx g6 = fam.g6(x0, 0).value();
    Cx nu = c.nu;

    Cx uppp = -(2.0 * s.up * s.vpp + f1 * s.upp + (f5 * s.vp + f6) / nu);
    Cx vppp = 2.0 * nu * nu * s.up * s.upp - f1 * s.vpp - g3 * s.vp - g5 * s.up - g6;
    return {uppp, vppp};
}

std::pair<Cx, Cx> first_integrals(ReducedCase cs, const ReducedConstants& c,
                                  const ReducedState& s, double eps_pole) {
    auto [k2t, k4t] = integral_terms_t<Cx, Cx>(cs, c, s.xi, s.up, s.upp, s.vp, s.vpp, eps_pole);
    Cx k2{}, k4{};
    for (Cx t : k2t) k2 += t;
    for (Cx t : k4t) k4 += t;
    return {k2, k4};
}

std::pair<Residual, Residual> first_integrals_scaled(ReducedCase cs, const ReducedConstants& c,
                                                     const ReducedState& s, double eps_pole) {
    auto [k2t, k4t] = integral_terms_t<Cx, Cx>(cs, c, s.xi, s.up, s.upp, s.vp, s.vpp, eps_pole);
    Residual r2, r4;
    TermScale t2, t4;
    for (Cx t : k2t) {
        t2.add(t);
        r2.value += t;
    }
    for (Cx t : k4t) {
        t4.add(t);
        r4.value += t;
    }
    r2.scale = t2.scale();
    r4.scale = t4.scale();
    return {r2, r4};
}

ReducedConstants translate_constants_k7zero(ReducedCase cs, const ReducedConstants& c) {
    ReducedConstants out = c;
    if (cs == ReducedCase::tri || cs == ReducedCase::rat) {
        out.K6 = c.K6 - 2.0 * c.K5 * c.K7;
        out.K7 = Cx{};
    }
    return out;
}

ReducedState translate_state_k7zero(ReducedCase cs, const ReducedConstants& c,
                                    const ReducedState& s) {
    ReducedState out = s;
    if (cs == ReducedCase::tri || cs == ReducedCase::rat) out.vp = s.vp + 2.0 * c.K7;
    return out;
}

StateJets taylor_state(ReducedCase cs, const ReducedConstants& c, const ReducedState& s,
                       int order, bool keep_k7) {
    check_constants(cs, c);
    const int n = order;
    Jet1 up = Jet1::constant(s.up, n);
    Jet1 vp = Jet1::constant(s.vp, n);
    if (n >= 1) {
        up[1] = s.upp;
        vp[1] = s.vpp;
    }
    Jet1 xi = Jet1::variable(s.xi, n);
    CoefficientFamily fam = coefficient_family(cs, c, keep_k7);

    // Iterate the recursion the system imposes on the Taylor coefficients:
    // every pass fixes one more coefficient of (U', V').  Top coefficients of
    // the derived jets are not meaningful and never feed lower ones.
    for (int pass = 0; pass + 1 < n; ++pass) {
        Jet1 upp = up.differentiated().truncated(n);
        Jet1 vpp = vp.differentiated().truncated(n);
        Jet1 uppp, vppp;
        if (keep_k7 && (cs == ReducedCase::tri || cs == ReducedCase::rat)) {
            Jet1 f1 = fam.f1(s.xi, n), g3 = fam.g3(s.xi, n), g5 = fam.g5(s.xi, n);
            Jet1 f5 = fam.f5(s.xi, n), f6 = fam.f6(s.xi, n), g6 = fam.g6(s.xi, n);
            uppp = -(2.0 * up * vpp + f1 * upp + (f5 * vp + f6) / c.nu);
            vppp = 2.0 * c.nu * c.nu * up * upp - f1 * vpp - g3 * vp - g5 * up - g6;
        } else {
            auto r = rhs_t<Jet1, Jet1>(cs, c, xi, up, upp, vp, vpp, kEpsPole);
            uppp = r.uppp;
            vppp = r.vppp;
        }
        for (int m = 2; m <= n; ++m) {
            up[m] = uppp[m - 2] / static_cast<double>(m * (m - 1));
            vp[m] = vppp[m - 2] / static_cast<double>(m * (m - 1));
        }
    }

    StateJets out;
    out.up = up;
    out.vp = vp;
    if (n >= 1) {
        out.upp = up.differentiated();
        out.vpp = vp.differentiated();
    } else {
        out.upp = Jet1::constant(s.upp, 0);
        out.vpp = Jet1::constant(s.vpp, 0);
    }
    return out;
}

std::vector<IntegralMonomial> integral_monomials(int weight) {
    require(weight == 2 || weight == 4, errc::domain_error, "weight must be 2 or 4");
    std::vector<IntegralMonomial> out;
    for (int a = 0; 2 * a <= weight; ++a)
        for (int b = 0; 2 * a + 2 * b <= weight; ++b)
            for (int cc = 0; 2 * a + 2 * b + cc <= weight; ++cc) {
                int d = weight - 2 * a - 2 * b - cc;
                out.push_back({a, b, cc, d});
            }
    return out;
}

Residual elliptic_relation(const ReducedConstants& c, const ReducedState& s,
                           EllipticVariant variant) {
    require(std::abs(c.K5) < 1e-12 && std::abs(c.K7) < 1e-12, errc::guard_violation,
            "elliptic relation needs K5 = K7 = 0");
    Cx nu = c.nu, nu2 = nu * nu;
    Cx k2term = variant == EllipticVariant::corrected ? c.K2 * c.K2 : c.K2;
    TermScale ts;
    Residual r;
    r.value = ts.sum({nu2 * s.upp * s.upp, nu2 * nu2 * s.up * s.up * s.up * s.up,
                      2.0 * nu2 * c.K2 * s.up * s.up, -16.0 * nu * c.K6 * s.up, k2term, -c.K4});
    r.scale = ts.scale();
    return r;
}

}  // namespace sgred
