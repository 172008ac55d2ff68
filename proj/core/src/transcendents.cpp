#include "sgred/transcendents.hpp"

#include <cmath>

namespace sgred {

const char* chazy_name(ChazyKind k) {
    switch (k) {
        case ChazyKind::CVI: return "CVI";
        case ChazyKind::CVa: return "CVa";
        case ChazyKind::CVb: return "CVb";
        case ChazyKind::CIII: return "CIII";
        case ChazyKind::CIV: return "CIV";
    }
    return "?";
}

const char* painleve_name(PainleveKind k) {
    switch (k) {
        case PainleveKind::PII: return "PII";
        case PainleveKind::PIII: return "PIII";
        case PainleveKind::PIV: return "PIV";
        case PainleveKind::PV: return "PV";
        case PainleveKind::PVI: return "PVI";
    }
    return "?";
}

Jet1 fvi(FviChoice choice, Cx x, int order) {
    Jet1 xj = Jet1::variable(x, order);
    if (choice == FviChoice::tan_sin) return tan(xj);
    require(std::abs(std::sinh(x)) > kEpsPole, errc::coefficient_pole, "f_VI pole at x");
    return I * coth(xj);
}

Jet1 gvi(FviChoice choice, Cx x, int order) {
    Jet1 xj = Jet1::variable(x, order);
    if (choice == FviChoice::tan_sin) return sin(xj);
    return cosh(xj);
}

Residual chazy_residual(const ChazyParams& p, const Jet1& u, Cx x) {
    require(u.order() >= 2, errc::out_of_range, "chazy residual needs order >= 2");
    Cx u0 = u.value(), u1 = u.derivative(1), u2 = u.derivative(2);
    Cx d1 = p.d1, d2 = p.d2, d3 = p.d3, d4 = p.d4;
    TermScale ts;
    Residual r;
    switch (p.kind) {
        case ChazyKind::CVI: {
            Cx f = fvi(p.fvi_choice, x, 0).value();
            Cx g = gvi(p.fvi_choice, x, 0).value();
            require(std::abs(g) > kEpsSing, errc::coefficient_pole, "g_VI vanishes at x");
            Cx A = u2 - 2.0 * u0 * u0 * u0 - d2 * u0 - d3;
            Cx B = 2.0 * f * (u0 - d1 / g);
            Cx C = u1 * u1 - u0 * u0 * u0 * u0 - d2 * u0 * u0 - 2.0 * d3 * u0 - d4;
            r.value = ts.sum({A * A, -B * B * C});
            break;
        }
        case ChazyKind::CVa: {
            require(std::abs(x) > kEpsSing, errc::coefficient_pole, "CVa coefficient pole x = 0");
            Cx A = u2 - 6.0 * u0 * u0 - d2 * u0 - d3;
            Cx B = (2.0 / x) * (u0 - x * x / 2.0);
            Cx C = u1 * u1 - 4.0 * u0 * u0 * u0 - d2 * u0 * u0 - 2.0 * d3 * u0 - d4;
            r.value = ts.sum({A * A, -B * B * C});
            break;
        }
        case ChazyKind::CVb: {
            Cx A = u2 - 2.0 * u0 * u0 * u0 - d2 * u0 - d3;
            Cx B = 2.0 * (u0 - std::exp(x));
            Cx C = u1 * u1 - u0 * u0 * u0 * u0 - d2 * u0 * u0 - 2.0 * d3 * u0 - d4;
            r.value = ts.sum({A * A, B * B * C});
            break;
        }
        case ChazyKind::CIII: {
            require(std::abs(x) > kEpsSing, errc::coefficient_pole, "CIII coefficient pole x = 0");
            Cx A = u2 - d2 * u0 - d3;
            Cx B = 2.0 * u0 / x;
            Cx C = u1 * u1 - d2 * u0 * u0 - 2.0 * d3 * u0 - d4;
            r.value = ts.sum({A * A, -B * B * C});
            break;
        }
        case ChazyKind::CIV: {
            Cx A = u2 - 6.0 * u0 * u0 - d3;
            Cx C = u1 * u1 - 4.0 * u0 * u0 * u0 - 2.0 * d3 * u0 - d4;
            r.value = ts.sum({A * A, -x * x * C});
            break;
        }
    }
    r.scale = ts.scale();
    return r;
}

Residual painleve_residual(const PainleveParams& p, const Jet1& u, Cx x) {
    require(u.order() >= 2, errc::out_of_range, "painleve residual needs order >= 2");
    Cx u0 = u.value(), u1 = u.derivative(1), u2 = u.derivative(2);
    Cx al = p.alpha, be = p.beta, ga = p.gamma, de = p.delta;
    TermScale ts;
    Residual r;
    switch (p.kind) {
        case PainleveKind::PII:
            r.value = ts.sum({u2, -2.0 * u0 * u0 * u0, -x * u0, -al});
            break;
        case PainleveKind::PIII: {
            require(std::abs(x) > kEpsSing, errc::coefficient_pole, "PIII pole x = 0");
            require(std::abs(u0) > kEpsSing, errc::singular_value, "PIII singular value u = 0");
            r.value = ts.sum({u2, -u1 * u1 / u0, u1 / x, -(al * u0 * u0 + be) / x,
                              -ga * u0 * u0 * u0, -de / u0});
            break;
        }
        case PainleveKind::PIV: {
            require(std::abs(u0) > kEpsSing, errc::singular_value, "PIV singular value u = 0");
            r.value = ts.sum({u2, -u1 * u1 / (2.0 * u0), -1.5 * u0 * u0 * u0, -4.0 * x * u0 * u0,
                              -2.0 * (x * x - al) * u0, -be / u0});
            break;
        }
        case PainleveKind::PV: {
            require(std::abs(x) > kEpsSing, errc::coefficient_pole, "PV pole x = 0");
            require(std::abs(u0) > kEpsSing && std::abs(u0 - 1.0) > kEpsSing,
                    errc::singular_value, "PV singular value u in {0, 1}");
            Cx um1 = u0 - 1.0;
            r.value = ts.sum({u2, -(1.0 / (2.0 * u0) + 1.0 / um1) * u1 * u1, u1 / x,
                              -um1 * um1 * (al * u0 + be / u0) / (x * x), -ga * u0 / x,
                              -de * u0 * (u0 + 1.0) / um1});
            break;
        }
        case PainleveKind::PVI: {
            require(std::abs(x) > kEpsSing && std::abs(x - 1.0) > kEpsSing,
                    errc::coefficient_pole, "PVI pole x in {0, 1}");
            require(std::abs(u0) > kEpsSing && std::abs(u0 - 1.0) > kEpsSing &&
                        std::abs(u0 - x) > kEpsSing,
                    errc::singular_value, "PVI singular value u in {0, 1, x}");
            Cx um1 = u0 - 1.0, umx = u0 - x, xm1 = x - 1.0;
            r.value = ts.sum(
                {u2, -0.5 * (1.0 / u0 + 1.0 / um1 + 1.0 / umx) * u1 * u1,
                 (1.0 / x + 1.0 / xm1 + 1.0 / umx) * u1,
                 -(u0 * um1 * umx / (x * x * xm1 * xm1)) *
                     (al + be * x / (u0 * u0) + ga * xm1 / (um1 * um1) +
                      de * x * xm1 / (umx * umx))});
            break;
        }
    }
    r.scale = ts.scale();
    return r;
}

std::array<Cx, 3> fvi_gvi_residuals(const Jet1& f, const Jet1& g) {
    require(f.order() >= 1 && g.order() >= 1, errc::out_of_range, "need order >= 1 jets");
    Cx f0 = f.value(), f1 = f.derivative(1);
    Cx g0 = g.value(), g1 = g.derivative(1);
    Cx fp = f0 * f0 + 1.0;
    Cx r1 = f1 * f1 - fp * fp;
    Cx r2 = g1 * g1 - (1.0 - g0 * g0);
    Cx r3 = fp * (g0 * g0 - 1.0) + 1.0;
    return {r1, r2, r3};
}

namespace {

Cx principal_sqrt(Cx z) { return std::sqrt(z); }
Cx principal_cbrt(Cx z) { return std::pow(z, 1.0 / 3.0); }

void check(bool cond, const std::string& what) { require(cond, errc::guard_violation, what); }

bool nz(Cx z) { return std::abs(z) > 1e-12; }

}  // namespace

int which_case(ReducedCase cs, const ReducedConstants& c) {
    switch (cs) {
        case ReducedCase::tri: return 1;
        case ReducedCase::rat: return nz(c.K2) ? 2 : 3;
        case ReducedCase::exp_: return nz(c.K5) ? 4 : 5;
        case ReducedCase::zer:
            if (nz(c.K5)) return 6;
            return nz(c.K7) ? 7 : 8;
    }
    return 0;
}

MappedODE param_map(int case_id, const ReducedConstants& c, bool autonomous_flag) {
    require(std::abs(c.nu) > 0.0, errc::domain_error, "nu must be nonzero");
    MappedODE m;
    m.case_id = case_id;
    m.constants = c;
    Cx k = c.k, K2 = c.K2, K4 = c.K4, K5 = c.K5, K6 = c.K6, K7 = c.K7;

    switch (case_id) {
        case 1: {
            check(nz(k), "case 1 needs k != 0");
            m.source_case = ReducedCase::tri;
            ChazyParams p;
            p.kind = ChazyKind::CVI;
            p.fvi_choice = FviChoice::icoth_cosh;
            p.d1 = K5 / k;
            Cx k4 = k * k * k * k;
            Cx s = K2 / k4;  // = d2/2 + 2 d1^2
            p.d2 = 2.0 * (s - 2.0 * p.d1 * p.d1);
            p.d3 = 2.0 * K6 / k4;
            p.d4 = K4 / (k4 * k * k) + s * s;
            m.target = p;
            break;
        }
        case 2: {
            check(nz(K2), "case 2 needs K2 != 0");
            m.source_case = ReducedCase::rat;
            m.r = principal_sqrt(-K2);
            m.branch_note = "r = principal sqrt(-K2)";
            // delta/2 = r^2 = -K2 (the sign the pullback fixes; see ledger).
            PainleveParams p;
            p.kind = PainleveKind::PV;
            p.delta = -2.0 * K2;
            p.gamma = 2.0 * p.delta * K5 / m.r;
            Cx apb = -K6 / m.r;
            Cx amb = (4.0 * K4 - p.gamma * p.gamma) / (8.0 * p.delta);
            p.alpha = 0.5 * (apb + amb);
            p.beta = 0.5 * (apb - amb);
            m.target = p;
            break;
        }
        case 3: {
            check(!nz(K2), "case 3 needs K2 = 0");
            m.source_case = ReducedCase::rat;
            // The change of variable is x = sqrt(xi), u = (xi nu U' + K5)/(lambda x);
            // lambda rescales u freely.
            m.lambda = Cx{1.0, 0.0};
            m.branch_note = "lambda = 1 (free scale of u); x = principal sqrt(xi)";
            PainleveParams p;
            p.kind = PainleveKind::PIII;
            p.gamma = -4.0 * m.lambda * m.lambda;
            p.alpha = 8.0 * K5 * m.lambda;
            p.beta = -8.0 * K6 / m.lambda;
            p.delta = -4.0 * K4 / (m.lambda * m.lambda);
            m.target = p;
            break;
        }
        case 4: {
            check(nz(K5), "case 4 needs K5 != 0");
            check(nz(k), "case 4 needs k != 0");
            m.source_case = ReducedCase::exp_;
            m.k0 = principal_sqrt(-I * k * K5);
            m.branch_note = "k0 = principal sqrt(-i k K5)";
            ChazyParams p;
            p.kind = ChazyKind::CVa;
            p.d2 = 4.0 * I * K7 / (k * K5);
            p.d3 = (-2.0 * K6 / K5 - 2.0 * K2) / (k * k) - 1.0;
            p.d4 = (I * K4 / (4.0 * k * K5) - K2 * p.d2) / (k * k);
            m.target = p;
            break;
        }
        case 5: {
            check(!nz(K5), "case 5 needs K5 = 0");
            check(nz(k), "case 5 needs k != 0");
            m.source_case = ReducedCase::exp_;
            m.k0 = Cx{1.0, 0.0};
            m.branch_note = "k0 = 1 (free scale of x)";
            ChazyParams p;
            p.kind = ChazyKind::CIII;
            Cx k02 = m.k0 * m.k0;
            p.d2 = 4.0 * K7 / k02;
            p.d3 = 2.0 * K6 / (I * k * k02);
            p.d4 = (-K4 / (4.0 * k02) - K2 * p.d2) / (k * k);
            m.target = p;
            break;
        }
        case 6: {
            check(nz(K5), "case 6 needs K5 != 0");
            m.source_case = ReducedCase::zer;
            m.mu = principal_sqrt(-4.0 * I * K5);
            m.branch_note = "mu = principal sqrt(-4 i K5); PIV variable is u - x + 4 K7/mu^3";
            PainleveParams p;
            p.kind = PainleveKind::PIV;
            Cx K52 = K5 * K5, K53 = K52 * K5;
            p.alpha = I * (K2 * K52 + K7 * K7) / (8.0 * K53);
            Cx K54 = K52 * K52, K56 = K53 * K53;
            // The K7^2 K5^2 term carries a factor K2 (elimination; see ledger).
            p.beta = ((K2 * K2 - K4) * K54 + 16.0 * K6 * K7 * K53 + 2.0 * K2 * K52 * K7 * K7 +
                      K7 * K7 * K7 * K7) /
                         (32.0 * K56) -
                     0.5;
            m.target = p;
            break;
        }
        case 7: {
            check(!nz(K5), "case 7 needs K5 = 0");
            check(nz(K7), "case 7 needs K7 != 0");
            m.source_case = ReducedCase::zer;
            m.mu = principal_cbrt(-16.0 * K7);
            // The zer system is nu-free in nu U', so lambda = i mu (no 1/nu).
            m.lambda = I * m.mu;
            m.branch_note = "mu = principal cbrt(-16 K7); u = nu U' / (i mu)";
            PainleveParams p;
            p.kind = PainleveKind::PII;
            p.alpha = I * K6 / (2.0 * K7);
            m.target = p;
            break;
        }
        case 8: {
            check(!nz(K5) && !nz(K7), "case 8 needs K5 = K7 = 0");
            m.source_case = ReducedCase::zer;
            EllipticQuartic q;
            Cx nu2 = c.nu * c.nu;
            q.qd = nu2;
            q.q4 = nu2 * nu2;
            q.q2 = 2.0 * nu2 * K2;
            q.q1 = -16.0 * c.nu * K6;
            q.q0 = K2 * K2 - K4;  // corrected closure (K2^2, not K2)
            m.target = q;
            break;
        }
        case 9: {
            require(autonomous_flag, errc::guard_violation,
                    "case 9 is reached only via the explicit autonomy flag");
            check(!nz(K5) && !nz(K7), "autonomous route needs K5 = K7 = 0");
            m = param_map(8, c);
            m.case_id = 9;
            break;
        }
        default:
            fail(errc::guard_violation, "case_id must be in 1..9");
    }
    return m;
}

Jet1 MappedODE::x_jet(Cx xi, int order) const {
    Jet1 xj = Jet1::variable(xi, order);
    const ReducedConstants& c = constants;
    switch (case_id) {
        case 1: {
            // dx/dxi = k / sinh(k xi)  =>  x = log tanh(k xi / 2).
            Jet1 half = 0.5 * c.k * xj;
            return log(tanh(half));
        }
        case 2: return xj;
        case 3: return sqrt(xj);
        case 4:
        case 5: return (-2.0 * k0 / c.k) * exp(-c.k * xj);
        case 6: return mu * (xj - c.K7 / (4.0 * c.K5 * c.K5));
        case 7: return mu * (xj + c.K2 / (8.0 * c.K7));
        default: fail(errc::out_of_range, "no x map for this case");
    }
}

Cx MappedODE::x_of_xi(Cx xi) const { return x_jet(xi, 0).value(); }

Jet1 MappedODE::pullback_u(const ReducedState& s, Cx uppp) const {
    const ReducedConstants& c = constants;
    Jet1 nuUp(2);
    nuUp[0] = c.nu * s.up;
    nuUp[1] = c.nu * s.upp;
    nuUp[2] = c.nu * uppp / 2.0;
    Jet1 xij = Jet1::variable(s.xi, 2);

    Jet1 u_of_xi(2);
    Jet1 xjet = x_jet(s.xi, 2);
    switch (case_id) {
        case 1: u_of_xi = nuUp / c.k + c.K5 * coth(c.k * xij); break;
        case 2: {
            Jet1 q = nuUp + c.K5 * recip(xij);
            u_of_xi = (q - r) / (q + r);
            break;
        }
        case 3: u_of_xi = (xij * nuUp + c.K5) / (lambda * xjet); break;
        case 4: {
            Jet1 e2 = exp(-2.0 * c.k * xij);
            u_of_xi = -(c.K5 / (2.0 * k0 * k0)) * (nuUp + 2.0 * c.K5 * e2);
            break;
        }
        case 5: u_of_xi = nuUp / (I * c.k); break;
        case 6:
            // The affine transform onto PIV shifts by the independent variable.
            u_of_xi = (nuUp + c.K7 / c.K5) / (I * mu) - xjet +
                      Cx(4.0 * c.K7 / (mu * mu * mu));
            break;
        case 7: u_of_xi = nuUp / lambda; break;
        default: fail(errc::out_of_range, "no pullback for this case");
    }
    return recompose(u_of_xi, xjet);
}

Residual MappedODE::target_residual(const ReducedState& s, Cx uppp) const {
    if (case_id == 8 || case_id == 9)
        return elliptic_relation(constants, s, EllipticVariant::corrected);
    Jet1 u = pullback_u(s, uppp);
    Cx x = x_of_xi(s.xi);
    if (std::holds_alternative<ChazyParams>(target))
        return chazy_residual(std::get<ChazyParams>(target), u, x);
    return painleve_residual(std::get<PainleveParams>(target), u, x);
}

Jet1 recompose(const Jet1& u_of_xi, const Jet1& x_of_xi, double eps_sing) {
    require(u_of_xi.order() >= 2 && x_of_xi.order() >= 2, errc::out_of_range,
            "recompose needs order >= 2 jets");
    Cx u1 = u_of_xi[1], u2 = u_of_xi[2];
    Cx x1 = x_of_xi[1], x2 = x_of_xi[2];
    require(std::abs(x1) >= eps_sing, errc::chain_rule_singularity, "dx/dxi below eps_sing");
    Jet1 out(2);
    out[0] = u_of_xi[0];
    out[1] = u1 / x1;
    out[2] = u2 / (x1 * x1) - u1 * x2 / (x1 * x1 * x1);
    return out;
}

std::vector<double> pullback_check(const MappedODE& map, const std::vector<PullbackSample>& tr) {
    require(!tr.empty(), errc::domain_error, "empty trajectory");
    // Consistency precondition: printed integrals of the first sample.
    {
        auto [r2, r4] = first_integrals_scaled(map.source_case, map.constants, tr.front().state);
        double s2 = std::max({std::abs(map.constants.K2), r2.scale, 1.0});
        double s4 = std::max({std::abs(map.constants.K4), r4.scale, 1.0});
        require(std::abs(r2.value - map.constants.K2) <= 1e-8 * s2, errc::guard_violation,
                "trajectory K2 inconsistent with constants");
        require(std::abs(r4.value - map.constants.K4) <= 1e-8 * s4, errc::guard_violation,
                "trajectory K4 inconsistent with constants");
    }
    std::vector<double> out;
    out.reserve(tr.size());
    for (const auto& smp : tr) out.push_back(map.target_residual(smp.state, smp.uppp).rel());
    return out;
}

}  // namespace sgred
