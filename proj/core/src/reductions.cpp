#include "sgred/reductions.hpp"

#include <cmath>

#include "sgred/integrator.hpp"

namespace sgred {

// ---------------------------------------------------------------------------
// Poly / TimeFunctions

Poly Poly::taylor_exp(int degree) {
    std::vector<Cx> c(static_cast<std::size_t>(degree) + 1);
    double fact = 1.0;
    for (int k = 0; k <= degree; ++k) {
        c[static_cast<std::size_t>(k)] = 1.0 / fact;
        fact *= static_cast<double>(k + 1);
    }
    return Poly(std::move(c));
}

bool Poly::is_zero() const {
    for (Cx c : c_)
        if (c != Cx{}) return false;
    return true;
}

Cx Poly::operator()(Cx t) const {
    Cx acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly{};
    std::vector<Cx> d(c_.size() - 1);
    for (std::size_t m = 1; m < c_.size(); ++m)
        d[m - 1] = c_[m] * static_cast<double>(m);
    return Poly(std::move(d));
}

Jet1 Poly::jet(Cx t, int order) const {
    Jet1 tj = Jet1::variable(t, order);
    Jet1 acc(order);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * tj + *it;
    return acc;
}

const Poly& TimeFunctions::get(const std::string& name) const {
    auto it = fn.find(name);
    require(it != fn.end(), errc::degenerate_time_functions,
            "missing time function '" + name + "'");
    return it->second;
}

const char* case_spec_name(ReductionCaseSpec s) {
    switch (s) {
        case ReductionCaseSpec::generic_full: return "generic_full";
        case ReductionCaseSpec::generic_example: return "generic_example";
        case ReductionCaseSpec::rational: return "rational";
        case ReductionCaseSpec::exp_k5: return "exp_k5";
        case ReductionCaseSpec::exp_k5zero: return "exp_k5zero";
        case ReductionCaseSpec::zer: return "zer";
        case ReductionCaseSpec::zer_k5zero: return "zer_k5zero";
    }
    return "?";
}

ReductionCaseSpec case_spec_from_name(const std::string& name) {
    for (ReductionCaseSpec s :
         {ReductionCaseSpec::generic_full, ReductionCaseSpec::generic_example,
          ReductionCaseSpec::rational, ReductionCaseSpec::exp_k5, ReductionCaseSpec::exp_k5zero,
          ReductionCaseSpec::zer, ReductionCaseSpec::zer_k5zero})
        if (name == case_spec_name(s)) return s;
    fail(errc::config_error, "unknown reduction case '" + name + "'");
}

// ---------------------------------------------------------------------------
// Jet helpers

Jet3 compose(const Jet1& outer, const Jet3& increment) {
    require(std::abs(increment.value()) < 1e-12, errc::domain_error,
            "compose expects a value-free increment");
    int n = outer.order();
    Jet3 r = Jet3::constant(outer[n], increment.base());
    for (int k = n - 1; k >= 0; --k) {
        r = r * increment;
        r += outer[k];
    }
    return r;
}

namespace {

// Lift of a t-jet (value and first derivative) into a trivariate jet.
Jet3 lift_t3(const Jet1& tj, std::array<Cx, 3> base) {
    Jet3 j = Jet3::constant(tj.value(), base);
    j[Jet3::T] = tj.derivative(1);
    return j;
}

Jet3 poly_jet3(const Poly& p, Cx x0, Cx y0, Cx t0) {
    return lift_t3(p.jet(t0, 1), {x0, y0, t0});
}

Jet2 lift_t2(const Jet1& tj, int op, int ot) {
    Jet2 j = Jet2::constant(tj[0], op, ot);
    for (int m = 1; m <= std::min(ot, tj.order()); ++m) j.at(0, m) = tj[m];
    return j;
}

struct Seeds3 {
    Jet3 x, y, t;
};
Seeds3 seeds(Cx x0, Cx y0, Cx t0) {
    return {Jet3::var_x(x0, y0, t0), Jet3::var_y(x0, y0, t0), Jet3::var_t(x0, y0, t0)};
}

void guard_nonzero(Cx z, const char* what, double eps = 1e-10) {
    require(std::abs(z) > eps, errc::singular_locus, std::string("singular locus: ") + what);
}

}  // namespace

// ---------------------------------------------------------------------------
// build_reduction

ReductionVariables build_reduction(ReductionCaseSpec spec, const TimeFunctions& tf,
                                   const ReducedConstants& c, const BuildOptions& opt) {
    require(std::abs(c.nu) > 0.0, errc::domain_error, "nu must be nonzero");
    ReductionVariables rv;
    rv.spec_ = spec;
    rv.constants_ = c;
    rv.tf_ = tf;
    rv.opt_ = opt;

    auto check_tri_constraints = [&] {
        require(std::abs(c.K5 * c.K5 + 1.0) <= opt.constraint_tol, errc::constraint_unsatisfiable,
                "tri reduction needs K5^2 = -1");
        require(std::abs(c.K6 - 2.0 * c.K5 * c.K7) <= opt.constraint_tol,
                errc::constraint_unsatisfiable, "tri reduction needs K6 = 2 K5 K7");
    };

    switch (spec) {
        case ReductionCaseSpec::generic_full:
        case ReductionCaseSpec::generic_example: {
            rv.ode_case_ = ReducedCase::tri;
            require(std::abs(c.k) > 0.0, errc::domain_error, "k must be nonzero");
            check_tri_constraints();
            rv.vslot_kind_ = VSlotKind::direct;
            rv.constraints_ = {"K5^2 = -1", "K6 = 2 K5 K7"};
            if (spec == ReductionCaseSpec::generic_full) {
                (void)tf.get("lambda1");
                (void)tf.get("lambda2");
                (void)tf.get("lambda3");
                rv.constraints_.push_back("c1 from numeric closure of equation 7");
            }
            break;
        }
        case ReductionCaseSpec::rational: {
            rv.ode_case_ = ReducedCase::rat;
            const Poly &h1 = tf.get("h1"), &h2 = tf.get("h2");
            require(!(h1.derivative().is_zero() && h2.derivative().is_zero()),
                    errc::degenerate_time_functions, "rational case needs (h1', h2') != (0, 0)");
            // (K5^2 + 1)(h2' h1'' - h1' h2'') = 0 sampled over t.
            Poly h1p = h1.derivative(), h2p = h2.derivative();
            Poly h1pp = h1p.derivative(), h2pp = h2p.derivative();
            double worst = 0.0;
            for (int i = 0; i < 7; ++i) {
                Cx t(0.17 * i - 0.4, 0.05 * i);
                Cx wr = h2p(t) * h1pp(t) - h1p(t) * h2pp(t);
                worst = std::max(worst, std::abs((c.K5 * c.K5 + 1.0) * wr));
            }
            require(worst <= opt.constraint_tol, errc::constraint_unsatisfiable,
                    "rational case needs (K5^2+1)(h2' h1'' - h1' h2'') = 0");
            require(std::abs(c.K6 - 2.0 * c.K5 * c.K7) <= opt.constraint_tol,
                    errc::constraint_unsatisfiable, "rational reduction needs K6 = 2 K5 K7");
            if (std::abs(c.K5) < 1e-12)
                require(std::abs(c.K6) < 1e-12, errc::constraint_unsatisfiable,
                        "rational case with K5 = 0 needs K6 = 0");
            rv.vslot_kind_ = VSlotKind::antiderivative;
            rv.constraints_ = {"(K5^2+1)(h2' h1'' - h1' h2'') = 0", "K6 = 2 K5 K7"};
            break;
        }
        case ReductionCaseSpec::exp_k5: {
            rv.ode_case_ = ReducedCase::exp_;
            require(std::abs(c.k) > 0.0, errc::domain_error, "k must be nonzero");
            (void)tf.get("lambda2");
            require(!tf.get("lambda3").derivative().is_zero(), errc::degenerate_time_functions,
                    "exp case needs lambda3' != 0 (otherwise use the wronskian-zero branch)");
            require(std::abs(c.K5) > 1e-12, errc::guard_violation, "exp_k5 needs K5 != 0");
            rv.vslot_kind_ = VSlotKind::direct;
            rv.constraints_ = {"equation 7 has no solution (negative result)"};
            break;
        }
        case ReductionCaseSpec::exp_k5zero: {
            rv.ode_case_ = ReducedCase::exp_;
            require(std::abs(c.k) > 0.0, errc::domain_error, "k must be nonzero");
            (void)tf.get("lambda2");
            (void)tf.get("farb");
            require(!tf.get("lambda3").derivative().is_zero(), errc::degenerate_time_functions,
                    "exp case needs lambda3' != 0 (otherwise use the wronskian-zero branch)");
            require(std::abs(c.K5) < 1e-12, errc::guard_violation, "exp_k5zero needs K5 = 0");
            require(std::abs(c.K6) < 1e-12, errc::constraint_unsatisfiable,
                    "exp_k5zero forces K6 = 0");
            rv.vslot_kind_ = VSlotKind::direct;
            rv.constraints_ = {"K5 = 0", "K6 = 0"};
            break;
        }
        case ReductionCaseSpec::zer: {
            rv.ode_case_ = ReducedCase::zer;
            require(!tf.get("h0").derivative().is_zero(), errc::degenerate_time_functions,
                    "zer case needs h0' != 0 (otherwise use the wronskian-zero branch)");
            require(std::abs(c.K5) > 1e-12, errc::guard_violation, "zer needs K5 != 0");
            rv.vslot_kind_ = VSlotKind::direct;
            rv.constraints_ = {"h1 = C1 h0 + C2/h0 + K7/(4 K5^2)"};
            break;
        }
        case ReductionCaseSpec::zer_k5zero: {
            rv.ode_case_ = ReducedCase::zer;
            require(!tf.get("h0").derivative().is_zero(), errc::degenerate_time_functions,
                    "zer case needs h0' != 0");
            (void)tf.get("h1");
            (void)tf.get("farb");
            require(std::abs(c.K5) < 1e-12, errc::guard_violation, "zer_k5zero needs K5 = 0");
            require(std::abs(c.K6) < 1e-12, errc::constraint_unsatisfiable,
                    "zer_k5zero forces K6 = 0");
            rv.vslot_kind_ = VSlotKind::direct;
            rv.constraints_ = {"K5 = 0", "K6 = 0"};
            break;
        }
    }
    return rv;
}

// ---------------------------------------------------------------------------
// Evaluators

namespace {

struct GenericPieces {
    Jet3 n1, n2, d1, d2, apb, amb, l1, l2, l3;
};

GenericPieces generic_pieces(const TimeFunctions& tf, Cx x0, Cx y0, Cx t0) {
    auto [X, Y, T] = seeds(x0, y0, t0);
    const Poly &p1 = tf.get("lambda1"), &p2 = tf.get("lambda2"), &p3 = tf.get("lambda3");
    Poly p1d = p1.derivative(), p2d = p2.derivative(), p3d = p3.derivative();
    GenericPieces g;
    g.l1 = poly_jet3(p1, x0, y0, t0);
    g.l2 = poly_jet3(p2, x0, y0, t0);
    g.l3 = poly_jet3(p3, x0, y0, t0);
    Jet3 l1p = poly_jet3(p1d, x0, y0, t0);
    Jet3 l2p = poly_jet3(p2d, x0, y0, t0);
    Jet3 l3p = poly_jet3(p3d, x0, y0, t0);
    g.n1 = (1.0 + g.l1) * (X - g.l3) + g.l2;
    g.n2 = (1.0 - g.l1) * (Y - g.l3) - g.l2;
    g.d1 = (1.0 - g.l1) * (X - g.l3) - g.l2;
    g.d2 = (1.0 + g.l1) * (Y - g.l3) + g.l2;
    Jet3 A = g.l2 * l1p - g.l1 * l2p + (g.l1 * g.l1 + 1.0) * l3p;
    Jet3 B = l2p - 2.0 * (g.l1 * l3p);
    g.apb = A + B;
    g.amb = A - B;
    return g;
}

}  // namespace

Jet3 ReductionVariables::xi(Cx x, Cx y, Cx t) const {
    auto [X, Y, T] = seeds(x, y, t);
    const ReducedConstants& c = constants_;
    switch (spec_) {
        case ReductionCaseSpec::generic_example: {
            Jet3 sn = sqrt(X * (Y - 2.0 * T));
            Jet3 sd = sqrt(Y * (X - 2.0 * T));
            Jet3 den = sn - sd;
            guard_nonzero(den.value(), "sqrt(N) - sqrt(D) = 0");
            return log((sn + sd) / den) / c.k;
        }
        case ReductionCaseSpec::generic_full: {
            GenericPieces g = generic_pieces(tf_, x, y, t);
            Jet3 sn = sqrt(g.n1 * g.n2);
            Jet3 sd = sqrt(g.d1 * g.d2);
            Jet3 den = sn - sd;
            guard_nonzero(den.value(), "sqrt(N1 N2) - sqrt(D1 D2) = 0");
            return log((sn + sd) / den) / c.k;
        }
        case ReductionCaseSpec::rational: {
            Jet3 Xs = X + poly_jet3(tf_.get("h1"), x, y, t);
            Jet3 Ys = Y + poly_jet3(tf_.get("h2"), x, y, t);
            guard_nonzero(Xs.value(), "x + h1 = 0");
            guard_nonzero(Ys.value(), "y + h2 = 0");
            return sqrt(Xs * Ys);
        }
        case ReductionCaseSpec::exp_k5:
        case ReductionCaseSpec::exp_k5zero: {
            Jet3 l3 = poly_jet3(tf_.get("lambda3"), x, y, t);
            Jet3 l2 = poly_jet3(tf_.get("lambda2"), x, y, t);
            Jet3 XL = X - l3, YL = Y - l3, D = X - Y;
            guard_nonzero(XL.value(), "x - lambda3 = 0");
            guard_nonzero(YL.value(), "y - lambda3 = 0");
            guard_nonzero(D.value(), "x - y = 0");
            guard_nonzero(l2.value(), "lambda2 = 0");
            return log(XL * YL / (D * l2)) / c.k;
        }
        case ReductionCaseSpec::zer:
        case ReductionCaseSpec::zer_k5zero: {
            Jet3 H0 = poly_jet3(tf_.get("h0"), x, y, t);
            guard_nonzero(H0.value(), "h0 = 0");
            Jet3 h1j;
            if (spec_ == ReductionCaseSpec::zer) {
                // Equation 7 closes h1 (the constant term is K7 / (4 K5^2)).
                h1j = opt_.C1 * H0 + opt_.C2 * recip(H0) +
                      Jet3::constant(c.K7 / (4.0 * c.K5 * c.K5), H0.base());
            } else {
                h1j = poly_jet3(tf_.get("h1"), x, y, t);
            }
            return X * H0 + Y * recip(H0) + h1j;
        }
    }
    fail(errc::out_of_range, "unreachable");
}

Jet3 ReductionVariables::uu(Cx x, Cx y, Cx t) const {
    auto [X, Y, T] = seeds(x, y, t);
    const ReducedConstants& c = constants_;
    switch (spec_) {
        case ReductionCaseSpec::generic_example: {
            Jet3 num = X * Y;
            Jet3 den = (X - 2.0 * T) * (Y - 2.0 * T);
            guard_nonzero(den.value(), "(x-2t)(y-2t) = 0");
            return (c.K5 / 2.0) * log(num / den);
        }
        case ReductionCaseSpec::generic_full: {
            GenericPieces g = generic_pieces(tf_, x, y, t);
            Jet3 q = sqrt(g.d2 * g.n1 / (g.d1 * g.n2));
            Jet3 arg = g.apb * q + g.amb * recip(q);
            guard_nonzero(arg.value(), "u-coefficient log argument = 0");
            return c.K5 * log(arg);
        }
        case ReductionCaseSpec::rational: {
            if (std::abs(c.K5) < 1e-12) return Jet3::constant(Cx{}, {x, y, t});
            Jet3 Xs = X + poly_jet3(tf_.get("h1"), x, y, t);
            Jet3 Ys = Y + poly_jet3(tf_.get("h2"), x, y, t);
            Jet3 h1p = poly_jet3(tf_.get("h1").derivative(), x, y, t);
            Jet3 h2p = poly_jet3(tf_.get("h2").derivative(), x, y, t);
            Jet3 W = Xs * h2p - Ys * h1p;
            guard_nonzero(W.value(), "(x+h1) h2' - (y+h2) h1' = 0");
            return c.K5 * log(W) - (c.K5 / 2.0) * log(Xs * Ys);
        }
        case ReductionCaseSpec::exp_k5: {
            Jet3 l3 = poly_jet3(tf_.get("lambda3"), x, y, t);
            Jet3 l2 = poly_jet3(tf_.get("lambda2"), x, y, t);
            Jet3 l3p = poly_jet3(tf_.get("lambda3").derivative(), x, y, t);
            guard_nonzero(l3p.value(), "lambda3' = 0 (wronskian-zero branch)");
            Jet3 p = recip(X - l3) + recip(Y - l3);
            Jet3 coef = opt_.exp_du_printed_lambda2
                            ? l2
                            : poly_jet3(tf_.get("lambda2").derivative(), x, y, t);
            return c.K5 * l2 * (2.0 * (l2 * p * p) + 4.0 * (coef / l3p) * p);
        }
        case ReductionCaseSpec::exp_k5zero:
        case ReductionCaseSpec::zer_k5zero:
            return Jet3::constant(Cx{}, {x, y, t});
        case ReductionCaseSpec::zer: {
            Jet3 H0 = poly_jet3(tf_.get("h0"), x, y, t);
            Jet3 w = X * H0 - Y * recip(H0);
            // h1'/(log h0)' = C1 h0 - C2/h0 for the closed h1.
            Jet3 slope = opt_.C1 * H0 - opt_.C2 * recip(H0);
            return 2.0 * c.K5 * (w * w) + 4.0 * c.K5 * (slope * w);
        }
    }
    fail(errc::out_of_range, "unreachable");
}

Jet3 ReductionVariables::vslot_parts(Cx x, Cx y, Cx t, bool with_c1) const {
    auto [X, Y, T] = seeds(x, y, t);
    const ReducedConstants& c = constants_;
    switch (spec_) {
        case ReductionCaseSpec::generic_example: {
            Cx ysign = opt_.generic_example_y_plus_2t ? Cx{1.0, 0.0} : Cx{-1.0, 0.0};
            Jet3 xm = X - 2.0 * T, ym = Y - 2.0 * T;
            Jet3 yalt = Y + ysign * (2.0 * T);
            guard_nonzero(T.value(), "t = 0 in the example v-coefficient");
            guard_nonzero((xm * ym).value(), "(x-2t)(y-2t) = 0");
            Jet3 first = -c.K6 * sqrt(X * Y) / (c.k * c.K5 * T * sqrt(xm * ym));
            Jet3 second = -(4.0 * T - X - Y) / (2.0 * (xm * yalt));
            return first + second;
        }
        case ReductionCaseSpec::generic_full: {
            GenericPieces g = generic_pieces(tf_, x, y, t);
            guard_nonzero((g.l1 + 1.0).value(), "lambda1 = -1");
            guard_nonzero((g.l1 - 1.0).value(), "lambda1 = +1");
            guard_nonzero(g.l2.value(), "lambda2 = 0");
            Jet3 term1 = (g.amb / (4.0 * (g.l1 + 1.0))) * (recip(g.n1) + recip(g.d2));
            Jet3 term2 = -(g.apb / (4.0 * (g.l1 - 1.0))) * (recip(g.n2) + recip(g.d1));
            Jet3 prod = sqrt(g.n1 * g.d1 * g.n2 * g.d2);
            Jet3 term4 = -(c.K6 / (2.0 * c.k * c.K5)) * recip(g.l2) *
                         ((g.apb * (g.d2 * g.n1) - g.amb * (g.d1 * g.n2)) / prod);
            Jet3 base = term1 + term2 + term4;
            if (!with_c1) return base;
            Jet3 cterm = c1_term(x, y, t);
            std::optional<Cx> c1 = c1_at(x, y, t);
            require(c1.has_value(), errc::singular_locus, "c1 closure degenerate here");
            return base + (*c1) * cterm;
        }
        case ReductionCaseSpec::rational: {
            Jet3 Xs = X + poly_jet3(tf_.get("h1"), x, y, t);
            Jet3 Ys = Y + poly_jet3(tf_.get("h2"), x, y, t);
            Jet3 h1p = poly_jet3(tf_.get("h1").derivative(), x, y, t);
            Jet3 h2p = poly_jet3(tf_.get("h2").derivative(), x, y, t);
            Jet3 W = Xs * h2p - Ys * h1p;
            guard_nonzero(W.value(), "(x+h1) h2' - (y+h2) h1' = 0");
            Jet3 out = log(W) - 0.25 * log(Xs * Ys);
            if (std::abs(c.K5) > 1e-12) out += (c.K6 / c.K5) * sqrt(Xs * Ys);
            return out;
        }
        case ReductionCaseSpec::exp_k5: {
            Jet3 l3 = poly_jet3(tf_.get("lambda3"), x, y, t);
            Jet3 l3p = poly_jet3(tf_.get("lambda3").derivative(), x, y, t);
            Jet3 p = recip(X - l3) + recip(Y - l3);
            // Overall sign fixed by equation 6.
            return -((c.K6 + c.k * c.K5) / (c.k * c.K5)) * (l3p * p);
        }
        case ReductionCaseSpec::exp_k5zero: {
            Jet3 l3 = poly_jet3(tf_.get("lambda3"), x, y, t);
            Jet3 l2 = poly_jet3(tf_.get("lambda2"), x, y, t);
            Jet3 l2p = poly_jet3(tf_.get("lambda2").derivative(), x, y, t);
            Jet3 l3p = poly_jet3(tf_.get("lambda3").derivative(), x, y, t);
            Jet3 fa = poly_jet3(tf_.get("farb"), x, y, t);
            Jet3 p = recip(X - l3) + recip(Y - l3);
            // The p^2 coefficient carries lambda2 lambda2' (matching equation 7).
            return -(4.0 / (3.0 * c.k)) * c.K7 * (l2 * l2 * l3p * p * p * p) -
                   (4.0 / c.k) * c.K7 * (l2 * l2p * p * p) + fa * p;
        }
        case ReductionCaseSpec::zer: {
            Jet3 H0 = poly_jet3(tf_.get("h0"), x, y, t);
            Jet3 H0p = poly_jet3(tf_.get("h0").derivative(), x, y, t);
            Jet3 L = H0p / H0;
            Jet3 w = X * H0 - Y * recip(H0);
            return (c.K6 / c.K5) * (L * w);
        }
        case ReductionCaseSpec::zer_k5zero: {
            Jet3 H0 = poly_jet3(tf_.get("h0"), x, y, t);
            Jet3 H0p = poly_jet3(tf_.get("h0").derivative(), x, y, t);
            Jet3 h1p = poly_jet3(tf_.get("h1").derivative(), x, y, t);
            Jet3 fa = poly_jet3(tf_.get("farb"), x, y, t);
            Jet3 L = H0p / H0;
            Jet3 w = X * H0 - Y * recip(H0);
            return (4.0 / 3.0) * c.K7 * (L * w * w * w) + 4.0 * c.K7 * (h1p * w * w) + fa * w;
        }
    }
    fail(errc::out_of_range, "unreachable");
}

Jet3 ReductionVariables::vslot(Cx x, Cx y, Cx t) const { return vslot_parts(x, y, t, true); }

VGrad ReductionVariables::v_grad(Cx x, Cx y, Cx t) const {
    Jet3 j = vslot(x, y, t);
    if (vslot_kind_ == VSlotKind::direct)
        return {j.value(), j.d(1, 0, 0), j.d(0, 1, 0), j.d(1, 1, 0)};
    return {j.d(0, 0, 1), j.d(1, 0, 1), j.d(0, 1, 1), j.d(1, 1, 1)};
}

Cx ReductionVariables::v_antiderivative(Cx x, Cx y, Cx t) const {
    require(vslot_kind_ == VSlotKind::antiderivative, errc::missing_antiderivative,
            "the printed block defines only the v-coefficient, not its t-antiderivative");
    return vslot(x, y, t).value();
}

Jet3 ReductionVariables::c1_term(Cx x, Cx y, Cx t) const {
    require(spec_ == ReductionCaseSpec::generic_full, errc::out_of_range,
            "c1 appears only in the generic case");
    GenericPieces g = generic_pieces(tf_, x, y, t);
    Jet3 num = (1.0 - g.l1) * g.n1 + (1.0 + g.l1) * g.n2;
    Jet3 den = g.apb * (g.d2 * g.n1) + g.amb * (g.d1 * g.n2);
    guard_nonzero(den.value(), "c1 denominator = 0");
    return -2.0 * ((1.0 - g.l1 * g.l1) * num / den);
}

std::optional<Cx> ReductionVariables::c1_at(Cx x, Cx y, Cx t) const {
    if (spec_ != ReductionCaseSpec::generic_full) return std::nullopt;
    Jet3 xij = xi(x, y, t);
    Jet3 uuj = uu(x, y, t);
    Jet3 base = vslot_parts(x, y, t, false);
    Jet3 cterm = c1_term(x, y, t);
    CoefficientFamily fam = coefficient_family(ode_case_, constants_, /*keep_k7=*/true);
    Cx g6v = fam.g6(xij.value(), 0).value();
    Cx xxx = xij.d(1, 0, 0) * xij.d(0, 1, 0) * xij.d(0, 0, 1);
    Cx uxuy_t = uuj.d(1, 0, 1) * uuj.d(0, 1, 0) + uuj.d(1, 0, 0) * uuj.d(0, 1, 1);
    Cx r70 = base.d(1, 1, 0) - uxuy_t - xxx * g6v;
    Cx slope = cterm.d(1, 1, 0);
    if (std::abs(slope) < 1e-12) return std::nullopt;
    return -r70 / slope;
}

// ---------------------------------------------------------------------------
// Admissibility system and gradient formulas

std::array<Residual, 7> admissibility_residuals(const ReductionVariables& rv, Cx x, Cx y, Cx t) {
    Jet3 xij = rv.xi(x, y, t);
    Jet3 uuj = rv.uu(x, y, t);
    VGrad vg = rv.v_grad(x, y, t);
    Cx xi0 = xij.value();

    CoefficientFamily fam = coefficient_family(rv.ode_case(), rv.constants(), /*keep_k7=*/true);
    Jet1 f1j = fam.f1(xi0, 1);
    Cx f1 = f1j.value(), f1p = f1j.derivative(1);
    Cx f5 = fam.f5(xi0, 0).value();
    Cx f6 = fam.f6(xi0, 0).value();
    Cx g6 = fam.g6(xi0, 0).value();

    Cx xx = xij.d(1, 0, 0), xy = xij.d(0, 1, 0), xt = xij.d(0, 0, 1);
    Cx xxy = xij.d(1, 1, 0), xxt = xij.d(1, 0, 1), xyt = xij.d(0, 1, 1);
    require(std::abs(xx * xy * xt) > 1e-14, errc::singular_locus,
            "characteristic point: xi_x xi_y xi_t = 0");
    Cx xxx3 = xx * xy * xt;

    Cx ux = uuj.d(1, 0, 0), uy = uuj.d(0, 1, 0), uxt = uuj.d(1, 0, 1), uyt = uuj.d(0, 1, 1);
    Cx uxyt = uuj.d(1, 1, 1);

    std::array<Residual, 7> r;
    auto make = [](std::initializer_list<Cx> terms) {
        TermScale ts;
        Residual res;
        res.value = ts.sum(terms);
        res.scale = ts.scale();
        return res;
    };
    r[0] = make({xxt * xy, xx * xyt});
    r[1] = make({xxy, -xx * xy * f1});
    r[2] = make({ux * xy, uy * xx});
    r[3] = make({ux * xyt, uy * xxt, -xxx3 * f5});
    r[4] = make({vg.vx * xy, vg.vy * xx, xxx3 * f1p});
    r[5] = make({uxyt, ux * vg.vy, uy * vg.vx, -xxx3 * f6});
    r[6] = make({vg.vxy, -(uxt * uy), -(ux * uyt), -xxx3 * g6});
    return r;
}

std::array<Residual, 4> gradient_consistency(const ReductionVariables& rv, Cx x, Cx y, Cx t) {
    Jet3 xij = rv.xi(x, y, t);
    Jet3 uuj = rv.uu(x, y, t);
    VGrad vg = rv.v_grad(x, y, t);
    Cx xi0 = xij.value();

    CoefficientFamily fam = coefficient_family(rv.ode_case(), rv.constants(), /*keep_k7=*/true);
    Jet1 f1j = fam.f1(xi0, 1);
    Cx f1p = f1j.derivative(1);
    Cx f5 = fam.f5(xi0, 0).value();
    Cx f6 = fam.f6(xi0, 0).value();

    Cx xx = xij.d(1, 0, 0), xy = xij.d(0, 1, 0), xt = xij.d(0, 0, 1);
    Cx xxt = xij.d(1, 0, 1), xyt = xij.d(0, 1, 1);
    Cx wr = xx * xyt - xy * xxt;
    double wr_scale = std::max(std::abs(xx * xyt), std::abs(xy * xxt));
    require(std::abs(wr) > 1e-10 * std::max(wr_scale, 1e-30), errc::zero_wronskian,
            "xi_x xi_yt - xi_y xi_xt = 0: use the wronskian-zero branch");
    require(std::abs(f5) > 1e-14, errc::domain_error, "gradient formulas need f5 != 0");

    Cx ux = uuj.d(1, 0, 0), uy = uuj.d(0, 1, 0), uxyt = uuj.d(1, 1, 1);
    Cx xxx3 = xx * xy * xt;

    Cx ux_f = xx * xx * xy * xt * f5 / wr;
    Cx uy_f = xy * xy * xx * xt * f5 / (-wr);
    Cx bracket = uxyt / xxx3 - f6;
    Cx vx_f = (wr / (2.0 * xy * f5)) * bracket - 0.5 * xx * xt * f1p;
    Cx vy_f = (-wr / (2.0 * xx * f5)) * bracket - 0.5 * xy * xt * f1p;

    auto rel = [](Cx got, Cx want) {
        Residual r;
        r.value = got - want;
        r.scale = std::max(std::abs(got), std::abs(want));
        return r;
    };
    return {rel(ux, ux_f), rel(uy, uy_f), rel(vg.vx, vx_f), rel(vg.vy, vy_f)};
}

// ---------------------------------------------------------------------------
// Field reconstruction

FieldSample reconstruct_fields(const ReductionVariables& rv, const StateProvider& sp, Cx x, Cx y,
                               Cx t) {
    Jet3 xij = rv.xi(x, y, t);
    Cx xi0 = xij.value();
    LocalOdeState st = sp(xi0);

    Jet1 Uc(3), Vc(3);
    Uc[1] = st.up;
    Uc[2] = st.upp / 2.0;
    Uc[3] = st.uppp / 6.0;
    Vc[1] = st.vp;
    Vc[2] = st.vpp / 2.0;
    Vc[3] = st.vppp / 6.0;

    Jet3 inc = xij - xi0;
    FieldSample s;
    s.nu = rv.constants().nu;
    s.u = compose(Uc, inc) + rv.uu(x, y, t) / rv.constants().nu;

    Jet3 v = compose(Vc, inc);
    if (rv.vslot_kind() == VSlotKind::antiderivative) {
        v += rv.vslot(x, y, t);
    } else {
        VGrad vg = rv.v_grad(x, y, t);
        v[Jet3::T] += vg.v;
        v[Jet3::X | Jet3::T] += vg.vx;
        v[Jet3::Y | Jet3::T] += vg.vy;
        v[Jet3::X | Jet3::Y | Jet3::T] += vg.vxy;
    }
    s.v = v;
    return s;
}

StateProvider make_ode_state_provider(const ReductionVariables& rv, const ReducedState& base,
                                      double tol) {
    ReducedCase cs = rv.ode_case();
    ReducedConstants sys = translate_constants_k7zero(cs, rv.constants());
    ReducedState base_sys = translate_state_k7zero(cs, rv.constants(), base);
    Cx vp_back = (cs == ReducedCase::tri || cs == ReducedCase::rat)
                     ? -2.0 * rv.constants().K7
                     : Cx{};
    return [cs, sys, base_sys, vp_back, tol](Cx xi0) {
        ReducedState st = base_sys;
        if (std::abs(xi0 - base_sys.xi) > 1e-13) {
            ComplexPath path({base_sys.xi, xi0});
            Trajectory tr = integrate(
                [cs, sys](Cx xi, const ReducedState& s) {
                    ReducedState ss = s;
                    ss.xi = xi;
                    return reduced_rhs(cs, sys, ss);
                },
                base_sys, path, tol);
            st = tr.samples().back().state;
        }
        auto [uppp, vppp] = reduced_rhs(cs, sys, st);
        LocalOdeState out;
        out.up = st.up;
        out.upp = st.upp;
        out.uppp = uppp;
        out.vp = st.vp + vp_back;
        out.vpp = st.vpp;
        out.vppp = vppp;
        return out;
    };
}

// ---------------------------------------------------------------------------
// d'Alembert table

DAlembertPair dalembert_pair(ReducedCase cs, Cx k) {
    DAlembertPair p;
    p.cs = cs;
    p.k = k;
    if (cs == ReducedCase::tri || cs == ReducedCase::exp_)
        require(std::abs(k) > 0.0, errc::domain_error, "k must be nonzero");
    return p;
}

Jet1 DAlembertPair::f(Cx Z, int order) const {
    Jet1 z = Jet1::variable(Z, order);
    switch (cs) {
        case ReducedCase::tri: {
            require(std::abs(std::sinh(Z)) > kEpsPole && std::abs(std::cosh(Z)) > kEpsPole,
                    errc::domain_error, "coth(Z) singular");
            return log(coth(z)) / k;
        }
        case ReducedCase::rat: return exp(z);
        case ReducedCase::exp_:
            require(std::abs(Z) > kEpsPole, errc::domain_error, "log(Z) singular at 0");
            return -log(z) / k;
        case ReducedCase::zer: return z;
    }
    fail(errc::out_of_range, "unreachable");
}

Jet1 DAlembertPair::psi(Cx Z, int order) const {
    Jet1 z = Jet1::variable(Z, order);
    switch (cs) {
        case ReducedCase::tri: {
            Jet1 s = sinh(2.0 * z);
            require(std::abs(s.value()) > kEpsPole, errc::domain_error, "log sinh(2Z) singular");
            return log(s);
        }
        case ReducedCase::rat: return exp(2.0 * z);
        case ReducedCase::exp_:
            require(std::abs(Z) > kEpsPole, errc::domain_error, "log(Z) singular at 0");
            return log(z);
        case ReducedCase::zer: return z * z;
    }
    fail(errc::out_of_range, "unreachable");
}

Residual dalembert_f_residual(const DAlembertPair& p, Cx Z) {
    Jet1 fj = p.f(Z, 2);
    ReducedConstants c;
    c.k = p.k;
    CoefficientFamily fam = coefficient_family(p.cs, c);
    Cx f1v = fam.f1(fj.value(), 0).value();
    Cx fp = fj.derivative(1), fpp = fj.derivative(2);
    TermScale ts;
    Residual r;
    r.value = ts.sum({fpp, -f1v * fp * fp});
    r.scale = ts.scale();
    return r;
}

Residual dalembert_psi_residual(const DAlembertPair& p, Cx Z) {
    Jet1 fj = p.f(Z, 3);
    Jet1 pj = p.psi(Z, 3);
    Cx fp = fj.derivative(1), fpp = fj.derivative(2);
    require(std::abs(fp) > kEpsSing, errc::degenerate_jet, "f'(Z) = 0");
    TermScale ts;
    Residual r;
    r.value = ts.sum({pj.derivative(3), -2.0 * (fpp / fp) * pj.derivative(2)});
    r.scale = ts.scale();
    return r;
}

// ---------------------------------------------------------------------------
// The a/b pair behind the log identity

ABPair appendixB_ab(const TimeFunctions& tf) {
    ABPair ab;
    ab.l1 = tf.get("lambda1");
    ab.l2 = tf.get("lambda2");
    ab.l3 = tf.get("lambda3");
    require(!ab.l2.is_zero(), errc::degenerate_time_functions, "lambda2 must not vanish");
    return ab;
}

Jet2 ABPair::a(Cx x, Cx t, int order_x, int order_t) const {
    Jet2 X = Jet2::var_p(x, order_x, order_t);
    Jet2 L1 = lift_t2(l1.jet(t, order_t), order_x, order_t);
    Jet2 L2 = lift_t2(l2.jet(t, order_t), order_x, order_t);
    Jet2 L3 = lift_t2(l3.jet(t, order_t), order_x, order_t);
    Jet2 den = X - L3;
    require(std::abs(den.value()) > kEpsPole, errc::pole_at_sample, "x = lambda3(t)");
    return L1 + L2 / den;
}

Jet2 ABPair::b(Cx y, Cx t, int order_x, int order_t) const {
    Jet2 Y = Jet2::var_p(y, order_x, order_t);
    Jet2 L1 = lift_t2(l1.jet(t, order_t), order_x, order_t);
    Jet2 L2 = lift_t2(l2.jet(t, order_t), order_x, order_t);
    Jet2 L3 = lift_t2(l3.jet(t, order_t), order_x, order_t);
    Jet2 den = Y - L3;
    require(std::abs(den.value()) > kEpsPole, errc::pole_at_sample, "y = lambda3(t)");
    return -L1 - L2 / den;
}

Jet3 ABPair::a3(Cx x, Cx y, Cx t) const {
    auto [X, Y, T] = seeds(x, y, t);
    Jet3 L1 = poly_jet3(l1, x, y, t), L2 = poly_jet3(l2, x, y, t), L3 = poly_jet3(l3, x, y, t);
    Jet3 den = X - L3;
    require(std::abs(den.value()) > kEpsPole, errc::pole_at_sample, "x = lambda3(t)");
    return L1 + L2 / den;
}

Jet3 ABPair::b3(Cx x, Cx y, Cx t) const {
    auto [X, Y, T] = seeds(x, y, t);
    Jet3 L1 = poly_jet3(l1, x, y, t), L2 = poly_jet3(l2, x, y, t), L3 = poly_jet3(l3, x, y, t);
    Jet3 den = Y - L3;
    require(std::abs(den.value()) > kEpsPole, errc::pole_at_sample, "y = lambda3(t)");
    return -L1 - L2 / den;
}

Cx ab_schwarzian_t(const ABPair& ab, char which, Cx xy, Cx t) {
    Jet2 j = (which == 'a') ? ab.a(xy, t, 3, 1) : ab.b(xy, t, 3, 1);
    // Repackage the x-derivatives as order-1 jets in t and form the schwarzian
    // in that ring; its derivative coefficient is ({a;x})_t exactly.
    Jet1 d1(1), d2(1), d3(1);
    d1[0] = j.d(1, 0);
    d1[1] = j.d(1, 1);
    d2[0] = j.d(2, 0);
    d2[1] = j.d(2, 1);
    d3[0] = j.d(3, 0);
    d3[1] = j.d(3, 1);
    require(std::abs(d1.value()) > kEpsSing, errc::degenerate_jet, "a_x = 0");
    Jet1 q = d2 / d1;
    Jet1 s = d3 / d1 - 1.5 * q * q;
    return s.derivative(1);
}

Residual ab_logab_xyt(const ABPair& ab, Cx x, Cx y, Cx t) {
    Jet3 sum = ab.a3(x, y, t) + ab.b3(x, y, t);
    require(std::abs(sum.value()) > kEpsPole, errc::pole_at_sample, "a + b = 0");
    Jet3 l = log(sum);
    Residual r;
    r.value = l.d(1, 1, 1);
    r.scale = std::max({std::abs(l.d(1, 1, 0)), std::abs(l.d(1, 0, 1)), std::abs(l.d(0, 1, 1)),
                        1.0});
    return r;
}

// ---------------------------------------------------------------------------
// Wronskian-zero F/G systems

std::array<Residual, 2> fg_residuals(const FGState& st, FGVariant variant, Cx p, Cx t) {
    Jet2 F = st.F(p, t);
    Jet2 G = st.G(p, t);
    require(F.order_p() >= 2 && F.order_t() >= 1, errc::out_of_range, "F needs orders (2,1)");
    require(G.order_p() >= 2, errc::out_of_range, "G needs p-order 2");

    Cx Fp = F.d(1, 0), Fpt = F.d(1, 1), Fppt = F.d(2, 1);
    Cx Gp = G.d(1, 0), Gpp = G.d(2, 0);

    Cx src1, src2;
    if (variant == FGVariant::exp_) {
        Cx l2 = st.lambda2(t), l2p = st.lambda2.derivative()(t);
        src1 = 8.0 * (st.K6 / st.k) * l2 * l2p;
        src2 = 8.0 * (st.K7 / st.k) * l2 * l2p;
    } else {
        src1 = -8.0 * st.K6;
        src2 = -8.0 * st.K7;
    }

    auto make = [](std::initializer_list<Cx> terms) {
        TermScale ts;
        Residual res;
        res.value = ts.sum(terms);
        res.scale = ts.scale();
        return res;
    };
    return {make({Fppt, 2.0 * Fp * Gp, src1}), make({-2.0 * Fp * Fpt, Gpp, src2})};
}

Cx truncation_constraint(Cx K6, Cx K7, Cx k) {
    return (k * K7 + I * K6) * (2.0 * k * K7 + I * K6);
}

FGState fg_elliptic_fixture(Cx k, Cx K6, Cx K7, const Poly& lambda2, Cx q0, Cx w0, Cx w1, Cx c0,
                            int series_order) {
    // Taylor recursion for W = F_r' around q0:
    //   W'' = (c0 - 2 W^2 - (8 K7 / k) q) W + 4 K6 / k.
    int n = series_order;
    Jet1 W = Jet1::constant(w0, n);
    W[1] = w1;
    Jet1 q = Jet1::variable(q0, n);
    for (int pass = 0; pass + 1 < n; ++pass) {
        Jet1 rhs = (c0 - 2.0 * W * W - (8.0 * K7 / k) * q) * W + Cx(4.0 * K6 / k);
        for (int m = 2; m <= n; ++m) W[m] = rhs[m - 2] / static_cast<double>(m * (m - 1));
    }
    // F_r = integral of W;  H' = c0 - 2 W^2 - (8 K7/k) q;  H = its integral.
    Jet1 Fr = W.integrated(Cx{});
    Jet1 Hp = c0 - 2.0 * W * W - (8.0 * K7 / k) * q;
    Jet1 H = Hp.integrated(Cx{});

    Poly l2 = lambda2;
    Poly l2d = l2.derivative();
    auto horner = [q0](const Jet1& series, const Jet2& qjet) {
        Jet2 inc = qjet;
        inc -= q0;
        int n2 = series.order();
        Jet2 r = Jet2::constant(series[n2], qjet.order_p(), qjet.order_t());
        for (int m = n2 - 1; m >= 0; --m) {
            r = r * inc;
            r += series[m];
        }
        return r;
    };

    FGState st;
    st.k = k;
    st.K6 = K6;
    st.K7 = K7;
    st.lambda2 = lambda2;
    st.F = [Fr, l2, horner](Cx p, Cx t) {
        Jet2 P = Jet2::var_p(p, 3, 1);
        Jet2 L2 = lift_t2(l2.jet(t, 2).truncated(1), 3, 1);
        // exact t-derivative of lambda2^2 via the poly jet
        Jet2 q = P - L2 * L2;
        return horner(Fr, q);
    };
    st.G = [H, l2, l2d, horner](Cx p, Cx t) {
        Jet2 P = Jet2::var_p(p, 3, 1);
        Jet2 L2 = lift_t2(l2.jet(t, 2).truncated(1), 3, 1);
        Jet2 q = P - L2 * L2;
        Jet1 coef_t = l2.jet(t, 2) * l2d.jet(t, 2);  // lambda2 lambda2' with derivative
        Jet2 coef = lift_t2(coef_t.truncated(1), 3, 1);
        return coef * horner(H, q);
    };
    return st;
}

FGState fg_truncation_fixture(Cx k, Cx K7, int branch, const Poly& lambda2, Cx rho0) {
    require(std::abs(k - 1.0) < 1e-12, errc::domain_error,
            "truncation fixture is normalised at k = 1 (where the printed constraint closes)");
    require(branch == 1 || branch == 2, errc::domain_error, "branch must be 1 or 2");
    Cx K6 = (branch == 1) ? I * k * K7 : 2.0 * I * k * K7;

    FGState st;
    st.k = k;
    st.K6 = K6;
    st.K7 = K7;
    st.lambda2 = lambda2;
    Poly l2 = lambda2, l2d = lambda2.derivative();

    if (branch == 1) {
        // phi = tan(omega(t) p + c(t)), 2 omega^2 = (8 K7 / k^2) lambda2^2 - rho0;
        // F = i log sin(omega p + c) - (i/2) log omega.
        Poly cpoly(std::vector<Cx>{Cx{0.31, 0.0}, Cx{0.17, 0.0}});
        Cx k2 = k * k;
        st.F = [=](Cx p, Cx t) {
            Jet1 l2t = l2.jet(t, 2);
            Jet1 om_t = sqrt(((8.0 * K7 / k2) * (l2t * l2t) - rho0) / 2.0);
            Jet2 om = lift_t2(om_t.truncated(1), 3, 1);
            Jet2 cj = lift_t2(cpoly.jet(t, 1), 3, 1);
            Jet2 P = Jet2::var_p(p, 3, 1);
            Jet2 z = om * P + cj;
            return I * log(sin(z)) - (I / 2.0) * log(om);
        };
        st.G = [=](Cx p, Cx t) {
            Jet1 l2t = l2.jet(t, 2);
            Jet1 l2dt = l2d.jet(t, 2);
            Jet1 om_t = sqrt(((8.0 * K7 / k2) * (l2t * l2t) - rho0) / 2.0);
            Jet1 omp_t = om_t.differentiated();  // omega' with its own derivative
            Jet1 cp_t = cpoly.derivative().jet(t, 1);
            Jet2 om = lift_t2(om_t.truncated(1), 3, 1);
            Jet2 omp = lift_t2(omp_t.truncated(1), 3, 1);
            Jet2 cp = lift_t2(cp_t, 3, 1);
            Jet2 cj = lift_t2(cpoly.jet(t, 1), 3, 1);
            Jet2 P = Jet2::var_p(p, 3, 1);
            Jet2 z = om * P + cj;
            Jet2 lam = lift_t2((l2t * l2dt).truncated(1), 3, 1);
            Jet2 bracket = omp / om + (4.0 * I * K6 / k) * (lam / (om * om));
            return (omp * P + cp) * (cos(z) / sin(z)) - bracket * log(cos(z));
        };
    } else {
        // phi Moebius in p: F = i log(a p + b) - (i/2) log(a d - b), with
        // G integrated from the first equation.
        Poly pa(std::vector<Cx>{Cx{1.3, 0.2}, Cx{0.4, 0.0}});
        Poly pb(std::vector<Cx>{Cx{0.5, -0.1}, Cx{0.0, 0.3}});
        Poly pd(std::vector<Cx>{Cx{2.1, 0.0}, Cx{-0.2, 0.1}});
        Poly pad = pa.derivative(), pbd = pb.derivative();
        st.F = [=](Cx p, Cx t) {
            Jet2 A = lift_t2(pa.jet(t, 1), 3, 1);
            Jet2 B = lift_t2(pb.jet(t, 1), 3, 1);
            Jet2 D = lift_t2(pd.jet(t, 1), 3, 1);
            Jet2 P = Jet2::var_p(p, 3, 1);
            return I * log(A * P + B) - (I / 2.0) * log(A * D - B);
        };
        st.G = [=](Cx p, Cx t) {
            Jet2 A = lift_t2(pa.jet(t, 1), 3, 1);
            Jet2 B = lift_t2(pb.jet(t, 1), 3, 1);
            Jet2 Ap = lift_t2(pad.jet(t, 1), 3, 1);
            Jet2 Bp = lift_t2(pbd.jet(t, 1), 3, 1);
            Jet2 P = Jet2::var_p(p, 3, 1);
            Jet2 apb = A * P + B;
            Jet2 wr = Ap * B - A * Bp;
            Jet1 lam1 = (l2.jet(t, 1) * l2d.jet(t, 1)).truncated(1);
            Jet2 lam = lift_t2(lam1, 3, 1);
            return Cx{-1.0, 0.0} * (wr / (A * apb)) +
                   (2.0 * I * K6 / k) * (lam / (A * A)) * (apb * apb);
        };
    }
    return st;
}

}  // namespace sgred
