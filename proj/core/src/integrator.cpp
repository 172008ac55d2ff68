#include "sgred/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace sgred {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Vec4 {
    Cx v[4];
    Vec4 operator+(const Vec4& o) const {
        return {{v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2], v[3] + o.v[3]}};
    }
    Vec4 operator*(double s) const { return {{v[0] * s, v[1] * s, v[2] * s, v[3] * s}}; }
};

Vec4 state_to_vec(const ReducedState& s) { return {{s.up, s.upp, s.vp, s.vpp}}; }

ReducedState vec_to_state(Cx xi, const Vec4& y) {
    return {xi, y.v[0], y.v[1], y.v[2], y.v[3]};
}

// dY/ds = dir * (U'', U''', V'', V''').
Vec4 eval_f(const ReducedRhs& rhs, Cx dir, Cx xi, const Vec4& y) {
    auto [uppp, vppp] = rhs(xi, vec_to_state(xi, y));
    return {{dir * y.v[1], dir * uppp, dir * y.v[3], dir * vppp}};
}

double error_norm(const Vec4& err, const Vec4& y0, const Vec4& y1, double tol) {
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        double sc = tol + tol * std::max(std::abs(y0.v[i]), std::abs(y1.v[i]));
        double q = std::abs(err.v[i]) / sc;
        sum += q * q;
    }
    return std::sqrt(sum / 4.0);
}

// Quintic Hermite basis on [0,1] for (value, first, second derivative) data at
// both ends.
void hermite5(double u, double h, Cx p0, Cx m0, Cx k0, Cx p1, Cx m1, Cx k1, Cx& val, Cx& der) {
    double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
    double H0 = 1 - 10 * u3 + 15 * u4 - 6 * u5;
    double H1 = u - 6 * u3 + 8 * u4 - 3 * u5;
    double H2 = 0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5;
    double H3 = 10 * u3 - 15 * u4 + 6 * u5;
    double H4 = -4 * u3 + 7 * u4 - 3 * u5;
    double H5 = 0.5 * u3 - u4 + 0.5 * u5;
    double dH0 = (-30 * u2 + 60 * u3 - 30 * u4);
    double dH1 = (1 - 18 * u2 + 32 * u3 - 15 * u4);
    double dH2 = (u - 4.5 * u2 + 6 * u3 - 2.5 * u4);
    double dH3 = (30 * u2 - 60 * u3 + 30 * u4);
    double dH4 = (-12 * u2 + 28 * u3 - 15 * u4);
    double dH5 = (1.5 * u2 - 4 * u3 + 2.5 * u4);
    val = H0 * p0 + (H1 * h) * m0 + (H2 * h * h) * k0 + H3 * p1 + (H4 * h) * m1 +
          (H5 * h * h) * k1;
    der = (dH0 / h) * p0 + dH1 * m0 + (dH2 * h) * k0 + (dH3 / h) * p1 + dH4 * m1 + (dH5 * h) * k1;
}

}  // namespace

ComplexPath::ComplexPath(std::vector<Cx> waypoints, std::span<const Cx> singular_points,
                         double eps_pole)
    : pts_(std::move(waypoints)) {
    require(pts_.size() >= 2, errc::domain_error, "path needs at least two waypoints");
    knots_.push_back(0.0);
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i) {
        Cx a = pts_[i], b = pts_[i + 1];
        double seg = std::abs(b - a);
        require(seg > 0.0, errc::domain_error, "consecutive waypoints must be distinct");
        for (Cx p : singular_points) {
            // Distance point-to-segment.
            Cx ab = b - a, ap = p - a;
            double t = std::clamp((ap.real() * ab.real() + ap.imag() * ab.imag()) / (seg * seg),
                                  0.0, 1.0);
            double dist = std::abs(p - (a + t * ab));
            require(dist >= eps_pole, errc::step_size_underflow,
                    "path passes within eps_pole of a declared singular point");
        }
        length_ += seg;
        knots_.push_back(length_);
    }
}

Cx ComplexPath::at(double s) const {
    require(s >= -1e-12 && s <= length_ + 1e-12, errc::out_of_range, "path parameter out of range");
    s = std::clamp(s, 0.0, length_);
    auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(
        0, std::distance(knots_.begin(), it) - 1));
    if (i + 1 >= pts_.size()) i = pts_.size() - 2;
    double seg = knots_[i + 1] - knots_[i];
    double u = (s - knots_[i]) / seg;
    return pts_[i] + u * (pts_[i + 1] - pts_[i]);
}

Cx ComplexPath::direction(double s) const {
    s = std::clamp(s, 0.0, length_);
    auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(
        0, std::distance(knots_.begin(), it) - 1));
    if (i + 1 >= pts_.size()) i = pts_.size() - 2;
    Cx d = pts_[i + 1] - pts_[i];
    return d / std::abs(d);
}

ComplexPath ComplexPath::reversed() const {
    std::vector<Cx> rev(pts_.rbegin(), pts_.rend());
    return ComplexPath(std::move(rev));
}

void dp5_fixed_step(const ReducedRhs& rhs, Cx dir, Cx xi0, ReducedState& y, double h) {
    Vec4 y0 = state_to_vec(y);
    auto f = [&](double ds, const Vec4& yy) { return eval_f(rhs, dir, xi0 + dir * ds, yy); };
    Vec4 k1 = f(0.0, y0);
    Vec4 k2 = f(c2 * h, y0 + k1 * (a21 * h));
    Vec4 k3 = f(c3 * h, y0 + k1 * (a31 * h) + k2 * (a32 * h));
    Vec4 k4 = f(c4 * h, y0 + k1 * (a41 * h) + k2 * (a42 * h) + k3 * (a43 * h));
    Vec4 k5 = f(c5 * h, y0 + k1 * (a51 * h) + k2 * (a52 * h) + k3 * (a53 * h) + k4 * (a54 * h));
    Vec4 k6 = f(h, y0 + k1 * (a61 * h) + k2 * (a62 * h) + k3 * (a63 * h) + k4 * (a64 * h) +
                       k5 * (a65 * h));
    Vec4 y1 = y0 + k1 * (b1 * h) + k3 * (b3 * h) + k4 * (b4 * h) + k5 * (b5 * h) + k6 * (b6 * h);
    y = vec_to_state(xi0 + dir * h, y1);
}

Trajectory integrate(const ReducedRhs& rhs, const ReducedState& s0, const ComplexPath& path,
                     double tol, const IntegralFn& integrals) {
    require(tol > 0.0, errc::domain_error, "tolerance must be positive");
    require(std::abs(s0.xi - path.at(0.0)) <= 1e-9 * (1.0 + std::abs(s0.xi)),
            errc::domain_error, "initial state must sit on the path start");

    Trajectory tr;
    tr.rhs_ = rhs;
    tr.length_ = path.length();

    double s = 0.0;
    Vec4 y = state_to_vec(s0);
    Cx K2ref{}, K4ref{};
    double scale2 = 1.0, scale4 = 1.0;

    auto record = [&](double sp, const Vec4& yv) {
        TrajectorySample smp;
        smp.s = sp;
        smp.state = vec_to_state(path.at(sp), yv);
        if (integrals) {
            auto [r2, r4] = integrals(smp.state);
            smp.K2 = r2.value;
            smp.K4 = r4.value;
            if (tr.samples_.empty()) {
                K2ref = r2.value;
                K4ref = r4.value;
                scale2 = std::max(std::abs(K2ref), std::max(r2.scale, 1e-30));
                scale4 = std::max(std::abs(K4ref), std::max(r4.scale, 1e-30));
            }
            smp.drift2 = std::abs(smp.K2 - K2ref) / scale2;
            smp.drift4 = std::abs(smp.K4 - K4ref) / scale4;
            tr.max_drift2_ = std::max(tr.max_drift2_, smp.drift2);
            tr.max_drift4_ = std::max(tr.max_drift4_, smp.drift4);
        }
        tr.samples_.push_back(smp);
    };
    record(0.0, y);

    const auto& knots = path.knots();
    std::size_t seg = 0;
    double h = std::min(0.1 * path.length(), knots[1] - knots[0]);
    const double hmin = std::max(1e-14, 1e-14 * path.length());
    long max_steps = 2000000;

    while (s < path.length() - 1e-13) {
        while (seg + 2 < knots.size() && s >= knots[seg + 1] - 1e-13) ++seg;
        double seg_end = knots[seg + 1];
        bool clipped = false;
        if (s + h > seg_end) {
            h = seg_end - s;
            clipped = true;
        }
        require(--max_steps > 0, errc::tolerance_not_met, "step budget exhausted");
        require(h >= hmin, errc::step_size_underflow,
                "step size underflow at path parameter s = " + std::to_string(s));

        Cx dir = path.direction(0.5 * (s + std::min(s + h, seg_end)));
        Cx xi0 = path.at(s);
        auto f = [&](double ds, const Vec4& yy) { return eval_f(rhs, dir, xi0 + dir * ds, yy); };

        Vec4 k1, k2v, k3, k4v, k5, k6, k7, y1;
        bool ok = true;
        try {
            k1 = f(0.0, y);
            k2v = f(c2 * h, y + k1 * (a21 * h));
            k3 = f(c3 * h, y + k1 * (a31 * h) + k2v * (a32 * h));
            k4v = f(c4 * h, y + k1 * (a41 * h) + k2v * (a42 * h) + k3 * (a43 * h));
            k5 = f(c5 * h,
                   y + k1 * (a51 * h) + k2v * (a52 * h) + k3 * (a53 * h) + k4v * (a54 * h));
            k6 = f(h, y + k1 * (a61 * h) + k2v * (a62 * h) + k3 * (a63 * h) + k4v * (a64 * h) +
                          k5 * (a65 * h));
            y1 = y + k1 * (b1 * h) + k3 * (b3 * h) + k4v * (b4 * h) + k5 * (b5 * h) +
                 k6 * (b6 * h);
            k7 = f(h, y1);
        } catch (const Error& e) {
            if (e.code() != errc::singular_point) throw;
            ok = false;  // stepped into a pole guard: shrink
        }

        if (ok) {
            Vec4 err = k1 * (e1 * h) + k3 * (e3 * h) + k4v * (e4 * h) + k5 * (e5 * h) +
                       k6 * (e6 * h) + k7 * (e7 * h);
            double en = error_norm(err, y, y1, tol);
            bool finite = true;
            for (int i = 0; i < 4; ++i) finite = finite && is_finite(y1.v[i]);
            if (en <= 1.0 && finite) {
                // Accept.
                DenseStep d;
                d.s0 = s;
                d.s1 = s + h;
                d.dir = dir;
                d.y0 = vec_to_state(xi0, y);
                d.y1 = vec_to_state(xi0 + dir * h, y1);
                auto [u0, v0] = rhs(d.y0.xi, d.y0);
                auto [u1, v1] = rhs(d.y1.xi, d.y1);
                d.uppp0 = u0;
                d.vppp0 = v0;
                d.uppp1 = u1;
                d.vppp1 = v1;
                tr.steps_.push_back(d);

                s += h;
                y = y1;
                record(s, y);

                double fac = 0.9 * std::pow(std::max(en, 1e-10), -0.2);
                h *= std::clamp(fac, 0.2, 5.0);
            } else if (finite) {
                double fac = 0.9 * std::pow(en, -0.2);
                h *= std::clamp(fac, 0.1, 0.9);
                clipped = false;
            } else {
                h *= 0.25;
                clipped = false;
            }
        } else {
            h *= 0.25;
        }
        if (clipped && s < path.length() - 1e-13) {
            // Restore a reasonable step after an end-of-segment clip.
            h = std::max(h, 1e-3 * (knots[std::min(seg + 2, knots.size() - 1)] - s));
        }
        h = std::min(h, path.length() - s + 1e-16);
        if (h <= 0.0) break;
    }
    return tr;
}

Trajectory integrate_reduced(ReducedCase cs, const ReducedConstants& c, const ReducedState& s0,
                             const ComplexPath& path, double tol) {
    ReducedRhs rhs = [cs, c](Cx xi, const ReducedState& st) {
        ReducedState s = st;
        s.xi = xi;
        return reduced_rhs(cs, c, s);
    };
    IntegralFn ints = [cs, c](const ReducedState& st) {
        return first_integrals_scaled(cs, c, st);
    };
    return integrate(rhs, s0, path, tol, ints);
}

DenseResult Trajectory::dense_eval(double s) const {
    require(!steps_.empty(), errc::out_of_range, "empty trajectory");
    require(s >= -1e-12 && s <= length_ + 1e-12, errc::out_of_range,
            "dense query outside the integrated range");
    s = std::clamp(s, steps_.front().s0, steps_.back().s1);

    auto it = std::lower_bound(steps_.begin(), steps_.end(), s,
                               [](const DenseStep& d, double v) { return d.s1 < v; });
    if (it == steps_.end()) --it;
    const DenseStep& d = *it;
    double h = d.s1 - d.s0;
    double u = (s - d.s0) / h;

    // Node queries return the stored states exactly.
    auto at_node = [&](const ReducedState& y) {
        DenseResult out;
        out.state = y;
        auto [uppp, vppp] = rhs_(y.xi, y);
        out.uppp = uppp;
        out.vppp = vppp;
        return out;
    };
    if (u <= 1e-14) return at_node(d.y0);
    if (u >= 1.0 - 1e-14) return at_node(d.y1);

    // Quintic Hermite on U' and V' in the path parameter; second derivatives
    // are dir^2 * U''' etc.  U'' and V'' come from the derivative of the same
    // quintic, so nodes stay exactly consistent.
    Cx dir2 = d.dir * d.dir;
    Cx upv, updv, vpv, vpdv;
    hermite5(u, h, d.y0.up, d.dir * d.y0.upp, dir2 * d.uppp0, d.y1.up, d.dir * d.y1.upp,
             dir2 * d.uppp1, upv, updv);
    hermite5(u, h, d.y0.vp, d.dir * d.y0.vpp, dir2 * d.vppp0, d.y1.vp, d.dir * d.y1.vpp,
             dir2 * d.vppp1, vpv, vpdv);

    DenseResult out;
    Cx xi = d.y0.xi + d.dir * (s - d.s0);
    out.state = ReducedState{xi, upv, updv / d.dir, vpv, vpdv / d.dir};
    auto [uppp, vppp] = rhs_(xi, out.state);
    out.uppp = uppp;
    out.vppp = vppp;
    return out;
}

std::vector<Cx> case_fixed_singularities(ReducedCase cs, const ReducedConstants& c,
                                         std::span<const Cx> waypoints) {
    std::vector<Cx> out;
    if (waypoints.empty()) return out;
    double re_lo = waypoints[0].real(), re_hi = re_lo, im_lo = waypoints[0].imag(), im_hi = im_lo;
    for (Cx w : waypoints) {
        re_lo = std::min(re_lo, w.real());
        re_hi = std::max(re_hi, w.real());
        im_lo = std::min(im_lo, w.imag());
        im_hi = std::max(im_hi, w.imag());
    }
    double margin = 1.0;
    if (cs == ReducedCase::rat) {
        out.push_back(Cx{});
    } else if (cs == ReducedCase::tri) {
        // sinh(k xi) = 0 at xi = n pi i / k.
        Cx step = Cx(0.0, M_PI) / c.k;
        for (int n = -40; n <= 40; ++n) {
            Cx p = static_cast<double>(n) * step;
            if (p.real() >= re_lo - margin && p.real() <= re_hi + margin &&
                p.imag() >= im_lo - margin && p.imag() <= im_hi + margin)
                out.push_back(p);
        }
    }
    return out;
}

}  // namespace sgred
