#include "sgred/sg2d.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace sgred {

PdeResidual pde_residual(const FieldSample& s) {
    const Jet3 &u = s.u, &v = s.v;
    Cx nu2 = s.nu * s.nu;

    TermScale t1;
    Cx e1 = t1.sum({u.d(1, 1, 1), u.d(1, 0, 0) * v.d(0, 1, 1), u.d(0, 1, 0) * v.d(1, 0, 1)});

    TermScale t2;
    Cx e2 = t2.sum({v.d(1, 1, 1), -nu2 * u.d(1, 0, 1) * u.d(0, 1, 0), -nu2 * u.d(1, 0, 0) * u.d(0, 1, 1)});

    return {e1, e2, t1.scale(), t2.scale()};
}

RotationResult rotate_variables(Cx phi, Cx psi, Cx sigma, Cx nu, std::array<Cx, 3> XYT) {
    Cx s4 = sigma * sigma * sigma * sigma;
    require(std::abs(s4 - 1.0) <= 1e-12, errc::invalid_sigma, "sigma^4 must equal 1");
    require(std::abs(nu) > 0.0, errc::domain_error, "nu must be nonzero");
    RotationResult r;
    r.u = (phi + psi) / (2.0 * nu);
    r.v = I * (phi - psi) / 2.0;
    r.xyt = {sigma * XYT[0] + XYT[1], sigma * XYT[0] - XYT[1], XYT[2]};
    return r;
}

std::array<Cx, 2> rotate_fields_inverse(Cx u, Cx v, Cx nu) {
    // phi = nu u - i v, psi = nu u + i v
    return {nu * u - I * v, nu * u + I * v};
}

Cx indicial_det(Cx j, Cx nu) {
    Cx a11 = nu * j * j * (j - 3.0);
    Cx a12 = 2.0 * I * j * (j - 1.0);
    Cx a21 = 2.0 * nu * j * (j - 2.0);
    Cx a22 = I * j * (j - 1.0) * (j - 2.0);
    return a11 * a22 - a12 * a21;
}

std::vector<Cx> fuchs_indices(Cx nu, double snap_tol, double residual_tol) {
    require(std::abs(nu) > 0.0, errc::domain_error, "nu must be nonzero");

    // Coefficients of the degree-6 indicial polynomial recovered from point
    // values of the determinant by an exact inverse DFT on the 7th roots of
    // unity.
    constexpr int N = 7;
    std::array<Cx, N> vals;
    for (int k = 0; k < N; ++k) {
        Cx w = std::exp(Cx(0.0, 2.0 * M_PI * k / N));
        vals[static_cast<std::size_t>(k)] = indicial_det(w, nu);
    }
    std::array<Cx, N> coeff;
    for (int m = 0; m < N; ++m) {
        Cx acc{};
        for (int k = 0; k < N; ++k)
            acc += vals[static_cast<std::size_t>(k)] * std::exp(Cx(0.0, -2.0 * M_PI * k * m / N));
        coeff[static_cast<std::size_t>(m)] = acc / static_cast<double>(N);
    }

    Cx lead = coeff[6];
    require(std::abs(lead) > 0.0, errc::root_finding_failure, "vanishing leading coefficient");

    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(6, 6);
    for (int i = 1; i < 6; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < 6; ++i) comp(i, 5) = -coeff[static_cast<std::size_t>(i)] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, /*computeEigenvectors=*/false);
    require(es.info() == Eigen::Success, errc::root_finding_failure, "eigensolver failed");

    std::vector<Cx> roots(6);
    for (int i = 0; i < 6; ++i) {
        Cx r = es.eigenvalues()(i);
        // A defective multiple root is only located to O(sqrt(eps)) by the
        // eigensolver, so the snap window must be wider than that; the
        // residual gate below rejects any wrong snap.
        Cx snapped(std::round(r.real()) + 0.0, std::round(r.imag()) + 0.0);
        if (std::abs(r - snapped) < snap_tol) r = snapped;
        // Residual check relative to the polynomial's term scale at the root.
        Cx p{};
        double scale = 0.0, rp = 1.0;
        for (int m = 0; m <= 6; ++m) {
            Cx term = coeff[static_cast<std::size_t>(m)] * rp;
            p += term;
            scale = std::max(scale, std::abs(term));
            rp *= std::abs(r) > 1.0 ? std::abs(r) : 1.0;
        }
        scale = std::max(scale, std::abs(lead));
        require(std::abs(p) <= residual_tol * scale, errc::root_finding_failure,
                "root residual above tolerance");
        roots[static_cast<std::size_t>(i)] = r;
    }

    std::sort(roots.begin(), roots.end(), [](Cx a, Cx b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

std::array<Cx, 2> verify_leading_order(const LeadingFamily& fam, Cx nu) {
    require(std::abs(nu) > 0.0, errc::domain_error, "nu must be nonzero");

    // With a linear phi every term of both residuals carries phi^-3, so the
    // full jet residual *is* the dominant balance.
    const Cx c0{0.73, 0.21}, c1{1.12, -0.34}, c2{0.91, 0.27}, c3{1.31, -0.18};
    const Cx x0{0.25, 0.05}, y0{-0.15, 0.1}, t0{0.35, -0.07};

    Jet3 phi = Jet3::constant(c0, {x0, y0, t0}) + c1 * Jet3::var_x(x0, y0, t0) +
               c2 * Jet3::var_y(x0, y0, t0) + c3 * Jet3::var_t(x0, y0, t0) -
               Cx(x0 * c1 + y0 * c2 + t0 * c3);
    // phi value is c0 at the base point by construction above.

    FieldSample s;
    s.nu = nu;
    s.u = (fam.a / nu) * log(phi);
    s.v = fam.b * log(phi);
    PdeResidual r = pde_residual(s);

    // Normalise away the generic factor phi_x phi_y phi_t / phi^3.
    Cx norm = c1 * c2 * c3 / (c0 * c0 * c0);
    return {r.e1 / norm, r.e2 / norm};
}

FieldSample make_vinu_sample(const Jet3& u, Cx nu, int sign) {
    FieldSample s;
    s.u = u;
    s.v = (sign >= 0 ? I : -I) * nu * u;
    s.nu = nu;
    return s;
}

}  // namespace sgred
