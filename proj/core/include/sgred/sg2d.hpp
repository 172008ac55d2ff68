#ifndef SGRED_SG2D_HPP
#define SGRED_SG2D_HPP

#include <array>
#include <vector>

#include "sgred/jet3.hpp"
#include "sgred/types.hpp"

namespace sgred {

// The coupled two-dimensional sine-Gordon system for (u, v):
//   E1 = u_xyt + u_x v_yt + u_y v_xt
//   E2 = v_xyt - nu^2 (u_xt u_y + u_x u_yt)
// together with the rotation from the (phi, psi, X, Y, T) form and the Fuchs
// indicial analysis of its movable logarithmic singularities.

struct FieldSample {
    Jet3 u;
    Jet3 v;
    Cx nu{1.0, 0.0};
};

// (a, b) residues of grad u * nu and grad v at a movable singular manifold;
// the admissible families are (i, 1) and (-i, 1).
struct LeadingFamily {
    Cx a;
    Cx b;
};

struct PdeResidual {
    Cx e1, e2;
    double scale1, scale2;
};

// Both PDE residuals at the shared base point of u and v.  Only derivative
// components of the jets are read; the value slots never enter.
PdeResidual pde_residual(const FieldSample& s);

struct RotationResult {
    Cx u, v;
    std::array<Cx, 3> xyt;  // x = sigma X + Y, y = sigma X - Y, t = T
};

// The linear change of fields and coordinates with sigma^4 = 1.
RotationResult rotate_variables(Cx phi, Cx psi, Cx sigma, Cx nu, std::array<Cx, 3> XYT);
// Inverse field map (u, v) -> (phi, psi).
std::array<Cx, 2> rotate_fields_inverse(Cx u, Cx v, Cx nu);

// Determinant of the 2x2 indicial matrix
//   [ nu j^2 (j-3)    2 i j (j-1)      ]
//   [ 2 nu j (j-2)    i j (j-1) (j-2)  ]
Cx indicial_det(Cx j, Cx nu);

// The six roots of indicial_det(., nu) with multiplicity, via companion-matrix
// eigenvalues of the degree-6 polynomial, snapped to integers within snap_tol.
// The default snap window accommodates the O(sqrt(eps)) eigenvalue error at
// the double root; a wrong snap is caught by the residual gate.  Throws
// RootFindingFailure if a reported root leaves a residual above residual_tol
// (relative to the polynomial's term scale).
std::vector<Cx> fuchs_indices(Cx nu, double snap_tol = 1e-6, double residual_tol = 1e-9);

// Residual pair of the dominant (singularity degree three) balance of the
// system under u ~ (a/nu) log phi, v ~ b log phi with a generic linear phi.
// Zero exactly when (a, b) is one of the two admissible families.
std::array<Cx, 2> verify_leading_order(const LeadingFamily& fam, Cx nu);

// Test-data generator for the one-line reduction v = +/- i nu u noted along
// with the system; not an operation of its own.
FieldSample make_vinu_sample(const Jet3& u, Cx nu, int sign);

}  // namespace sgred

#endif
