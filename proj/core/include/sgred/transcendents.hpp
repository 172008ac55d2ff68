#ifndef SGRED_TRANSCENDENTS_HPP
#define SGRED_TRANSCENDENTS_HPP

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "sgred/jet1.hpp"
#include "sgred/reduced_systems.hpp"
#include "sgred/types.hpp"

namespace sgred {

// Residual evaluators for the Painleve equations II-VI in canonical (Gambier)
// form and for the second-order second-degree Chazy equations, plus the maps
// sending reduced-system constants onto their parameters (documented in
// docs/equations.md).

enum class ChazyKind { CVI, CVa, CVb, CIII, CIV };
enum class PainleveKind { PII, PIII, PIV, PV, PVI };
enum class FviChoice { tan_sin, icoth_cosh };

const char* chazy_name(ChazyKind k);
const char* painleve_name(PainleveKind k);

struct ChazyParams {
    ChazyKind kind = ChazyKind::CVI;
    Cx d1{}, d2{}, d3{}, d4{};
    FviChoice fvi_choice = FviChoice::icoth_cosh;  // only read for CVI
};

struct PainleveParams {
    PainleveKind kind = PainleveKind::PII;
    Cx alpha{}, beta{}, gamma{}, delta{};
};

// Coefficients q4..q0 of the quartic q4 u'^2-free elliptic relation
//   q4 U'^4 + q2 U'^2 + q1 U' + q0 + qd U''^2 = 0 written on (U', U'').
struct EllipticQuartic {
    Cx qd{}, q4{}, q2{}, q1{}, q0{};
};

// Residual of the printed Chazy equation at x for a jet carrying (u, u', u'').
Residual chazy_residual(const ChazyParams& p, const Jet1& u, Cx x);
// Residual of the canonical Painleve equation (u'' minus its right-hand side).
Residual painleve_residual(const PainleveParams& p, const Jet1& u, Cx x);

// The three defining residuals of the (f_VI, g_VI) pair:
//   r1 = f'^2 - (f^2+1)^2,  r2 = g'^2 - (1-g^2),  r3 = (f^2+1)(g^2-1) + 1.
std::array<Cx, 3> fvi_gvi_residuals(const Jet1& f, const Jet1& g);

// Coefficient functions of CVI for either admissible pair.
Jet1 fvi(FviChoice choice, Cx x, int order);
Jet1 gvi(FviChoice choice, Cx x, int order);

// Target of one of the nine integration cases, with enough map data to pull a
// reduced trajectory back onto the target equation.
struct MappedODE {
    int case_id = 0;
    ReducedCase source_case = ReducedCase::tri;
    ReducedConstants constants;
    std::variant<ChazyParams, PainleveParams, EllipticQuartic> target;
    // Recorded root choices (principal branch unless flagged).
    Cx r{}, lambda{}, mu{}, k0{};
    std::string branch_note;

    // u(x) as a jet of order 2 built from one trajectory sample by the chain
    // rule through x(xi); ChainRuleSingularity when dx/dxi degenerates.
    Jet1 pullback_u(const ReducedState& s, Cx uppp) const;
    Cx x_of_xi(Cx xi) const;
    Jet1 x_jet(Cx xi, int order) const;
    // Residual of the target equation at one sample.
    Residual target_residual(const ReducedState& s, Cx uppp) const;
};

// The printed parameter map for case_id in 1..9 (case 9 is the explicitly
// flagged autonomous route).  Guards as printed; GuardViolation otherwise.
MappedODE param_map(int case_id, const ReducedConstants& c, bool autonomous_flag = false);

// Which of cases 1..8 the constants select for a given reduced case.
int which_case(ReducedCase cs, const ReducedConstants& c);

// Residuals of the target equation along a trajectory (one per sample).
// Samples must be consistent with c: the first sample's printed integrals are
// checked against c.K2, c.K4 at 1e-8 relative.
struct PullbackSample {
    ReducedState state;
    Cx uppp{};
};
std::vector<double> pullback_check(const MappedODE& map, const std::vector<PullbackSample>& tr);

// Change of Jet1 independent variable: given u(xi) and x(xi) (order >= 2,
// dx/dxi nonzero), the jet of u as a function of x.
Jet1 recompose(const Jet1& u_of_xi, const Jet1& x_of_xi, double eps_sing = kEpsSing);

}  // namespace sgred

#endif
