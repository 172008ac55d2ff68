#ifndef SGRED_REDUCTIONS_HPP
#define SGRED_REDUCTIONS_HPP

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgred/jet1.hpp"
#include "sgred/jet2.hpp"
#include "sgred/jet3.hpp"
#include "sgred/reduced_systems.hpp"
#include "sgred/sg2d.hpp"
#include "sgred/types.hpp"

namespace sgred {

// Closed-form reduction variables (xi, u-coefficient, v-coefficient) for every
// admissible case, the seven-equation admissibility system they satisfy, the
// d'Alembert transform table, and the wronskian-zero F/G systems.

// Complex-coefficient polynomial in t.  Keeping the time profiles polynomial
// makes every printed derivative exact in jets; transcendental profiles enter
// as Taylor surrogates on bounded windows.
class Poly {
  public:
    Poly() = default;
    explicit Poly(std::vector<Cx> coeffs) : c_(std::move(coeffs)) {}
    static Poly taylor_exp(int degree);  // surrogate of e^t

    int degree() const { return c_.empty() ? 0 : static_cast<int>(c_.size()) - 1; }
    const std::vector<Cx>& coeffs() const { return c_; }
    bool is_zero() const;

    Cx operator()(Cx t) const;
    Poly derivative() const;
    Jet1 jet(Cx t, int order) const;

  private:
    std::vector<Cx> c_;
};

// Named univariate time profiles (lambda1..3, h0..2, farb) with case-specific
// nondegeneracy checked by build_reduction.
struct TimeFunctions {
    std::map<std::string, Poly> fn;

    const Poly& get(const std::string& name) const;
    bool has(const std::string& name) const { return fn.count(name) != 0; }
};

enum class ReductionCaseSpec {
    generic_full,   // tri family, arbitrary (lambda1, lambda2, lambda3)
    generic_example,  // tri family, (lambda1, lambda2, lambda3) = (0, t, t)
    rational,       // rat family, (h1, h2)
    exp_k5,         // exp family, lambda3' != 0, K5 != 0 (admissibility fails eq 7)
    exp_k5zero,     // exp family, lambda3' != 0, K5 = 0
    zer,            // zer family, h0' != 0, K5 != 0
    zer_k5zero,     // zer family, h0' != 0, K5 = 0
};

const char* case_spec_name(ReductionCaseSpec s);
ReductionCaseSpec case_spec_from_name(const std::string& name);

// Whether the printed v-coefficient block is the coefficient itself or its
// t-antiderivative (the term added to v).  Differs between the printed cases;
// resolved numerically against the admissibility system.
enum class VSlotKind { direct, antiderivative };

// Gradient data of the v-coefficient at a point (all that the admissibility
// system and the PDE residual ever need from it).
struct VGrad {
    Cx v, vx, vy, vxy;
};

struct BuildOptions {
    Cx C1{}, C2{};                      // zer h1 closure constants
    bool generic_example_y_plus_2t = false;  // keep the (y+2t) reading of the example
    bool exp_du_printed_lambda2 = false;     // keep the un-primed lambda2 in the exp u-coefficient
    double constraint_tol = 1e-10;
};

class ReductionVariables {
  public:
    ReductionCaseSpec spec() const { return spec_; }
    ReducedCase ode_case() const { return ode_case_; }
    const ReducedConstants& constants() const { return constants_; }
    VSlotKind vslot_kind() const { return vslot_kind_; }
    const std::vector<std::string>& constraints() const { return constraints_; }

    Jet3 xi(Cx x, Cx y, Cx t) const;
    Jet3 uu(Cx x, Cx y, Cx t) const;
    // Raw jet of the printed v-slot (meaning depends on vslot_kind()).
    Jet3 vslot(Cx x, Cx y, Cx t) const;
    VGrad v_grad(Cx x, Cx y, Cx t) const;
    // The t-antiderivative of the v-coefficient; MissingAntiderivative when
    // the printed block only defines the coefficient itself.
    Cx v_antiderivative(Cx x, Cx y, Cx t) const;

    // Diagnostic for the generic_full numeric closure: the c1 value solved
    // from admissibility equation 7 at a point.
    std::optional<Cx> c1_at(Cx x, Cx y, Cx t) const;

  private:
    friend ReductionVariables build_reduction(ReductionCaseSpec, const TimeFunctions&,
                                              const ReducedConstants&, const BuildOptions&);
    ReductionCaseSpec spec_;
    ReducedCase ode_case_;
    ReducedConstants constants_;
    VSlotKind vslot_kind_ = VSlotKind::direct;
    std::vector<std::string> constraints_;
    TimeFunctions tf_;
    BuildOptions opt_;

    Jet3 vslot_parts(Cx x, Cx y, Cx t, bool with_c1) const;
    Jet3 c1_term(Cx x, Cx y, Cx t) const;
};

ReductionVariables build_reduction(ReductionCaseSpec spec, const TimeFunctions& tf,
                                   const ReducedConstants& c, const BuildOptions& opt = {});

// The seven printed admissibility residuals at a point, coefficients taken
// from the (untranslated) coefficient family of the attached case.
std::array<Residual, 7> admissibility_residuals(const ReductionVariables& rv, Cx x, Cx y, Cx t);

// Differences between the direct jets of the u/v coefficients and the printed
// gradient formulas; ZeroWronskian when xi_x xi_yt - xi_y xi_xt vanishes.
std::array<Residual, 4> gradient_consistency(const ReductionVariables& rv, Cx x, Cx y, Cx t);

// Local data of a reduced-system solution at one xi, for field reconstruction.
struct LocalOdeState {
    Cx up{}, upp{}, uppp{}, vp{}, vpp{}, vppp{};
};
using StateProvider = std::function<LocalOdeState(Cx xi0)>;

// u = U(xi) + uu/nu and v = V(xi) + integral(v-coefficient) assembled as jets
// at a grid point; value slots of U, V are pinned to zero (they never enter
// the PDE residuals).
FieldSample reconstruct_fields(const ReductionVariables& rv, const StateProvider& sp, Cx x, Cx y,
                               Cx t);

// Provider backed by integrating the attached reduced system from one base
// state (given in the untranslated variables at base.xi).  For tri/rat the
// K7-translation to the printed system is applied internally.
StateProvider make_ode_state_provider(const ReductionVariables& rv, const ReducedState& base,
                                      double tol = 1e-12);

// Composition of a univariate Taylor table with a value-free Jet3 increment.
Jet3 compose(const Jet1& outer, const Jet3& increment);

// d'Alembert transform row for one coefficient family: Z_xy = 0 and
// [psi(Z)]_xyt = 0 with xi = f(Z).
struct DAlembertPair {
    ReducedCase cs;
    Cx k{1.0, 0.0};
    Jet1 f(Cx Z, int order) const;
    Jet1 psi(Cx Z, int order) const;
};

DAlembertPair dalembert_pair(ReducedCase cs, Cx k = Cx{1.0, 0.0});
// Verifier hooks: f'' - f1(f) f'^2 and psi''' - 2 (f''/f') psi''.
Residual dalembert_f_residual(const DAlembertPair& p, Cx Z);
Residual dalembert_psi_residual(const DAlembertPair& p, Cx Z);

// a(x,t) = lambda1 + lambda2/(x - lambda3), b(y,t) = -lambda1 - lambda2/(y - lambda3):
// the five-arbitrary-function solution of [log(a+b)]_xyt = 0 with the three
// printed constraints baked in and f(x) = x, g(y) = y by conformal invariance.
struct ABPair {
    Poly l1, l2, l3;
    Jet2 a(Cx x, Cx t, int order_x, int order_t) const;
    Jet2 b(Cx y, Cx t, int order_x, int order_t) const;
    Jet3 a3(Cx x, Cx y, Cx t) const;
    Jet3 b3(Cx x, Cx y, Cx t) const;
};

ABPair appendixB_ab(const TimeFunctions& tf);
// ({a; x})_t at a sample (exact, via (3,1) jets).
Cx ab_schwarzian_t(const ABPair& ab, char which, Cx xy, Cx t);
Residual ab_logab_xyt(const ABPair& ab, Cx x, Cx y, Cx t);

// Wronskian-zero branches: F(p,t), G(p,t) systems.
enum class FGVariant { exp_, zer };

struct FGState {
    std::function<Jet2(Cx p, Cx t)> F;  // orders at least (2,1)
    std::function<Jet2(Cx p, Cx t)> G;
    Cx k{1.0, 0.0}, K6{}, K7{};
    Poly lambda2;  // exp variant only
};

std::array<Residual, 2> fg_residuals(const FGState& st, FGVariant variant, Cx p, Cx t);

// (k K7 + i K6)(2 k K7 + i K6); zero signals an admissible truncation.
Cx truncation_constraint(Cx K6, Cx K7, Cx k);

// Particular solutions of the F/G systems, for the verification suites.
// Elliptic-reduction fixture F(p,t) = F_r(p - lambda2^2) for the exp variant,
// built from the Taylor recursion of the reduced profile around q0.
FGState fg_elliptic_fixture(Cx k, Cx K6, Cx K7, const Poly& lambda2, Cx q0, Cx w0, Cx w1, Cx c0,
                            int series_order = 18);
// Truncation solution F = i log(phi) - (i/2) log(phi_p); branch selects which
// factor of the truncation constraint vanishes (1: k K7 + i K6, 2: 2 k K7 + i K6).
FGState fg_truncation_fixture(Cx k, Cx K7, int branch, const Poly& lambda2, Cx rho0);

}  // namespace sgred

#endif
