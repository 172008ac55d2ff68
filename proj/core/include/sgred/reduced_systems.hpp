#ifndef SGRED_REDUCED_SYSTEMS_HPP
#define SGRED_REDUCED_SYSTEMS_HPP

#include <utility>
#include <vector>

#include "sgred/jet1.hpp"
#include "sgred/types.hpp"

namespace sgred {

// The four reduced third-order ODE systems obtained from the sine-Gordon
// system (trigonometric, rational, exponential and zero coefficient families),
// their polynomial first integrals K2 and K4, and the no-logarithm conditions
// their coefficients satisfy.

enum class ReducedCase { tri, rat, exp_, zer };

const char* case_name(ReducedCase c);
ReducedCase case_from_name(const std::string& name);

struct ReducedConstants {
    Cx nu{1.0, 0.0};
    Cx k{1.0, 0.0};
    Cx K2{}, K4{}, K5{}, K6{}, K7{};
};

// (xi; U', U'', V', V'') phase point.
struct ReducedState {
    Cx xi{}, up{}, upp{}, vp{}, vpp{};
};

// Fixed normalisation of the qualitative system: coefficients of U'U'' and
// U'V'' set to one, f2 = f3 = f4 = 0.
struct GaugeChoice {
    Cx c_u{1.0, 0.0};
    Cx c_v{1.0, 0.0};
    Cx f2{}, f3{}, f4{};
};

// Closed-form coefficient functions f1, g3, g5, f5, f6, g6 of xi for one of
// the four no-log families.  For tri and rat the translation of V' that
// removes K7 is applied by default (keep_k7 = false); pass keep_k7 = true to
// evaluate the untranslated family.
class CoefficientFamily {
  public:
    CoefficientFamily(ReducedCase cs, const ReducedConstants& c, bool keep_k7 = false);

    ReducedCase reduced_case() const { return case_; }
    const ReducedConstants& constants() const { return c_; }
    Cx effective_k7() const;

    Jet1 f1(Cx xi, int order) const;
    Jet1 g3(Cx xi, int order) const;
    Jet1 g5(Cx xi, int order) const;
    Jet1 f5(Cx xi, int order) const;
    Jet1 f6(Cx xi, int order) const;
    Jet1 g6(Cx xi, int order) const;

  private:
    Jet1 xi_jet(Cx xi, int order) const;
    ReducedCase case_;
    ReducedConstants c_;
    bool keep_k7_;
};

CoefficientFamily coefficient_family(ReducedCase cs, const ReducedConstants& c,
                                     bool keep_k7 = false);

// The three non-trivially-vanishing no-log conditions at xi for one sign of i
// (branch = +1 or -1):
//   Q2  = (g3 - f1') +- i g5
//   Q4a = (f1'' + 2 f1 f1') +- i (f5' + 2 f1 f5)
//   Q4b = (g6' + 2 f1 g6 - f5^2/2) +- i (f6' + 2 f1 f6 + f5 f1'/2)
struct NologResiduals {
    Residual Q2, Q4a, Q4b;
};
NologResiduals nolog_residuals(const CoefficientFamily& fam, Cx xi, int branch);

// Third derivatives (U''', V''') solved from the printed reduced systems.
// For tri and rat these are the K7-translated systems; constants().K7 is
// ignored there.  Throws SingularPoint within eps_pole of a coefficient pole.
std::pair<Cx, Cx> reduced_rhs(ReducedCase cs, const ReducedConstants& c, const ReducedState& s,
                              double eps_pole = kEpsPole);

// Same right-hand side driven by an explicit coefficient family; agrees with
// reduced_rhs for the default families and extends tri/rat to K7 != 0.
std::pair<Cx, Cx> family_rhs(const CoefficientFamily& fam, const ReducedState& s,
                             double eps_pole = kEpsPole);

std::pair<Cx, Cx> first_integrals(ReducedCase cs, const ReducedConstants& c,
                                  const ReducedState& s, double eps_pole = kEpsPole);
std::pair<Residual, Residual> first_integrals_scaled(ReducedCase cs, const ReducedConstants& c,
                                                     const ReducedState& s,
                                                     double eps_pole = kEpsPole);

// Rewrites constants and a state of the untranslated (K7 != 0) tri/rat family
// into the printed K7 = 0 system: K6 -> K6 - 2 K5 K7, V' -> V' + 2 K7.
ReducedConstants translate_constants_k7zero(ReducedCase cs, const ReducedConstants& c);
ReducedState translate_state_k7zero(ReducedCase cs, const ReducedConstants& c,
                                    const ReducedState& s);

// Local Taylor expansion of a solution through (xi0, s): returns jets of
// (U', U'', V', V'') in xi to the requested order, built by the recursion the
// reduced system itself imposes.  keep_k7 selects the family-driven system.
struct StateJets {
    Jet1 up, upp, vp, vpp;
};
StateJets taylor_state(ReducedCase cs, const ReducedConstants& c, const ReducedState& s,
                       int order, bool keep_k7 = false);

// All monomials in (U'', V'', U', V') of the given singularity weight, where
// U'' and V'' weigh two and U', V' weigh one; ordered lexicographically in the
// exponent tuple.
struct IntegralMonomial {
    int upp, vpp, up, vp;
};
std::vector<IntegralMonomial> integral_monomials(int weight);

// The first-order quartic relation of the zer system with K5 = K7 = 0.
// `corrected` uses K2^2 where the printed relation has K2 (the elimination
// of V'' between the printed K2 and K4 yields K2^2).
enum class EllipticVariant { as_printed, corrected };
Residual elliptic_relation(const ReducedConstants& c, const ReducedState& s,
                           EllipticVariant variant);

}  // namespace sgred

#endif
