#ifndef SGRED_TYPES_HPP
#define SGRED_TYPES_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sgred {

using Cx = std::complex<double>;

inline constexpr Cx I{0.0, 1.0};

// Absolute floor below which a jet constant term counts as singular.
inline constexpr double kEpsSing = 1e-14;
// Exclusion radius around fixed coefficient poles (coth, 1/xi).
inline constexpr double kEpsPole = 1e-8;

enum class errc {
    division_by_singular_jet,
    domain_error,
    degenerate_jet,
    invalid_sigma,
    root_finding_failure,
    singular_point,
    singular_locus,
    singular_value,
    coefficient_pole,
    guard_violation,
    branch_ambiguity,
    constraint_unsatisfiable,
    degenerate_time_functions,
    missing_antiderivative,
    zero_wronskian,
    pole_at_sample,
    chain_rule_singularity,
    step_size_underflow,
    tolerance_not_met,
    out_of_range,
    config_error,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    errc code() const { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
    if (!cond) fail(code, what);
}

inline bool is_finite(Cx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Residual value together with the magnitude of the largest additive term of
// the defining expression.  Tolerance comparisons are made on rel().
struct Residual {
    Cx value{0.0, 0.0};
    double scale = 0.0;

    double rel() const {
        double s = scale > 1.0 ? scale : 1.0;
        return std::abs(value) / s;
    }
};

// Accumulates max |term| while an expression is summed up.
class TermScale {
  public:
    void add(Cx term) {
        double a = std::abs(term);
        if (a > scale_) scale_ = a;
    }
    Cx sum(std::initializer_list<Cx> terms) {
        Cx total{0.0, 0.0};
        for (Cx t : terms) {
            add(t);
            total += t;
        }
        return total;
    }
    double scale() const { return scale_; }

  private:
    double scale_ = 0.0;
};

// Deterministic, platform-independent random source (splitmix64).  Seeds fully
// determine every pseudo-random sample used by tests, the CLI and reports.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform over the square [-r, r]^2 in the complex plane.
    Cx box(double r = 1.0) { return Cx(uniform(-r, r), uniform(-r, r)); }

    // As box(), but bounded away from zero.
    Cx box_away_from_zero(double r = 1.0, double min_abs = 0.1) {
        for (;;) {
            Cx z = box(r);
            if (std::abs(z) >= min_abs) return z;
        }
    }

  private:
    std::uint64_t state_;
};

}  // namespace sgred

#endif
