#include "series.hpp"

#include <cmath>

namespace sgred::detail {

long& branch_warning_counter() {
    thread_local long n = 0;
    return n;
}

void count_branch_warning_if_near_cut(Cx a0) {
    // Principal branch: the cut sits on the negative real axis.
    constexpr double margin = 1e-6;
    if (std::abs(std::arg(a0)) > M_PI - margin) ++branch_warning_counter();
}

std::vector<Cx> taylor_table(Elem f, Cx a0, int n) {
    std::vector<Cx> d(static_cast<std::size_t>(n) + 1);
    switch (f) {
        case Elem::exp: {
            Cx e = std::exp(a0);
            Cx fact = 1.0;
            for (int k = 0; k <= n; ++k) {
                d[k] = e / fact;
                fact *= static_cast<double>(k + 1);
            }
            break;
        }
        case Elem::log: {
            require(std::abs(a0) > 0.0, errc::domain_error, "log of zero constant term");
            count_branch_warning_if_near_cut(a0);
            d[0] = std::log(a0);
            Cx p = 1.0;  // (-1)^(k+1) / (k a0^k) accumulated below
            for (int k = 1; k <= n; ++k) {
                p /= a0;
                d[k] = ((k % 2 == 1) ? 1.0 : -1.0) * p / static_cast<double>(k);
            }
            break;
        }
        case Elem::sqrt: {
            require(std::abs(a0) > 0.0, errc::domain_error, "sqrt of zero constant term");
            count_branch_warning_if_near_cut(a0);
            Cx r = std::sqrt(a0);
            // binom(1/2, k) a0^(1/2 - k)
            Cx coeff = r;
            d[0] = coeff;
            for (int k = 1; k <= n; ++k) {
                coeff *= (0.5 - static_cast<double>(k - 1)) / static_cast<double>(k);
                coeff /= a0;
                d[k] = coeff;
            }
            break;
        }
        case Elem::recip: {
            require(std::abs(a0) > 0.0, errc::domain_error, "reciprocal of zero constant term");
            Cx p = 1.0 / a0;
            for (int k = 0; k <= n; ++k) {
                d[k] = ((k % 2 == 0) ? 1.0 : -1.0) * p;
                p /= a0;
            }
            break;
        }
        case Elem::sin: {
            Cx s = std::sin(a0), c = std::cos(a0);
            Cx fact = 1.0;
            for (int k = 0; k <= n; ++k) {
                switch (k % 4) {
                    case 0: d[k] = s; break;
                    case 1: d[k] = c; break;
                    case 2: d[k] = -s; break;
                    default: d[k] = -c; break;
                }
                d[k] /= fact;
                fact *= static_cast<double>(k + 1);
            }
            break;
        }
        case Elem::cos: {
            Cx s = std::sin(a0), c = std::cos(a0);
            Cx fact = 1.0;
            for (int k = 0; k <= n; ++k) {
                switch (k % 4) {
                    case 0: d[k] = c; break;
                    case 1: d[k] = -s; break;
                    case 2: d[k] = -c; break;
                    default: d[k] = s; break;
                }
                d[k] /= fact;
                fact *= static_cast<double>(k + 1);
            }
            break;
        }
        case Elem::sinh: {
            Cx s = std::sinh(a0), c = std::cosh(a0);
            Cx fact = 1.0;
            for (int k = 0; k <= n; ++k) {
                d[k] = (k % 2 == 0 ? s : c) / fact;
                fact *= static_cast<double>(k + 1);
            }
            break;
        }
        case Elem::cosh: {
            Cx s = std::sinh(a0), c = std::cosh(a0);
            Cx fact = 1.0;
            for (int k = 0; k <= n; ++k) {
                d[k] = (k % 2 == 0 ? c : s) / fact;
                fact *= static_cast<double>(k + 1);
            }
            break;
        }
    }
    return d;
}

}  // namespace sgred::detail
