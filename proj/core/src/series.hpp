#ifndef SGRED_SERIES_HPP
#define SGRED_SERIES_HPP

// Shared Taylor-coefficient tables for the elementary functions, used by all
// jet flavours.  table[k] = f^(k)(a0) / k!.

#include <vector>

#include "sgred/types.hpp"

namespace sgred::detail {

enum class Elem { exp, log, sqrt, recip, sin, cos, sinh, cosh };

// Throws DomainError when a0 is outside the domain of f; counts a branch
// warning when a0 sits near the principal cut of log/sqrt.
std::vector<Cx> taylor_table(Elem f, Cx a0, int n);

void count_branch_warning_if_near_cut(Cx a0);
long& branch_warning_counter();

}  // namespace sgred::detail

#endif
