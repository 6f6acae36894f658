#pragma once

#include <cstddef>
#include <vector>

#include "subdiv/laurent.hpp"

namespace subdiv {

struct SumRuleResult {
  /// Number of satisfied derivative levels (l + 1); 0 when normalization fails.
  int order = 0;
  /// a(1, ..., 1) == |m|^s.
  bool normalized = false;
  /// max |D^eta a(xi)| over the first failed level, 0 if none failed.
  double residual = 0.0;
};

/// Points of Xi \ {1}. Each point is a tuple of exponents k_j in {0..|m|-1}
/// standing for exp(-2 pi i k_j / |m|).
std::vector<std::vector<int>> coset_unit_roots(int m, std::size_t s);

/// Coefficients of the n-th cyclotomic polynomial, lowest degree first.
std::vector<Rational> cyclotomic_polynomial(int n);

/// True when sum_alpha c_alpha zeta^(<k, alpha>) vanishes, zeta = exp(-2 pi i/|m|).
/// Exact, via reduction modulo the |m|-th cyclotomic polynomial.
bool vanishes_at_root(const LaurentPoly& p, int m, const std::vector<int>& k);

SumRuleResult sum_rule_order(const LaurentPoly& p, int m);

/// Minimum over the polytope vertices. The conditions are affine in the
/// parameter, so this is also the minimum over the whole polytope.
SumRuleResult family_sum_rule_order(const ParamSymbol& ps, int m);

}  // namespace subdiv
