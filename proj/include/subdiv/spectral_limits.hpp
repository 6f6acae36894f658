#pragma once

#include <complex>
#include <string>
#include <vector>

#include "subdiv/laurent.hpp"

namespace subdiv {

/// Gamma_r = { b + k m^r : b in base_points, k in Z }.
struct PeriodicZeroSet {
  int level = 0;
  std::vector<std::complex<double>> base_points;
  double period = 1.0;

  bool contains(std::complex<double> w, double tol = 1e-6) const;
  /// Members with |Re| <= window and |Im| <= window.
  std::vector<std::complex<double>> points_in_window(double window) const;
};

/// Roots of sum_k c_k z^k (lowest degree first) by companion eigenvalues and
/// Newton polish. Leading/trailing zeros are stripped; z = 0 is never returned.
std::vector<std::complex<double>> polynomial_roots(std::vector<std::complex<double>> coeffs);

/// Zero set of p(exp(-2 pi i w / m^r)); base points on the principal branch,
/// real part in (-m^r/2, m^r/2].
PeriodicZeroSet gamma_set(const LaurentPoly& p, int r, int m);
/// Same for complex coefficients c_k of z^{offset + k}.
PeriodicZeroSet gamma_set(const std::vector<std::complex<double>>& coeffs, int r, int m);

struct ZeroUnion {
  std::vector<PeriodicZeroSet> levels;
  /// Deduplicated members inside the window, sorted by (Re, Im).
  std::vector<std::complex<double>> window_points;
  std::string truncation_note;
};

/// symbols[i] is the level (start_level + i) symbol, given by complex coefficients
/// starting at z^0.
ZeroUnion phi_hat_zero_union(const std::vector<std::vector<std::complex<double>>>& symbols, int m,
                             double window, int start_level = 1);
ZeroUnion phi_hat_zero_union(const std::vector<LaurentPoly>& symbols, int m, double window,
                             int start_level = 1);

struct GenerabilityVerdict {
  enum class Kind { consistent, violation, inconclusive };
  Kind kind = Kind::consistent;
  std::vector<std::complex<double>> witnesses;
  std::size_t tested = 0;
  int r_max = 0;
  std::string message;
};

/// Necessary condition: every tested zero w needs some r <= r_max with both
/// w + m^r and w - m^r in the list. r_max <= 0 selects the largest r with
/// m^r <= window.
GenerabilityVerdict generability_necessary_test(const std::vector<std::complex<double>>& zeros, int m,
                                                double window, int r_max = 0);

/// First `count` positive zeros of J_0 (series evaluation and bisection).
std::vector<double> bessel_j0_zeros(int count);

}  // namespace subdiv
