#pragma once

#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subdiv/rational.hpp"

namespace subdiv {

/// Integer exponent tuple in Z^s.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t dim, std::int64_t fill = 0) : v_(dim, fill) {}
  MultiIndex(std::initializer_list<std::int64_t> entries) : v_(entries) {}
  explicit MultiIndex(std::vector<std::int64_t> entries) : v_(std::move(entries)) {}

  std::size_t size() const noexcept { return v_.size(); }
  std::int64_t operator[](std::size_t i) const { return v_[i]; }
  std::int64_t& operator[](std::size_t i) { return v_[i]; }
  const std::vector<std::int64_t>& entries() const noexcept { return v_; }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  /// Sum of entries.
  std::int64_t total() const;

  MultiIndex operator+(const MultiIndex& o) const;
  MultiIndex operator-(const MultiIndex& o) const;
  MultiIndex scaled(std::int64_t k) const;

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  std::string to_string() const;

 private:
  std::vector<std::int64_t> v_;
};

/// Axis-aligned integer box [lo, hi] (inclusive).
struct IndexBox {
  MultiIndex lo;
  MultiIndex hi;

  std::size_t dim() const { return lo.size(); }
  /// hi - lo per coordinate.
  MultiIndex width() const { return hi - lo; }
  bool contains(const MultiIndex& a) const;
  friend bool operator==(const IndexBox&, const IndexBox&) = default;
};

/// Sparse multivariate Laurent polynomial with exact rational coefficients.
/// No stored coefficient is ever zero.
class LaurentPoly {
 public:
  using TermMap = std::map<MultiIndex, Rational>;

  explicit LaurentPoly(std::size_t dim = 1);
  LaurentPoly(std::size_t dim, TermMap terms);

  static LaurentPoly constant(std::size_t dim, const Rational& c);
  static LaurentPoly monomial(const MultiIndex& exponent, const Rational& c = 1);
  /// 1 + z_axis + ... + z_axis^(m-1).
  static LaurentPoly geometric_factor(std::size_t dim, std::size_t axis, int m);
  /// Univariate polynomial from dense coefficients starting at z^offset.
  static LaurentPoly univariate(std::span<const Rational> coeffs, std::int64_t offset = 0);

  std::size_t dim() const noexcept { return dim_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t term_count() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  Rational coeff(const MultiIndex& e) const;
  /// Adds c to the coefficient of z^e, dropping the term if it cancels.
  void add_term(const MultiIndex& e, const Rational& c);

  /// Tight exponent box of the stored terms. Throws EmptyMaskError on zero.
  IndexBox support() const;
  /// Sum over coordinates of the support width; 0 for constants.
  std::int64_t total_span() const;

  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(const Rational& c);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(LaurentPoly a, const Rational& c) { return a *= c; }
  friend LaurentPoly operator*(const Rational& c, LaurentPoly a) { return a *= c; }
  LaurentPoly operator-() const;
  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

  /// Multiplies by z^shift.
  LaurentPoly shifted(const MultiIndex& shift) const;

  /// Sum of all coefficients, i.e. the value at (1, ..., 1).
  Rational coefficient_sum() const;

  std::string to_string() const;

 private:
  void check_dim(const LaurentPoly& o) const;

  std::size_t dim_;
  TermMap terms_;
};

/// Value of p at z in (C \ {0})^s. Throws DomainError on a zero coordinate.
std::complex<double> evaluate(const LaurentPoly& p, std::span<const std::complex<double>> z);
std::complex<double> evaluate(const LaurentPoly& p, std::complex<double> z);

/// Formal partial derivative D^eta. Throws ArgumentError on negative orders.
LaurentPoly derivative(const LaurentPoly& p, const MultiIndex& eta);

/// Exact quotient num / den for univariate polynomials, or nullopt when the
/// division leaves a remainder.
std::optional<LaurentPoly> divide_exact(const LaurentPoly& num, const LaurentPoly& den);

/// Dense mask a_alpha over the box {0..N_1} x ... x {0..N_s}, together with the
/// offset that maps it back to symbol exponents (exponent = local + offset).
class Mask {
 public:
  Mask(MultiIndex offset, MultiIndex extents, std::vector<Rational> coeffs);

  std::size_t dim() const noexcept { return offset_.size(); }
  const MultiIndex& offset() const noexcept { return offset_; }
  /// Number of entries per coordinate (N_j + 1).
  const MultiIndex& extents() const noexcept { return extents_; }
  /// Per-coordinate support width N_j.
  MultiIndex width() const;
  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }

  /// Coefficient at a local (shift-normalized) index; zero outside the box.
  const Rational& at(const MultiIndex& local) const;
  /// Coefficient at a symbol exponent; zero outside the support.
  const Rational& at_exponent(const MultiIndex& exponent) const;

  std::size_t flat_index(const MultiIndex& local) const;
  MultiIndex local_index(std::size_t flat) const;

 private:
  MultiIndex offset_;
  MultiIndex extents_;
  std::vector<Rational> coeffs_;
};

Mask to_mask(const LaurentPoly& p);
LaurentPoly to_symbol(const Mask& m);

/// Affine symbol family a(z, w) = a_0(z) + sum_j w_j a_j(z) over a parameter
/// polytope given by its vertices.
class ParamSymbol {
 public:
  using Point = std::vector<Rational>;

  ParamSymbol(LaurentPoly base, std::vector<LaurentPoly> directions, std::vector<Point> domain);

  /// Single-vertex family holding one fixed symbol.
  static ParamSymbol stationary(const LaurentPoly& p);
  /// w a(z) + (1 - w) b(z) with w in [0, 1].
  static ParamSymbol convex_combination(const LaurentPoly& a, const LaurentPoly& b);

  std::size_t dim() const noexcept { return base_.dim(); }
  std::size_t parameter_count() const noexcept { return directions_.size(); }
  const LaurentPoly& base() const noexcept { return base_; }
  const std::vector<LaurentPoly>& directions() const noexcept { return directions_; }
  const std::vector<Point>& domain() const noexcept { return domain_; }
  std::size_t vertex_count() const noexcept { return domain_.size(); }

  /// base + sum_j w_j direction_j, exact. Throws DomainError when w is
  /// outside the polytope.
  LaurentPoly instantiate(std::span<const Rational> w) const;
  LaurentPoly instantiate_vertex(std::size_t i) const;

  /// Same family over a different vertex set (must lie in the current polytope).
  ParamSymbol with_domain(std::vector<Point> vertices) const;

  /// Empty when w is inside (tolerance 1e-12); otherwise a description of
  /// the violated facet(s).
  std::optional<std::string> domain_violation(std::span<const Rational> w) const;

 private:
  LaurentPoly base_;
  std::vector<LaurentPoly> directions_;
  std::vector<Point> domain_;
};

/// Convex weights t >= 0, sum t = 1, with sum_j t_j v_j closest to w
/// (non-negative least squares). The residual is returned alongside.
struct BarycentricWeights {
  std::vector<double> weights;
  double residual = 0.0;
};
BarycentricWeights barycentric_weights(std::span<const ParamSymbol::Point> vertices,
                                       std::span<const double> w);

/// Standard fixture symbols used across the tools and tests.
namespace symbols {
/// z^{-1}(1+z)^2/2 + w(-z^{-3} + z^{-1} + z - z^3) for w in [lo, hi].
ParamSymbol four_point(const Rational& lo, const Rational& hi);
/// -z^{-3}(z+1)^4(z^2 - 4z + 1)/16.
LaurentPoly four_point_symbol();
/// z^{-5}(z+1)^6(3z^4 - 18z^3 + 38z^2 - 18z + 3)/256.
LaurentPoly dd6_symbol();
/// (1+z1)(1+z2)(1+z1 z2)/2 and the butterfly correction c(z1, z2).
LaurentPoly box_spline_three_direction();
LaurentPoly butterfly_correction();
ParamSymbol butterfly(const Rational& lo, const Rational& hi);
}  // namespace symbols

}  // namespace subdiv
