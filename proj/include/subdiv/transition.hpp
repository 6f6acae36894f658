#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subdiv/laurent.hpp"

namespace subdiv {

/// Coset representative with entries in {0..|m|-1}.
using CosetIndex = MultiIndex;

/// All |m|^s coset representatives, last coordinate fastest.
std::vector<CosetIndex> cosets(int m, std::size_t s);

/// Dense exact matrix, row-major.
struct RationalMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> data;

  RationalMatrix() = default;
  RationalMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}
  Rational& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  Eigen::MatrixXd to_double() const;
  RationalMatrix transpose() const;
  friend bool operator==(const RationalMatrix&, const RationalMatrix&) = default;
};

/// Row/column index set for the transition matrices.
struct IndexWindow {
  std::vector<MultiIndex> points;

  std::size_t size() const { return points.size(); }
  /// Position of a point, or size() when absent.
  std::size_t find(const MultiIndex& a) const;
};

/// Integer points of [ceil(-|m|/(|m|-1)), floor((N_j+1)/(|m|-1))] per coordinate,
/// N_j the support width of the shift-normalized mask.
IndexWindow index_window(const MultiIndex& support_width, int m);

/// True when every column index beta in the window only reaches rows alpha
/// (a_{m alpha + eps - beta} != 0) that are again in the window.
bool window_is_invariant(const Mask& mask, int m, const IndexWindow& w);

/// index_window for the mask, grown by closure if the box is not invariant.
IndexWindow invariant_window(const Mask& mask, int m);

/// (a_{m alpha + eps - beta})_{alpha, beta in window}, rows indexed by alpha.
/// Mask indices are local (shift-normalized).
RationalMatrix full_matrix(const Mask& mask, int m, const CosetIndex& eps, const IndexWindow& w);

/// Restricted matrices at every polytope vertex for every coset.
struct TransitionFamily {
  int m = 2;
  int ell = 0;
  std::size_t dim_V = 0;
  std::vector<ParamSymbol::Point> vertices;
  std::vector<CosetIndex> coset_list;
  /// matrices[v][e]
  std::vector<std::vector<Eigen::MatrixXd>> matrices;
  /// Exact versions (univariate path only).
  std::vector<std::vector<RationalMatrix>> exact;
  /// Columns span V_l inside R^|K| (multivariate path only).
  Eigen::MatrixXd basis;
  IndexWindow window;
  /// Univariate path: the quotient action on the complement of the core
  /// window inside the full K-window. The family is block triangular, so
  /// its JSR is the max over core and boundary.
  std::size_t boundary_dim = 0;
  std::vector<std::vector<Eigen::MatrixXd>> boundary;
  std::vector<std::vector<RationalMatrix>> boundary_exact;
  /// Largest invariance residual (multivariate path).
  double invariance_residual = 0.0;

  std::vector<Eigen::MatrixXd> members() const;
  std::vector<Eigen::MatrixXd> boundary_members() const;
  static std::string key(std::size_t vertex, std::size_t coset);
};

/// b = a / (1 + z + ... + z^{|m|-1})^{l+1} at every vertex, assembled over the
/// minimal invariant window. Throws NotEnoughSumRulesError on inexact division.
TransitionFamily restrict_univariate(const ParamSymbol& ps, int m, int ell);

/// Generic construction: null space of the polynomial evaluation matrix on K.
TransitionFamily restrict_multivariate(const ParamSymbol& ps, int m, int ell);

/// Univariate path for s = 1, generic path otherwise.
TransitionFamily restrict_family(const ParamSymbol& ps, int m, int ell);

/// Common shift-normalized masks of all vertices (shared offset).
std::vector<Mask> vertex_masks(const ParamSymbol& ps);

}  // namespace subdiv
