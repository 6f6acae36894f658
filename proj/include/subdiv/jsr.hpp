#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace subdiv {

struct TransitionFamily;

using MatrixFamily = std::vector<Eigen::MatrixXd>;

/// Norm in which every member has operator norm <= value.
struct NormCertificate {
  enum class Kind { none, infinity, one, spectral, scaled_infinity, scaled_one, ellipsoid };
  Kind kind = Kind::none;
  /// Diagonal scaling d: |x| = |diag(d)^{-1} x| (infinity) or |diag(d) x| (one).
  Eigen::VectorXd scaling;
  /// Ellipsoid P = L L^T, |x| = |L^T x|_2.
  Eigen::MatrixXd ellipsoid;
  /// max_i |A_i| in this norm (unscaled family).
  double value = 0.0;

  std::string describe() const;
};

struct JsrBounds {
  double lower = 0.0;
  double upper = 0.0;
  /// Word (indices into the family) whose averaged spectral radius is `lower`.
  /// Product order: A_{w_k} ... A_{w_1}.
  std::vector<std::size_t> witness;
  NormCertificate certificate;
  /// Longest word explored.
  int max_depth = 0;
  std::size_t nodes = 0;
  bool converged = false;
};

struct JsrOptions {
  int depth = 20;
  double tol = 1e-6;
  std::size_t max_nodes = 100000;
  /// Ellipsoid (SDP) norm is only tried up to this size.
  std::size_t ellipsoid_max_dim = 12;
  /// 0: read SUBDIV_JSR_THREADS, default 1.
  unsigned threads = 0;
};

/// Largest eigenvalue modulus. Throws ArgumentError on non-finite entries.
double spectral_radius(const Eigen::MatrixXd& A);

/// Certified bracket [lower, upper] for the joint spectral radius.
JsrBounds jsr_bounds(const MatrixFamily& fam, const JsrOptions& opt = {});
JsrBounds jsr_bounds(const MatrixFamily& fam, int depth, double tol);

/// Bracket of a block-triangular family from brackets of its diagonal blocks.
JsrBounds block_triangular_bounds(const JsrBounds& a, const JsrBounds& b);

/// Vertex family of a transition family (core and boundary blocks).
JsrBounds interval_family_jsr(const TransitionFamily& tf, const JsrOptions& opt = {});

/// Extremal ellipsoid by bisection on gamma over the LMIs
/// gamma^2 P - A_i^T P A_i > 0. Returns the certified bound and P.
struct EllipsoidNorm {
  double bound = 0.0;
  Eigen::MatrixXd P;
  int newton_steps = 0;
};
EllipsoidNorm optimal_ellipsoid(const MatrixFamily& fam, double rel_gap = 1e-10);

/// Heuristic search for a common invariant subspace.
struct SubspaceProbe {
  bool irreducible = true;
  /// Orthonormal bases of candidate invariant subspaces, smallest first.
  std::vector<Eigen::MatrixXd> candidates;
  std::string summary;
};
SubspaceProbe common_invariant_subspace_probe(const MatrixFamily& fam, double tol = 1e-8,
                                              std::uint64_t seed = 7);

}  // namespace subdiv
