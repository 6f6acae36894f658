#include "subdiv/jsr.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <queue>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "subdiv/error.hpp"
#include "subdiv/transition.hpp"

namespace subdiv {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

double norm_inf(const MatrixXd& A) { return A.rows() ? A.cwiseAbs().rowwise().sum().maxCoeff() : 0.0; }
double norm_one(const MatrixXd& A) { return A.cols() ? A.cwiseAbs().colwise().sum().maxCoeff() : 0.0; }
double norm_two(const MatrixXd& A) {
  if (A.size() == 0) return 0.0;
  Eigen::JacobiSVD<MatrixXd> svd(A);
  return svd.singularValues()(0);
}

double op_norm(NormCertificate::Kind k, const MatrixXd& A) {
  switch (k) {
    case NormCertificate::Kind::infinity:
    case NormCertificate::Kind::scaled_infinity:
      return norm_inf(A);
    case NormCertificate::Kind::one:
    case NormCertificate::Kind::scaled_one:
      return norm_one(A);
    default:
      return norm_two(A);
  }
}

unsigned thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SUBDIV_JSR_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(std::min<long>(v, 256));
  }
  return 1;
}

// Positive vector x with max_i |A_i| x <= lambda x, by nonlinear power iteration.
VectorXd max_power_vector(const MatrixFamily& fam, bool transpose) {
  const Index n = fam.front().rows();
  std::vector<MatrixXd> absm;
  for (const auto& A : fam) absm.push_back(transpose ? MatrixXd(A.transpose().cwiseAbs()) : MatrixXd(A.cwiseAbs()));
  VectorXd x = VectorXd::Ones(n);
  for (int it = 0; it < 2000; ++it) {
    VectorXd y = VectorXd::Zero(n);
    for (const auto& B : absm) y = y.cwiseMax(B * x);
    const double top = y.maxCoeff();
    if (top <= 0) return VectorXd::Ones(n);
    y /= top;
    y = y.cwiseMax(1e-12);
    const double change = (y - x).cwiseAbs().maxCoeff();
    x = y;
    if (change < 1e-15) break;
  }
  return x;
}

struct Candidate {
  NormCertificate cert;
  MatrixFamily transformed;
};

Candidate make_candidate(const MatrixFamily& fam, NormCertificate::Kind kind) {
  Candidate c;
  c.cert.kind = kind;
  const Index n = fam.front().rows();
  switch (kind) {
    case NormCertificate::Kind::scaled_infinity: {
      c.cert.scaling = max_power_vector(fam, false);
      const VectorXd& d = c.cert.scaling;
      for (const auto& A : fam) c.transformed.push_back(d.cwiseInverse().asDiagonal() * A * d.asDiagonal());
      break;
    }
    case NormCertificate::Kind::scaled_one: {
      c.cert.scaling = max_power_vector(fam, true);
      const VectorXd& d = c.cert.scaling;
      for (const auto& A : fam) c.transformed.push_back(d.asDiagonal() * A * d.cwiseInverse().asDiagonal());
      break;
    }
    default:
      c.transformed = fam;
      if (kind == NormCertificate::Kind::spectral) c.cert.ellipsoid = MatrixXd::Identity(n, n);
      break;
  }
  c.cert.value = 0.0;
  for (const auto& A : c.transformed) c.cert.value = std::max(c.cert.value, op_norm(kind, A));
  return c;
}

// ------------------------------------------------------------ ellipsoid SDP

struct LmiSystem {
  Index n = 0;
  Index d = 0;  // number of P coordinates
  std::vector<MatrixXd> basis;
  // derivative matrices per constraint, d + 1 each (last is for s)
  std::vector<std::vector<MatrixXd>> D;
  VectorXd a;  // trace functional
};

LmiSystem build_lmis(const MatrixFamily& fam, double gamma) {
  LmiSystem sys;
  sys.n = fam.front().rows();
  const Index n = sys.n;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      MatrixXd E = MatrixXd::Zero(n, n);
      E(i, j) = 1;
      E(j, i) = 1;
      sys.basis.push_back(E);
    }
  }
  sys.d = static_cast<Index>(sys.basis.size());
  const MatrixXd I = MatrixXd::Identity(n, n);
  for (const auto& A : fam) {
    std::vector<MatrixXd> Dj;
    for (const auto& E : sys.basis) Dj.push_back(gamma * gamma * E - A.transpose() * E * A);
    Dj.push_back(-I);
    sys.D.push_back(std::move(Dj));
  }
  std::vector<MatrixXd> D0(sys.basis.begin(), sys.basis.end());
  D0.push_back(-I);
  sys.D.push_back(std::move(D0));
  sys.a = VectorXd::Zero(sys.d + 1);
  for (Index k = 0; k < sys.d; ++k) sys.a(k) = sys.basis[static_cast<std::size_t>(k)].trace();
  return sys;
}

MatrixXd lmi_value(const std::vector<MatrixXd>& Dj, const VectorXd& y) {
  MatrixXd F = MatrixXd::Zero(Dj.front().rows(), Dj.front().cols());
  for (Index k = 0; k < y.size(); ++k) {
    if (y(k) != 0.0) F += y(k) * Dj[static_cast<std::size_t>(k)];
  }
  return F;
}

// Barrier value -t s - sum log det F_j, +inf outside the cone.
double barrier(const LmiSystem& sys, const VectorXd& y, double t) {
  double v = -t * y(sys.d);
  for (const auto& Dj : sys.D) {
    Eigen::LLT<MatrixXd> llt(lmi_value(Dj, y));
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const VectorXd diag = llt.matrixLLT().diagonal();
    for (Index i = 0; i < diag.size(); ++i) {
      if (!(diag(i) > 0)) return std::numeric_limits<double>::infinity();
      v -= 2.0 * std::log(diag(i));
    }
  }
  return v;
}

struct FeasResult {
  bool feasible = false;
  VectorXd y;
  int steps = 0;
};

FeasResult feasible(const MatrixFamily& fam, double gamma, int max_steps = 400) {
  const LmiSystem sys = build_lmis(fam, gamma);
  const Index n = sys.n, d = sys.d;
  VectorXd y = VectorXd::Zero(d + 1);
  {
    Index k = 0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i; j < n; ++j, ++k) y(k) = (i == j) ? 1.0 : 0.0;
    }
  }
  double smin = std::numeric_limits<double>::infinity();
  for (const auto& Dj : sys.D) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(lmi_value(Dj, y), Eigen::EigenvaluesOnly);
    smin = std::min(smin, es.eigenvalues()(0));
  }
  y(d) = smin - 1.0;
  Index total_dim = 0;
  for (const auto& Dj : sys.D) total_dim += Dj.front().rows();

  FeasResult res;
  double t = 1.0;
  while (res.steps < max_steps) {
    for (int inner = 0; inner < 50 && res.steps < max_steps; ++inner) {
      ++res.steps;
      VectorXd g = VectorXd::Zero(d + 1);
      g(d) = -t;
      MatrixXd H = MatrixXd::Zero(d + 1, d + 1);
      for (const auto& Dj : sys.D) {
        const MatrixXd Finv = lmi_value(Dj, y).llt().solve(MatrixXd::Identity(n, n));
        MatrixXd X(d + 1, n * n), XT(d + 1, n * n);
        for (Index k = 0; k <= d; ++k) {
          const MatrixXd Xk = Finv * Dj[static_cast<std::size_t>(k)];
          g(k) -= Xk.trace();
          X.row(k) = Eigen::Map<const VectorXd>(Xk.data(), n * n).transpose();
          const MatrixXd XkT = Xk.transpose();
          XT.row(k) = Eigen::Map<const VectorXd>(XkT.data(), n * n).transpose();
        }
        H.noalias() += X * XT.transpose();
      }
      H = 0.5 * (H + H.transpose());
      MatrixXd KKT = MatrixXd::Zero(d + 2, d + 2);
      KKT.topLeftCorner(d + 1, d + 1) = H;
      KKT.block(0, d + 1, d + 1, 1) = sys.a;
      KKT.block(d + 1, 0, 1, d + 1) = sys.a.transpose();
      VectorXd rhs = VectorXd::Zero(d + 2);
      rhs.head(d + 1) = -g;
      const VectorXd sol = KKT.fullPivLu().solve(rhs);
      const VectorXd dy = sol.head(d + 1);
      const double lambda = -g.dot(dy);
      if (!(lambda >= 1e-10)) break;
      const double f0 = barrier(sys, y, t);
      double step = 1.0;
      while (barrier(sys, y + step * dy, t) > f0 - 0.25 * step * lambda) {
        step *= 0.5;
        if (step < 1e-20) break;
      }
      if (step < 1e-20) break;
      y += step * dy;
      if (y(d) > 0) {
        res.feasible = true;
        res.y = y;
        return res;
      }
    }
    if (y(d) + static_cast<double>(total_dim) / t < 0) break;
    t *= 8.0;
  }
  res.y = y;
  return res;
}

MatrixXd unpack_P(const VectorXd& y, Index n) {
  MatrixXd P(n, n);
  Index k = 0;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j, ++k) P(i, j) = P(j, i) = y(k);
  }
  return P;
}

// max_i |L^T A_i L^{-T}|_2, or +inf when P is not positive definite.
double ellipsoid_bound(const MatrixFamily& fam, const MatrixXd& P) {
  Eigen::LLT<MatrixXd> llt(P);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const MatrixXd Lt = llt.matrixU();
  const MatrixXd LtInv = Lt.inverse();
  double b = 0.0;
  for (const auto& A : fam) b = std::max(b, norm_two(Lt * A * LtInv));
  return b;
}

// ------------------------------------------------------------- tree search

struct Node {
  std::vector<std::size_t> word;
  MatrixXd product;
  double value = 0.0;
};

struct NodeOrder {
  const std::vector<Node>* nodes;
  bool operator()(std::size_t a, std::size_t b) const {
    const Node& x = (*nodes)[a];
    const Node& y = (*nodes)[b];
    if (x.value != y.value) return x.value < y.value;
    return x.word > y.word;
  }
};

struct ChildEval {
  MatrixXd product;
  double norm_root = 0.0;
  double rho_root = -1.0;
};

}  // namespace

// ------------------------------------------------------------------- public

std::string NormCertificate::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::none: os << "none"; break;
    case Kind::infinity: os << "max-row-sum norm"; break;
    case Kind::one: os << "max-column-sum norm"; break;
    case Kind::spectral: os << "spectral norm"; break;
    case Kind::scaled_infinity: os << "diagonally scaled max-row-sum norm, d = [" << scaling.transpose() << "]"; break;
    case Kind::scaled_one: os << "diagonally scaled max-column-sum norm, d = [" << scaling.transpose() << "]"; break;
    case Kind::ellipsoid: os << "ellipsoidal norm |L^T x|_2 with P = L L^T of size " << ellipsoid.rows(); break;
  }
  os << "; max member norm " << value;
  return os.str();
}

double spectral_radius(const MatrixXd& A) {
  if (A.rows() != A.cols()) throw ArgumentError("spectral radius needs a square matrix");
  if (!A.allFinite()) throw ArgumentError("matrix has non-finite entries");
  if (A.size() == 0) return 0.0;
  if (A.rows() == 1) return std::abs(A(0, 0));
  Eigen::EigenSolver<MatrixXd> es(A, false);
  if (es.info() != Eigen::Success) {
    // fall back on a Gelfand estimate
    MatrixXd P = A;
    for (int k = 0; k < 6; ++k) P = P * P;
    return std::pow(norm_two(P), 1.0 / 64.0);
  }
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

EllipsoidNorm optimal_ellipsoid(const MatrixFamily& fam, double rel_gap) {
  if (fam.empty()) throw ArgumentError("empty matrix family");
  const Index n = fam.front().rows();
  EllipsoidNorm out;
  out.P = MatrixXd::Identity(n, n);
  double lo = 0.0, hi = 0.0;
  for (const auto& A : fam) {
    lo = std::max(lo, spectral_radius(A));
    hi = std::max(hi, norm_two(A));
  }
  out.bound = hi;
  if (hi <= 0.0) return out;
  for (int it = 0; it < 60 && hi - lo > rel_gap * std::max(lo, 1e-300); ++it) {
    const double g = 0.5 * (lo + hi);
    const auto r = feasible(fam, g);
    out.newton_steps += r.steps;
    if (r.feasible) {
      const MatrixXd P = unpack_P(r.y, n);
      const double c = ellipsoid_bound(fam, P);
      if (c < out.bound) {
        out.bound = c;
        out.P = P;
      }
      hi = std::min(g, c);
    } else {
      lo = g;
    }
  }
  return out;
}

JsrBounds jsr_bounds(const MatrixFamily& fam_in, const JsrOptions& opt) {
  if (fam_in.empty()) throw ArgumentError("empty matrix family");
  if (opt.depth < 1) throw ArgumentError("depth must be at least 1");
  if (!(opt.tol > 0)) throw ArgumentError("tol must be positive");
  const Index n = fam_in.front().rows();
  for (const auto& A : fam_in) {
    if (A.rows() != n || A.cols() != n) throw ArgumentError("family members must be square of equal size");
    if (!A.allFinite()) throw ArgumentError("matrix has non-finite entries");
  }
  JsrBounds out;
  if (n == 0) {
    out.converged = true;
    return out;
  }

  // Normalize for stability.
  double scale = 0.0;
  for (const auto& A : fam_in) scale = std::max(scale, spectral_radius(A));
  if (scale <= 0.0) {
    for (const auto& A : fam_in) scale = std::max(scale, norm_two(A));
  }
  if (scale <= 0.0) {
    out.converged = true;
    out.witness = {0};
    out.max_depth = 1;
    out.certificate.kind = NormCertificate::Kind::infinity;
    return out;
  }
  MatrixFamily fam;
  for (const auto& A : fam_in) fam.push_back(A / scale);

  // Pick the norm.
  std::vector<Candidate> cands;
  for (auto k : {NormCertificate::Kind::one, NormCertificate::Kind::infinity,
                 NormCertificate::Kind::spectral, NormCertificate::Kind::scaled_one,
                 NormCertificate::Kind::scaled_infinity}) {
    cands.push_back(make_candidate(fam, k));
  }
  if (static_cast<std::size_t>(n) <= opt.ellipsoid_max_dim && n > 1) {
    const auto e = optimal_ellipsoid(fam);
    Candidate c;
    c.cert.kind = NormCertificate::Kind::ellipsoid;
    c.cert.ellipsoid = e.P;
    Eigen::LLT<MatrixXd> llt(e.P);
    const MatrixXd Lt = llt.matrixU();
    const MatrixXd LtInv = Lt.inverse();
    for (const auto& A : fam) c.transformed.push_back(Lt * A * LtInv);
    c.cert.value = 0.0;
    for (const auto& A : c.transformed) c.cert.value = std::max(c.cert.value, norm_two(A));
    cands.push_back(std::move(c));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < cands.size(); ++i) {
    if (cands[i].cert.value < cands[best].cert.value * (1 - 1e-14)) best = i;
  }
  const Candidate& cand = cands[best];
  const auto kind = cand.cert.kind;
  const MatrixFamily& T = cand.transformed;

  double lower = 0.0;
  std::vector<std::size_t> witness;
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const double r = spectral_radius(fam[i]);
    if (r > lower || witness.empty()) {
      lower = std::max(lower, r);
      witness = {i};
    }
  }

  const unsigned threads = thread_count(opt.threads);
  const std::size_t mem_cap = std::max<std::size_t>(2000, static_cast<std::size_t>(5e7 / static_cast<double>(n * n)));
  const std::size_t node_cap = std::min(opt.max_nodes, mem_cap);

  std::vector<Node> nodes;
  NodeOrder order{&nodes};
  std::priority_queue<std::size_t, std::vector<std::size_t>, NodeOrder> heap(order);
  double pruned_max = 0.0;
  int explored_depth = 0;

  auto evaluate_children = [&](const Node* parent) {
    std::vector<ChildEval> ev(T.size());
    const int len = parent ? static_cast<int>(parent->word.size()) + 1 : 1;
    auto work = [&](std::size_t lo_i, std::size_t hi_i) {
      for (std::size_t i = lo_i; i < hi_i; ++i) {
        ev[i].product = parent ? MatrixXd(T[i] * parent->product) : T[i];
        ev[i].norm_root = std::pow(op_norm(kind, ev[i].product), 1.0 / len);
      }
    };
    if (threads > 1 && n >= 48 && T.size() > 1) {
      std::vector<std::thread> pool;
      const std::size_t chunk = (T.size() + threads - 1) / threads;
      for (std::size_t s = 0; s < T.size(); s += chunk) pool.emplace_back(work, s, std::min(T.size(), s + chunk));
      for (auto& th : pool) th.join();
    } else {
      work(0, T.size());
    }
    return ev;
  };

  auto add_children = [&](const Node* parent) {
    auto ev = evaluate_children(parent);
    const int len = parent ? static_cast<int>(parent->word.size()) + 1 : 1;
    explored_depth = std::max(explored_depth, len);
    const double parent_value = parent ? parent->value : std::numeric_limits<double>::infinity();
    std::vector<std::size_t> parent_word = parent ? parent->word : std::vector<std::size_t>{};
    for (std::size_t i = 0; i < T.size(); ++i) {
      // rho <= norm, so only products that could raise the lower bound need eigenvalues
      if (ev[i].norm_root > lower) {
        const double r = std::pow(spectral_radius(ev[i].product), 1.0 / len);
        if (r > lower) {
          lower = r;
          witness = parent_word;
          witness.push_back(i);
        }
      }
    }
    for (std::size_t i = 0; i < T.size(); ++i) {
      const double v = std::min(parent_value, ev[i].norm_root);
      if (v <= lower * (1 + opt.tol)) {
        pruned_max = std::max(pruned_max, v);
        continue;
      }
      Node child;
      child.word = parent_word;
      child.word.push_back(i);
      child.product = std::move(ev[i].product);
      child.value = v;
      nodes.push_back(std::move(child));
      heap.push(nodes.size() - 1);
    }
  };

  add_children(nullptr);
  double upper = 0.0;
  bool converged = false;
  while (true) {
    if (heap.empty()) {
      upper = pruned_max;
      converged = true;
      break;
    }
    const std::size_t top = heap.top();
    const double v = nodes[top].value;
    if (v <= lower * (1 + opt.tol)) {
      upper = std::max(v, pruned_max);
      converged = true;
      break;
    }
    if (static_cast<int>(nodes[top].word.size()) >= opt.depth || nodes.size() >= node_cap) {
      upper = std::max(v, pruned_max);
      break;
    }
    heap.pop();
    Node parent = std::move(nodes[top]);
    nodes[top].product.resize(0, 0);
    add_children(&parent);
  }

  // Re-derive the lower bound from the witness on the original family.
  MatrixXd W = MatrixXd::Identity(n, n);
  for (auto i : witness) W = fam_in[i] * W;
  const double lower_orig = std::pow(spectral_radius(W), 1.0 / static_cast<double>(witness.size()));

  out.lower = lower_orig;
  out.upper = std::max(upper * scale, out.lower);
  out.witness = witness;
  out.certificate = cand.cert;
  out.certificate.value *= scale;
  out.max_depth = explored_depth;
  out.nodes = nodes.size() + fam.size();
  out.converged = converged || out.upper - out.lower <= opt.tol * out.lower;
  return out;
}

JsrBounds jsr_bounds(const MatrixFamily& fam, int depth, double tol) {
  JsrOptions opt;
  opt.depth = depth;
  opt.tol = tol;
  return jsr_bounds(fam, opt);
}

JsrBounds block_triangular_bounds(const JsrBounds& a, const JsrBounds& b) {
  JsrBounds out = a.lower >= b.lower ? a : b;
  out.lower = std::max(a.lower, b.lower);
  out.upper = std::max(a.upper, b.upper);
  out.max_depth = std::max(a.max_depth, b.max_depth);
  out.nodes = a.nodes + b.nodes;
  out.converged = (a.converged || a.upper <= out.lower) && (b.converged || b.upper <= out.lower);
  return out;
}

JsrBounds interval_family_jsr(const TransitionFamily& tf, const JsrOptions& opt) {
  if (tf.matrices.empty()) throw ArgumentError("transition family has no vertices");
  JsrBounds core = jsr_bounds(tf.members(), opt);
  if (tf.boundary_dim == 0 || tf.boundary.empty()) return core;
  JsrBounds edge = jsr_bounds(tf.boundary_members(), opt);
  // Witness words of the boundary block index the same (vertex, coset) list.
  return block_triangular_bounds(core, edge);
}

SubspaceProbe common_invariant_subspace_probe(const MatrixFamily& fam, double tol, std::uint64_t seed) {
  SubspaceProbe out;
  if (fam.empty()) throw ArgumentError("empty matrix family");
  const Index n = fam.front().rows();
  if (n <= 1) {
    out.summary = "irreducible up to tolerance (dimension " + std::to_string(n) + ")";
    return out;
  }
  double scale = 0.0;
  for (const auto& A : fam) scale = std::max(scale, norm_two(A));
  scale = std::max(scale, 1e-300);

  auto closure = [&](MatrixXd seedm, const MatrixFamily& F) {
    Eigen::HouseholderQR<MatrixXd> qr(seedm);
    MatrixXd Q = qr.householderQ() * MatrixXd::Identity(n, std::min<Index>(seedm.cols(), n));
    bool grown = true;
    while (grown && Q.cols() < n) {
      grown = false;
      for (const auto& A : F) {
        for (Index c = 0; c < Q.cols() && Q.cols() < n; ++c) {
          VectorXd w = A * Q.col(c);
          for (int pass = 0; pass < 2; ++pass) w -= Q * (Q.transpose() * w);
          if (w.norm() > tol * scale) {
            Q.conservativeResize(n, Q.cols() + 1);
            Q.col(Q.cols() - 1) = w.normalized();
            grown = true;
          }
        }
      }
    }
    return Q;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  MatrixFamily probes = fam;
  MatrixXd mix = MatrixXd::Zero(n, n);
  for (const auto& A : fam) mix += unif(rng) * A;
  probes.push_back(mix);

  std::vector<MatrixXd> found;
  auto record = [&](const MatrixXd& Q) {
    if (Q.cols() == 0 || Q.cols() >= n) return;
    const MatrixXd Pq = Q * Q.transpose();
    for (const auto& f : found) {
      if (f.cols() == Q.cols() && (f * f.transpose() - Pq).norm() < 1e-6) return;
    }
    found.push_back(Q);
  };

  for (int pass = 0; pass < 2; ++pass) {
    MatrixFamily F;
    for (const auto& A : fam) F.push_back(pass == 0 ? A : MatrixXd(A.transpose()));
    for (const auto& B0 : probes) {
      const MatrixXd B = pass == 0 ? B0 : MatrixXd(B0.transpose());
      Eigen::EigenSolver<MatrixXd> es(B);
      const Eigen::MatrixXcd vecs = es.eigenvectors();
      if (es.info() != Eigen::Success) continue;
      for (Index k = 0; k < n; ++k) {
        const Eigen::VectorXcd v = vecs.col(k);
        MatrixXd s;
        if (v.imag().norm() < 1e-12 * v.norm()) {
          s = v.real();
        } else {
          s.resize(n, 2);
          s.col(0) = v.real();
          s.col(1) = v.imag();
        }
        MatrixXd Q = closure(s, F);
        if (Q.cols() >= n) continue;
        if (pass == 1) {
          // orthogonal complement of a transpose-invariant subspace is invariant
          Eigen::HouseholderQR<MatrixXd> qr(Q);
          const MatrixXd full = qr.householderQ();
          Q = full.rightCols(n - Q.cols());
        }
        record(Q);
      }
    }
  }
  std::sort(found.begin(), found.end(), [](const MatrixXd& a, const MatrixXd& b) { return a.cols() < b.cols(); });
  out.candidates = std::move(found);
  out.irreducible = out.candidates.empty();
  std::ostringstream os;
  if (out.irreducible) {
    os << "irreducible up to tolerance " << tol;
  } else {
    os << out.candidates.size() << " candidate common invariant subspace(s), smallest dimension "
       << out.candidates.front().cols();
  }
  out.summary = os.str();
  return out;
}

}  // namespace subdiv
