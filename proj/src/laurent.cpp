#include "subdiv/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "subdiv/error.hpp"

namespace subdiv {

// ---------------------------------------------------------------- MultiIndex

std::int64_t MultiIndex::total() const {
  return std::accumulate(v_.begin(), v_.end(), std::int64_t{0});
}

MultiIndex MultiIndex::operator+(const MultiIndex& o) const {
  if (o.size() != size()) throw ArgumentError("multi-index dimension mismatch");
  MultiIndex r(*this);
  for (std::size_t i = 0; i < v_.size(); ++i) r.v_[i] += o.v_[i];
  return r;
}

MultiIndex MultiIndex::operator-(const MultiIndex& o) const {
  if (o.size() != size()) throw ArgumentError("multi-index dimension mismatch");
  MultiIndex r(*this);
  for (std::size_t i = 0; i < v_.size(); ++i) r.v_[i] -= o.v_[i];
  return r;
}

MultiIndex MultiIndex::scaled(std::int64_t k) const {
  MultiIndex r(*this);
  for (auto& x : r.v_) x *= k;
  return r;
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v_.size(); ++i) os << (i ? "," : "") << v_[i];
  os << ')';
  return os.str();
}

bool IndexBox::contains(const MultiIndex& a) const {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < lo[i] || a[i] > hi[i]) return false;
  }
  return true;
}

// --------------------------------------------------------------- LaurentPoly

LaurentPoly::LaurentPoly(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ArgumentError("Laurent polynomials need dimension >= 1");
}

LaurentPoly::LaurentPoly(std::size_t dim, TermMap terms) : LaurentPoly(dim) {
  for (auto& [e, c] : terms) add_term(e, c);
}

LaurentPoly LaurentPoly::constant(std::size_t dim, const Rational& c) {
  LaurentPoly p(dim);
  p.add_term(MultiIndex(dim), c);
  return p;
}

LaurentPoly LaurentPoly::monomial(const MultiIndex& exponent, const Rational& c) {
  LaurentPoly p(exponent.size());
  p.add_term(exponent, c);
  return p;
}

LaurentPoly LaurentPoly::geometric_factor(std::size_t dim, std::size_t axis, int m) {
  if (axis >= dim) throw ArgumentError("axis out of range");
  LaurentPoly p(dim);
  for (int k = 0; k < std::abs(m); ++k) {
    MultiIndex e(dim);
    e[axis] = k;
    p.add_term(e, 1);
  }
  return p;
}

LaurentPoly LaurentPoly::univariate(std::span<const Rational> coeffs, std::int64_t offset) {
  LaurentPoly p(1);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    p.add_term(MultiIndex{offset + static_cast<std::int64_t>(i)}, coeffs[i]);
  }
  return p;
}

Rational LaurentPoly::coeff(const MultiIndex& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void LaurentPoly::add_term(const MultiIndex& e, const Rational& c) {
  if (e.size() != dim_) throw ArgumentError("exponent dimension does not match polynomial");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

IndexBox LaurentPoly::support() const {
  if (terms_.empty()) throw EmptyMaskError("the zero polynomial has no support");
  IndexBox box{terms_.begin()->first, terms_.begin()->first};
  for (const auto& [e, c] : terms_) {
    for (std::size_t i = 0; i < dim_; ++i) {
      box.lo[i] = std::min(box.lo[i], e[i]);
      box.hi[i] = std::max(box.hi[i], e[i]);
    }
  }
  return box;
}

std::int64_t LaurentPoly::total_span() const {
  if (is_zero()) return 0;
  return support().width().total();
}

void LaurentPoly::check_dim(const LaurentPoly& o) const {
  if (o.dim_ != dim_) {
    throw ArgumentError("dimension mismatch: " + std::to_string(dim_) + " vs " +
                        std::to_string(o.dim_));
  }
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  check_dim(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  check_dim(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  a.check_dim(b);
  LaurentPoly r(a.dim_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
  }
  return r;
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r(*this);
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

LaurentPoly LaurentPoly::shifted(const MultiIndex& shift) const {
  LaurentPoly r(dim_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e + shift, c);
  return r;
}

Rational LaurentPoly::coefficient_sum() const {
  Rational s = 0;
  for (const auto& [e, c] : terms_) s += c;
  return s;
}

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << '-';
    first = false;
    Rational a = abs(c);
    bool unit = (a == 1);
    bool constant = std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; });
    if (!unit || constant) os << subdiv::to_string(a);
    for (std::size_t i = 0; i < dim_; ++i) {
      if (e[i] == 0) continue;
      os << "z";
      if (dim_ > 1) os << (i + 1);
      if (e[i] != 1) os << '^' << e[i];
    }
  }
  return os.str();
}

// ---------------------------------------------------------------- evaluation

namespace {

std::complex<double> int_power(std::complex<double> z, std::int64_t k) {
  if (k < 0) return 1.0 / int_power(z, -k);
  std::complex<double> r = 1.0;
  while (k > 0) {
    if (k & 1) r *= z;
    z *= z;
    k >>= 1;
  }
  return r;
}

Rational falling_factorial(std::int64_t a, std::int64_t k) {
  Rational r = 1;
  for (std::int64_t j = 0; j < k; ++j) r *= Rational(static_cast<long>(a - j));
  return r;
}

}  // namespace

std::complex<double> evaluate(const LaurentPoly& p, std::span<const std::complex<double>> z) {
  if (z.size() != p.dim()) throw ArgumentError("evaluation point has the wrong dimension");
  for (const auto& zi : z) {
    if (zi == 0.0) throw DomainError("Laurent polynomials are undefined at a zero coordinate");
  }
  std::complex<double> sum = 0.0;
  for (const auto& [e, c] : p.terms()) {
    std::complex<double> t = to_double(c);
    for (std::size_t i = 0; i < e.size(); ++i) t *= int_power(z[i], e[i]);
    sum += t;
  }
  return sum;
}

std::complex<double> evaluate(const LaurentPoly& p, std::complex<double> z) {
  return evaluate(p, std::span<const std::complex<double>>(&z, 1));
}

LaurentPoly derivative(const LaurentPoly& p, const MultiIndex& eta) {
  if (eta.size() != p.dim()) throw ArgumentError("derivative order has the wrong dimension");
  for (auto k : eta) {
    if (k < 0) throw ArgumentError("derivative orders must be nonnegative");
  }
  LaurentPoly r(p.dim());
  for (const auto& [e, c] : p.terms()) {
    Rational f = c;
    for (std::size_t i = 0; i < e.size() && f != 0; ++i) f *= falling_factorial(e[i], eta[i]);
    if (f != 0) r.add_term(e - eta, f);
  }
  return r;
}

std::optional<LaurentPoly> divide_exact(const LaurentPoly& num, const LaurentPoly& den) {
  if (num.dim() != 1 || den.dim() != 1) {
    throw ArgumentError("exact division is implemented for univariate polynomials");
  }
  if (den.is_zero()) throw ArgumentError("division by the zero polynomial");
  if (num.is_zero()) return LaurentPoly(1);
  const auto nb = num.support();
  const auto db = den.support();
  const std::int64_t n0 = nb.lo[0], d0 = db.lo[0];
  const std::size_t nd = static_cast<std::size_t>(nb.hi[0] - n0);
  const std::size_t dd = static_cast<std::size_t>(db.hi[0] - d0);
  if (nd < dd) return std::nullopt;
  std::vector<Rational> rem(nd + 1), dv(dd + 1), q(nd - dd + 1);
  for (const auto& [e, c] : num.terms()) rem[static_cast<std::size_t>(e[0] - n0)] = c;
  for (const auto& [e, c] : den.terms()) dv[static_cast<std::size_t>(e[0] - d0)] = c;
  for (std::size_t k = nd + 1; k-- > dd;) {
    const Rational f = rem[k] / dv[dd];
    q[k - dd] = f;
    if (f == 0) continue;
    for (std::size_t j = 0; j <= dd; ++j) rem[k - dd + j] -= f * dv[j];
  }
  for (const auto& r : rem) {
    if (r != 0) return std::nullopt;
  }
  return LaurentPoly::univariate(q, n0 - d0);
}

// ----------------------------------------------------------------------- Mask

Mask::Mask(MultiIndex offset, MultiIndex extents, std::vector<Rational> coeffs)
    : offset_(std::move(offset)), extents_(std::move(extents)), coeffs_(std::move(coeffs)) {
  if (offset_.size() != extents_.size() || offset_.size() == 0) {
    throw ArgumentError("mask offset and extents must share a positive dimension");
  }
  std::size_t count = 1;
  for (auto e : extents_) {
    if (e <= 0) throw ArgumentError("mask extents must be positive");
    count *= static_cast<std::size_t>(e);
  }
  if (count != coeffs_.size()) throw ArgumentError("mask coefficient count does not match extents");
}

MultiIndex Mask::width() const {
  MultiIndex w(extents_);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] -= 1;
  return w;
}

std::size_t Mask::flat_index(const MultiIndex& local) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < local.size(); ++i) {
    flat = flat * static_cast<std::size_t>(extents_[i]) + static_cast<std::size_t>(local[i]);
  }
  return flat;
}

MultiIndex Mask::local_index(std::size_t flat) const {
  MultiIndex local(dim());
  for (std::size_t i = dim(); i-- > 0;) {
    const auto e = static_cast<std::size_t>(extents_[i]);
    local[i] = static_cast<std::int64_t>(flat % e);
    flat /= e;
  }
  return local;
}

const Rational& Mask::at(const MultiIndex& local) const {
  static const Rational zero = 0;
  if (local.size() != dim()) throw ArgumentError("mask index has the wrong dimension");
  for (std::size_t i = 0; i < local.size(); ++i) {
    if (local[i] < 0 || local[i] >= extents_[i]) return zero;
  }
  return coeffs_[flat_index(local)];
}

const Rational& Mask::at_exponent(const MultiIndex& exponent) const {
  return at(exponent - offset_);
}

Mask to_mask(const LaurentPoly& p) {
  if (p.is_zero()) throw EmptyMaskError("cannot build a mask from the zero polynomial");
  const IndexBox box = p.support();
  MultiIndex extents = box.width();
  std::size_t count = 1;
  for (std::size_t i = 0; i < extents.size(); ++i) {
    extents[i] += 1;
    count *= static_cast<std::size_t>(extents[i]);
  }
  Mask mask(box.lo, extents, std::vector<Rational>(count));
  std::vector<Rational> coeffs(count);
  for (const auto& [e, c] : p.terms()) coeffs[mask.flat_index(e - box.lo)] = c;
  return Mask(box.lo, extents, std::move(coeffs));
}

LaurentPoly to_symbol(const Mask& m) {
  LaurentPoly p(m.dim());
  for (std::size_t k = 0; k < m.coeffs().size(); ++k) {
    if (m.coeffs()[k] != 0) p.add_term(m.local_index(k) + m.offset(), m.coeffs()[k]);
  }
  return p;
}

// ---------------------------------------------------------------- ParamSymbol

namespace {

std::vector<double> to_doubles(std::span<const Rational> w) {
  std::vector<double> r;
  r.reserve(w.size());
  for (const auto& x : w) r.push_back(to_double(x));
  return r;
}

// Lawson-Hanson non-negative least squares.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const Eigen::Index n = A.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  const double tol = 1e-14 * std::max(1.0, A.cwiseAbs().maxCoeff()) * static_cast<double>(n + 1);
  for (int outer = 0; outer < 3 * n + 10; ++outer) {
    Eigen::VectorXd grad = A.transpose() * (b - A * x);
    Eigen::Index best = -1;
    double best_val = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && grad(j) > best_val) {
        best_val = grad(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    for (int inner = 0; inner < 3 * n + 10; ++inner) {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
      }
      Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
      for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
      Eigen::VectorXd sp = Ap.completeOrthogonalDecomposition().solve(b);
      Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
      for (std::size_t k = 0; k < idx.size(); ++k) s(idx[k]) = sp(static_cast<Eigen::Index>(k));
      bool positive = true;
      for (auto j : idx) positive = positive && s(j) > 0;
      if (positive) {
        x = s;
        break;
      }
      double alpha = 1.0;
      for (auto j : idx) {
        if (s(j) <= 0) alpha = std::min(alpha, x(j) / (x(j) - s(j)));
      }
      x += alpha * (s - x);
      for (auto j : idx) {
        if (x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0;
        }
      }
    }
  }
  return x;
}

struct Pt {
  double x, y;
};

double cross(const Pt& o, const Pt& a, const Pt& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

BarycentricWeights barycentric_weights(std::span<const ParamSymbol::Point> vertices,
                                       std::span<const double> w) {
  if (vertices.empty()) throw ArgumentError("polytope has no vertices");
  const auto p = static_cast<Eigen::Index>(w.size());
  const auto L = static_cast<Eigen::Index>(vertices.size());
  Eigen::MatrixXd A(p + 1, L);
  Eigen::VectorXd b(p + 1);
  for (Eigen::Index j = 0; j < L; ++j) {
    const auto& v = vertices[static_cast<std::size_t>(j)];
    if (static_cast<Eigen::Index>(v.size()) != p) throw ArgumentError("vertex dimension mismatch");
    for (Eigen::Index i = 0; i < p; ++i) A(i, j) = to_double(v[static_cast<std::size_t>(i)]);
    A(p, j) = 1.0;
  }
  for (Eigen::Index i = 0; i < p; ++i) b(i) = w[static_cast<std::size_t>(i)];
  b(p) = 1.0;
  Eigen::VectorXd t = nnls(A, b);
  BarycentricWeights out;
  out.weights.assign(t.data(), t.data() + t.size());
  out.residual = (A * t - b).norm();
  return out;
}

ParamSymbol::ParamSymbol(LaurentPoly base, std::vector<LaurentPoly> directions,
                         std::vector<Point> domain)
    : base_(std::move(base)), directions_(std::move(directions)), domain_(std::move(domain)) {
  for (const auto& d : directions_) {
    if (d.dim() != base_.dim()) throw ArgumentError("all family members must share dimension");
  }
  if (domain_.empty()) throw ArgumentError("parameter polytope needs at least one vertex");
  for (auto& v : domain_) {
    for (auto& q : v) q.canonicalize();
    if (v.size() != directions_.size()) {
      throw ArgumentError("each polytope vertex needs one coordinate per direction");
    }
  }
}

ParamSymbol ParamSymbol::stationary(const LaurentPoly& p) {
  return ParamSymbol(p, {}, {Point{}});
}

ParamSymbol ParamSymbol::convex_combination(const LaurentPoly& a, const LaurentPoly& b) {
  return ParamSymbol(b, {a - b}, {Point{Rational(0)}, Point{Rational(1)}});
}

std::optional<std::string> ParamSymbol::domain_violation(std::span<const Rational> w) const {
  Point wc(w.begin(), w.end());
  for (auto& q : wc) q.canonicalize();
  w = wc;
  const std::size_t p = parameter_count();
  if (w.size() != p) {
    return "parameter has " + std::to_string(w.size()) + " coordinates, expected " +
           std::to_string(p);
  }
  if (p == 0) return std::nullopt;
  if (p == 1) {
    Rational lo = domain_.front()[0], hi = domain_.front()[0];
    for (const auto& v : domain_) {
      lo = std::min(lo, v[0]);
      hi = std::max(hi, v[0]);
    }
    if (w[0] < lo) return "facet w >= " + subdiv::to_string(lo) + " violated by " + subdiv::to_string(w[0]);
    if (w[0] > hi) return "facet w <= " + subdiv::to_string(hi) + " violated by " + subdiv::to_string(w[0]);
    return std::nullopt;
  }
  const auto wd = to_doubles(w);
  if (p == 2 && domain_.size() >= 3) {
    std::vector<Pt> pts;
    for (const auto& v : domain_) pts.push_back({to_double(v[0]), to_double(v[1])});
    std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) {
      return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    std::vector<Pt> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& q : pts) {
      while (k >= 2 && cross(hull[k - 2], hull[k - 1], q) <= 0) --k;
      hull[k++] = q;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
      while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
      hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() >= 3) {
      std::string violated;
      const Pt q{wd[0], wd[1]};
      for (std::size_t i = 0; i < hull.size(); ++i) {
        const Pt& a = hull[i];
        const Pt& b = hull[(i + 1) % hull.size()];
        const double len = std::hypot(b.x - a.x, b.y - a.y);
        if (cross(a, b, q) < -1e-12 * std::max(1.0, len)) {
          std::ostringstream os;
          os << (violated.empty() ? "" : "; ") << "edge (" << a.x << "," << a.y << ")-(" << b.x
             << "," << b.y << ") violated";
          violated += os.str();
        }
      }
      if (!violated.empty()) return violated;
      return std::nullopt;
    }
  }
  const auto bw = barycentric_weights(domain_, wd);
  double scale = 1.0;
  for (double x : wd) scale = std::max(scale, std::abs(x));
  if (bw.residual > 1e-12 * scale) {
    std::ostringstream os;
    os << "point lies outside the convex hull of the " << domain_.size()
       << " vertices (distance " << bw.residual << ")";
    return os.str();
  }
  return std::nullopt;
}

LaurentPoly ParamSymbol::instantiate(std::span<const Rational> w) const {
  // gmp arithmetic assumes canonical operands; callers may pass e.g. 2/64
  Point wc(w.begin(), w.end());
  for (auto& q : wc) q.canonicalize();
  if (auto v = domain_violation(wc)) throw DomainError("parameter outside the polytope: " + *v);
  LaurentPoly r = base_;
  for (std::size_t j = 0; j < directions_.size(); ++j) r += directions_[j] * wc[j];
  return r;
}

LaurentPoly ParamSymbol::instantiate_vertex(std::size_t i) const {
  if (i >= domain_.size()) throw ArgumentError("vertex index out of range");
  return instantiate(domain_[i]);
}

ParamSymbol ParamSymbol::with_domain(std::vector<Point> vertices) const {
  for (auto& v : vertices) {
    for (auto& q : v) q.canonicalize();
    if (auto why = domain_violation(v)) {
      throw DomainError("sub-polytope vertex outside the parameter polytope: " + *why);
    }
  }
  return ParamSymbol(base_, directions_, std::move(vertices));
}

// -------------------------------------------------------------------- symbols

namespace symbols {

namespace {
LaurentPoly z1(std::int64_t e, const Rational& c = 1) { return LaurentPoly::monomial({e}, c); }
LaurentPoly z2(std::int64_t e1, std::int64_t e2, const Rational& c = 1) {
  return LaurentPoly::monomial({e1, e2}, c);
}
LaurentPoly power(const LaurentPoly& p, int k) {
  LaurentPoly r = LaurentPoly::constant(p.dim(), 1);
  for (int i = 0; i < k; ++i) r = r * p;
  return r;
}
}  // namespace

ParamSymbol four_point(const Rational& lo, const Rational& hi) {
  LaurentPoly base = z1(-1, Rational(1, 2)) + z1(0) + z1(1, Rational(1, 2));
  LaurentPoly dir = z1(-3, -1) + z1(-1) + z1(1) + z1(3, -1);
  return ParamSymbol(base, {dir}, {{lo}, {hi}});
}

LaurentPoly four_point_symbol() {
  const LaurentPoly onep = z1(0) + z1(1);
  const LaurentPoly quad = z1(2) + z1(1, -4) + z1(0);
  return z1(-3, Rational(-1, 16)) * power(onep, 4) * quad;
}

LaurentPoly dd6_symbol() {
  const LaurentPoly onep = z1(0) + z1(1);
  const LaurentPoly quart = z1(4, 3) + z1(3, -18) + z1(2, 38) + z1(1, -18) + z1(0, 3);
  return z1(-5, Rational(1, 256)) * power(onep, 6) * quart;
}

LaurentPoly box_spline_three_direction() {
  return Rational(1, 2) * ((z2(0, 0) + z2(1, 0)) * (z2(0, 0) + z2(0, 1)) * (z2(0, 0) + z2(1, 1)));
}

LaurentPoly butterfly_correction() {
  LaurentPoly c(2);
  const std::vector<std::tuple<int, int, int>> terms = {
      {-1, -2, 1}, {-1, 2, 1}, {-2, -1, 1}, {2, -1, 1}, {2, 3, -2}, {3, 2, -2},
      {2, 4, 1},   {4, 2, 1},  {3, 4, 1},   {4, 3, 1},  {-1, 0, -2}, {-2, 0, 1},
      {2, 0, -2},  {0, -1, -2}, {3, 0, 1},  {0, -2, 1}, {0, 2, -2}, {0, 3, 1}};
  for (const auto& [a, b, k] : terms) c.add_term({a, b}, k);
  return c;
}

ParamSymbol butterfly(const Rational& lo, const Rational& hi) {
  return ParamSymbol(box_spline_three_direction(), {butterfly_correction()}, {{lo}, {hi}});
}

}  // namespace symbols

}  // namespace subdiv
