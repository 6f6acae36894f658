#include "subdiv/transition.hpp"

#include <algorithm>
#include <set>

#include "subdiv/error.hpp"
#include "subdiv/sumrules.hpp"

namespace subdiv {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

int abs_m(int m) {
  if (std::abs(m) < 2) throw ArgumentError("dilation factor must satisfy |m| >= 2");
  return std::abs(m);
}

void check_coset(const CosetIndex& eps, int M, std::size_t s) {
  if (eps.size() != s) throw ArgumentError("coset index has the wrong dimension");
  for (auto e : eps) {
    if (e < 0 || e >= M) {
      throw ArgumentError("coset entries must lie in {0.." + std::to_string(M - 1) + "}, got " +
                          eps.to_string());
    }
  }
}

std::vector<MultiIndex> box_points(const MultiIndex& lo, const MultiIndex& hi) {
  std::vector<MultiIndex> out;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (hi[i] < lo[i]) return out;
  }
  MultiIndex cur = lo;
  while (true) {
    out.push_back(cur);
    std::size_t i = lo.size();
    while (i > 0) {
      --i;
      if (++cur[i] <= hi[i]) break;
      cur[i] = lo[i];
      if (i == 0) return out;
    }
  }
}

// Nonzero local indices of a mask.
std::vector<MultiIndex> mask_support(const Mask& mask) {
  std::vector<MultiIndex> out;
  for (std::size_t k = 0; k < mask.coeffs().size(); ++k) {
    if (mask.coeffs()[k] != 0) out.push_back(mask.local_index(k));
  }
  return out;
}

// Rows alpha reached from column beta: m alpha = k + beta - eps for a nonzero k.
template <class F>
void for_each_reached_row(const std::vector<MultiIndex>& support, int M, const MultiIndex& beta,
                          const std::vector<CosetIndex>& eps_list, F&& f) {
  for (const auto& eps : eps_list) {
    for (const auto& k : support) {
      MultiIndex alpha(beta.size());
      bool integral = true;
      for (std::size_t i = 0; i < beta.size() && integral; ++i) {
        const std::int64_t num = k[i] + beta[i] - eps[i];
        if (num % M != 0) integral = false;
        else alpha[i] = num / M;
      }
      if (integral) f(alpha);
    }
  }
}

Mask union_mask(const std::vector<Mask>& masks) {
  const Mask& first = masks.front();
  std::vector<Rational> c(first.coeffs().size());
  for (const auto& mk : masks) {
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (mk.coeffs()[k] != 0) c[k] = 1;
    }
  }
  return Mask(first.offset(), first.extents(), std::move(c));
}

std::vector<MultiIndex> monomials(std::size_t s, int degree) {
  std::vector<MultiIndex> out;
  MultiIndex cur(s);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i == s) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[i] = v;
      self(self, i + 1, left - v);
    }
    cur[i] = 0;
  };
  rec(rec, 0, degree);
  return out;
}

[[noreturn]] void throw_not_enough(const ParamSymbol& ps, int m, int ell) {
  const auto r = family_sum_rule_order(ps, m);
  throw NotEnoughSumRulesError("restriction to V_" + std::to_string(ell) + " needs sum rules of order " +
                                   std::to_string(ell + 1) + ", family has order " +
                                   std::to_string(r.order),
                               r.order);
}

}  // namespace

std::vector<CosetIndex> cosets(int m, std::size_t s) {
  const int M = abs_m(m);
  return box_points(MultiIndex(s, 0), MultiIndex(s, M - 1));
}

Eigen::MatrixXd RationalMatrix::to_double() const {
  Eigen::MatrixXd r(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = subdiv::to_double((*this)(i, j));
    }
  }
  return r;
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols, rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

std::size_t IndexWindow::find(const MultiIndex& a) const {
  auto it = std::lower_bound(points.begin(), points.end(), a);
  if (it != points.end() && *it == a) return static_cast<std::size_t>(it - points.begin());
  return points.size();
}

IndexWindow index_window(const MultiIndex& support_width, int m) {
  const int M = abs_m(m);
  const std::size_t s = support_width.size();
  MultiIndex lo(s), hi(s);
  for (std::size_t i = 0; i < s; ++i) {
    lo[i] = ceil_div(-M, M - 1);
    hi[i] = floor_div(support_width[i] + 1, M - 1);
  }
  return IndexWindow{box_points(lo, hi)};
}

bool window_is_invariant(const Mask& mask, int m, const IndexWindow& w) {
  const int M = abs_m(m);
  const auto support = mask_support(mask);
  const auto eps_list = cosets(m, mask.dim());
  bool ok = true;
  for (const auto& beta : w.points) {
    for_each_reached_row(support, M, beta, eps_list, [&](const MultiIndex& alpha) {
      if (w.find(alpha) == w.size()) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

IndexWindow invariant_window(const Mask& mask, int m) {
  const int M = abs_m(m);
  IndexWindow w = index_window(mask.width(), m);
  if (window_is_invariant(mask, m, w)) return w;
  const auto support = mask_support(mask);
  const auto eps_list = cosets(m, mask.dim());
  std::set<MultiIndex> pts(w.points.begin(), w.points.end());
  std::vector<MultiIndex> todo(w.points.begin(), w.points.end());
  while (!todo.empty()) {
    const MultiIndex beta = todo.back();
    todo.pop_back();
    for_each_reached_row(support, M, beta, eps_list, [&](const MultiIndex& alpha) {
      if (pts.insert(alpha).second) todo.push_back(alpha);
    });
  }
  return IndexWindow{std::vector<MultiIndex>(pts.begin(), pts.end())};
}

RationalMatrix full_matrix(const Mask& mask, int m, const CosetIndex& eps, const IndexWindow& w) {
  const int M = abs_m(m);
  check_coset(eps, M, mask.dim());
  RationalMatrix A(w.size(), w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const MultiIndex base = w.points[i].scaled(M) + eps;
    for (std::size_t j = 0; j < w.size(); ++j) A(i, j) = mask.at(base - w.points[j]);
  }
  return A;
}

std::vector<Eigen::MatrixXd> TransitionFamily::members() const {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& row : matrices) out.insert(out.end(), row.begin(), row.end());
  return out;
}

std::vector<Eigen::MatrixXd> TransitionFamily::boundary_members() const {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& row : boundary) out.insert(out.end(), row.begin(), row.end());
  return out;
}

std::string TransitionFamily::key(std::size_t vertex, std::size_t coset) {
  return "vertex_" + std::to_string(vertex) + "/eps_" + std::to_string(coset);
}

std::vector<Mask> vertex_masks(const ParamSymbol& ps) {
  std::vector<LaurentPoly> syms;
  for (std::size_t v = 0; v < ps.vertex_count(); ++v) syms.push_back(ps.instantiate_vertex(v));
  std::optional<IndexBox> box;
  for (const auto& p : syms) {
    if (p.is_zero()) continue;
    const IndexBox b = p.support();
    if (!box) {
      box = b;
      continue;
    }
    for (std::size_t i = 0; i < b.dim(); ++i) {
      box->lo[i] = std::min(box->lo[i], b.lo[i]);
      box->hi[i] = std::max(box->hi[i], b.hi[i]);
    }
  }
  if (!box) throw EmptyMaskError("every vertex symbol is zero");
  MultiIndex extents = box->width();
  std::size_t count = 1;
  for (std::size_t i = 0; i < extents.size(); ++i) {
    extents[i] += 1;
    count *= static_cast<std::size_t>(extents[i]);
  }
  std::vector<Mask> out;
  for (const auto& p : syms) {
    Mask proto(box->lo, extents, std::vector<Rational>(count));
    std::vector<Rational> c(count);
    for (const auto& [e, v] : p.terms()) c[proto.flat_index(e - box->lo)] = v;
    out.emplace_back(box->lo, extents, std::move(c));
  }
  return out;
}

TransitionFamily restrict_univariate(const ParamSymbol& ps, int m, int ell) {
  const int M = abs_m(m);
  if (ps.dim() != 1) throw ArgumentError("univariate restriction needs s = 1");
  if (ell < 0) throw ArgumentError("l must be nonnegative");
  LaurentPoly factor = LaurentPoly::constant(1, 1);
  const LaurentPoly g = LaurentPoly::geometric_factor(1, 0, M);
  for (int k = 0; k <= ell; ++k) factor = factor * g;

  std::vector<LaurentPoly> bs;
  for (std::size_t v = 0; v < ps.vertex_count(); ++v) {
    auto q = divide_exact(ps.instantiate_vertex(v), factor);
    if (!q) throw_not_enough(ps, m, ell);
    bs.push_back(std::move(*q));
  }
  std::int64_t lo = 0, hi = 0;
  bool any = false;
  for (const auto& b : bs) {
    if (b.is_zero()) continue;
    const auto box = b.support();
    lo = any ? std::min(lo, box.lo[0]) : box.lo[0];
    hi = any ? std::max(hi, box.hi[0]) : box.hi[0];
    any = true;
  }
  if (!any) throw EmptyMaskError("restricted symbol is zero at every vertex");
  const std::int64_t Nb = hi - lo;

  std::vector<Mask> masks;
  for (const auto& b : bs) {
    std::vector<Rational> c(static_cast<std::size_t>(Nb + 1));
    for (const auto& [e, v] : b.terms()) c[static_cast<std::size_t>(e[0] - lo)] = v;
    masks.emplace_back(MultiIndex{lo}, MultiIndex{Nb + 1}, std::move(c));
  }

  const std::int64_t core = std::max<std::int64_t>(1, floor_div(Nb - 1, M - 1) + 1);
  IndexWindow core_w{box_points(MultiIndex{0}, MultiIndex{core - 1})};
  IndexWindow full_w = invariant_window(union_mask(masks), m);
  std::set<MultiIndex> all(full_w.points.begin(), full_w.points.end());
  all.insert(core_w.points.begin(), core_w.points.end());
  IndexWindow rest_w;
  for (const auto& p : all) {
    if (core_w.find(p) == core_w.size()) rest_w.points.push_back(p);
  }

  TransitionFamily tf;
  tf.m = m;
  tf.ell = ell;
  tf.dim_V = core_w.size();
  tf.vertices = ps.domain();
  tf.coset_list = cosets(m, 1);
  tf.window = core_w;
  tf.boundary_dim = rest_w.size();
  for (const auto& mask : masks) {
    std::vector<RationalMatrix> ex, bex;
    std::vector<Eigen::MatrixXd> dbl, bdbl;
    for (const auto& eps : tf.coset_list) {
      ex.push_back(full_matrix(mask, m, eps, core_w));
      dbl.push_back(ex.back().to_double());
      if (!rest_w.points.empty()) {
        bex.push_back(full_matrix(mask, m, eps, rest_w));
        bdbl.push_back(bex.back().to_double());
      }
    }
    tf.exact.push_back(std::move(ex));
    tf.matrices.push_back(std::move(dbl));
    if (!rest_w.points.empty()) {
      tf.boundary_exact.push_back(std::move(bex));
      tf.boundary.push_back(std::move(bdbl));
    }
  }
  return tf;
}

TransitionFamily restrict_multivariate(const ParamSymbol& ps, int m, int ell) {
  abs_m(m);
  if (ell < 0) throw ArgumentError("l must be nonnegative");
  const auto order = family_sum_rule_order(ps, m);
  if (order.order < ell + 1) throw_not_enough(ps, m, ell);

  const auto masks = vertex_masks(ps);
  const IndexWindow K = invariant_window(union_mask(masks), m);
  const auto mons = monomials(ps.dim(), ell);
  const auto n = static_cast<Eigen::Index>(K.size());
  Eigen::MatrixXd P(static_cast<Eigen::Index>(mons.size()), n);
  for (std::size_t r = 0; r < mons.size(); ++r) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double v = 1.0;
      const auto& a = K.points[static_cast<std::size_t>(j)];
      for (std::size_t i = 0; i < a.size(); ++i) v *= std::pow(static_cast<double>(a[i]), mons[r][i]);
      P(static_cast<Eigen::Index>(r), j) = v;
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(P, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-10 * sv(0)) ++rank;
  }
  const Eigen::MatrixXd B = svd.matrixV().rightCols(n - rank);

  TransitionFamily tf;
  tf.m = m;
  tf.ell = ell;
  tf.dim_V = static_cast<std::size_t>(B.cols());
  tf.vertices = ps.domain();
  tf.coset_list = cosets(m, ps.dim());
  tf.basis = B;
  tf.window = K;
  for (const auto& mask : masks) {
    std::vector<Eigen::MatrixXd> row;
    for (const auto& eps : tf.coset_list) {
      const Eigen::MatrixXd A = full_matrix(mask, m, eps, K).to_double();
      const Eigen::MatrixXd AB = A * B;
      Eigen::MatrixXd R = B.transpose() * AB;
      const double res = (AB - B * R).rowwise().norm().maxCoeff();
      tf.invariance_residual = std::max(tf.invariance_residual, res);
      if (res > 1e-8) {
        throw SumRuleInconsistencyError("V_" + std::to_string(ell) +
                                        " is not invariant under the transition matrices (residual " +
                                        std::to_string(res) + ")");
      }
      row.push_back(std::move(R));
    }
    tf.matrices.push_back(std::move(row));
  }
  return tf;
}

TransitionFamily restrict_family(const ParamSymbol& ps, int m, int ell) {
  return ps.dim() == 1 ? restrict_univariate(ps, m, ell) : restrict_multivariate(ps, m, ell);
}

}  // namespace subdiv
