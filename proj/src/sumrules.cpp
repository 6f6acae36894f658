#include "subdiv/sumrules.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "subdiv/error.hpp"

namespace subdiv {

namespace {

int abs_m(int m) {
  if (std::abs(m) < 2) throw ArgumentError("dilation factor must satisfy |m| >= 2");
  return std::abs(m);
}

std::int64_t mod(std::int64_t a, std::int64_t n) {
  std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

// Remainder of num modulo a monic den.
std::vector<Rational> poly_rem(std::vector<Rational> num, const std::vector<Rational>& den) {
  const std::size_t dd = den.size() - 1;
  for (std::size_t k = num.size(); k-- > dd;) {
    const Rational f = num[k];
    if (f == 0) continue;
    for (std::size_t j = 0; j <= dd; ++j) num[k - dd + j] -= f * den[j];
  }
  num.resize(std::min(num.size(), dd));
  return num;
}

std::vector<Rational> poly_div(std::vector<Rational> num, const std::vector<Rational>& den) {
  const std::size_t dd = den.size() - 1;
  std::vector<Rational> q(num.size() - dd);
  for (std::size_t k = num.size(); k-- > dd;) {
    const Rational f = num[k] / den[dd];
    q[k - dd] = f;
    for (std::size_t j = 0; j <= dd; ++j) num[k - dd + j] -= f * den[j];
  }
  return q;
}

std::vector<MultiIndex> compositions(std::size_t s, std::int64_t total) {
  std::vector<MultiIndex> out;
  MultiIndex cur(s);
  auto rec = [&](auto&& self, std::size_t i, std::int64_t left) -> void {
    if (i + 1 == s) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (std::int64_t v = left; v >= 0; --v) {
      cur[i] = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, total);
  return out;
}

double magnitude_at_root(const LaurentPoly& p, int M, const std::vector<int>& k) {
  std::complex<double> sum = 0.0;
  for (const auto& [e, c] : p.terms()) {
    std::int64_t t = 0;
    for (std::size_t j = 0; j < k.size(); ++j) t += k[j] * e[j];
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(mod(t, M)) / M;
    sum += to_double(c) * std::polar(1.0, angle);
  }
  return std::abs(sum);
}

}  // namespace

std::vector<std::vector<int>> coset_unit_roots(int m, std::size_t s) {
  const int M = abs_m(m);
  if (s == 0) throw ArgumentError("dimension must be positive");
  std::vector<std::vector<int>> out;
  std::vector<int> cur(s, 0);
  while (true) {
    // increment last coordinate fastest
    std::size_t i = s;
    while (i > 0) {
      --i;
      if (++cur[i] < M) break;
      cur[i] = 0;
      if (i == 0) return out;
    }
    out.push_back(cur);
  }
}

std::vector<Rational> cyclotomic_polynomial(int n) {
  if (n < 1) throw ArgumentError("cyclotomic index must be positive");
  std::vector<Rational> p(static_cast<std::size_t>(n) + 1);
  p[0] = -1;
  p[static_cast<std::size_t>(n)] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d == 0) p = poly_div(p, cyclotomic_polynomial(d));
  }
  return p;
}

bool vanishes_at_root(const LaurentPoly& p, int m, const std::vector<int>& k) {
  const int M = abs_m(m);
  if (k.size() != p.dim()) throw ArgumentError("root point has the wrong dimension");
  // The value only depends on the order of the root zeta^g, g = gcd(k..., M).
  std::vector<Rational> v(static_cast<std::size_t>(M));
  for (const auto& [e, c] : p.terms()) {
    std::int64_t t = 0;
    for (std::size_t j = 0; j < k.size(); ++j) t += k[j] * e[j];
    v[static_cast<std::size_t>(mod(t, M))] += c;
  }
  // zeta is a primitive M-th root; Q(zeta) = Q[x]/Phi_M.
  for (const auto& r : poly_rem(v, cyclotomic_polynomial(M))) {
    if (r != 0) return false;
  }
  return true;
}

SumRuleResult sum_rule_order(const LaurentPoly& p, int m) {
  const int M = abs_m(m);
  if (p.is_zero()) throw EmptyMaskError("sum rules are undefined for the zero symbol");
  SumRuleResult res;
  Rational target = 1;
  for (std::size_t i = 0; i < p.dim(); ++i) target *= M;
  const Rational total = p.coefficient_sum();
  res.normalized = (total == target);
  if (!res.normalized) {
    res.residual = std::abs(to_double(total - target));
    return res;
  }
  const auto roots = coset_unit_roots(m, p.dim());
  const std::int64_t cap = 1 + p.total_span();
  for (std::int64_t level = 0; level < cap; ++level) {
    double worst = 0.0;
    bool ok = true;
    for (const auto& eta : compositions(p.dim(), level)) {
      const LaurentPoly d = derivative(p, eta);
      for (const auto& k : roots) {
        if (!vanishes_at_root(d, m, k)) {
          ok = false;
          worst = std::max(worst, magnitude_at_root(d, M, k));
        }
      }
    }
    if (!ok) {
      res.residual = worst;
      return res;
    }
    res.order = static_cast<int>(level + 1);
  }
  return res;
}

SumRuleResult family_sum_rule_order(const ParamSymbol& ps, int m) {
  SumRuleResult best;
  bool first = true;
  bool all_normalized = true;
  for (std::size_t i = 0; i < ps.vertex_count(); ++i) {
    const auto r = sum_rule_order(ps.instantiate_vertex(i), m);
    all_normalized = all_normalized && r.normalized;
    if (first || r.order < best.order || (r.order == best.order && r.residual > best.residual)) {
      best = r;
      first = false;
    }
  }
  best.normalized = all_normalized;
  return best;
}

}  // namespace subdiv
