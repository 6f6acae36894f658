#pragma once

// Reference implementations used only by the tests. They are deliberately
// naive and share no code with the library beyond the Rational type.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "subdiv/laurent.hpp"
#include "subdiv/rational.hpp"

namespace oracle {

using subdiv::Rational;

/// Dense univariate polynomial c[0] z^offset + c[1] z^(offset+1) + ...
struct Dense {
  std::int64_t offset = 0;
  std::vector<Rational> c;
};

inline Dense trim(Dense p) {
  std::size_t lo = 0;
  while (lo < p.c.size() && p.c[lo] == 0) ++lo;
  if (lo == p.c.size()) return {};
  std::size_t hi = p.c.size();
  while (p.c[hi - 1] == 0) --hi;
  Dense out;
  out.offset = p.offset + static_cast<std::int64_t>(lo);
  out.c.assign(p.c.begin() + lo, p.c.begin() + hi);
  return out;
}

inline Dense dense(const subdiv::LaurentPoly& p) {
  if (p.is_zero()) return {};
  std::int64_t lo = p.terms().begin()->first[0];
  std::int64_t hi = p.terms().rbegin()->first[0];
  Dense d;
  d.offset = lo;
  d.c.assign(static_cast<std::size_t>(hi - lo + 1), Rational(0));
  for (const auto& [e, c] : p.terms()) d.c[static_cast<std::size_t>(e[0] - lo)] = c;
  return d;
}

inline Dense multiply(const Dense& a, const Dense& b) {
  if (a.c.empty() || b.c.empty()) return {};
  Dense out;
  out.offset = a.offset + b.offset;
  out.c.assign(a.c.size() + b.c.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) out.c[i + j] += a.c[i] * b.c[j];
  return trim(out);
}

inline bool same(const Dense& a, const subdiv::LaurentPoly& b) {
  Dense x = trim(a), y = dense(b);
  return x.c == y.c && (x.c.empty() || x.offset == y.offset);
}

/// Synthetic division by 1 + z + ... + z^(m-1); false when a remainder is left.
inline bool divide_geometric(Dense& p, int m) {
  if (p.c.empty()) return false;
  std::vector<Rational> r = p.c;
  const std::size_t n = r.size();
  if (n < static_cast<std::size_t>(m)) return false;
  std::vector<Rational> q(n - m + 1, Rational(0));
  for (int i = static_cast<int>(n) - 1; i >= m - 1; --i) {
    const int k = i - (m - 1);
    q[k] = r[i];
    for (int j = 0; j < m; ++j) r[k + j] -= q[k];
  }
  for (const auto& x : r)
    if (x != 0) return false;
  p.c = q;
  return true;
}

/// Multiplicity of the factor 1 + ... + z^(m-1) in p.
inline int geometric_multiplicity(Dense p, int m) {
  int k = 0;
  while (divide_geometric(p, m)) ++k;
  return k;
}

inline std::complex<double> eval(const Dense& p, std::complex<double> z) {
  std::complex<double> acc = 0.0;
  for (std::size_t i = p.c.size(); i-- > 0;) acc = acc * z + p.c[i].get_d();
  return acc * std::pow(z, static_cast<int>(p.offset));
}

/// A_eps(alpha, beta) = b_{m alpha + eps - beta} on the window {0..n-1}, b
/// given by dense coefficients b[0..].
inline Eigen::MatrixXd section(const std::vector<double>& b, int m, int eps, int n) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < n; ++c) {
      const int k = m * a + eps - c;
      if (k >= 0 && k < static_cast<int>(b.size())) A(a, c) = b[static_cast<std::size_t>(k)];
    }
  return A;
}

inline double rho(const Eigen::MatrixXd& A) {
  return A.eigenvalues().cwiseAbs().maxCoeff();
}

/// Exhaustive bracket over all words of length 1..k: lower from spectral
/// radii, upper from 2-norms of the length-k products.
struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
};
inline Bracket brute_force_jsr(const std::vector<Eigen::MatrixXd>& fam, int k) {
  Bracket out;
  std::vector<Eigen::MatrixXd> layer{Eigen::MatrixXd::Identity(fam[0].rows(), fam[0].cols())};
  for (int len = 1; len <= k; ++len) {
    std::vector<Eigen::MatrixXd> next;
    for (const auto& P : layer)
      for (const auto& A : fam) next.push_back(A * P);
    layer = std::move(next);
    for (const auto& P : layer) out.lower = std::max(out.lower, std::pow(rho(P), 1.0 / len));
  }
  for (const auto& P : layer) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(P);
    out.upper = std::max(out.upper, std::pow(svd.singularValues()(0), 1.0 / k));
  }
  return out;
}

/// Positive zeros of J0 by sign scan and bisection on std::cyl_bessel_j.
inline std::vector<double> j0_zeros(int count) {
  std::vector<double> z;
  double x = 0.1, fx = std::cyl_bessel_j(0.0, x);
  while (static_cast<int>(z.size()) < count) {
    const double y = x + 0.05, fy = std::cyl_bessel_j(0.0, y);
    if ((fx < 0) != (fy < 0)) {
      double lo = x, hi = y, flo = fx;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = std::cyl_bessel_j(0.0, mid);
        if ((fm < 0) == (flo < 0)) { lo = mid; flo = fm; } else { hi = mid; }
      }
      z.push_back(0.5 * (lo + hi));
    }
    x = y;
    fx = fy;
  }
  return z;
}

/// Random rational p/q with |p| <= num_max and 1 <= q <= den_max.
inline Rational random_rational(std::mt19937& g, int num_max = 20, int den_max = 12) {
  std::uniform_int_distribution<int> num(-num_max, num_max), den(1, den_max);
  Rational q(num(g), den(g));
  q.canonicalize();
  return q;
}

inline subdiv::LaurentPoly random_poly(std::mt19937& g, std::size_t dim, int terms = 4,
                                       int spread = 3) {
  std::uniform_int_distribution<int> ex(-spread, spread);
  subdiv::LaurentPoly p(dim);
  for (int t = 0; t < terms; ++t) {
    subdiv::MultiIndex e(dim);
    for (std::size_t i = 0; i < dim; ++i) e[i] = ex(g);
    p.add_term(e, random_rational(g));
  }
  return p;
}

inline Rational rat(const char* s) { return subdiv::parse_rational(s); }

/// Printed display of the four-point family on V_1, entries as printed
/// (row i of the display). Our convention stores its transpose.
inline std::vector<std::vector<Rational>> four_point_display(int eps, const Rational& w) {
  const Rational h(1, 2);
  const Rational z(0);
  if (eps == 0)
    return {{-w, -2 * w + h, -w, z}, {z, 2 * w, 2 * w, z}, {z, -w, -2 * w + h, -w}, {z, z, 2 * w, 2 * w}};
  return {{2 * w, 2 * w, z, z}, {-w, -2 * w + h, -w, z}, {z, 2 * w, 2 * w, z}, {z, -w, -2 * w + h, -w}};
}

/// The 7x7 display of the four-point/DD6 family on V_2, scaled by 256. The
/// merged cell in row 1 of A_1 is read as "3 - 3w, 0".
inline std::vector<std::vector<Rational>> blend_display(int eps, const Rational& w) {
  const Rational p = 3 - 3 * w, q = -9 + 9 * w, r = -7 - 9 * w, s = 45 + 3 * w, o = 0;
  std::vector<std::vector<Rational>> m;
  if (eps == 0)
    m = {{p, o, o, o, o, o, o}, {r, q, p, o, o, o, o}, {s, s, r, q, p, o, o}, {q, r, s, s, r, q, p},
         {o, p, q, r, s, s, r}, {o, o, o, p, q, r, s}, {o, o, o, o, o, p, q}};
  else
    m = {{q, p, o, o, o, o, o}, {s, r, q, p, o, o, o}, {r, s, s, r, q, p, o}, {p, q, r, s, s, r, q},
         {o, o, p, q, r, s, s}, {o, o, o, o, p, q, r}, {o, o, o, o, o, o, p}};
  for (auto& row : m)
    for (auto& x : row) x /= 256;
  return m;
}

}  // namespace oracle
