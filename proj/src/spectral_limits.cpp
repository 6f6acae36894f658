#include "subdiv/spectral_limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "subdiv/error.hpp"

namespace subdiv {

using cd = std::complex<double>;

namespace {

double period_of(int m, int r) { return std::pow(static_cast<double>(std::abs(m)), r); }

cd horner(const std::vector<cd>& c, cd z) {
  cd v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * z + c[k];
  return v;
}

cd horner_derivative(const std::vector<cd>& c, cd z) {
  cd v = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) v = v * z + static_cast<double>(k) * c[k];
  return v;
}

cd base_point(cd z, double P) {
  double re = -P / (2 * std::numbers::pi) * std::arg(z);
  const double im = P / (2 * std::numbers::pi) * std::log(std::abs(z));
  re -= P * std::ceil((re - P / 2) / P);
  if (re <= -P / 2 + 1e-9 * P) re += P;
  return {re, im};
}

void dedupe(std::vector<cd>& pts, double tol) {
  std::sort(pts.begin(), pts.end(), [](cd a, cd b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  std::vector<cd> out;
  for (const auto& p : pts) {
    bool dup = false;
    for (auto it = out.rbegin(); it != out.rend() && p.real() - it->real() <= tol; ++it) {
      if (std::abs(p - *it) <= tol) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(p);
  }
  pts = std::move(out);
}

long double j0_series(long double x) {
  const long double q = -(x * x) / 4;
  long double term = 1, sum = 1;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
    if (std::fabs(term) < 1e-30L && k > static_cast<int>(x)) break;
  }
  return sum;
}

}  // namespace

bool PeriodicZeroSet::contains(cd w, double tol) const {
  for (const auto& b : base_points) {
    const cd d = w - b;
    const double k = std::round(d.real() / period);
    if (std::abs(d - cd(k * period, 0.0)) <= tol) return true;
  }
  return false;
}

std::vector<cd> PeriodicZeroSet::points_in_window(double window) const {
  std::vector<cd> out;
  for (const auto& b : base_points) {
    if (std::abs(b.imag()) > window) continue;
    const auto k0 = static_cast<long long>(std::ceil((-window - b.real()) / period));
    const auto k1 = static_cast<long long>(std::floor((window - b.real()) / period));
    for (long long k = k0; k <= k1; ++k) out.push_back(b + cd(static_cast<double>(k) * period, 0.0));
  }
  return out;
}

std::vector<cd> polynomial_roots(std::vector<cd> c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  std::size_t low = 0;
  while (low < c.size() && c[low] == 0.0) ++low;
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(low));
  if (c.size() <= 1) return {};
  const auto n = static_cast<Eigen::Index>(c.size() - 1);
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 1; i < n; ++i) C(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) C(i, n - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
  std::vector<cd> roots;
  for (Eigen::Index i = 0; i < n; ++i) {
    cd z = es.eigenvalues()(i);
    for (int it = 0; it < 50; ++it) {
      const cd f = horner(c, z);
      const cd df = horner_derivative(c, z);
      if (std::abs(f) <= 1e-15 || df == 0.0) break;
      const cd step = f / df;
      const cd znew = z - step;
      if (std::abs(horner(c, znew)) >= std::abs(f)) break;
      z = znew;
    }
    roots.push_back(z);
  }
  return roots;
}

PeriodicZeroSet gamma_set(const std::vector<cd>& coeffs, int r, int m) {
  if (std::abs(m) < 2) throw ArgumentError("dilation factor must satisfy |m| >= 2");
  PeriodicZeroSet g;
  g.level = r;
  g.period = period_of(m, r);
  for (const auto& z : polynomial_roots(coeffs)) g.base_points.push_back(base_point(z, g.period));
  return g;
}

PeriodicZeroSet gamma_set(const LaurentPoly& p, int r, int m) {
  if (p.dim() != 1) throw ArgumentError("zero sets are computed for univariate symbols");
  if (p.is_zero()) throw EmptyMaskError("the zero symbol vanishes everywhere");
  const auto box = p.support();
  std::vector<cd> c(static_cast<std::size_t>(box.hi[0] - box.lo[0] + 1));
  for (const auto& [e, v] : p.terms()) c[static_cast<std::size_t>(e[0] - box.lo[0])] = to_double(v);
  return gamma_set(c, r, m);
}

ZeroUnion phi_hat_zero_union(const std::vector<std::vector<cd>>& symbols, int m, double window,
                             int start_level) {
  ZeroUnion u;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    u.levels.push_back(gamma_set(symbols[i], start_level + static_cast<int>(i), m));
    const auto pts = u.levels.back().points_in_window(window);
    u.window_points.insert(u.window_points.end(), pts.begin(), pts.end());
  }
  dedupe(u.window_points, 1e-9);
  std::ostringstream os;
  if (symbols.empty()) {
    os << "no levels given";
  } else {
    const int last = start_level + static_cast<int>(symbols.size()) - 1;
    os << "levels " << start_level << ".." << last << " included; levels > " << last
       << " only add points whose real part is a multiple of the period " << period_of(m, last + 1)
       << " away from their base point";
  }
  u.truncation_note = os.str();
  return u;
}

ZeroUnion phi_hat_zero_union(const std::vector<LaurentPoly>& symbols, int m, double window,
                             int start_level) {
  std::vector<std::vector<cd>> c;
  for (const auto& p : symbols) {
    if (p.dim() != 1) throw ArgumentError("zero sets are computed for univariate symbols");
    const auto box = p.support();
    std::vector<cd> v(static_cast<std::size_t>(box.hi[0] - box.lo[0] + 1));
    for (const auto& [e, x] : p.terms()) v[static_cast<std::size_t>(e[0] - box.lo[0])] = to_double(x);
    c.push_back(std::move(v));
  }
  return phi_hat_zero_union(c, m, window, start_level);
}

GenerabilityVerdict generability_necessary_test(const std::vector<cd>& zeros_in, int m, double window,
                                                int r_max) {
  if (std::abs(m) < 2) throw ArgumentError("dilation factor must satisfy |m| >= 2");
  if (!(window > 0)) throw ArgumentError("window must be positive");
  const double M = std::abs(m);
  GenerabilityVerdict v;
  if (r_max <= 0) {
    r_max = 0;
    while (std::pow(M, r_max + 1) <= window) ++r_max;
  }
  v.r_max = r_max;
  std::vector<cd> zeros = zeros_in;
  dedupe(zeros, 1e-9);
  if (zeros.empty()) {
    v.kind = GenerabilityVerdict::Kind::consistent;
    v.message = "no zeros given; vacuously consistent";
    return v;
  }
  auto member = [&](cd w) {
    return std::any_of(zeros.begin(), zeros.end(), [&](cd z) { return std::abs(z - w) <= 1e-6; });
  };
  for (const auto& w : zeros) {
    if (std::abs(w) + M > window) continue;
    ++v.tested;
    bool ok = false;
    for (int r = 1; r <= r_max && !ok; ++r) {
      const double P = std::pow(M, r);
      ok = member(w + P) && member(w - P);
    }
    if (!ok) v.witnesses.push_back(w);
  }
  std::ostringstream os;
  if (v.tested == 0 || r_max < 1) {
    v.kind = GenerabilityVerdict::Kind::inconclusive;
    os << "window " << window << " too small to test any zero";
  } else if (!v.witnesses.empty()) {
    v.kind = GenerabilityVerdict::Kind::violation;
    os << v.witnesses.size() << " of " << v.tested
       << " tested zeros have no periodic partners; the function cannot be generated";
  } else {
    v.kind = GenerabilityVerdict::Kind::consistent;
    os << "all " << v.tested << " tested zeros have periodic partners inside the window"
       << " (necessary condition only, not a proof of generability)";
  }
  v.message = os.str();
  return v;
}

std::vector<double> bessel_j0_zeros(int count) {
  std::vector<double> out;
  long double a = 0.05L;
  long double fa = j0_series(a);
  while (static_cast<int>(out.size()) < count) {
    const long double b = a + 0.05L;
    const long double fb = j0_series(b);
    if ((fa < 0) != (fb < 0)) {
      long double lo = a, hi = b, flo = fa;
      for (int it = 0; it < 200 && hi - lo > 1e-18L; ++it) {
        const long double mid = 0.5L * (lo + hi);
        const long double fm = j0_series(mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(static_cast<double>(0.5L * (lo + hi)));
    }
    a = b;
    fa = fb;
    if (a > 200) throw DomainError("series evaluation of J0 is not accurate this far out");
  }
  return out;
}

}  // namespace subdiv
