#include "subdiv/engine.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace subdiv {

namespace {

Rational pow_rational(int m, int k) {
  Rational r = 1;
  for (int i = 0; i < std::abs(k); ++i) r *= m;
  return k >= 0 ? r : Rational(1) / r;
}

// 53-bit uniform in [0, 1) as an exact dyadic rational.
Rational uniform53(std::mt19937_64& rng) {
  const std::uint64_t bits = rng() >> 11;
  mpz_class num;
  mpz_import(num.get_mpz_t(), 1, 1, sizeof(bits), 0, 0, &bits);
  mpz_class den = 1;
  den <<= 53;
  Rational q(num, den);
  q.canonicalize();
  return q;
}

std::string point_string(const ParameterSchedule::Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + to_string(p[i]);
  return s + ")";
}

}  // namespace

ParameterSchedule ParameterSchedule::fixed(Point w) {
  ParameterSchedule s;
  s.kind_ = Kind::fixed;
  s.points_ = {std::move(w)};
  return s;
}

ParameterSchedule ParameterSchedule::list(std::vector<Point> values) {
  if (values.empty()) throw ArgumentError("list schedule needs at least one value");
  ParameterSchedule s;
  s.kind_ = Kind::list;
  s.points_ = std::move(values);
  return s;
}

ParameterSchedule ParameterSchedule::random_uniform(std::uint64_t seed, std::vector<Point> vertices) {
  if (vertices.empty()) throw ArgumentError("random schedule needs at least one vertex");
  ParameterSchedule s;
  s.kind_ = Kind::random_uniform;
  s.seed_ = seed;
  s.points_ = std::move(vertices);
  return s;
}

ParameterSchedule ParameterSchedule::convergent_to(Point target, Point start) {
  if (target.size() != start.size()) throw ArgumentError("target and start differ in dimension");
  ParameterSchedule s;
  s.kind_ = Kind::convergent_to;
  s.points_ = {std::move(target), std::move(start)};
  return s;
}

ParameterSchedule ParameterSchedule::with_prefix(std::vector<Point> prefix) const {
  ParameterSchedule s = *this;
  s.prefix_ = std::move(prefix);
  return s;
}

ParameterSchedule::Point ParameterSchedule::at(int level) const {
  if (level < 1) throw ArgumentError("schedule levels start at 1");
  if (static_cast<std::size_t>(level) <= prefix_.size()) return prefix_[static_cast<std::size_t>(level - 1)];
  switch (kind_) {
    case Kind::fixed:
      return points_.front();
    case Kind::list: {
      const auto i = std::min(static_cast<std::size_t>(level - 1), points_.size() - 1);
      return points_[i];
    }
    case Kind::random_uniform: {
      std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                        static_cast<std::uint32_t>(level)};
      std::mt19937_64 rng(seq);
      const std::size_t p = points_.front().size();
      if (p == 1) {
        Rational lo = points_.front()[0], hi = lo;
        for (const auto& v : points_) {
          lo = std::min(lo, v[0]);
          hi = std::max(hi, v[0]);
        }
        return {lo + (hi - lo) * uniform53(rng)};
      }
      // convex weights from normalized spacings of sorted uniforms
      std::vector<Rational> cuts;
      for (std::size_t i = 0; i + 1 < points_.size(); ++i) cuts.push_back(uniform53(rng));
      std::sort(cuts.begin(), cuts.end());
      cuts.insert(cuts.begin(), Rational(0));
      cuts.push_back(Rational(1));
      Point w(p);
      for (std::size_t v = 0; v < points_.size(); ++v) {
        const Rational t = cuts[v + 1] - cuts[v];
        for (std::size_t j = 0; j < p; ++j) w[j] += t * points_[v][j];
      }
      return w;
    }
    case Kind::convergent_to: {
      const Rational f = pow_rational(2, -level);
      Point w(points_[0].size());
      for (std::size_t j = 0; j < w.size(); ++j) w[j] = points_[0][j] + (points_[1][j] - points_[0][j]) * f;
      return w;
    }
  }
  return points_.front();
}

std::string ParameterSchedule::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::fixed: os << "fixed " << point_string(points_.front()); break;
    case Kind::list: os << "list of " << points_.size() << " values"; break;
    case Kind::random_uniform: os << "random-uniform seed=" << seed_ << " over " << points_.size() << " vertices"; break;
    case Kind::convergent_to:
      os << "convergent-to " << point_string(points_[0]) << " from " << point_string(points_[1]);
      break;
  }
  if (!prefix_.empty()) {
    os << ", prefix";
    for (const auto& p : prefix_) os << ' ' << point_string(p);
  }
  return os.str();
}

SupportRange support_interval(const std::vector<SupportRange>& prefix,
                              const std::optional<SupportRange>& tail, int m) {
  if (std::abs(m) < 2) throw ArgumentError("dilation factor must satisfy |m| >= 2");
  if (!tail) throw ArgumentError("support endpoints must be eventually constant (a tail is required)");
  const int M = std::abs(m);
  SupportRange out{0, 0};
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    const Rational w = pow_rational(M, -static_cast<int>(k) - 1);
    out.left += w * prefix[k].left;
    out.right += w * prefix[k].right;
  }
  // sum_{k >= K} m^{-k-1} t = t m^{-K} / (m - 1)
  const Rational w = pow_rational(M, -static_cast<int>(prefix.size())) / Rational(M - 1);
  out.left += w * tail->left;
  out.right += w * tail->right;
  return out;
}

std::pair<std::vector<SupportRange>, SupportRange> schedule_supports(const ParamSymbol& ps,
                                                                     const ParameterSchedule& s,
                                                                     int start_level) {
  if (ps.dim() != 1) throw ArgumentError("support intervals are univariate");
  auto range_of = [](const LaurentPoly& p) {
    const IndexBox b = p.support();
    return SupportRange{Rational(static_cast<long>(b.lo[0])), Rational(static_cast<long>(b.hi[0]))};
  };
  std::vector<SupportRange> prefix;
  const int plen = static_cast<int>(s.prefix().size());
  for (int r = start_level; r <= plen; ++r) prefix.push_back(range_of(ps.instantiate(s.at(r))));
  // Tail: for list schedules the tail is the last value; otherwise the
  // generic support over the spanning points, i.e. the union of their supports.
  std::vector<ParameterSchedule::Point> pts = s.tail_points();
  if (s.kind() == ParameterSchedule::Kind::list) {
    const int first_tail = std::max(start_level, plen + 1);
    for (int r = first_tail; r < static_cast<int>(pts.size()) + 1; ++r) {
      prefix.push_back(range_of(ps.instantiate(s.at(r))));
    }
    pts = {pts.back()};
  }
  std::optional<SupportRange> tail;
  for (const auto& w : pts) {
    const LaurentPoly p = ps.instantiate(w);
    if (p.is_zero()) continue;
    const auto r = range_of(p);
    if (!tail) tail = r;
    else {
      tail->left = std::min(tail->left, r.left);
      tail->right = std::max(tail->right, r.right);
    }
  }
  if (!tail) throw EmptyMaskError("the schedule tail only produces zero symbols");
  return {prefix, *tail};
}

ProbeReport convergence_probe(const ParamSymbol& ps, const ParameterSchedule& schedule, int levels,
                              int m, int rate_from, int start_level) {
  if (ps.dim() != 1) throw ArgumentError("the convergence probe is univariate");
  if (levels < 2) throw ArgumentError("the probe needs at least two levels");
  ProbeReport rep;
  auto data = RefinedData<double>::delta(1, m, 0);
  RefinedData<double> prev = data;
  auto at = [](const RefinedData<double>& d, std::int64_t i) {
    auto it = d.values.find(MultiIndex{i});
    return it == d.values.end() ? 0.0 : it->second;
  };
  for (int r = 1; r <= levels; ++r) {
    data = subdivide_once(data, ps.instantiate(schedule.at(start_level + r - 1)));
    double d2 = 0.0;
    if (!data.values.empty()) {
      const std::int64_t lo = data.values.begin()->first[0] - 1;
      const std::int64_t hi = data.values.rbegin()->first[0] + 1;
      for (std::int64_t i = lo; i <= hi; ++i) {
        d2 = std::max(d2, std::abs(at(data, i + 1) - 2 * at(data, i) + at(data, i - 1)));
      }
    }
    rep.second_differences.push_back(d2);
    if (r >= 2) {
      // Q_{r-1} is linear between its nodes; compare on the finer grid.
      double gap = 0.0;
      std::int64_t lo = data.values.empty() ? 0 : data.values.begin()->first[0];
      std::int64_t hi = data.values.empty() ? 0 : data.values.rbegin()->first[0];
      if (!prev.values.empty()) {
        lo = std::min(lo, prev.values.begin()->first[0] * m);
        hi = std::max(hi, prev.values.rbegin()->first[0] * m);
      }
      for (std::int64_t b = lo - m; b <= hi + m; ++b) {
        const std::int64_t i = b >= 0 ? b / m : -((-b + m - 1) / m);
        const double frac = static_cast<double>(b - i * m) / m;
        const double coarse = (1 - frac) * at(prev, i) + frac * at(prev, i + 1);
        gap = std::max(gap, std::abs(at(data, b) - coarse));
      }
      rep.quasi_interpolant_gaps.push_back(gap);
    }
    prev = data;
  }
  rep.rate_from = rate_from > 0 ? rate_from : std::max(1, levels / 2);
  if (rep.rate_from >= levels) rep.rate_from = levels - 1;
  const double a = rep.second_differences[static_cast<std::size_t>(rep.rate_from - 1)];
  const double b = rep.second_differences.back();
  rep.rate = a > 0 ? std::pow(b / a, 1.0 / (levels - rep.rate_from)) : 0.0;
  rep.decaying = rep.rate < 1.0 - 1e-9;
  return rep;
}

}  // namespace subdiv
