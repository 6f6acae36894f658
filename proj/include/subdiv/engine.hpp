#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "subdiv/error.hpp"
#include "subdiv/laurent.hpp"

namespace subdiv {

/// Level -> parameter rule. Levels start at 1. An optional prefix overrides
/// the first levels.
class ParameterSchedule {
 public:
  enum class Kind { fixed, list, random_uniform, convergent_to };
  using Point = ParamSymbol::Point;

  static ParameterSchedule fixed(Point w);
  /// Level r uses values[r - 1]; levels past the end repeat the last value.
  static ParameterSchedule list(std::vector<Point> values);
  /// Uniform draw from the convex hull of `vertices` (an interval when p = 1),
  /// independent per level and reproducible from the seed.
  static ParameterSchedule random_uniform(std::uint64_t seed, std::vector<Point> vertices);
  /// w(r) = target + (start - target) 2^{-r}.
  static ParameterSchedule convergent_to(Point target, Point start);

  ParameterSchedule with_prefix(std::vector<Point> prefix) const;

  Kind kind() const noexcept { return kind_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::vector<Point>& prefix() const noexcept { return prefix_; }
  /// Points spanning the parameters used after the prefix.
  const std::vector<Point>& tail_points() const noexcept { return points_; }

  Point at(int level) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::fixed;
  std::uint64_t seed_ = 0;
  std::vector<Point> points_;
  std::vector<Point> prefix_;
};

inline double to_value(const Rational& q, double) { return to_double(q); }
inline Rational to_value(const Rational& q, const Rational&) { return q; }

/// Refined sequence c^(r). Index alpha sits at alpha * m^{-level}; data are
/// indexed by the exponents of the unshifted symbols, so no extra offset
/// correction is needed when sampling.
template <class T>
struct RefinedData {
  int m = 2;
  int level = 0;
  std::size_t dim = 1;
  std::map<MultiIndex, T> values;

  static RefinedData delta(std::size_t dim, int m, int level = 0) {
    RefinedData d;
    d.m = m;
    d.level = level;
    d.dim = dim;
    d.values[MultiIndex(dim)] = T(1);
    return d;
  }
  double position(const MultiIndex& a, std::size_t axis = 0) const {
    return static_cast<double>(a[axis]) * std::pow(static_cast<double>(m), -level);
  }
};

/// (S c)(alpha) = sum_beta a_{alpha - m beta} c(beta).
template <class T>
RefinedData<T> subdivide_once(const RefinedData<T>& data, const LaurentPoly& symbol) {
  if (symbol.dim() != data.dim) throw ArgumentError("mask and data dimensions differ");
  RefinedData<T> out;
  out.m = data.m;
  out.level = data.level + 1;
  out.dim = data.dim;
  std::vector<std::pair<MultiIndex, T>> mask;
  for (const auto& [e, c] : symbol.terms()) mask.emplace_back(e, to_value(c, T{}));
  for (const auto& [beta, cb] : data.values) {
    const MultiIndex base = beta.scaled(data.m);
    for (const auto& [e, a] : mask) out.values[base + e] += a * cb;
  }
  for (auto it = out.values.begin(); it != out.values.end();) {
    if (it->second == T(0)) it = out.values.erase(it);
    else ++it;
  }
  return out;
}

template <class T>
RefinedData<T> subdivide_once(const RefinedData<T>& data, const Mask& mask) {
  return subdivide_once(data, to_symbol(mask));
}

/// Applies the masks for levels start .. start + levels - 1.
template <class T>
RefinedData<T> cascade(const ParamSymbol& ps, const ParameterSchedule& schedule, int start_level,
                       int levels, RefinedData<T> data) {
  if (levels < 0) throw ArgumentError("number of levels must be nonnegative");
  if (start_level < 1) throw ArgumentError("start level must be at least 1");
  for (int r = start_level; r < start_level + levels; ++r) {
    data = subdivide_once(data, ps.instantiate(schedule.at(r)));
  }
  return data;
}

struct SupportRange {
  Rational left;
  Rational right;
};

/// [sum_k m^{-k-1} l(k), sum_k m^{-k-1} r(k)] where the first entries come from
/// `prefix` and every later level uses `tail`. Throws ArgumentError without a tail.
SupportRange support_interval(const std::vector<SupportRange>& prefix,
                              const std::optional<SupportRange>& tail, int m);

/// Per-level symbol supports for a schedule: prefix levels exactly, and the
/// generic support of the tail parameters.
std::pair<std::vector<SupportRange>, SupportRange> schedule_supports(const ParamSymbol& ps,
                                                                     const ParameterSchedule& s,
                                                                     int start_level = 1);

struct ProbeReport {
  /// sup |second difference of c^(r)| for r = 1..levels.
  std::vector<double> second_differences;
  /// sup |Q_{r+1} - Q_r| of hat-function quasi-interpolants, r = 1..levels-1.
  std::vector<double> quasi_interpolant_gaps;
  /// Geometric mean ratio of second differences over [rate_from, levels].
  double rate = 0.0;
  int rate_from = 1;
  bool decaying = false;
  std::string label = "heuristic estimate, not a proof";
};

ProbeReport convergence_probe(const ParamSymbol& ps, const ParameterSchedule& schedule, int levels,
                              int m, int rate_from = 0, int start_level = 1);

}  // namespace subdiv
