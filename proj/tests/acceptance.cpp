// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "oracles.hpp"
#include "subdiv/engine.hpp"
#include "subdiv/jsr.hpp"
#include "subdiv/regularity.hpp"
#include "subdiv/scheme_io.hpp"
#include "subdiv/spectral_limits.hpp"
#include "subdiv/sumrules.hpp"
#include "subdiv/transition.hpp"

using namespace subdiv;
using cd = std::complex<double>;

namespace {

// Pinned tolerances.
constexpr double kRhoHalfTol = 1e-9;
constexpr double kRhoShrunkTol = 1e-6;
constexpr double kAlphaShrunk = 1.4150, kAlphaShrunkTol = 1e-3;
constexpr double kBlendGamma = 0.2078, kBlendContain = 1e-4, kBlendWidth = 2e-3;
constexpr double kBlendAlpha = 2.266, kBlendAlphaTol = 2e-2;
constexpr double kDd6Alpha = 2.8301, kDd6Contain = 5e-5, kDd6Width = 5e-2;
constexpr double kFourPointAlpha = 2.0, kFourPointTol = 1e-3;
constexpr double kGammaTol = 1e-10;
constexpr int kPropertyCases = 200;
constexpr int kMemberships = 100;

const double kPi = std::acos(-1.0);

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool timely = s < limit_s;
  const bool pass = o.pass && timely;
  if (!pass) ++failures;
  std::printf("[%s] %2d %-44s %8.3fs (limit %gs)  %s%s\n", pass ? "PASS" : "FAIL", id, name, s, limit_s,
              o.detail.c_str(), timely ? "" : " [too slow]");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string scheme(const std::string& name) { return std::string(SUBDIV_SOURCE_DIR) + "/schemes/" + name; }

ParamSymbol blend() {
  return ParamSymbol::convex_combination(symbols::four_point_symbol(), symbols::dd6_symbol());
}

Outcome golden_matrices() {
  const std::string path =
      (std::filesystem::temp_directory_path() / "subdiv_acceptance_matrices.json").string();
  const std::string argv_s[] = {"subdiv", "matrices", scheme("fourpoint.json"), "--ell", "1", "--out", path};
  const char* argv[7];
  for (int i = 0; i < 7; ++i) argv[i] = argv_s[i].c_str();
  std::ostringstream out, err;
  if (cli::run(7, argv, out, err) != 0) return {false, "matrices failed: " + err.str()};
  const TransitionFamily tf = family_from_json(read_json_file(path));
  if (tf.exact.size() != 2 || tf.dim_V != 4) return {false, "unexpected family shape"};
  const Rational ws[2] = {Rational(0), Rational(1, 16)};
  int bad = 0;
  for (std::size_t v = 0; v < 2; ++v)
    for (int e = 0; e < 2; ++e) {
      const auto disp = oracle::four_point_display(e, ws[v]);
      const RationalMatrix T = tf.exact[v][static_cast<std::size_t>(e)].transpose();
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) bad += T(i, j) != disp[i][j];
    }
  return {bad == 0, fmt("%g mismatching entries of 64 (display compared transposed)", bad)};
}

Outcome rho_half() {
  const TransitionFamily tf = restrict_univariate(symbols::four_point(Rational(0), Rational(1, 16)), 2, 1);
  const JsrBounds b = interval_family_jsr(tf);
  const bool ok = std::abs(b.lower - 0.5) <= kRhoHalfTol && std::abs(b.upper - 0.5) <= kRhoHalfTol &&
                  b.witness.size() == 1 && b.max_depth <= 1;
  return {ok, fmt("[%.12f, %.12f], depth %g", b.lower, b.upper, b.max_depth)};
}

Outcome rho_shrunk() {
  RegularityOptions opt;
  opt.subdomain = std::vector<ParamSymbol::Point>{{Rational(3, 64)}, {Rational(1, 16)}};
  const RegularityReport r = analyze(symbols::four_point(Rational(0), Rational(1, 16)), 2, opt);
  const bool ok = r.has_bracket && std::abs(r.jsr.lower - 0.375) <= kRhoShrunkTol &&
                  std::abs(r.jsr.upper - 0.375) <= kRhoShrunkTol && r.holder_lower >= kAlphaShrunk - kAlphaShrunkTol;
  return {ok, fmt("gamma [%.9f, %.9f], alpha >= %.6f", r.jsr.lower, r.jsr.upper, r.holder_lower)};
}

Outcome supports() {
  const SchemeDocument d = read_scheme_file(scheme("example38.json"));
  const auto [prefix, tail] = schedule_supports(d.symbol, *d.schedule, d.start_level);
  const SupportRange s = support_interval(prefix, tail, 2);
  const auto [p2, t2] = schedule_supports(ParamSymbol::stationary(symbols::four_point_symbol()),
                                          ParameterSchedule::fixed({}));
  const SupportRange f = support_interval(p2, t2, 2);
  const bool ok = s.left == Rational(-3, 2) && s.right == Rational(3, 2) && f.left == -3 && f.right == 3;
  return {ok, "[" + to_string(s.left) + ", " + to_string(s.right) + "] and [" + to_string(f.left) + ", " +
                  to_string(f.right) + "]"};
}

Outcome blend_bracket() {
  RegularityOptions opt;
  opt.ell = 2;
  opt.subdomain = std::vector<ParamSymbol::Point>{{Rational(0)}, {Rational(1, 2)}};
  const RegularityReport r = analyze(blend(), 2, opt);
  const double lo = r.jsr.lower, hi = r.jsr.upper;
  const bool ok = r.ell_used == 2 && lo <= kBlendGamma + kBlendContain && hi >= kBlendGamma - kBlendContain &&
                  hi - lo <= kBlendWidth && r.holder_lower >= kBlendAlpha - kBlendAlphaTol;
  return {ok, fmt("gamma [%.8f, %.8f], alpha >= %.6f", lo, hi, r.holder_lower)};
}

Outcome dd6_bracket() {
  const RegularityReport r = stationary_analyze(symbols::dd6_symbol(), 2);
  const double a_lo = -std::log2(r.jsr.upper), a_hi = -std::log2(r.jsr.lower);
  const bool ok = r.has_bracket && a_lo <= kDd6Alpha + kDd6Contain && a_hi >= kDd6Alpha - kDd6Contain &&
                  a_hi - a_lo <= kDd6Width;
  return {ok, fmt("alpha in [%.8f, %.8f]", a_lo, a_hi)};
}

Outcome four_point_alpha() {
  const RegularityReport r = stationary_analyze(symbols::four_point_symbol(), 2);
  const bool ok = r.convergent_in >= 1 && r.holder_lower >= kFourPointAlpha - kFourPointTol;
  return {ok, fmt("alpha >= %.8f, C^%g", r.holder_lower, r.convergent_in)};
}

Outcome gamma_fixtures() {
  double worst = 0.0;
  const LaurentPoly haar = LaurentPoly::geometric_factor(1, 0, 2);
  const PeriodicZeroSet g1 = gamma_set(haar, 1, 2);
  if (g1.base_points.size() != 1 || g1.period != 2.0) return {false, "Gamma_1 has the wrong shape"};
  worst = std::max(worst, std::abs(g1.base_points[0] - cd(1, 0)));
  for (int r = 2; r <= 6; ++r) {
    const PeriodicZeroSet g = gamma_set(haar, r, 2);
    worst = std::max(worst, std::abs(g.base_points[0] - cd(std::pow(2.0, r - 1), 0)));
  }
  const double lambda = 1.0;
  for (int r = 1; r <= 6; ++r) {
    const PeriodicZeroSet g = gamma_set(std::vector<cd>{1.0, std::exp(lambda * std::pow(2.0, -r))}, r, 2);
    const cd d = g.base_points.at(0) - cd(std::pow(2.0, r - 1), -lambda / (2 * kPi));
    worst = std::max(worst, std::abs(cd(std::remainder(d.real(), g.period), d.imag())));
  }
  std::mt19937 gen(4242);
  std::uniform_int_distribution<int> level(1, 6), shift(-1000, 1000);
  int missed = 0;
  const LaurentPoly syms[] = {haar, symbols::four_point_symbol(), symbols::dd6_symbol()};
  for (int i = 0; i < kMemberships; ++i) {
    const PeriodicZeroSet z = gamma_set(syms[i % 3], level(gen), 2);
    const cd b = z.base_points[static_cast<std::size_t>(i) % z.base_points.size()];
    const cd w = b + double(shift(gen)) * z.period;
    missed += !(z.contains(w) && z.contains(w + z.period) && z.contains(w - z.period));
  }
  return {worst <= kGammaTol && missed == 0, fmt("max deviation %.2e, %g of 100 memberships missed", worst, missed)};
}

Outcome generability() {
  std::vector<cd> bessel;
  for (double z : oracle::j0_zeros(6)) bessel.emplace_back(z, 0.0);
  std::vector<cd> ints;
  for (int k = -20; k <= 20; ++k)
    if (k != 0) ints.emplace_back(k, 0.0);
  const auto v = generability_necessary_test(bessel, 2, 20.0);
  const auto c = generability_necessary_test(ints, 2, 20.0);
  const bool ok = v.kind == GenerabilityVerdict::Kind::violation && !v.witnesses.empty() &&
                  std::abs(v.witnesses.front().real() - 2.404825557695773) < 1e-9 &&
                  c.kind == GenerabilityVerdict::Kind::consistent;
  return {ok, "J0 zeros: " + std::string(v.kind == GenerabilityVerdict::Kind::violation ? "violation" : "no violation") +
                  ", Z\\{0}: " + (c.kind == GenerabilityVerdict::Kind::consistent ? "consistent" : "not consistent")};
}

Outcome properties() {
  std::mt19937 g(20260);
  int bad = 0;

  // affine instantiation
  const ParamSymbol fams[] = {symbols::four_point(Rational(0), Rational(1, 16)), blend(),
                              symbols::butterfly(Rational(0), Rational(1, 16))};
  std::uniform_int_distribution<int> tn(0, 1024);
  for (int i = 0; i < kPropertyCases; ++i) {
    const ParamSymbol& ps = fams[i % 3];
    Rational t(tn(g), 1024);
    t.canonicalize();
    const Rational u[1] = {ps.domain()[0][0]}, v[1] = {ps.domain()[1][0]};
    const Rational w[1] = {(1 - t) * u[0] + t * v[0]};
    bad += !(ps.instantiate(w) == (1 - t) * ps.instantiate(u) + t * ps.instantiate(v));
  }

  // sum-rule orders of the fixture symbols
  bad += sum_rule_order(fams[0].instantiate_vertex(0), 2).order != 2;
  bad += sum_rule_order(symbols::four_point_symbol(), 2).order != 4;
  bad += sum_rule_order(symbols::dd6_symbol(), 2).order != 6;
  bad += family_sum_rule_order(fams[2], 2).order != 2;
  for (int i = 0; i < kPropertyCases; ++i) {
    const ParamSymbol& ps = fams[i % 2];
    Rational t(tn(g), 1024);
    t.canonicalize();
    const Rational w[1] = {(1 - t) * ps.domain()[0][0] + t * ps.domain()[1][0]};
    bad += sum_rule_order(ps.instantiate(w), 2).order < family_sum_rule_order(ps, 2).order;
  }

  // JSR invariants
  JsrOptions jo;
  jo.depth = 12;
  jo.max_nodes = 4000;
  std::uniform_real_distribution<double> u(-1.0, 1.0), c(0.2, 3.0);
  auto rnd = [&](int n) {
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = u(g);
    return A;
  };
  for (int i = 0; i < kPropertyCases; ++i) {
    const int n = 2 + i % 3;
    MatrixFamily f = {rnd(n), rnd(n), rnd(n)};
    const JsrBounds base = jsr_bounds(f, jo);
    const double s = c(g);
    MatrixFamily fs, ft;
    const Eigen::MatrixXd T = Eigen::MatrixXd::Identity(n, n) + 0.3 * rnd(n), Ti = T.inverse();
    for (const auto& A : f) {
      fs.push_back(s * A);
      ft.push_back(T * A * Ti);
    }
    const JsrBounds bs = jsr_bounds(fs, jo), bt = jsr_bounds(ft, jo);
    const JsrBounds sub = jsr_bounds(MatrixFamily(f.begin(), f.end() - 1), jo);
    bad += !(bs.lower <= s * base.upper * (1 + 1e-9) && s * base.lower <= bs.upper * (1 + 1e-9));
    bad += !(bt.lower <= base.upper * (1 + 1e-8) && base.lower <= bt.upper * (1 + 1e-8));
    bad += !(sub.lower <= base.upper * (1 + 1e-8));
  }

  // cascade invariants
  using Data = RefinedData<Rational>;
  const LaurentPoly one_plus_z = LaurentPoly::geometric_factor(1, 0, 2);
  std::uniform_int_distribution<int> pos(-6, 6);
  for (int i = 0; i < kPropertyCases; ++i) {
    Data d;
    for (int k = 0; k < 5; ++k) d.values[MultiIndex{pos(g)}] += oracle::random_rational(g);
    Rational total = 0;
    for (const auto& [k, v] : d.values) total += v;

    LaurentPoly q = oracle::random_poly(g, 1, 3, 2);
    if (q.coefficient_sum() == 0) q.add_term(MultiIndex{0}, Rational(1));
    LaurentPoly a = q * one_plus_z;
    a *= Rational(2) / a.coefficient_sum();
    const Data out = subdivide_once(d, a);
    Rational even = 0, odd = 0;
    for (const auto& [k, v] : out.values) (k[0] % 2 == 0 ? even : odd) += v;
    bad += !(even == total && odd == total);

    LaurentPoly ip(1);
    ip.add_term(MultiIndex{0}, Rational(1));
    for (int k = -5; k <= 5; k += 2) ip.add_term(MultiIndex{k}, oracle::random_rational(g));
    const Data io = subdivide_once(d, ip);
    for (const auto& [k, v] : d.values) {
      auto it = io.values.find(k.scaled(2));
      bad += (it == io.values.end() ? Rational(0) : it->second) != v;
    }
  }
  return {bad == 0, fmt("%g failing checks", bad)};
}

}  // namespace

int main() {
  criterion(1, "golden four-point matrices on V_1", 1, golden_matrices);
  criterion(2, "rho(T_{0,1/16}) = 1/2", 1, rho_half);
  criterion(3, "rho(T_{3/64,1/16}) = 3/8, alpha >= 1.4150", 10, rho_shrunk);
  criterion(4, "limit supports [-3/2,3/2] and [-3,3]", 1, supports);
  criterion(5, "four-point/DD6 bracket around 0.2078", 60, blend_bracket);
  criterion(6, "DD6 Hoelder bracket around 2.8301", 60, dd6_bracket);
  criterion(7, "stationary four-point alpha >= 2", 30, four_point_alpha);
  criterion(8, "Gamma-set fixtures and periodicity", 1, gamma_fixtures);
  criterion(9, "generability verdicts", 1, generability);
  criterion(10, "property suites, 200 cases each", 300, properties);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
