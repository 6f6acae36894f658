#include <doctest.h>

#include <cmath>

#include "subdiv/error.hpp"
#include "subdiv/regularity.hpp"
#include "subdiv/transition.hpp"

using namespace subdiv;

namespace {

bool has_note(const RegularityReport& r, const std::string& needle) {
  for (const auto& n : r.notes)
    if (n.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("shrunken four-point family") {
  const RegularityReport r = analyze(symbols::four_point(Rational(0), Rational(1, 16)), 2,
                                     {.ell = 1, .subdomain = std::vector<ParamSymbol::Point>{{Rational(3, 64)}, {Rational(1, 16)}}, .jsr = {}});
  CHECK(r.ell_used == 1);
  CHECK(r.jsr.upper == doctest::Approx(0.375).epsilon(1e-6));
  CHECK(r.holder_lower >= -std::log2(0.375) - 1e-3);
  CHECK(r.convergent_in == 1);
  // alpha identity
  CHECK(r.holder_lower * std::log(2.0) + std::log(r.jsr.upper) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("full interval gives the weaker bound") {
  const ParamSymbol fp = symbols::four_point(Rational(0), Rational(1, 16));
  const RegularityReport wide = analyze(fp, 2, {.ell = 1, .subdomain = {}, .jsr = {}});
  const RegularityReport narrow = analyze(fp, 2, {.ell = 1, .subdomain = std::vector<ParamSymbol::Point>{{Rational(3, 64)}, {Rational(1, 16)}}, .jsr = {}});
  CHECK(wide.jsr.upper == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(wide.holder_lower <= narrow.holder_lower + 1e-12);
}

TEST_CASE("stationary fixtures") {
  const LaurentPoly bs = symbols::four_point(Rational(0), Rational(1, 16)).instantiate_vertex(0);
  const RegularityReport b = stationary_analyze(bs, 2);
  CHECK(b.jsr.upper == doctest::Approx(0.5));
  CHECK(b.holder_lower >= 1.0 - 1e-12);
  CHECK(b.convergent_in == 0);

  const RegularityReport haar = stationary_analyze(LaurentPoly::geometric_factor(1, 0, 2), 2);
  CHECK(haar.jsr.upper == doctest::Approx(1.0));
  CHECK(haar.convergent_in == -1);
  CHECK(has_note(haar, "strict"));

  const RegularityReport fp = stationary_analyze(symbols::four_point_symbol(), 2);
  CHECK(fp.holder_lower >= 2.0 - 1e-3);
  CHECK(fp.convergent_in >= 1);
  CHECK_FALSE(fp.attempts.empty());
}

TEST_CASE("multivariate path agrees with the univariate one") {
  const ParamSymbol ps = symbols::four_point(Rational(3, 64), Rational(1, 16));
  const TransitionFamily uv = restrict_univariate(ps, 2, 1);
  const TransitionFamily mv = restrict_multivariate(ps, 2, 1);
  const JsrBounds a = interval_family_jsr(uv), b = jsr_bounds(mv.members());
  CHECK(-std::log2(a.upper) == doctest::Approx(-std::log2(b.upper)).epsilon(1e-6));
}

TEST_CASE("ell override beyond the available order") {
  const LaurentPoly bs = symbols::four_point(Rational(0), Rational(1, 16)).instantiate_vertex(0);
  const RegularityReport r = stationary_analyze(bs, 2, {.ell = 3, .subdomain = {}, .jsr = {}});
  CHECK(r.ell_used <= 1);
}

TEST_CASE("soundness: nested intervals") {
  const ParamSymbol fp = symbols::four_point(Rational(0), Rational(1, 16));
  double prev = 1e9;
  for (int lo : {3, 2, 1, 0}) {
    const RegularityReport r =
        analyze(fp, 2, {.ell = 1, .subdomain = std::vector<ParamSymbol::Point>{{Rational(lo, 64)}, {Rational(1, 16)}}, .jsr = {}});
    CHECK(r.holder_lower <= prev + 1e-9);
    prev = r.holder_lower;
  }
}
