#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "subdiv/laurent.hpp"
#include "subdiv/sumrules.hpp"

using namespace subdiv;

TEST_CASE("coset roots") {
  CHECK(coset_unit_roots(2, 1) == std::vector<std::vector<int>>{{1}});
  CHECK(coset_unit_roots(2, 2).size() == 3);
  CHECK(coset_unit_roots(3, 1).size() == 2);
  // Phi_3 = 1 + z + z^2, Phi_4 = 1 + z^2
  CHECK(cyclotomic_polynomial(3) == std::vector<Rational>{1, 1, 1});
  CHECK(cyclotomic_polynomial(4) == std::vector<Rational>{1, 0, 1});
}

TEST_CASE("fixture orders") {
  const ParamSymbol fp = symbols::four_point(Rational(0), Rational(1, 16));
  CHECK(sum_rule_order(fp.instantiate_vertex(0), 2).order == 2);
  CHECK(sum_rule_order(fp.instantiate_vertex(1), 2).order == 4);
  const Rational w[1] = {Rational(3, 64)};
  CHECK(sum_rule_order(fp.instantiate(w), 2).order == 2);
  CHECK(family_sum_rule_order(fp, 2).order == 2);

  const auto blend = ParamSymbol::convex_combination(symbols::four_point_symbol(), symbols::dd6_symbol());
  CHECK(family_sum_rule_order(blend, 2).order == 4);
  CHECK(sum_rule_order(symbols::dd6_symbol(), 2).order == 6);

  const auto bf = symbols::butterfly(Rational(0), Rational(1, 16));
  CHECK(family_sum_rule_order(bf, 2).order == 2);
  CHECK(sum_rule_order(symbols::box_spline_three_direction(), 2).order == 2);

  const auto r = sum_rule_order(LaurentPoly::constant(1, 1), 2);
  CHECK_FALSE(r.normalized);
  CHECK(r.order == 0);
}

TEST_CASE("ternary masks") {
  // ((1 + z + z^2)^2 / 3) z^{-2}: order 2 for m = 3
  LaurentPoly g = LaurentPoly::geometric_factor(1, 0, 3);
  LaurentPoly p = (g * g * Rational(1, 3)).shifted(MultiIndex{-2});
  CHECK(sum_rule_order(p, 3).order == 2);
  CHECK(oracle::geometric_multiplicity(oracle::dense(p), 3) == 2);
}

TEST_CASE("property: vertex order bounds every interior order") {
  std::mt19937 g(404);
  const ParamSymbol fams[] = {symbols::four_point(Rational(0), Rational(1, 16)),
                              ParamSymbol::convex_combination(symbols::four_point_symbol(), symbols::dd6_symbol()),
                              symbols::butterfly(Rational(0), Rational(1, 16))};
  const int fam_order[] = {2, 4, 2};
  std::uniform_int_distribution<int> tn(0, 97);
  for (int i = 0; i < 200; ++i) {
    const ParamSymbol& ps = fams[i % 3];
    Rational t(tn(g), 97);
    t.canonicalize();
    const Rational w[1] = {(1 - t) * ps.domain()[0][0] + t * ps.domain()[1][0]};
    CHECK(sum_rule_order(ps.instantiate(w), 2).order >= fam_order[i % 3]);
  }
}

TEST_CASE("property: binary univariate order equals multiplicity at -1") {
  std::mt19937 g(505);
  std::uniform_int_distribution<int> k(0, 5);
  const LaurentPoly one_plus_z = LaurentPoly::geometric_factor(1, 0, 2);
  for (int i = 0; i < 200; ++i) {
    // (1+z)^k q(z) normalized to a(1) = 2, with q random
    LaurentPoly q = oracle::random_poly(g, 1, 3, 2);
    if (q.coefficient_sum() == 0) q.add_term(MultiIndex{0}, Rational(1));
    LaurentPoly p = q;
    const int kk = k(g);
    for (int j = 0; j < kk; ++j) p = p * one_plus_z;
    p *= Rational(2) / p.coefficient_sum();
    const int expect = oracle::geometric_multiplicity(oracle::dense(p), 2);
    CHECK(sum_rule_order(p, 2).order == expect);
  }
}
