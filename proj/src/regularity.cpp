#include "subdiv/regularity.hpp"

#include <cmath>
#include <sstream>

#include "subdiv/error.hpp"
#include "subdiv/sumrules.hpp"
#include "subdiv/transition.hpp"

namespace subdiv {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

RegularityReport analyze(const ParamSymbol& ps_in, int m, const RegularityOptions& opt) {
  if (std::abs(m) < 2) throw ArgumentError("dilation factor must satisfy |m| >= 2");
  const int M = std::abs(m);
  const ParamSymbol ps = opt.subdomain ? ps_in.with_domain(*opt.subdomain) : ps_in;

  RegularityReport rep;
  rep.m = m;
  if (opt.subdomain) {
    rep.notes.push_back("parameter range restricted to a sub-polytope with " +
                        std::to_string(ps.vertex_count()) + " vertices");
  }
  const auto sr = family_sum_rule_order(ps, m);
  rep.sum_rule_order = sr.order;
  rep.normalized = sr.normalized;
  if (!sr.normalized) {
    rep.notes.push_back("symbol is not normalized (a(1) != |m|^s); no sum rules, no bracket");
    return rep;
  }
  if (sr.order == 0) {
    rep.notes.push_back("no sum rules satisfied; no bracket");
    return rep;
  }
  int top = sr.order - 1;
  if (opt.ell) {
    if (*opt.ell < 0) throw ArgumentError("l override must be nonnegative");
    top = std::min(top, *opt.ell);
  }

  std::optional<LevelAttempt> above;
  for (int ell = top; ell >= 0; --ell) {
    const TransitionFamily tf = restrict_family(ps, m, ell);
    LevelAttempt at;
    at.ell = ell;
    at.dim_V = tf.dim_V;
    at.direct = interval_family_jsr(tf, opt.jsr);
    at.gamma_lo = at.direct.lower;
    at.gamma_hi = at.direct.upper;
    if (above) {
      const double scalar = std::pow(static_cast<double>(M), -(ell + 1));
      at.gamma_hi = std::min(at.gamma_hi, std::max(above->gamma_hi, scalar));
      at.gamma_lo = std::max({at.gamma_lo, above->gamma_lo, scalar});
      if (at.gamma_lo > at.gamma_hi) at.gamma_lo = at.gamma_hi;
    }
    const double threshold = std::pow(static_cast<double>(M), -ell);
    at.certified = at.gamma_hi < threshold;
    rep.attempts.push_back(at);
    above = at;
    if (at.certified) break;
  }

  const LevelAttempt& used = rep.attempts.back();
  rep.ell_used = used.ell;
  rep.has_bracket = true;
  rep.jsr = used.direct;
  rep.jsr.lower = used.gamma_lo;
  rep.jsr.upper = used.gamma_hi;
  rep.jsr.converged = used.direct.converged || used.gamma_hi - used.gamma_lo <= opt.jsr.tol * used.gamma_lo;
  rep.convergent_in = used.certified ? used.ell : -1;
  rep.holder_lower = -std::log(used.gamma_hi) / std::log(static_cast<double>(M)) + 0.0;

  rep.notes.push_back("lower bound via vertex family");
  if (used.gamma_hi < used.direct.upper - opt.jsr.tol * used.gamma_hi) {
    rep.notes.push_back("bracket at l = " + std::to_string(used.ell) +
                        " tightened using the level above (direct upper bound " + fmt(used.direct.upper) + ")");
  }
  if (!rep.jsr.converged) {
    rep.notes.push_back("JSR search at l = " + std::to_string(used.ell) + " stopped before the bracket closed");
  }
  if (!used.certified) {
    const double threshold = std::pow(static_cast<double>(M), -used.ell);
    if (used.gamma_hi <= threshold * (1 + 1e-9)) {
      rep.notes.push_back("gamma_hi = " + fmt(used.gamma_hi) + " is not strictly below |m|^-" +
                          std::to_string(used.ell) + "; convergence not certified by the strict test");
    } else {
      rep.notes.push_back("no l certifies convergence; best bracket reported");
    }
  }
  return rep;
}

RegularityReport stationary_analyze(const LaurentPoly& p, int m, const RegularityOptions& opt) {
  if (p.is_zero()) throw EmptyMaskError("cannot analyze the zero symbol");
  return analyze(ParamSymbol::stationary(p), m, opt);
}

}  // namespace subdiv
