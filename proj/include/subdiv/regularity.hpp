#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subdiv/jsr.hpp"
#include "subdiv/laurent.hpp"

namespace subdiv {

struct RegularityOptions {
  /// Upper limit for l; the search starts at min(order - 1, ell).
  std::optional<int> ell;
  /// Restrict the parameter polytope to these vertices.
  std::optional<std::vector<ParamSymbol::Point>> subdomain;
  JsrOptions jsr;
};

/// One l tried during the search.
struct LevelAttempt {
  int ell = 0;
  std::size_t dim_V = 0;
  /// Bracket of the restricted vertex family at this l.
  JsrBounds direct;
  /// Bracket after combining with the level above: the family on V_l is block
  /// triangular over V_{l+1} with the scalar block |m|^{-(l+1)}.
  double gamma_lo = 0.0;
  double gamma_hi = 0.0;
  bool certified = false;
};

struct RegularityReport {
  int m = 2;
  int sum_rule_order = 0;
  bool normalized = false;
  /// l of the reported bracket, -1 when no l could be tried.
  int ell_used = -1;
  /// Reported bracket; lower/upper hold the combined values of the used level.
  JsrBounds jsr;
  bool has_bracket = false;
  /// Largest l with gamma_hi < |m|^{-l}, or -1.
  int convergent_in = -1;
  /// -log_|m| gamma_hi.
  double holder_lower = 0.0;
  std::vector<std::string> notes;
  std::vector<LevelAttempt> attempts;
};

RegularityReport analyze(const ParamSymbol& ps, int m, const RegularityOptions& opt = {});
RegularityReport stationary_analyze(const LaurentPoly& p, int m, const RegularityOptions& opt = {});

}  // namespace subdiv
