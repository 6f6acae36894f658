#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "subdiv/engine.hpp"
#include "subdiv/jsr.hpp"
#include "subdiv/laurent.hpp"
#include "subdiv/regularity.hpp"
#include "subdiv/transition.hpp"

namespace subdiv {

/// A scheme file: the affine symbol family plus metadata and an optional schedule.
struct SchemeDocument {
  std::string name;
  int m = 2;
  std::string notes;
  ParamSymbol symbol = ParamSymbol::stationary(LaurentPoly::constant(1, 1));
  std::optional<ParameterSchedule> schedule;
  int start_level = 1;
};

/// Parses JSON text. Syntax errors become ParseError carrying line and column.
nlohmann::json parse_json_text(std::string_view text, const std::string& source = "<input>");
nlohmann::json read_json_file(const std::string& path);

SchemeDocument scheme_from_json(const nlohmann::json& j);
nlohmann::json scheme_to_json(const SchemeDocument& doc);
SchemeDocument read_scheme_file(const std::string& path);

LaurentPoly poly_from_json(const nlohmann::json& terms, std::size_t dim);
nlohmann::json poly_to_json(const LaurentPoly& p);
Rational rational_from_json(const nlohmann::json& v);

/// {"dim_V", "matrices": {"vertex_i/eps_j": [[...]]}, ...} with exact
/// "p/q" copies and the boundary block when present.
nlohmann::json family_to_json(const TransitionFamily& tf);
/// Accepts the output of family_to_json or a bare {"dim_V", "matrices"} object.
TransitionFamily family_from_json(const nlohmann::json& j);

nlohmann::json bounds_to_json(const JsrBounds& b);
nlohmann::json report_to_json(const RegularityReport& r);

}  // namespace subdiv
