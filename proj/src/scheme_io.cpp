#include "subdiv/scheme_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include "subdiv/error.hpp"

namespace subdiv {

using nlohmann::json;

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

ParamSymbol::Point point_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("parameter point must be an array");
  ParamSymbol::Point p;
  for (const auto& x : j) p.push_back(rational_from_json(x));
  return p;
}

json point_to_json(const ParamSymbol::Point& p) {
  json a = json::array();
  for (const auto& x : p) a.push_back(to_string(x));
  return a;
}

std::vector<ParamSymbol::Point> points_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("expected an array of parameter points");
  std::vector<ParamSymbol::Point> out;
  for (const auto& x : j) out.push_back(point_from_json(x));
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& A) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < A.cols(); ++k) row.push_back(A(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

json matrix_to_json(const RationalMatrix& A) {
  json rows = json::array();
  for (std::size_t i = 0; i < A.rows; ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < A.cols; ++k) row.push_back(to_string(A(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& key) {
  if (!j.is_array()) throw ParseError("matrix '" + key + "' must be an array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ParseError("matrix '" + key + "' is not square");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto& v = row[static_cast<std::size_t>(k)];
      A(i, k) = v.is_number() ? v.get<double>() : to_double(rational_from_json(v));
    }
  }
  return A;
}

RationalMatrix exact_from_json(const json& rows, const std::string& key) {
  if (!rows.is_array() || rows.empty()) throw ParseError("matrix '" + key + "' must be a nonempty array of rows");
  RationalMatrix A(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].is_array() || rows[i].size() != rows.size()) {
      throw ParseError("matrix '" + key + "' must be square");
    }
    for (std::size_t k = 0; k < rows.size(); ++k) A(i, k) = rational_from_json(rows[i][k]);
  }
  return A;
}

// Groups "vertex_i/eps_j" entries by vertex in numeric order; other keys form one group.
template <class T, class Convert>
std::vector<std::vector<T>> grouped(const json& obj, Convert convert) {
  if (!obj.is_object()) throw ParseError("matrix groups must be JSON objects");
  static const std::regex key_re(R"(vertex_(\d+)/eps_(\d+))");
  std::map<std::pair<long, long>, T> keyed;
  std::vector<T> loose;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    std::smatch mm;
    const std::string k = it.key();
    if (std::regex_match(k, mm, key_re)) {
      keyed[{std::stol(mm[1]), std::stol(mm[2])}] = convert(it.value(), k);
    } else {
      loose.push_back(convert(it.value(), k));
    }
  }
  std::vector<std::vector<T>> out;
  long current = -1;
  for (auto& [k, A] : keyed) {
    if (k.first != current) {
      out.emplace_back();
      current = k.first;
    }
    out.back().push_back(std::move(A));
  }
  if (!loose.empty()) out.push_back(std::move(loose));
  return out;
}

std::vector<std::vector<Eigen::MatrixXd>> grouped_matrices(const json& obj) {
  return grouped<Eigen::MatrixXd>(obj, matrix_from_json);
}

std::vector<std::vector<RationalMatrix>> grouped_exact(const json& obj) {
  return grouped<RationalMatrix>(obj, exact_from_json);
}

ParameterSchedule schedule_from_json(const json& j, const ParamSymbol& ps) {
  if (!j.is_object()) throw ParseError("'schedule' must be an object");
  const std::string kind = j.value("kind", std::string("fixed"));
  ParameterSchedule s = ParameterSchedule::fixed(ps.domain().front());
  if (kind == "fixed") {
    if (j.contains("values")) s = ParameterSchedule::fixed(points_from_json(j.at("values")).at(0));
    else if (j.contains("value")) s = ParameterSchedule::fixed(point_from_json(j.at("value")));
  } else if (kind == "list") {
    s = ParameterSchedule::list(points_from_json(j.at("values")));
  } else if (kind == "random-uniform") {
    const auto seed = j.value("seed", std::uint64_t{0});
    auto verts = j.contains("vertices") ? points_from_json(j.at("vertices")) : ps.domain();
    s = ParameterSchedule::random_uniform(seed, std::move(verts));
  } else if (kind == "convergent-to") {
    s = ParameterSchedule::convergent_to(point_from_json(j.at("target")), point_from_json(j.at("start")));
  } else {
    throw ParseError("unknown schedule kind '" + kind + "'");
  }
  if (j.contains("prefix")) s = s.with_prefix(points_from_json(j.at("prefix")));
  return s;
}

json schedule_to_json(const ParameterSchedule& s) {
  json j;
  auto pts = [](const std::vector<ParamSymbol::Point>& v) {
    json a = json::array();
    for (const auto& p : v) a.push_back(point_to_json(p));
    return a;
  };
  switch (s.kind()) {
    case ParameterSchedule::Kind::fixed:
      j["kind"] = "fixed";
      j["values"] = pts(s.tail_points());
      break;
    case ParameterSchedule::Kind::list:
      j["kind"] = "list";
      j["values"] = pts(s.tail_points());
      break;
    case ParameterSchedule::Kind::random_uniform:
      j["kind"] = "random-uniform";
      j["seed"] = s.seed();
      j["vertices"] = pts(s.tail_points());
      break;
    case ParameterSchedule::Kind::convergent_to:
      j["kind"] = "convergent-to";
      j["target"] = point_to_json(s.tail_points()[0]);
      j["start"] = point_to_json(s.tail_points()[1]);
      break;
  }
  if (!s.prefix().empty()) j["prefix"] = pts(s.prefix());
  return j;
}

}  // namespace

json parse_json_text(std::string_view text, const std::string& source) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string what = e.what();
    const auto pos = what.find("syntax error");
    throw ParseError(source + ": line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                     (pos == std::string::npos ? what : what.substr(pos)));
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

Rational rational_from_json(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) {
    return v.is_number_unsigned() ? Rational(std::to_string(v.get<std::uint64_t>()))
                                  : Rational(std::to_string(v.get<std::int64_t>()));
  }
  if (v.is_number_float()) {
    throw ParseError("non-integer numbers must be given as strings (\"p/q\" or decimal) to stay exact");
  }
  throw ParseError("expected a rational number, got " + v.dump());
}

LaurentPoly poly_from_json(const json& terms, std::size_t dim) {
  if (!terms.is_array()) throw ParseError("polynomial must be an array of [exponent, coefficient] pairs");
  LaurentPoly p(dim);
  for (const auto& t : terms) {
    if (!t.is_array() || t.size() != 2) throw ParseError("term must be [exponent, coefficient], got " + t.dump());
    MultiIndex e(dim);
    const auto& ej = t[0];
    if (ej.is_number_integer() && dim == 1) {
      e[0] = ej.get<std::int64_t>();
    } else if (ej.is_array() && ej.size() == dim) {
      for (std::size_t i = 0; i < dim; ++i) {
        if (!ej[i].is_number_integer()) throw ParseError("exponents must be integers, got " + ej.dump());
        e[i] = ej[i].get<std::int64_t>();
      }
    } else {
      throw ParseError("exponent " + ej.dump() + " does not have " + std::to_string(dim) + " entries");
    }
    p.add_term(e, rational_from_json(t[1]));
  }
  return p;
}

json poly_to_json(const LaurentPoly& p) {
  json a = json::array();
  for (const auto& [e, c] : p.terms()) a.push_back(json::array({json(e.entries()), to_string(c)}));
  return a;
}

SchemeDocument scheme_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("scheme document must be a JSON object");
  try {
    SchemeDocument d;
    d.name = j.value("name", std::string());
    d.notes = j.value("notes", std::string());
    d.m = j.value("m", 2);
    if (std::abs(d.m) < 2) throw ParseError("scheme needs |m| >= 2");
    const auto dim = j.value("dim", std::size_t{1});
    if (dim < 1) throw ParseError("dim must be at least 1");
    if (!j.contains("base")) throw ParseError("scheme is missing 'base'");
    LaurentPoly base = poly_from_json(j.at("base"), dim);
    std::vector<LaurentPoly> dirs;
    if (j.contains("directions")) {
      for (const auto& t : j.at("directions")) dirs.push_back(poly_from_json(t, dim));
    }
    std::vector<ParamSymbol::Point> dom;
    if (j.contains("domain_vertices")) dom = points_from_json(j.at("domain_vertices"));
    if (dom.empty() && dirs.empty()) dom.push_back({});
    d.symbol = ParamSymbol(std::move(base), std::move(dirs), std::move(dom));
    if (j.contains("schedule")) d.schedule = schedule_from_json(j.at("schedule"), d.symbol);
    d.start_level = j.value("start_level", 1);
    return d;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed scheme: ") + e.what());
  } catch (const ArgumentError& e) {
    throw ParseError(std::string("malformed scheme: ") + e.what());
  }
}

json scheme_to_json(const SchemeDocument& d) {
  json j;
  if (!d.name.empty()) j["name"] = d.name;
  j["dim"] = d.symbol.dim();
  j["m"] = d.m;
  j["base"] = poly_to_json(d.symbol.base());
  j["directions"] = json::array();
  for (const auto& p : d.symbol.directions()) j["directions"].push_back(poly_to_json(p));
  j["domain_vertices"] = json::array();
  for (const auto& v : d.symbol.domain()) j["domain_vertices"].push_back(point_to_json(v));
  if (!d.notes.empty()) j["notes"] = d.notes;
  if (d.schedule) j["schedule"] = schedule_to_json(*d.schedule);
  if (d.start_level != 1) j["start_level"] = d.start_level;
  return j;
}

SchemeDocument read_scheme_file(const std::string& path) { return scheme_from_json(read_json_file(path)); }

json family_to_json(const TransitionFamily& tf) {
  json j;
  j["dim_V"] = tf.dim_V;
  j["m"] = tf.m;
  j["ell"] = tf.ell;
  j["vertices"] = json::array();
  for (const auto& v : tf.vertices) j["vertices"].push_back(point_to_json(v));
  j["cosets"] = json::array();
  for (const auto& e : tf.coset_list) j["cosets"].push_back(e.entries());
  json mats = json::object(), exact = json::object();
  for (std::size_t v = 0; v < tf.matrices.size(); ++v) {
    for (std::size_t e = 0; e < tf.matrices[v].size(); ++e) {
      mats[TransitionFamily::key(v, e)] = matrix_to_json(tf.matrices[v][e]);
      if (!tf.exact.empty()) exact[TransitionFamily::key(v, e)] = matrix_to_json(tf.exact[v][e]);
    }
  }
  j["matrices"] = std::move(mats);
  if (!tf.exact.empty()) j["exact"] = std::move(exact);
  if (tf.boundary_dim > 0) {
    json b = json::object(), bex = json::object();
    for (std::size_t v = 0; v < tf.boundary.size(); ++v) {
      for (std::size_t e = 0; e < tf.boundary[v].size(); ++e) {
        b[TransitionFamily::key(v, e)] = matrix_to_json(tf.boundary[v][e]);
        if (!tf.boundary_exact.empty()) bex[TransitionFamily::key(v, e)] = matrix_to_json(tf.boundary_exact[v][e]);
      }
    }
    j["boundary_dim"] = tf.boundary_dim;
    j["boundary"] = std::move(b);
    if (!bex.empty()) j["boundary_exact"] = std::move(bex);
  }
  if (tf.basis.size() > 0) j["invariance_residual"] = tf.invariance_residual;
  return j;
}

TransitionFamily family_from_json(const json& j) {
  if (!j.is_object() || !j.contains("matrices")) throw ParseError("matrix family needs a 'matrices' object");
  try {
    TransitionFamily tf;
    tf.m = j.value("m", 2);
    tf.ell = j.value("ell", 0);
    tf.matrices = grouped_matrices(j.at("matrices"));
    if (tf.matrices.empty()) throw ParseError("matrix family is empty");
    tf.dim_V = static_cast<std::size_t>(tf.matrices.front().front().rows());
    if (j.contains("dim_V") && j.at("dim_V").get<std::size_t>() != tf.dim_V) {
      throw ParseError("dim_V does not match the matrix size");
    }
    for (const auto& row : tf.matrices) {
      for (const auto& A : row) {
        if (static_cast<std::size_t>(A.rows()) != tf.dim_V) throw ParseError("matrices differ in size");
      }
    }
    if (j.contains("exact")) tf.exact = grouped_exact(j.at("exact"));
    if (j.contains("boundary_exact")) tf.boundary_exact = grouped_exact(j.at("boundary_exact"));
    if (j.contains("boundary")) {
      tf.boundary = grouped_matrices(j.at("boundary"));
      if (!tf.boundary.empty()) tf.boundary_dim = static_cast<std::size_t>(tf.boundary.front().front().rows());
    }
    return tf;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed matrix family: ") + e.what());
  }
}

json bounds_to_json(const JsrBounds& b) {
  json j;
  j["gamma_lo"] = b.lower;
  j["gamma_hi"] = b.upper;
  j["converged"] = b.converged;
  j["witness"] = b.witness;
  j["max_depth"] = b.max_depth;
  j["nodes"] = b.nodes;
  j["norm_certificate"] = b.certificate.describe();
  return j;
}

json report_to_json(const RegularityReport& r) {
  json j;
  j["m"] = r.m;
  j["order"] = r.sum_rule_order;
  j["normalized"] = r.normalized;
  j["ell"] = r.ell_used;
  if (r.has_bracket) {
    j["gamma_lo"] = r.jsr.lower;
    j["gamma_hi"] = r.jsr.upper;
    j["alpha_lower"] = r.holder_lower;
    j["witness"] = r.jsr.witness;
    j["norm_certificate"] = r.jsr.certificate.describe();
  } else {
    j["gamma_lo"] = nullptr;
    j["gamma_hi"] = nullptr;
    j["alpha_lower"] = nullptr;
  }
  j["convergent"] = r.convergent_in >= 0;
  j["convergent_in"] = r.convergent_in;
  j["attempts"] = json::array();
  for (const auto& a : r.attempts) {
    json aj;
    aj["ell"] = a.ell;
    aj["dim_V"] = a.dim_V;
    aj["direct_lo"] = a.direct.lower;
    aj["direct_hi"] = a.direct.upper;
    aj["direct_converged"] = a.direct.converged;
    aj["gamma_lo"] = a.gamma_lo;
    aj["gamma_hi"] = a.gamma_hi;
    aj["certified"] = a.certified;
    j["attempts"].push_back(std::move(aj));
  }
  j["notes"] = r.notes;
  return j;
}

}  // namespace subdiv
