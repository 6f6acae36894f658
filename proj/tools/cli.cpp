#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "subdiv/engine.hpp"
#include "subdiv/error.hpp"
#include "subdiv/jsr.hpp"
#include "subdiv/regularity.hpp"
#include "subdiv/scheme_io.hpp"
#include "subdiv/spectral_limits.hpp"
#include "subdiv/sumrules.hpp"
#include "subdiv/transition.hpp"

namespace subdiv::cli {

using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kBadInput = 2;
constexpr int kNotCertified = 3;

std::string num(double x, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

// Machine output goes to --out when given, else after the human text.
void emit(const std::string& path, const std::string& payload, std::ostream& out) {
  if (path.empty()) {
    out << payload;
    if (payload.empty() || payload.back() != '\n') out << '\n';
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ArgumentError("cannot write '" + path + "'");
  f << payload;
  if (payload.empty() || payload.back() != '\n') f << '\n';
}

ParamSymbol::Point parse_point(const std::string& text) {
  ParamSymbol::Point p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) p.push_back(parse_rational(item));
  return p;
}

struct DomainArgs {
  std::vector<std::string> interval;
  std::vector<std::string> vertices;

  void add(CLI::App* cmd) {
    cmd->add_option("--interval", interval, "sub-interval LO HI of the parameter range")->expected(2);
    cmd->add_option("--vertex", vertices, "sub-polytope vertex as comma separated rationals (repeatable)");
  }
  std::optional<std::vector<ParamSymbol::Point>> get() const {
    if (!interval.empty() && !vertices.empty()) throw ArgumentError("use either --interval or --vertex");
    if (!interval.empty()) return std::vector<ParamSymbol::Point>{{parse_rational(interval[0])}, {parse_rational(interval[1])}};
    if (!vertices.empty()) {
      std::vector<ParamSymbol::Point> v;
      for (const auto& s : vertices) v.push_back(parse_point(s));
      return v;
    }
    return std::nullopt;
  }
};

ParamSymbol restricted(const SchemeDocument& doc, const DomainArgs& d) {
  auto sub = d.get();
  return sub ? doc.symbol.with_domain(*sub) : doc.symbol;
}

ParameterSchedule schedule_of(const SchemeDocument& doc, std::optional<std::uint64_t> seed, std::ostream& out) {
  if (!doc.schedule) {
    if (doc.symbol.vertex_count() > 1) out << "note: no schedule in the scheme; using the first vertex at every level\n";
    return ParameterSchedule::fixed(doc.symbol.domain().front());
  }
  ParameterSchedule s = *doc.schedule;
  if (seed && s.kind() == ParameterSchedule::Kind::random_uniform) {
    s = ParameterSchedule::random_uniform(*seed, s.tail_points()).with_prefix(s.prefix());
  }
  return s;
}

std::string label(const SchemeDocument& doc, const std::string& path) {
  return doc.name.empty() ? path : doc.name;
}

// ------------------------------------------------------------------ commands

int cmd_analyze(const std::string& path, const DomainArgs& dom, std::optional<int> ell, const JsrOptions& jo,
                const std::string& out_path, std::ostream& out) {
  const SchemeDocument doc = read_scheme_file(path);
  RegularityOptions opt;
  opt.ell = ell;
  opt.subdomain = dom.get();
  opt.jsr = jo;
  const RegularityReport r = analyze(doc.symbol, doc.m, opt);
  out << "scheme: " << label(doc, path) << " (s = " << doc.symbol.dim() << ", m = " << doc.m << ", "
      << (opt.subdomain ? opt.subdomain->size() : doc.symbol.vertex_count()) << " vertices)\n";
  out << "sum rules: order " << r.sum_rule_order << (r.normalized ? "" : " (not normalized)") << "\n";
  for (const auto& a : r.attempts) {
    out << "l = " << a.ell << ": dim V = " << a.dim_V << ", gamma in [" << num(a.gamma_lo, 12) << ", "
        << num(a.gamma_hi, 12) << "]" << (a.certified ? "  < " : "  not < ") << doc.m << "^-" << a.ell << "\n";
  }
  if (r.has_bracket) {
    if (r.convergent_in >= 0) out << "verdict: C^" << r.convergent_in << "-convergent\n";
    else out << "verdict: convergence not certified\n";
    out << "alpha_lower: " << num(r.holder_lower, 10) << "\n";
  } else {
    out << "verdict: no bracket\n";
  }
  for (const auto& n : r.notes) out << "note: " << n << "\n";
  emit(out_path, report_to_json(r).dump(2), out);
  return r.convergent_in >= 0 ? kOk : kNotCertified;
}

int cmd_matrices(const std::string& path, const DomainArgs& dom, std::optional<int> ell, bool generic,
                 const std::string& out_path, std::ostream& out) {
  const SchemeDocument doc = read_scheme_file(path);
  const ParamSymbol ps = restricted(doc, dom);
  int l = 0;
  if (ell) {
    l = *ell;
  } else {
    l = family_sum_rule_order(ps, doc.m).order - 1;
    if (l < 0) throw ArgumentError("the family satisfies no sum rules");
  }
  const TransitionFamily tf = generic ? restrict_multivariate(ps, doc.m, l) : restrict_family(ps, doc.m, l);
  out << "scheme: " << label(doc, path) << ", l = " << l << ", " << tf.vertices.size() << " vertices x "
      << tf.coset_list.size() << " cosets, dim V = " << tf.dim_V;
  if (tf.boundary_dim) out << ", boundary block " << tf.boundary_dim;
  out << "\n";
  emit(out_path, family_to_json(tf).dump(2), out);
  return kOk;
}

int cmd_jsr(const std::string& path, const JsrOptions& jo, bool probe, const std::string& out_path,
            std::ostream& out) {
  const TransitionFamily tf = family_from_json(read_json_file(path));
  const JsrBounds b = interval_family_jsr(tf, jo);
  out << "family: " << tf.members().size() << " matrices of size " << tf.dim_V;
  if (tf.boundary_dim) out << " (+ boundary block " << tf.boundary_dim << ")";
  out << "\n";
  out << "gamma in [" << num(b.lower, 15) << ", " << num(b.upper, 15) << "]"
      << (b.converged ? "" : "  (not converged)") << "\n";
  out << "depth " << b.max_depth << ", nodes " << b.nodes << "\n";
  out << "norm: " << b.certificate.describe() << "\n";
  json j = bounds_to_json(b);
  if (probe) {
    const auto p = common_invariant_subspace_probe(tf.members());
    out << "probe: " << p.summary << "\n";
    j["probe"] = p.summary;
    j["irreducible"] = p.irreducible;
  }
  emit(out_path, j.dump(2), out);
  return b.converged ? kOk : kNotCertified;
}

int cmd_render(const std::string& path, int levels, std::optional<int> start, std::optional<std::uint64_t> seed,
               bool final_only, const std::string& out_path, std::ostream& out) {
  const SchemeDocument doc = read_scheme_file(path);
  const ParameterSchedule sched = schedule_of(doc, seed, out);
  const int k = start.value_or(doc.start_level);
  auto data = RefinedData<double>::delta(doc.symbol.dim(), doc.m, 0);
  std::ostringstream csv;
  csv << "level";
  for (std::size_t i = 0; i < doc.symbol.dim(); ++i) csv << (doc.symbol.dim() == 1 ? ",x" : ",x" + std::to_string(i + 1));
  csv << ",value\n";
  char buf[64];
  for (int r = 1; r <= levels; ++r) {
    data = cascade(doc.symbol, sched, k + r - 1, 1, std::move(data));
    if (final_only && r < levels) continue;
    for (const auto& [a, v] : data.values) {
      csv << r;
      for (std::size_t i = 0; i < a.size(); ++i) {
        std::snprintf(buf, sizeof buf, ",%.17g", data.position(a, i));
        csv << buf;
      }
      std::snprintf(buf, sizeof buf, ",%.17g\n", v);
      csv << buf;
    }
  }
  out << "# " << label(doc, path) << ": " << levels << " levels from level " << k << ", schedule "
      << sched.describe() << "\n";
  emit(out_path, csv.str(), out);
  return kOk;
}

int cmd_support(const std::string& path, std::optional<int> start, const std::string& out_path, std::ostream& out) {
  const SchemeDocument doc = read_scheme_file(path);
  const ParameterSchedule sched = schedule_of(doc, std::nullopt, out);
  const auto [prefix, tail] = schedule_supports(doc.symbol, sched, start.value_or(doc.start_level));
  const SupportRange s = support_interval(prefix, tail, doc.m);
  out << "[" << to_string(s.left) << ", " << to_string(s.right) << "]\n";
  json j;
  j["left"] = to_string(s.left);
  j["right"] = to_string(s.right);
  j["schedule"] = sched.describe();
  emit(out_path, j.dump(2), out);
  return kOk;
}

int cmd_gamma(const std::string& path, std::optional<int> from, std::optional<int> to, const std::string& out_path,
              std::ostream& out) {
  const SchemeDocument doc = read_scheme_file(path);
  const ParameterSchedule sched = schedule_of(doc, std::nullopt, out);
  const int r0 = from.value_or(doc.start_level);
  const int r1 = to.value_or(r0 + 3);
  if (r1 < r0) throw ArgumentError("--to must not be smaller than --from");
  std::ostringstream csv;
  csv << "r,re,im,period\n";
  char buf[128];
  for (int r = r0; r <= r1; ++r) {
    const auto g = gamma_set(doc.symbol.instantiate(sched.at(r)), r, doc.m);
    for (const auto& b : g.base_points) {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r, b.real(), b.imag(), g.period);
      csv << buf;
    }
  }
  out << "# zero sets of " << label(doc, path) << " for levels " << r0 << ".." << r1 << "\n";
  emit(out_path, csv.str(), out);
  return kOk;
}

std::vector<std::complex<double>> read_zeros(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  std::vector<std::complex<double>> z;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string a, b;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    try {
      std::size_t used = 0;
      const double re = std::stod(a, &used);
      const double im = b.empty() ? 0.0 : std::stod(b);
      z.emplace_back(re, im);
    } catch (const std::exception&) {
      if (z.empty() && !header_seen) {
        header_seen = true;
        continue;
      }
      throw ParseError(path + ": line " + std::to_string(lineno) + ": expected 're[,im]'");
    }
  }
  return z;
}

int cmd_generability(const std::string& path, int m, double window, int rmax, const std::string& out_path,
                     std::ostream& out) {
  const auto zeros = read_zeros(path);
  const auto v = generability_necessary_test(zeros, m, window, rmax);
  const char* kind = v.kind == GenerabilityVerdict::Kind::consistent ? "consistent"
                     : v.kind == GenerabilityVerdict::Kind::violation ? "violation"
                                                                       : "inconclusive";
  out << "verdict: " << kind << "\n" << v.message << "\n";
  for (const auto& w : v.witnesses) out << "witness: " << num(w.real(), 12) << (w.imag() < 0 ? " - " : " + ")
                                        << num(std::abs(w.imag()), 12) << "i\n";
  json j;
  j["verdict"] = kind;
  j["tested"] = v.tested;
  j["r_max"] = v.r_max;
  j["message"] = v.message;
  j["witnesses"] = json::array();
  for (const auto& w : v.witnesses) j["witnesses"].push_back({w.real(), w.imag()});
  emit(out_path, j.dump(2), out);
  return v.kind == GenerabilityVerdict::Kind::inconclusive ? kNotCertified : kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regularity analysis and refinement for level-dependent subdivision schemes", "subdiv"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "subdiv 0.3.0");

  std::string file, out_path;
  DomainArgs dom;
  std::optional<int> ell, start, from, to;
  std::optional<std::uint64_t> seed;
  JsrOptions jo;
  bool generic = false, probe = false, final_only = false;
  int levels = 6, m = 2, rmax = 0;
  double window = 0;

  auto jsr_flags = [&](CLI::App* c) {
    c->add_option("--depth", jo.depth, "maximal product length")->check(CLI::PositiveNumber);
    c->add_option("--tol", jo.tol, "relative bracket tolerance")->check(CLI::PositiveNumber);
    c->add_option("--max-nodes", jo.max_nodes, "node budget of the product tree");
  };

  auto* an = app.add_subcommand("analyze", "sum rules, JSR bracket and Hoelder bound of a scheme");
  an->add_option("scheme", file, "scheme JSON")->required();
  dom.add(an);
  an->add_option("--ell", ell, "largest l to try");
  jsr_flags(an);
  an->add_option("--out", out_path, "write the JSON report here");

  auto* mt = app.add_subcommand("matrices", "restricted transition matrices as JSON");
  mt->add_option("scheme", file, "scheme JSON")->required();
  dom.add(mt);
  mt->add_option("--ell", ell, "difference level l (default: order - 1)");
  mt->add_flag("--multivariate", generic, "use the null-space construction also for s = 1");
  mt->add_option("--out", out_path, "write the JSON here");

  auto* js = app.add_subcommand("jsr", "bracket the JSR of a matrix family JSON");
  js->add_option("family", file, "matrix family JSON")->required();
  jsr_flags(js);
  js->add_flag("--probe", probe, "also probe for a common invariant subspace");
  js->add_option("--out", out_path, "write the JSON here");

  auto* rd = app.add_subcommand("render", "run the cascade from a delta and print CSV");
  rd->add_option("scheme", file, "scheme JSON")->required();
  rd->add_option("--levels", levels, "number of refinement steps")->check(CLI::Range(0, 30));
  rd->add_option("--start-level", start, "level of the first mask");
  rd->add_option("--seed", seed, "seed for random schedules");
  rd->add_flag("--final-only", final_only, "only print the last level");
  rd->add_option("--out", out_path, "write the CSV here");

  auto* sp = app.add_subcommand("support", "exact support of the basic limit function");
  sp->add_option("scheme", file, "scheme JSON")->required();
  sp->add_option("--start-level", start, "level of the first mask");
  sp->add_option("--out", out_path, "write the JSON here");

  auto* gm = app.add_subcommand("gamma", "periodic zero sets of the level symbols as CSV");
  gm->add_option("scheme", file, "scheme JSON")->required();
  gm->add_option("--from", from, "first level");
  gm->add_option("--to", to, "last level");
  gm->add_option("--out", out_path, "write the CSV here");

  auto* gn = app.add_subcommand("generability", "necessary zero-set test for generable functions");
  gn->add_option("zeros", file, "CSV of zeros (re[,im] per line)")->required();
  gn->add_option("--m", m, "dilation factor");
  gn->add_option("--window", window, "half width of the test window")->required();
  gn->add_option("--rmax", rmax, "largest level to try (0: all with m^r <= window)");
  gn->add_option("--out", out_path, "write the JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kOk;
    err << app.help();
    return kBadInput;
  }

  try {
    if (*an) return cmd_analyze(file, dom, ell, jo, out_path, out);
    if (*mt) return cmd_matrices(file, dom, ell, generic, out_path, out);
    if (*js) return cmd_jsr(file, jo, probe, out_path, out);
    if (*rd) return cmd_render(file, levels, start, seed, final_only, out_path, out);
    if (*sp) return cmd_support(file, start, out_path, out);
    if (*gm) return cmd_gamma(file, from, to, out_path, out);
    if (*gn) return cmd_generability(file, m, window, rmax, out_path, out);
  } catch (const SumRuleInconsistencyError& e) {
    err << "error: " << e.what() << "\n";
    return kNotCertified;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }
  err << app.help();
  return kBadInput;
}

}  // namespace subdiv::cli
