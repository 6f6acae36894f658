#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"
#include "subdiv/jsr.hpp"
#include "subdiv/scheme_io.hpp"
#include "subdiv/transition.hpp"

using namespace subdiv;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "subdiv");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string scheme(const std::string& name) { return std::string(SUBDIV_SOURCE_DIR) + "/schemes/" + name; }
std::string data(const std::string& name) { return std::string(SUBDIV_SOURCE_DIR) + "/tests/data/" + name; }

std::string scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "subdiv_cli_test";
  fs::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("analyze on the shrunken interval") {
  const std::string path = scratch("report.json");
  const Result r = call({"analyze", scheme("fourpoint.json"), "--interval", "3/64", "1/16", "--out", path});
  CHECK(r.code == 0);
  CHECK(r.out.find("alpha_lower") != std::string::npos);
  const auto j = read_json_file(path);
  CHECK(j.at("alpha_lower").get<double>() == doctest::Approx(1.4150).epsilon(1e-3 / 1.415));
  CHECK(j.at("gamma_hi").get<double>() == doctest::Approx(0.375).epsilon(1e-6));
}

TEST_CASE("matrices match the display") {
  const std::string path = scratch("fp_matrices.json");
  const Result r = call({"matrices", scheme("fourpoint.json"), "--ell", "1", "--out", path});
  REQUIRE(r.code == 0);
  const TransitionFamily tf = family_from_json(read_json_file(path));
  REQUIRE(tf.exact.size() == 2);
  const Rational ws[2] = {Rational(0), Rational(1, 16)};
  for (std::size_t v = 0; v < 2; ++v)
    for (int e = 0; e < 2; ++e) {
      const auto disp = oracle::four_point_display(e, ws[v]);
      const RationalMatrix T = tf.exact[v][static_cast<std::size_t>(e)].transpose();
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t k = 0; k < 4; ++k) CHECK(T(i, k) == disp[i][k]);
    }
}

TEST_CASE("matrices then jsr reproduces the analyze bracket") {
  const std::string mats = scratch("rt_matrices.json"), bounds = scratch("rt_bounds.json"),
                    report = scratch("rt_report.json");
  REQUIRE(call({"matrices", scheme("fourpoint.json"), "--interval", "3/64", "1/16", "--ell", "1", "--out", mats}).code == 0);
  REQUIRE(call({"jsr", mats, "--out", bounds}).code == 0);
  REQUIRE(call({"analyze", scheme("fourpoint.json"), "--interval", "3/64", "1/16", "--ell", "1", "--out", report}).code == 0);
  const auto b = read_json_file(bounds), a = read_json_file(report);
  CHECK(b.at("gamma_lo").get<double>() == a.at("gamma_lo").get<double>());
  CHECK(b.at("gamma_hi").get<double>() == a.at("gamma_hi").get<double>());
}

TEST_CASE("support") {
  const Result r = call({"support", scheme("example38.json")});
  CHECK(r.code == 0);
  CHECK(r.out.find("[-3/2, 3/2]") != std::string::npos);
  const Result s = call({"support", scheme("fourpoint_stationary.json")});
  CHECK(s.out.find("[-3, 3]") != std::string::npos);
}

TEST_CASE("render is deterministic") {
  const std::string a = scratch("render_a.csv"), b = scratch("render_b.csv");
  REQUIRE(call({"render", scheme("example38.json"), "--levels", "6", "--out", a}).code == 0);
  REQUIRE(call({"render", scheme("example38.json"), "--levels", "6", "--out", b}).code == 0);
  const std::string sa = slurp(a);
  CHECK(sa == slurp(b));
  CHECK(sa.rfind("level,x,value", 0) == 0);
}

TEST_CASE("gamma and generability") {
  const Result g = call({"gamma", scheme("haar.json"), "--from", "1", "--to", "3"});
  CHECK(g.code == 0);
  CHECK(g.out.find("r,re,im,period") != std::string::npos);

  const Result v = call({"generability", data("j0_zeros.csv"), "--window", "20"});
  CHECK(v.code == 0);
  CHECK(v.out.find("verdict: violation") != std::string::npos);
  const Result c = call({"generability", data("integers.csv"), "--window", "20"});
  CHECK(c.code == 0);
  CHECK(c.out.find("verdict: consistent") != std::string::npos);
}

TEST_CASE("error handling") {
  const Result bad = call({"analyze", data("malformed.json")});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("line 5") != std::string::npos);
  CHECK(bad.err.find("column") != std::string::npos);

  const Result unknown = call({"frobnicate"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("analyze") != std::string::npos);

  const Result missing = call({"support", scheme("no_such_file.json")});
  CHECK(missing.code == 2);

  const Result haar = call({"analyze", scheme("haar.json")});
  CHECK(haar.code == 3);
  CHECK(haar.out.find("not certified") != std::string::npos);
}

TEST_CASE("scheme documents round trip") {
  const SchemeDocument d = read_scheme_file(scheme("example38.json"));
  const SchemeDocument e = scheme_from_json(scheme_to_json(d));
  CHECK(e.symbol.base() == d.symbol.base());
  CHECK(e.symbol.directions() == d.symbol.directions());
  CHECK(e.symbol.domain() == d.symbol.domain());
  REQUIRE(e.schedule.has_value());
  CHECK(e.schedule->at(7) == d.schedule->at(7));
}
