#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "toeplitz/corpus.hpp"
#include "toeplitz/rule_io.hpp"
#include "toeplitz/sequence.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "tpz_cli_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run_tpz(const std::string& args) {
  const fs::path out = work_dir() / "stdout.txt";
  const fs::path err = work_dir() / "stderr.txt";
  const std::string cmd = std::string(TPZ_BIN) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
  };
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path write_file(const std::string& name, const std::string& content) {
  const fs::path p = work_dir() / name;
  std::ofstream f(p);
  f << content;
  return p;
}

fs::path abac_file() {
  static const fs::path p = [] {
    auto path = work_dir() / "abac.seq";
    toeplitz::save_rule_file(path, toeplitz::abac_rule());
    return path;
  }();
  return p;
}

fs::path telescope_file() {
  static const fs::path p = [] {
    auto path = work_dir() / "telescope.seq";
    toeplitz::save_rule_file(
        path, toeplitz::make_telescope({{2, 16, 128}, 512, 3}).rule);
    return path;
  }();
  return p;
}

}  // namespace

TEST_CASE("analyze emits the skeleton table") {
  const auto r = run_tpz("--radius 256 --period-cap 16 --format structured "
                         "analyze " + abac_file().string());
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["command"] == "analyze");
  CHECK(doc["config"]["radius"] == 256);
  const auto& rows = doc["results"]["skeletons"];
  REQUIRE(rows.size() == 16);
  CHECK(rows[1]["p"] == 2);
  CHECK(rows[1]["max_block"] == 1);
  CHECK(rows[1]["essential"] == true);
  CHECK(rows[3]["p"] == 4);
  CHECK(rows[3]["max_block"] == "inf");
  CHECK(doc["results"]["aperiodic"]["count"] == 0);
}

TEST_CASE("analyze text output mentions the table") {
  const auto r = run_tpz("--radius 256 --period-cap 8 analyze " +
                         abac_file().string());
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("aperiodic positions") != std::string::npos);
  CHECK(r.out.find("max_blk") != std::string::npos);
}

TEST_CASE("malformed files exit with a parse diagnostic") {
  const auto bad = write_file("bad.seq", "alphabet: a b\nkind: periodic\npattern: a q\n");
  const auto r = run_tpz("analyze " + bad.string());
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("line 3") != std::string::npos);
}

TEST_CASE("structure on a no-growth input exits inconclusively") {
  const auto path = work_dir() / "evenodd.seq";
  toeplitz::save_rule_file(path,
                           toeplitz::even_constant_odd_aperiodic_rule());
  const auto r = run_tpz("--radius 512 --period-cap 16 structure " +
                         path.string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("NoGrowthEvidence") != std::string::npos);
}

TEST_CASE("structure of the crossed fill chains through the lcm") {
  const auto path = work_dir() / "crossed.seq";
  toeplitz::save_rule_file(path, toeplitz::crossed_fill_rule());
  const auto r = run_tpz("--radius 256 --period-cap 24 --format structured "
                         "structure " + path.string());
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  const auto& entries = doc["results"]["entries"];
  REQUIRE(entries.size() >= 3);
  CHECK(entries[2]["q"] == 12);
  CHECK(entries[2]["raw_p"] == 6);
}

TEST_CASE("eta writes a reusable definition that matches the transcript") {
  const fs::path eta_path = work_dir() / "telescope.eta.seq";
  const auto r = run_tpz("--radius 4096 --period-cap 128 --format structured "
                         "eta " + telescope_file().string() +
                         " --eta-out " + eta_path.string());
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  for (const auto& v : doc["verdicts"]) CHECK(v["pass"] == true);

  const auto levels = doc["results"]["construction"]["levels"];
  REQUIRE(levels.size() == 3);
  const std::int64_t k_last = levels[levels.size() - 1]["shift"];
  const auto certified = doc["results"]["construction"]["certified"];

  // Round trip: the emitted eta file evaluates exactly like the transcript
  // says it should on the certified window.
  const auto eta = toeplitz::load_rule_file(eta_path);
  const auto x = toeplitz::load_rule_file(telescope_file());
  for (std::int64_t n = certified[0]; n <= certified[1]; ++n)
    CHECK(eta.eval(n) == x.eval(n + k_last));
}

TEST_CASE("structured reports are byte-identical across runs") {
  const std::string cmd = "--radius 256 --period-cap 16 --format structured "
                          "analyze " + abac_file().string();
  const auto a = run_tpz(cmd);
  const auto b = run_tpz(cmd);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("odometer arithmetic via the CLI") {
  auto r = run_tpz("--format structured odometer --moduli 2,4,8 element 5");
  REQUIRE(r.exit_code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["results"]["coords"] == json::array({1, 1, 5}));

  r = run_tpz("--format structured odometer --moduli 2,4,8 add 3 7");
  REQUIRE(r.exit_code == 0);
  doc = json::parse(r.out);
  CHECK(doc["results"]["rep"] == 2);

  r = run_tpz("odometer --moduli 2,4,8 distance 0 2");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("1/2") != std::string::npos);

  r = run_tpz("--format structured odometer --moduli 2,4,16 partition 2");
  REQUIRE(r.exit_code == 0);
  doc = json::parse(r.out);
  CHECK(doc["results"]["ok"] == true);
}

TEST_CASE("odometer rejects irregular moduli") {
  const auto r = run_tpz("odometer --moduli 2,3 element 1");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("divide") != std::string::npos);
}

TEST_CASE("factor reports addresses and verdicts") {
  const auto r = run_tpz("--radius 4096 --period-cap 128 --t-max 8 "
                         "--format structured factor " +
                         telescope_file().string());
  REQUIRE(r.exit_code == 0);
  const json doc = json::parse(r.out);
  for (const auto& v : doc["verdicts"]) CHECK(v["pass"] == true);
  CHECK(doc["results"]["eta_built"] == true);
  // address(S^1(x)) = reduction of 1
  for (const auto& entry : doc["results"]["shift_addresses"]) {
    if (entry["t"] == 1) {
      CHECK(entry["address"]["coords"] == json::array({1, 1, 1}));
    }
  }
}

TEST_CASE("verify runs the invariant suite") {
  const auto r = run_tpz("verify --rules 6 --seed 3");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("all checks passed") != std::string::npos);
}
