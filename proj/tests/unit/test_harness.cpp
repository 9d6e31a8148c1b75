#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gtshap/bounds.hpp"
#include "gtshap/exact.hpp"
#include "gtshap/games.hpp"
#include "gtshap/harness.hpp"

using namespace gtshap;
namespace fs = std::filesystem;

namespace {

int cli(const std::vector<std::string>& args) {
  std::vector<std::string> storage;
  storage.push_back("gtshap");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(storage.size());
  for (const std::string& s : storage) argv.push_back(s.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  REQUIRE(out.good());
  out << content;
}

/// Unique scratch directory, removed on scope exit.
struct TempDir {
  fs::path dir;

  explicit TempDir(const std::string& tag) {
    dir = fs::temp_directory_path() / ("gtshap-test-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  fs::path operator/(const std::string& name) const { return dir / name; }
};

fs::path write_glove_game(const TempDir& tmp) {
  fs::path p = tmp / "glove.game";
  write_text(p,
             "# two left gloves, one right glove\n"
             "family = glove\n"
             "left = 0,1\n"
             "right = 2\n");
  return p;
}

/// Pulls "key=value" out of a .meta file.
std::string meta_value(const std::string& meta, const std::string& key) {
  std::stringstream ss(meta);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  FAIL("meta key not found: ", key);
  return "";
}

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

}  // namespace

TEST_CASE("cli: exact writes the oracle attribution as CSV, byte-stable") {
  TempDir tmp("exact");
  fs::path game = write_glove_game(tmp);
  fs::path out = tmp / "phi.csv";

  REQUIRE(cli({"exact", "--game", game.string(), "--out", out.string()}) == 0);
  const std::string first = slurp(out);

  std::vector<std::string> lines = csv_lines(first);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "player,phi");
  ShapleyVector phi = exact_shapley(make_glove_game({0, 1}, {2}));
  for (int i = 0; i < 3; ++i) {
    std::vector<std::string> f = csv_fields(lines[static_cast<std::size_t>(i) + 1]);
    REQUIRE(f.size() == 2);
    CHECK(f[0] == std::to_string(i));
    CHECK(std::abs(std::strtod(f[1].c_str(), nullptr) -
                   phi.values[static_cast<std::size_t>(i)]) <= 1e-14);
  }

  REQUIRE(cli({"exact", "--game", game.string(), "--out", out.string()}) == 0);
  CHECK(slurp(out) == first);
}

TEST_CASE("cli: estimate writes values plus a meta sidecar and reruns identically") {
  TempDir tmp("estimate");
  fs::path game = write_glove_game(tmp);
  fs::path out = tmp / "est.csv";

  REQUIRE(cli({"estimate", "--game", game.string(), "--method", "gt", "--budget", "3000",
               "--epsilon", "0.5", "--seed", "42", "--out", out.string()}) == 0);
  const std::string csv = slurp(out);
  const std::string meta = slurp(out.string() + ".meta");

  CHECK(csv_lines(csv).size() == 4);
  CHECK(csv_lines(csv)[0] == "player,phi_hat");
  CHECK(meta_value(meta, "method") == "gt");
  CHECK(meta_value(meta, "T") == "3000");
  CHECK(meta_value(meta, "seed") == "42");
  CHECK(meta_value(meta, "feasible") == "true");
  CHECK(std::strtoll(meta_value(meta, "utility_evals").c_str(), nullptr, 10) > 0);

  REQUIRE(cli({"estimate", "--game", game.string(), "--method", "gt", "--budget", "3000",
               "--epsilon", "0.5", "--seed", "42", "--out", out.string()}) == 0);
  CHECK(slurp(out) == csv);
  CHECK(slurp(out.string() + ".meta") == meta);
}

TEST_CASE("cli: estimate fans multiple methods out to per-method files") {
  TempDir tmp("fanout");
  fs::path game = write_glove_game(tmp);
  fs::path out = tmp / "est.csv";

  REQUIRE(cli({"estimate", "--game", game.string(), "--method", "perm,gt,gt-improved", "--budget",
               "500", "--epsilon", "0.5", "--seed", "7", "--out", out.string()}) == 0);
  for (const std::string& method : {"perm", "gt", "gt-improved"}) {
    fs::path p = tmp / ("est." + method + ".csv");
    CAPTURE(method);
    REQUIRE(fs::exists(p));
    REQUIRE(fs::exists(p.string() + ".meta"));
    CHECK(meta_value(slurp(p.string() + ".meta"), "method") == method);
  }
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("cli: estimate derives its budget from the bound when given epsilon and delta") {
  TempDir tmp("derived");
  fs::path game = write_glove_game(tmp);
  fs::path out = tmp / "est.csv";

  REQUIRE(cli({"estimate", "--game", game.string(), "--method", "perm", "--epsilon", "0.5",
               "--delta", "0.1", "--out", out.string()}) == 0);
  const std::string meta = slurp(out.string() + ".meta");
  const std::int64_t expected = derive_budget(EstimatorMethod::permutation, 3, 0.5, 0.1);
  CHECK(meta_value(meta, "T") == std::to_string(expected));
  CHECK(meta_value(meta, "delta") == "0.1");
}

TEST_CASE("cli: a config file supplies defaults and flags override it") {
  TempDir tmp("config");
  fs::path game = write_glove_game(tmp);
  fs::path out_a = tmp / "a.csv";
  fs::path out_b = tmp / "b.csv";
  fs::path out_c = tmp / "c.csv";

  fs::path config = tmp / "defaults.conf";
  write_text(config, "game = " + game.string() +
                         "\n"
                         "method = perm\n"
                         "budget = 64\n"
                         "seed = 9\n");

  // Everything from the config file.
  REQUIRE(cli({"estimate", "--config", config.string(), "--out", out_a.string()}) == 0);
  // The same run spelled out in flags.
  REQUIRE(cli({"estimate", "--game", game.string(), "--method", "perm", "--budget", "64", "--seed",
               "9", "--out", out_b.string()}) == 0);
  CHECK(slurp(out_a) == slurp(out_b));

  // A flag beats the config value.
  REQUIRE(cli({"estimate", "--config", config.string(), "--seed", "10", "--out",
               out_c.string()}) == 0);
  CHECK(slurp(out_c) != slurp(out_a));
  CHECK(meta_value(slurp(out_c.string() + ".meta"), "seed") == "10");
}

TEST_CASE("cli: bound emits one CSV row matching the calculator") {
  TempDir tmp("bound");
  fs::path out = tmp / "bound.csv";
  REQUIRE(cli({"bound", "--n", "10", "--epsilon", "0.1", "--delta", "0.01", "--variant", "gt",
               "--out", out.string()}) == 0);
  std::vector<std::string> lines = csv_lines(slurp(out));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "variant,n,epsilon,delta,T,utility_evals,Z,q_tot");
  std::vector<std::string> f = csv_fields(lines[1]);
  REQUIRE(f.size() == 8);
  CHECK(f[0] == "gt");
  CHECK(f[1] == "10");
  CHECK(f[4] == "826416");  // frozen grid value
  CHECK(f[5] == "826416");

  fs::path out2 = tmp / "bound2.csv";
  REQUIRE(cli({"bound", "--n", "10", "--epsilon", "0.1", "--delta", "0.01", "--variant", "perm",
               "--out", out2.string()}) == 0);
  std::vector<std::string> f2 = csv_fields(csv_lines(slurp(out2))[1]);
  CHECK(f2[4] == "15202");
  CHECK(f2[5] == std::to_string(15202 * 11));
}

TEST_CASE("cli: coverage logs per-trial scores and a summary that add up") {
  TempDir tmp("coverage");
  fs::path game = write_glove_game(tmp);
  fs::path out = tmp / "trials.csv";

  REQUIRE(cli({"coverage", "--game", game.string(), "--method", "gt,gt-improved", "--epsilon",
               "0.5", "--delta", "0.1", "--trials", "6", "--budget", "400", "--seed", "3", "--out",
               out.string()}) == 0);

  std::vector<std::string> lines = csv_lines(slurp(out));
  REQUIRE(lines.size() == 1 + 2 * 6);
  CHECK(lines[0] == "method,trial_index,T,l2_error,linf_error,utility_evals,residual,seed");

  // Recount coverage per method from the trial rows.
  int covered_gt = 0, covered_impr = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string> f = csv_fields(lines[i]);
    REQUIRE(f.size() == 8);
    CHECK(f[2] == "400");
    const double l2 = std::strtod(f[3].c_str(), nullptr);
    if (f[0] == "gt" && l2 <= 0.5) ++covered_gt;
    if (f[0] == "gt-improved" && l2 <= 0.5) ++covered_impr;
    if (f[0] == "gt") CHECK_FALSE(f[6].empty());       // feasibility residual logged
    if (f[0] == "gt-improved") CHECK(f[6].empty());    // no recovery step, no residual
  }

  std::vector<std::string> summary = csv_lines(slurp(out.string() + ".summary"));
  REQUIRE(summary.size() == 3);
  CHECK(summary[0] == "method,T,trials,covered,coverage,epsilon,delta");
  for (std::size_t i = 1; i < summary.size(); ++i) {
    std::vector<std::string> f = csv_fields(summary[i]);
    REQUIRE(f.size() == 7);
    const int covered = f[0] == "gt" ? covered_gt : covered_impr;
    CHECK(f[3] == std::to_string(covered));
    CHECK(std::strtod(f[4].c_str(), nullptr) ==
          doctest::Approx(covered / 6.0).epsilon(1e-12));
  }

  // Rerun: byte-identical trial log.
  fs::path out2 = tmp / "trials2.csv";
  REQUIRE(cli({"coverage", "--game", game.string(), "--method", "gt,gt-improved", "--epsilon",
               "0.5", "--delta", "0.1", "--trials", "6", "--budget", "400", "--seed", "3", "--out",
               out2.string()}) == 0);
  CHECK(slurp(out2) == slurp(out));
}

TEST_CASE("cli: coverage --check signals failure through the exit status") {
  TempDir tmp("covcheck");
  fs::path game = write_glove_game(tmp);
  fs::path out = tmp / "trials.csv";

  // A generous epsilon passes...
  CHECK(cli({"coverage", "--game", game.string(), "--method", "gt-improved", "--epsilon", "0.9",
             "--delta", "0.1", "--trials", "4", "--budget", "500", "--out", out.string(),
             "--check"}) == 0);
  // ...an unattainable one does not.
  CHECK(cli({"coverage", "--game", game.string(), "--method", "gt-improved", "--epsilon", "1e-9",
             "--delta", "0.1", "--trials", "4", "--budget", "50", "--out", out.string(),
             "--check"}) == 3);
}

TEST_CASE("cli: bench tabulates error against budget") {
  TempDir tmp("bench");
  fs::path game = write_glove_game(tmp);
  fs::path out = tmp / "bench.csv";

  REQUIRE(cli({"bench", "--game", game.string(), "--method", "perm", "--budgets", "50,5000",
               "--trials", "3", "--seed", "1", "--out", out.string()}) == 0);
  std::vector<std::string> lines = csv_lines(slurp(out));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "method,T,utility_evals,mean_l2,std_l2");
  std::vector<std::string> small = csv_fields(lines[1]);
  std::vector<std::string> large = csv_fields(lines[2]);
  CHECK(small[1] == "50");
  CHECK(large[1] == "5000");
  const double mean_small = std::strtod(small[3].c_str(), nullptr);
  const double mean_large = std::strtod(large[3].c_str(), nullptr);
  CHECK(mean_small > 0.0);
  CHECK(mean_large < mean_small);  // a 100x budget cuts the error decisively
}

TEST_CASE("cli: diagnose reports the distribution constants and an empirical check") {
  TempDir tmp("diagnose");
  fs::path out = tmp / "diag.csv";
  REQUIRE(cli({"diagnose", "--n", "3,10", "--variant", "original", "--empirical", "2000", "--seed",
               "5", "--out", out.string()}) == 0);
  std::vector<std::string> lines = csv_lines(slurp(out));
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "n,variant,Z,q_tot,effective_fraction,two_over_Z,empirical_fraction");
  std::vector<std::string> row3 = csv_fields(lines[1]);
  REQUIRE(row3.size() == 7);
  CHECK(row3[0] == "3");
  CHECK(row3[1] == "original");
  CHECK(std::strtod(row3[2].c_str(), nullptr) == doctest::Approx(3.0).epsilon(1e-12));
  // effective_fraction and 2/Z are the same number printed twice
  CHECK(row3[4] == row3[5]);
  const double empirical = std::strtod(row3[6].c_str(), nullptr);
  CHECK(std::abs(empirical - 2.0 / 3.0) <= 0.06);  // ~4 sigma at 2000 draws

  // Without --empirical the column disappears.
  fs::path out2 = tmp / "diag2.csv";
  REQUIRE(cli({"diagnose", "--n", "3", "--out", out2.string()}) == 0);
  CHECK(csv_lines(slurp(out2))[0] == "n,variant,Z,q_tot,effective_fraction,two_over_Z");
}

TEST_CASE("cli: a persistent cache survives across invocations and saves work") {
  TempDir tmp("cache");
  fs::path game = write_glove_game(tmp);
  fs::path cache = tmp / "evals.cache";
  fs::path out = tmp / "est.csv";

  REQUIRE(cli({"estimate", "--game", game.string(), "--method", "gt", "--budget", "2000",
               "--epsilon", "0.5", "--seed", "1", "--cache", cache.string(), "--out",
               out.string()}) == 0);
  const std::int64_t evals_cold =
      std::strtoll(meta_value(slurp(out.string() + ".meta"), "utility_evals").c_str(), nullptr, 10);
  CHECK(evals_cold > 0);
  REQUIRE(fs::exists(cache));

  // 2000 draws over a 3-player game see every coalition; a second run with a
  // different seed finds everything cached.
  REQUIRE(cli({"estimate", "--game", game.string(), "--method", "gt", "--budget", "2000",
               "--epsilon", "0.5", "--seed", "2", "--cache", cache.string(), "--out",
               out.string()}) == 0);
  const std::int64_t evals_warm =
      std::strtoll(meta_value(slurp(out.string() + ".meta"), "utility_evals").c_str(), nullptr, 10);
  CHECK(evals_warm == 0);

  EvalCache loaded = EvalCache::load(cache.string(), 3);
  CHECK(loaded.entry_count() == 8);
}

TEST_CASE("cli: bad inputs come back as nonzero exits, not crashes") {
  TempDir tmp("errors");
  fs::path game = write_glove_game(tmp);
  CHECK(cli({"estimate", "--game", "/nonexistent/game.txt", "--method", "perm", "--budget", "10"}) ==
        2);
  CHECK(cli({"estimate", "--game", game.string(), "--method", "sorcery", "--budget", "10"}) == 2);
  CHECK(cli({"estimate", "--game", game.string(), "--method", "perm"}) == 2);  // no budget, no eps
  CHECK(cli({"bound", "--n", "1", "--epsilon", "0.1", "--delta", "0.1", "--variant", "gt"}) == 2);
  CHECK(cli({"nonsense"}) != 0);
}

TEST_CASE("derived budgets agree with the bound calculator") {
  BoundQuery q;
  q.n_players = 8;
  q.epsilon = 0.5;
  q.delta = 0.1;
  q.variant = EstimatorMethod::gt_original;
  CHECK(derive_budget(EstimatorMethod::gt_original, 8, 0.5, 0.1) == required_T(q).T);
  CHECK(derive_budget(EstimatorMethod::gt_original, 8, 0.5, 0.1) == 17047);
  CHECK(derive_budget(EstimatorMethod::gt_improved, 8, 0.5, 0.1) == 3525);
  CHECK(derive_budget(EstimatorMethod::permutation, 8, 0.5, 0.1) == 325);
}
