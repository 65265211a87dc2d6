#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "zaremba/cache.hpp"
#include "zaremba/cli.hpp"
#include "zaremba/json_io.hpp"

using namespace zaremba;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<nlohmann::json> json_lines(const std::string& s) {
  std::vector<nlohmann::json> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "zaremba-tests";
  fs::create_directories(dir);
  const auto p = dir / name;
  fs::remove(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("cache round trip") {
  const auto path = scratch("cache.tsv").string();
  CHECK(cache_read(path).empty());
  std::vector<SearchResult> rows{{11, 3, 3, Strategy::exhaustive, 0},
                                 {7, 5, 2, Strategy::exhaustive, 1}};
  CHECK(cache_upsert(path, rows) == 2);
  const std::string first = slurp(path);
  CHECK(first.rfind(std::string(kCacheHeader) + "\n", 0) == 0);
  CHECK(first.find('\r') == std::string::npos);

  // Idempotent: re-inserting changes nothing.
  CHECK(cache_upsert(path, rows) == 0);
  CHECK(slurp(path) == first);

  CHECK(cache_upsert(path, {{2, 1, 2, Strategy::guided, 4}}) == 1);
  const auto back = cache_read(path);
  REQUIRE(back.size() == 3);
  CHECK(back[0].q == 2);
  CHECK(back[0].strategy == Strategy::guided);
  CHECK(back[1] == rows[1]);
  CHECK(back[2] == rows[0]);

  CHECK_THROWS_AS(cache_upsert(path, {{3, 1, 3, Strategy::exhaustive, 0},
                                      {3, 2, 3, Strategy::exhaustive, 0}}),
                  std::invalid_argument);
}

TEST_CASE("cache rejects corrupt files") {
  const auto path = scratch("bad.tsv");
  {
    std::ofstream f(path);
    f << "q,a,m_min\n7,5,2\n";
  }
  CHECK_THROWS_AS(cache_read(path.string()), std::runtime_error);
  CHECK_THROWS_AS(cache_upsert(path.string(), {{5, 2, 2, Strategy::exhaustive, 0}}),
                  std::runtime_error);
  {
    std::ofstream f(path);
    f << kCacheHeader << "\n7\tfive\t2\texhaustive\t0\n";
  }
  CHECK_THROWS_AS(cache_read(path.string()), std::runtime_error);
}

TEST_CASE("emit_rows") {
  std::vector<Json> rows{{{"a", 1}, {"b", "x"}}, {{"a", 2}, {"b", "y"}}};
  std::ostringstream j, t;
  emit_rows(j, rows, OutputFormat::json);
  CHECK(j.str() == "{\"a\":1,\"b\":\"x\"}\n{\"a\":2,\"b\":\"y\"}\n");
  emit_rows(t, rows, OutputFormat::tsv);
  CHECK(t.str() == "a\tb\n1\tx\n2\ty\n");
  std::ostringstream bad;
  CHECK_THROWS(emit_rows(bad, {{{"a", 1}}, {{"c", 2}}}, OutputFormat::tsv));
  CHECK_THROWS(output_format_from_string("xml"));
}

TEST_CASE("cli: cf and search") {
  auto r = run({"cf", "expand", "--num", "5", "--den", "7"});
  REQUIRE(r.code == 0);
  auto rows = json_lines(r.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0]["word"] == "[0;1,2,2]");

  r = run({"cf", "eval", "--word", "2,2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("2/5") != std::string::npos);

  r = run({"search", "exhaustive", "--q", "7"});
  REQUIRE(r.code == 0);
  rows = json_lines(r.out);
  CHECK(rows[0]["a"] == 5);
  CHECK(rows[0]["m_min"] == 2);
}

TEST_CASE("cli: search table with cache and tsv output") {
  const auto path = scratch("table.tsv").string();
  auto r = run({"--format", "tsv", "search", "table", "--q-min", "2", "--q-max", "50", "--filter",
                "primes", "--cache", path});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string header, line;
  std::getline(in, header);
  const auto cols = std::count(header.begin(), header.end(), '\t');
  int n = 0;
  while (std::getline(in, line)) {
    CHECK(std::count(line.begin(), line.end(), '\t') == cols);
    ++n;
  }
  CHECK(n == 15);
  CHECK(cache_read(path).size() == 15);
  r = run({"search", "table", "--q-min", "2", "--q-max", "50", "--cache", path});
  REQUIRE(r.code == 0);
  CHECK(json_lines(r.out).size() == 15);
  CHECK(cache_read(path).size() == 15);
}

TEST_CASE("cli: other subcommands run") {
  CHECK(run({"korobov", "backward", "--a", "5", "--q", "7"}).code == 0);
  CHECK(run({"sets", "count", "--M", "2", "--t", "100"}).code == 0);
  CHECK(run({"sets", "decompose", "--q", "10007", "--M", "3", "--t", "20"}).code == 0);
  CHECK(run({"fold", "--base", "2", "--power", "3"}).code == 0);
  CHECK(run({"fold", "--base", "10", "--power", "40", "--audit"}).code == 0);
  CHECK(run({"--seed", "1", "deviate", "--N", "10", "--n", "100", "--trials", "100"}).code == 0);
  CHECK(run({"sl2", "generators", "--N", "2", "--modulus", "7"}).code == 0);
  CHECK(run({"sl2", "padic", "--p", "3", "--n", "1", "--entries", "1,1,0,1"}).code == 0);
  CHECK(run({"sl2", "stab", "--p", "3", "--n", "1"}).code == 0);
}

TEST_CASE("cli: errors") {
  auto r = run({"search", "exhaustive", "--q", "7", "--bogus"});
  CHECK(r.code == 1);
  CHECK(r.err.rfind("error: ", 0) == 0);
  r = run({"cf", "expand", "--num", "2", "--den", "6"});
  CHECK(r.code == 1);
  r = run({"deviate", "--N", "10", "--n", "100", "--trials", "100"});
  CHECK(r.code == 1);  // seed is required
  r = run({"--help"});
  CHECK(r.code == 0);
  CHECK_FALSE(r.out.empty());
}

TEST_CASE("cli: identical output for different worker counts") {
  const std::vector<std::string> base{"--seed", "7", "deviate", "--N", "20", "--n", "200",
                                      "--trials", "200", "--mode", "signed"};
  auto one = base, many = base;
  one.insert(one.begin(), {"--workers", "1"});
  many.insert(many.begin(), {"--workers", "8"});
  const auto a = run(one), b = run(many);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
}
