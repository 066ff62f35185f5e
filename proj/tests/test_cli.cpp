#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "orbicount/cache.hpp"
#include "orbicount/cli.hpp"

using namespace orbicount;
using nlohmann::json;

namespace {

struct Run {
  int code;
  json out;
  std::string raw;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "orbicount");
  std::vector<const char*> argv;
  for (auto& s : args) argv.push_back(s.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  const auto raw = out.str();
  return {code, json::parse(raw, nullptr, false), raw};
}

std::filesystem::path fresh_dir(const std::string& name) {
  auto d = std::filesystem::temp_directory_path() / ("orbicount_test_" + name);
  std::filesystem::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("record layout") {
  const auto r = run({"count-m", "--n", "4", "--B", "1"});
  CHECK(r.code == 0);
  CHECK(r.out["schema"] == 1);
  CHECK(r.out["command"] == "count-m");
  CHECK(r.out["outputs"]["count"] == "0");
  CHECK(r.out["inputs"]["B"] == "1");
  CHECK(r.out.contains("wall_time"));
  CHECK(r.out["version"] == kToolVersion);
  // Round trip: the printed record parses back to itself.
  CHECK(json::parse(r.out.dump()) == r.out);
}

TEST_CASE("identity-check and counts") {
  const auto r = run({"identity-check", "--n", "4", "--B", "200"});
  CHECK(r.code == 0);
  CHECK(r.out["outputs"]["equal"] == true);
  CHECK(r.out["outputs"]["direct"] == r.out["outputs"]["sieve"]);
  const auto m = run({"count-m", "--n", "4", "--B", "1000"});
  CHECK(m.out["outputs"]["count"] == "149605440");
  const auto o = run({"count-orbifold", "--n", "5", "--B", "1"});
  CHECK(o.out["outputs"]["count"] == "10");
  const auto ma = run({"count-mat", "--a=1,1,1,1,1", "--B", "1"});
  CHECK(ma.out["outputs"]["count"] == "0");
  const auto fm = run({"fourth-moment", "--a", "1", "--B", "1"});
  CHECK(fm.out["outputs"]["count"] == "96");
}

TEST_CASE("csv output") {
  const auto r = run({"count-m", "--n", "4", "--B", "1", "--format", "csv"});
  CHECK(r.code == 0);
  std::istringstream in(r.raw);
  std::string head, row;
  std::getline(in, head);
  std::getline(in, row);
  CHECK(head.find("outputs.count") != std::string::npos);
  CHECK(row.find("count-m") == 0);
  json rec{{"a", {1, 2}}, {"b", {{"c", "x,y"}}}};
  CHECK(to_csv(rec) == "a,b.c\n1;2,\"x,y\"\n");
}

TEST_CASE("exit codes") {
  CHECK(run({"count-m", "--n", "4"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"count-m", "--n", "4", "--B", "abc"}).code == 2);
  CHECK(run({"count-m", "--n", "4", "--B", "10", "--workers", "0"}).code == 2);
  CHECK(run({"count-m", "--n", "4", "--B", "10", "--format", "xml"}).code == 2);
  const auto b = run({"count-m", "--n", "9", "--B", "100000000", "--budget", "10"});
  CHECK(b.code == 3);
  CHECK(b.out["error"]["kind"] == "budget");
  CHECK(run({"sigma", "--a=1,1,1,-1,-1", "--angle", "2/4"}).code == 2);
  CHECK(run({"predict", "--n", "4", "--B", "0.5"}).code == 2);
}

TEST_CASE("predict uses the cache") {
  const auto dir = fresh_dir("predict");
  const std::vector<std::string> args{"predict", "--n", "4", "--B", "1e5", "--ymax", "3",
                                      "--cache-dir", dir.string()};
  const auto a = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out["outputs"]["cache_hit"] == false);
  const double C = a.out["outputs"]["constant"];
  CHECK(a.out["outputs"]["value"].get<double>() == doctest::Approx(C * std::pow(10.0, 7.5)).epsilon(1e-12));
  const auto b = run(args);
  CHECK(b.out["outputs"]["cache_hit"] == true);
  CHECK(b.out["outputs"]["value"] == a.out["outputs"]["value"]);
  std::filesystem::remove_all(dir);
}

TEST_CASE("constant cache") {
  const auto dir = fresh_dir("cache");
  ConstantCache cache(dir);
  const json k1{{"kind", "D"}, {"n", 4}}, k1r{{"n", 4}, {"kind", "D"}}, k2{{"kind", "D"}, {"n", 5}};
  CHECK_FALSE(cache.lookup(k1).has_value());  // empty
  CHECK(canonical_key(k1) == canonical_key(k1r));
  CHECK(cache.store(k1, json{{"value", 1.5}})["value"] == 1.5);
  CHECK(cache.lookup(k1r).value()["value"] == 1.5);
  CHECK_FALSE(cache.lookup(k2).has_value());
  // A second store under the same key keeps the first value.
  CHECK(cache.store(k1, json{{"value", 9.0}})["value"] == 1.5);
  cache.store(k2, json{{"value", 2.5}});
  {
    std::ofstream out(dir / "constants.jsonl", std::ios::app);
    out << "{not json\n";
  }
  CHECK(cache.lookup(k2).value()["value"] == 2.5);
  CHECK(cache.quarantined() == 1);
  CHECK(std::filesystem::exists(dir.string() + "/constants.jsonl.quarantine"));
  ConstantCache again(dir);
  CHECK(again.lookup(k1).value()["value"] == 1.5);
  CHECK(again.quarantined() == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("other commands") {
  const auto s = run({"series", "--a=1,1,1,-1,-1", "--qmax", "200", "--pmax", "100"});
  CHECK(s.code == 0);
  CHECK(s.out["outputs"]["euler"].get<double>() ==
        doctest::Approx(s.out["outputs"]["truncated"].get<double>()).epsilon(0.01));
  const auto r = run({"residues", "--n", "4", "--B", "100", "--modulus", "2"});
  CHECK(r.code == 0);
  CHECK(r.out["outputs"]["frequencies"].size() == 2);
  const auto i = run({"integral", "--a=1,1,1,1,1"});
  CHECK(i.out["outputs"]["value"] == 0.0);
  CHECK(i.out["outputs"]["short_circuit"] == true);
  const auto c = run({"couples", "--n", "4", "--B", "1"});
  CHECK(c.out["outputs"]["couples"] == 1);
  const auto a1 = run({"arc-scan", "--B", "10000", "--samples", "50", "--seed", "7"});
  const auto a2 = run({"arc-scan", "--B", "10000", "--samples", "50", "--seed", "7", "--workers", "3"});
  CHECK(a1.out["outputs"] == a2.out["outputs"]);
  CHECK(a1.out["inputs"]["seed"] == "7");
}
