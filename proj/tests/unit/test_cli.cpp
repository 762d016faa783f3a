// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <sstream>

#include "app/output.hpp"
#include "app/scenario.hpp"
#include "app/tasks.hpp"
#include "doctest.h"
#include "pcqed/errors.hpp"
#include "pcqed/units.hpp"

using namespace pcqed;
using namespace pcqed::app;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json base_config() {
  return json::parse(R"({
    "material": {"model": "drude", "eps_inf": 6.0, "hw_p": 7.90, "hgamma_p": 0.051},
    "geometry": {"R": 8.0, "eps_b": 1.0, "h": 2.0},
    "emitter": {"hw0": 2.94, "d_eg": 24.0, "gamma0_nr": 0.0},
    "run": {"task": "fit", "N": 3}
  })");
}

std::string field_of(const json& doc) {
  try {
    parse_scenario(doc);
  } catch (const SchemaError& e) {
    return e.field;
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("pcqed_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("scenario parser resolves defaults and both emitter forms") {
  const auto s = parse_scenario(base_config());
  CHECK(s.task == Task::fit);
  CHECK(s.modes == 3);
  CHECK(s.geometry.distance == doctest::Approx(10.0));
  CHECK(s.grid.points == 1601);
  CHECK(s.make_emitter().dipole == doctest::Approx(24.0));

  auto doc = base_config();
  doc["emitter"] = {{"lambda", 670.0}, {"tau0", 50.0}, {"eta", 0.9}};
  const auto e = parse_scenario(doc).make_emitter();
  CHECK(e.quantum_yield == doctest::Approx(0.9));
  CHECK(1.0 / e.hgamma0 == doctest::Approx(units::ns_to_internal(50.0)));
}

TEST_CASE("schema errors name the offending field") {
  auto doc = base_config();
  doc["geometry"]["R"] = -8.0;
  CHECK(field_of(doc) == "geometry.R");

  doc = base_config();
  doc["geometry"]["radius"] = 8.0;
  CHECK(field_of(doc) == "geometry.radius");

  doc = base_config();
  doc["run"]["task"] = "nonsense";
  CHECK(field_of(doc) == "run.task");

  doc = base_config();
  doc["run"]["grid"] = {{"min", 3.0}, {"max", 2.0}, {"points", 10}};
  CHECK(field_of(doc) == "run.grid.max");

  doc = base_config();
  doc["emitter"]["lambda"] = 500.0;
  CHECK(field_of(doc) == "emitter.hw0");

  doc = base_config();
  doc.erase("material");
  CHECK(field_of(doc) == "material");
}

TEST_CASE("CSV layout") {
  Table t;
  t.comments = {"units in eV"};
  t.add("x", {1.0, 2.0});
  t.add("y", {0.5, -0.25});
  CHECK(format_csv(t) ==
        "# units in eV\nx,y\n1.000000000000e+00,5.000000000000e-01\n"
        "2.000000000000e+00,-2.500000000000e-01\n");
}

TEST_CASE("SHA-256 of known strings") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("uncommitted output sets leave nothing behind") {
  const auto dir = scratch("staging");
  {
    OutputSet out(dir / "run");
    out.write_text("a.txt", "hello");
  }
  CHECK_FALSE(fs::exists(dir / "run" / "a.txt"));
  CHECK(fs::is_empty(dir / "run"));
  {
    OutputSet out(dir / "run");
    out.write_text("a.txt", "hello");
    CHECK(out.file_list().size() == 1);
    CHECK(out.file_list()[0]["sha256"] == sha256_hex("hello"));
    out.commit();
  }
  CHECK(fs::exists(dir / "run" / "a.txt"));
  fs::remove_all(dir);
}

TEST_CASE("run_scenario exit codes and manifest") {
  const auto dir = scratch("run");
  std::ostringstream log;

  auto bad = base_config();
  bad["geometry"]["R"] = -1.0;
  std::ofstream(dir / "bad.json") << bad.dump();
  CHECK(run_scenario(dir / "bad.json", {dir / "bad_out", -1, false}, log) == 2);
  CHECK(log.str().find("geometry.R") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "bad_out" / "manifest.json"));

  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(run_scenario(dir / "broken.json", {dir / "broken_out", -1, false}, log) == 2);

  std::ofstream(dir / "good.json") << base_config().dump();
  REQUIRE(run_scenario(dir / "good.json", {dir / "good_out", 1, false}, log) == 0);
  CHECK(check_manifest(dir / "good_out").empty());
  std::ifstream in(dir / "good_out" / "manifest.json");
  const auto manifest = json::parse(in);
  CHECK(manifest["scenario"]["geometry"]["R"] == 8.0);
  CHECK(manifest["threads"] == 1);

  // Tampering is detected.
  std::ofstream(dir / "good_out" / "modes.csv", std::ios::app) << "x";
  CHECK(check_manifest(dir / "good_out") == std::vector<std::string>{"modes.csv"});
  fs::remove_all(dir);
}

TEST_CASE("outputs do not depend on the thread count") {
  const auto dir = scratch("threads");
  std::ostringstream log;
  auto doc = base_config();
  doc["run"]["task"] = "rates";
  doc["emitter"] = {{"lambda", 670.0}, {"tau0", 50.0}, {"eta", 0.9}};
  doc["geometry"]["h"] = 5.0;
  std::ofstream(dir / "c.json") << doc.dump();
  REQUIRE(run_scenario(dir / "c.json", {dir / "one", 1, false}, log) == 0);
  REQUIRE(run_scenario(dir / "c.json", {dir / "four", 4, false}, log) == 0);
  for (const char* name : {"purcell.csv", "rates.json"}) {
    std::ifstream a(dir / "one" / name), b(dir / "four" / name);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
  }
  fs::remove_all(dir);
}
