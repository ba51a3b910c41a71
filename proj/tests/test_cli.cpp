#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "felab/cli.hpp"
#include "felab/io.hpp"

using namespace felab;

namespace {

struct Captured {
  int code;
  std::string out, err;
};

Captured run(std::vector<std::string> args) {
  args.insert(args.begin(), "felab");
  std::ostringstream out, err;
  auto* o = std::cout.rdbuf(out.rdbuf());
  auto* e = std::cerr.rdbuf(err.rdbuf());
  const int code = dispatch(args);
  std::cout.rdbuf(o);
  std::cerr.rdbuf(e);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("felab_cli_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("gamma prints value and error") {
  const auto r = run({"gamma", "--d", "2", "--q", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("4.000000 ", 0) == 0);
  const auto j = run({"gamma", "--d", "2", "--q", "4", "--json"});
  CHECK(json::parse(j.out).at("value").get<double>() == doctest::Approx(4.0));
}

TEST_CASE("exit codes") {
  CHECK(run({"kernel", "--kind", "L", "--d", "2", "--q", "3", "--r", "0.5"}).code == 1);
  const auto bogus = run({"frobnicate"});
  CHECK(bogus.code == 3);
  CHECK(bogus.err.find("unknown subcommand 'frobnicate'") != std::string::npos);
  CHECK(run({"gamma", "--d", "9"}).code == 3);
  CHECK(run({"phi", "--set", "/nonexistent/set.json"}).code == 3);
  CHECK(run({"--version"}).code == 0);
}

TEST_CASE("phi and dist on a set file") {
  const auto dir = scratch("sets");
  std::filesystem::create_directories(dir);
  const auto file = (dir / "interval.json").string();
  write_set_file(file, IntervalSet({{0.0, 1.0}}));
  const auto r = run({"phi", "--set", file, "--q", "4"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0.90360") != std::string::npos);
  CHECK(run({"dist", "--set", file}).code == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("spectrum CSV and the out-dir manifest") {
  const auto dir = scratch("spectrum");
  const auto r = run({"--out-dir", dir.string(), "spectrum", "--d", "2", "--q", "4", "--modes", "6"});
  CHECK(r.code == 0);
  std::ifstream mf(dir / "manifest.json");
  REQUIRE(mf.good());
  const auto m = json::parse(mf);
  for (const char* key : {"command_line", "tool_version", "seed", "quadrature", "threads", "wall_time_seconds", "outputs"})
    CHECK(m.contains(key));
  for (const auto& o : m.at("outputs")) CHECK(std::filesystem::exists(dir / o.get<std::string>()));
  std::filesystem::remove_all(dir);
}
