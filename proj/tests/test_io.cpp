#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "doctest.h"
#include "vortexspec/io.hpp"

using namespace vortex;
namespace fs = std::filesystem;

TEST_CASE("num round-trips doubles") {
  for (double x : {0.1, 1.0 / 3.0, -8.000000000000002, 1e-300, 6.02214076e23}) {
    CHECK(std::strtod(io::num(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("sha256 and manifest") {
  const fs::path dir = fs::temp_directory_path() / "vortexspec_io_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  { std::ofstream(dir / "abc.txt", std::ios::binary) << "abc"; }
  // FIPS 180-2 test vector
  CHECK(io::sha256_file(dir / "abc.txt") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

  io::RunManifest m;
  m.command = "test";
  m.config_json = R"({"k": 1})";
  m.started = m.finished = io::utc_now();
  m.gates = {{"a", true, ""}, {"b", false, "x"}};
  m.files = {"abc.txt"};
  CHECK_FALSE(m.all_passed());
  io::write_manifest(dir, m);
  std::ifstream f(dir / "manifest.json");
  const auto j = nlohmann::json::parse(f);
  CHECK(j["files"][0]["bytes"] == 3);
  CHECK(j["files"][0]["sha256"].get<std::string>().size() == 64);
  CHECK(j["all_passed"] == false);
  CHECK(j["config"]["k"] == 1);
  fs::remove_all(dir);
}

TEST_CASE("spectrum csv columns") {
  RobustSpectrum s;
  s.eigenvalues = VectorXcd::Constant(2, cplx(-1.5, 0.25));
  s.residuals = VectorXd::Constant(2, 1e-12);
  s.robust = {true, false};
  const fs::path p = fs::temp_directory_path() / "vortexspec_spec.csv";
  io::write_spectrum_csv(p, 1, 0.0, s);
  std::ifstream f(p);
  std::string head, row;
  std::getline(f, head);
  std::getline(f, row);
  CHECK(head == "k,alpha,re,im,residual,grid_robust");
  CHECK(row.rfind("1,0,-1.5,0.25,", 0) == 0);
  fs::remove(p);
}
