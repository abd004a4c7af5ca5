#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mslab/io.hpp"
#include "mslab/mc.hpp"

using namespace mslab;

TEST_CASE("format_double round trips exactly") {
  for (double v : {0.1, 1.0 / 3.0, 1e300, 2.5e-308, -0.0, 12345.6789}) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
    CHECK(s.find(',') == std::string::npos);
  }
}

TEST_CASE("csv writer emits meta, header, and LF-only rows") {
  CsvWriter csv;
  csv.set_meta("experiment", "demo");
  csv.set_columns({"beta", "count", "label"});
  csv.add_row({0.5, std::int64_t(3), std::string("a,b")});
  const std::string text = csv.to_string();
  CHECK(text == "# experiment: demo\nbeta,count,label\n0.5,3,\"a,b\"\n");
}

TEST_CASE("fingerprints are stable hex strings") {
  const std::string f = fingerprint_hex("beta=1;grid=64");
  CHECK(f.size() == 16);
  CHECK(f == fingerprint_hex("beta=1;grid=64"));
  CHECK(f != fingerprint_hex("beta=2;grid=64"));
  CHECK(f.find_first_not_of("0123456789abcdef") == std::string::npos);
}

TEST_CASE("output root honors MSLAB_OUT") {
  setenv("MSLAB_OUT", "/tmp/mslab-test-root", 1);
  CHECK(output_root() == std::filesystem::path("/tmp/mslab-test-root"));
  unsetenv("MSLAB_OUT");
  CHECK(output_root() == std::filesystem::path("mslab-out"));
}

TEST_CASE("manifest serializes run metadata as json") {
  namespace fs = std::filesystem;
  RunManifest m;
  m.experiment = "weld";
  m.config_text = "beta=1\ncutoff=64\n";
  m.seed = 42;
  m.fingerprint = fingerprint_hex(m.config_text);
  m.wall_time_seconds = 0.25;
  m.outputs = {{"table", "weld.csv"}};
  const fs::path file = "manifest-test.json";
  m.write(file);
  std::ifstream in(file);
  nlohmann::json j;
  in >> j;
  CHECK(j["experiment"] == "weld");
  CHECK(j["seed"] == 42);
  CHECK(j["status"] == "ok");
  CHECK(j["fingerprint"] == m.fingerprint);
  CHECK(j.contains("versions"));
  CHECK(j["outputs"]["table"] == "weld.csv");
  fs::remove(file);
}

TEST_CASE("kolmogorov distance of simple step laws") {
  CHECK(kolmogorov_distance({0.0, 1.0}, {0.5}) == doctest::Approx(0.5));
  CHECK(kolmogorov_distance({1.0, 2.0}, {1.0, 2.0}) == doctest::Approx(0.0));
}

TEST_CASE("per-index substreams make results worker-invariant") {
  std::vector<double> one(257), four(257);
  parallel_for(one.size(), 1, [&](std::size_t i) {
    Rng rng = Rng::substream(9, i);
    one[i] = rng.normal() + rng.uniform();
  });
  parallel_for(four.size(), 4, [&](std::size_t i) {
    Rng rng = Rng::substream(9, i);
    four[i] = rng.normal() + rng.uniform();
  });
  CHECK(one == four);
}

TEST_CASE("monte carlo estimate moments and quantiles") {
  const MCEstimate e = MCEstimate::from_samples({1.0, 2.0, 3.0, 4.0}, {0.5});
  CHECK(e.mean == doctest::Approx(2.5));
  CHECK(e.stderr_of_mean == doctest::Approx(std::sqrt(5.0 / 12.0)));
  REQUIRE(e.quantiles.size() == 1);
  CHECK(e.quantiles[0] == doctest::Approx(2.5));
}
