#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "rabi/dataset_io.hpp"

using namespace rabi;

namespace {

SweepSpec spec3() {
  SweepSpec s;
  s.lambda = {0.0, 1.0, 3};
  s.g_over_gs = {0.5, 2.5, 3};
  return s;
}

const std::vector<SweepRecord>& records3() {
  static const auto r = run_sweep(spec3(), 1);
  return r;
}

bool same_text(double a, double b) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  char x[40], y[40];
  std::snprintf(x, sizeof x, "%.12g", a);
  std::snprintf(y, sizeof y, "%.12g", b);
  return std::string(x) == y;
}

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

TEST_SUITE("dataset_io") {
  TEST_CASE("CSV header matches the schema") {
    std::ostringstream out;
    write_sweep_csv(records3(), out);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "lambda,g_over_gs,E0,E1,gap,parity,n_Z,xi,delta_p,adagger2,AP,cutoff");
  }

  TEST_CASE("CSV round trip at the written precision") {
    std::stringstream io;
    write_sweep_csv(records3(), io);
    const auto back = read_sweep_csv(io);
    REQUIRE(back.size() == records3().size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      const auto& a = records3()[i];
      const auto& b = back[i];
      CHECK(same_text(a.lambda, b.lambda));
      CHECK(same_text(a.E0, b.E0));
      CHECK(same_text(a.gap, b.gap));
      CHECK(same_text(a.xi, b.xi));
      CHECK(same_text(a.AP, b.AP));
      CHECK(a.parity == b.parity);
      CHECK(a.n_Z == b.n_Z);
      CHECK(a.cutoff == b.cutoff);
    }
    std::stringstream again;
    write_sweep_csv(back, again);
    std::ostringstream first;
    write_sweep_csv(records3(), first);
    CHECK(again.str() == first.str());
  }

  TEST_CASE("JSON round trip is exact and carries metadata") {
    SweepDataset d{spec3(), std::string(kToolVersion), "2020-01-01T00:00:00Z", records3()};
    d.records[4].error = "synthetic failure";
    d.records[4].xi = NAN;
    std::stringstream io;
    write_sweep_json(d, io);
    const auto back = read_sweep_json(io);
    CHECK(back.version == kToolVersion);
    CHECK(back.timestamp == "2020-01-01T00:00:00Z");
    CHECK(back.spec.omega == 0.5);
    CHECK(back.spec.Omega == 1.0);
    CHECK(spec_hash(back.spec) == spec_hash(d.spec));
    REQUIRE(back.records.size() == d.records.size());
    for (std::size_t i = 0; i < back.records.size(); ++i) {
      const auto& a = d.records[i];
      const auto& b = back.records[i];
      for (auto [x, y] : {std::pair{a.lambda, b.lambda}, {a.g_over_gs, b.g_over_gs}, {a.E0, b.E0}, {a.E1, b.E1},
                          {a.gap, b.gap}, {a.xi, b.xi}, {a.delta_p, b.delta_p}, {a.adagger2, b.adagger2}, {a.AP, b.AP}})
        CHECK(same(x, y));
      CHECK(a.parity == b.parity);
      CHECK(a.n_Z == b.n_Z);
      CHECK(a.cutoff == b.cutoff);
      CHECK(a.error == b.error);
    }
  }

  TEST_CASE("default spec metadata") {
    std::stringstream io;
    write_sweep_json({SweepSpec{}, std::string(kToolVersion), {}, {}}, io);
    const auto j = nlohmann::json::parse(io.str());
    CHECK(j["metadata"]["spec"]["omega"] == 0.5);
    CHECK(j["metadata"]["spec"]["Omega"] == 1.0);
    CHECK(j["metadata"]["version"] == std::string(kToolVersion));
    CHECK(j["metadata"]["timestamp"].get<std::string>().size() == 20);
  }

  TEST_CASE("SOURCE_DATE_EPOCH pins the timestamp") {
    setenv("SOURCE_DATE_EPOCH", "0", 1);
    CHECK(utc_timestamp() == "1970-01-01T00:00:00Z");
    unsetenv("SOURCE_DATE_EPOCH");
  }

  TEST_CASE("schema mismatches are rejected") {
    std::istringstream bad_header("lambda,g,E0\n1,2,3\n");
    CHECK_THROWS_AS(read_sweep_csv(bad_header), std::runtime_error);
    std::istringstream short_row(std::string(kSweepCsvHeader) + "\n1,2,3\n");
    CHECK_THROWS_AS(read_sweep_csv(short_row), std::runtime_error);
    std::istringstream bad_num(std::string(kSweepCsvHeader) + "\n1,2,x,4,5,1,0,1,1,1,1,10\n");
    CHECK_THROWS_AS(read_sweep_csv(bad_num), std::runtime_error);
    std::istringstream bad_json(R"({"metadata": {}, "records": [], "extra": 1})");
    CHECK_THROWS(read_sweep_json(bad_json));
  }

  TEST_CASE("spec JSON rejects unknown keys") {
    CHECK_THROWS_AS(spec_from_json(nlohmann::json{{"lambdas", 1}}), std::invalid_argument);
    CHECK_THROWS_AS(spec_from_json(nlohmann::json{{"lambda", {{"min", 0}, {"count", 3}}}}), std::invalid_argument);
    const auto s = spec_from_json(nlohmann::json{{"lambda", {{"steps", 5}}}});
    CHECK(s.lambda.steps == 5);
    CHECK(s.lambda.min == SweepSpec{}.lambda.min);
  }

  TEST_CASE("hash-based file naming") {
    const auto s = spec3();
    const auto h = spec_hash(s);
    CHECK(h.size() == 16);
    SweepSpec t = s;
    t.omega = 0.4;
    CHECK(spec_hash(t) != h);
    const auto dir = std::filesystem::path(RABI_ATLAS_TEST_TMP) / "naming";
    std::filesystem::create_directories(dir);
    CHECK(sweep_output_path(dir, s, DatasetFormat::csv).filename() == "sweep_" + h + ".csv");
    CHECK(sweep_output_path(dir / "x.csv", s, DatasetFormat::csv).filename() == "x.csv");
  }

  TEST_CASE("file save and load") {
    const auto dir = std::filesystem::path(RABI_ATLAS_TEST_TMP) / "files";
    for (const char* name : {"r.csv", "r.json"}) {
      const auto p = dir / name;
      save_sweep(p, spec3(), records3());
      const auto back = load_sweep_records(p);
      REQUIRE(back.size() == 9);
      CHECK(back[8].n_Z == records3()[8].n_Z);
    }
    CHECK_THROWS(load_sweep_records(dir / "missing.csv"));
  }

  TEST_CASE("boundary JSON") {
    const auto bs = extract_boundaries(records3(), spec3());
    std::ostringstream out;
    write_boundaries_json(bs, records3(), out);
    const auto j = nlohmann::json::parse(out.str());
    for (const char* key : {"parity_flips", "nz_jumps", "unconventional", "as_ps", "gap_minima"}) CHECK(j.contains(key));
  }
}
