#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "cpde/config.hpp"
#include "cpde/csv.hpp"
#include "cpde/errors.hpp"
#include "cpde/format.hpp"
#include "cpde/initial_density.hpp"
#include "cpde/spline.hpp"

using namespace cpde;

namespace {

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "cpde_core_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    double v = std::bit_cast<double>(rng());
    if (!std::isfinite(v)) continue;
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(25.0) == "25");
}

TEST_CASE("config parses, resolves and rejects unknown keys") {
  Config cfg = Config::from_string("a = 1.5\nlist = 1,2,3\n# comment\nrange = 1:5:2\n");
  CHECK(cfg.num("a", 0) == 1.5);
  CHECK(cfg.num_list("list", "") == std::vector<double>{1, 2, 3});
  CHECK(cfg.num_list("range", "") == std::vector<double>{1, 3, 5});
  CHECK(cfg.num("missing", 4.5) == 4.5);
  cfg.reject_unknown();

  Config bad = Config::from_string("oops = 1\n");
  CHECK_THROWS_AS(bad.reject_unknown(), validation_error);
  CHECK_THROWS_AS(Config::from_string("noequals\n"), parse_error);
  CHECK_THROWS_AS(Config::from_string("a = 1\na = 2\n"), parse_error);

  Config dup = Config::from_string("x = 2\n");
  dup.set("x", "3");
  CHECK(dup.num("x", 0) == 3);
  CHECK(dup.resolved_text() == "x = 3\n");
}

TEST_CASE("graph and cascade csv round-trip with line diagnostics") {
  const auto dir = temp_dir();
  const auto gpath = (dir / "g.csv").string();
  write_text_file(gpath, "follower,followee\n1,0\n2,1\n");
  const auto records = read_graph_csv(gpath);
  REQUIRE(records.size() == 2);
  CHECK(records[0] == std::pair<UserId, UserId>{1, 0});

  write_text_file(gpath, "follower,followee\n1,zzz\n");
  try {
    read_graph_csv(gpath);
    FAIL("expected parse error");
  } catch (const parse_error& e) {
    CHECK(e.line() == 2);
  }

  const auto cpath = (dir / "c.csv").string();
  write_text_file(cpath, "user_id,time_hours\n0,0\n2,1.5\n");
  const auto events = read_cascade_csv(cpath);
  REQUIRE(events.size() == 2);
  CHECK(events[1].second == 1.5);

  const auto spath = (dir / "s.txt").string();
  write_text_file(spath, "0\n");
  CHECK(read_sources_file(spath) == std::set<UserId>{0});
}

TEST_CASE("density csv round-trips bit-exactly, sidecar optional") {
  DensityField f;
  f.distances = {1, 2};
  f.times = {1, 2.5};
  f.values.resize(2, 2);
  f.values << 0.25, 0.5, 0.1, 1.0 / 3.0;
  f.mode = DensityMode::ratio;
  f.group_sizes = {{1, 4}, {2, 10}};

  const auto dir = temp_dir();
  const auto path = (dir / "d.csv").string();
  write_density_csv(path, f);
  const DensityField g = read_density_csv(path);
  CHECK(g.distances == f.distances);
  CHECK(g.times == f.times);
  CHECK(g.values == f.values);
  CHECK(g.group_sizes == f.group_sizes);

  write_density_csv(path, f);
  const std::string first = read_text_file(path);
  write_density_csv(path, f);
  CHECK(first == read_text_file(path));

  f.group_sizes.clear();
  write_density_csv(path, f);
  const DensityField h = read_density_csv(path);
  CHECK(h.group_sizes.empty());
  CHECK(h.values == f.values);
}

TEST_CASE("initial density: flat data stays constant") {
  InitialDensity phi = build_initial_density({{1, 0.7}, {2, 0.7}, {3, 0.7}, {4, 0.7}, {5, 0.7}});
  for (double x = 1; x <= 5; x += 0.01) CHECK(phi(x) == doctest::Approx(0.7).epsilon(1e-13));
}

TEST_CASE("initial density: two samples hit values with flat ends") {
  InitialDensity phi = build_initial_density({{1, 0.2}, {2, 0.4}});
  CHECK(phi(1) == doctest::Approx(0.2).epsilon(1e-13));
  CHECK(phi(2) == doctest::Approx(0.4).epsilon(1e-13));
  const double step = 1e-6;
  CHECK(std::abs((phi(1 + step) - phi(1)) / step) <= 1e-4);
  CHECK(std::abs((phi(2) - phi(2 - step)) / step) <= 1e-4);
}

TEST_CASE("initial density: exact interpolation at knots") {
  // distance-group densities at t = 1, read off a typical decaying story
  const std::vector<std::pair<double, double>> samples = {
      {1, 0.30}, {2, 0.22}, {3, 0.11}, {4, 0.04}, {5, 0.015}};
  InitialDensity phi = build_initial_density(samples);
  for (const auto& [x, v] : samples) CHECK(std::abs(phi(x) - v) <= 1e-12);
}

TEST_CASE("initial density: end slopes vanish and interior stays C2") {
  std::mt19937_64 rng(11);
  auto u01 = [&] { return static_cast<double>(rng() >> 11) / 9007199254740992.0; };
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<std::pair<double, double>> samples;
    const int n = 4 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) samples.emplace_back(i + 1, 0.05 + u01());
    InitialDensity phi = build_initial_density(samples);
    const double l = phi.domain_lo(), L = phi.domain_hi();
    const double step = 1e-6;
    CHECK(std::abs((phi(l + step) - phi(l)) / step) <= 1e-4);
    CHECK(std::abs((phi(L) - phi(L - step)) / step) <= 1e-4);
    const auto& s = phi.spline();
    for (int i = 1; i + 1 < n; ++i) {
      const double x = samples[static_cast<size_t>(i)].first;
      const double left = s.second_derivative(x - 1e-12);
      const double right = s.second_derivative(x + 1e-12);
      const double scale = std::max({1.0, std::abs(left), std::abs(right)});
      CHECK(std::abs(left - right) / scale <= 1e-8);
    }
  }
}

TEST_CASE("initial density: property sweep stays finite and non-negative") {
  std::mt19937_64 rng(23);
  auto u01 = [&] { return static_cast<double>(rng() >> 11) / 9007199254740992.0; };
  std::vector<std::pair<double, double>> samples;
  for (int i = 0; i < 7; ++i) samples.emplace_back(i + 1, u01());
  samples[3].second = 0;  // force potential undershoot around a zero knot
  samples[0].second += 0.05;
  InitialDensity phi = build_initial_density(samples);
  for (int i = 0; i <= 200; ++i) {
    const double x = 1 + 6.0 * i / 200.0;
    const double v = phi(x);
    CHECK(std::isfinite(v));
    CHECK(v >= 0);
  }
}

TEST_CASE("initial density: validation errors") {
  CHECK_THROWS_AS(build_initial_density({{1, 0.5}}), validation_error);
  CHECK_THROWS_AS(build_initial_density({{1, 0.5}, {1, 0.7}}), validation_error);
  CHECK_THROWS_AS(build_initial_density({{2, 0.5}, {1, 0.7}}), validation_error);
  CHECK_THROWS_AS(build_initial_density({{1, 0.0}, {2, 0.0}}), validation_error);
  CHECK_THROWS_AS(build_initial_density({{1, -0.1}, {2, 0.5}}), validation_error);
  InitialDensity phi = build_initial_density({{1, 0.2}, {2, 0.4}});
  CHECK_THROWS_AS(phi(0.5), domain_error);
  CHECK_THROWS_AS(phi(2.5), domain_error);
}

TEST_CASE("clamped spline undershoot is clamped at evaluation only") {
  // steep drop to zero makes the cubic dip below zero between knots
  InitialDensity phi = build_initial_density({{0, 1.0}, {1, 1.0}, {2, 0.0}, {3, 0.0}, {4, 0.0}});
  double min_raw = 0;
  for (int i = 0; i <= 400; ++i) {
    const double x = 4.0 * i / 400.0;
    min_raw = std::min(min_raw, phi.spline()(x));
    CHECK(phi(x) >= 0);
  }
  CHECK(min_raw < -1e-6);  // the raw spline really undershoots
}

TEST_CASE("scaled initial density is the pointwise multiple") {
  InitialDensity phi = build_initial_density({{0, 0.4}, {1, 0.3}, {2, 0.2}, {3, 0.1}, {4, 0.05}});
  InitialDensity twice = phi.scaled(2.0);
  for (double x = 0; x <= 4; x += 0.1) CHECK(twice(x) == doctest::Approx(2 * phi(x)).epsilon(1e-13));
}
