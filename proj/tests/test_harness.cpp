#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <fstream>
#include <sstream>

#include "coopsense/config_io.hpp"
#include "coopsense/harness.hpp"
#include "doctest.h"

using namespace coopsense;

namespace {

HarnessConfig small_config() {
  HarnessConfig cfg;
  cfg.ofdm.subcarriers = 16;
  cfg.ofdm.symbols = 16;
  // Keep the full-size subcarrier spacing so the unambiguous range still
  // exceeds the station distances.
  cfg.ofdm.bandwidth_hz = 16 * 727343.75;
  cfg.grid.range_count = 201;
  cfg.grid.velocity_count = 161;
  cfg.location_lattice = {2.0, 0.25, 0.3, 0.02};
  cfg.velocity_lattice = {2.0, 0.25, 0.3, 0.02};
  cfg.trials = 4;
  cfg.workers = 1;
  return cfg;
}

std::string find_row(const std::vector<ResultRow>& rows, const std::string& mode,
                     const std::string& metric, const ResultRow** out) {
  for (const auto& r : rows)
    if (r.mode == mode && r.metric == metric) {
      *out = &r;
      return "";
    }
  *out = nullptr;
  return "missing row " + mode + "/" + metric;
}

}  // namespace

TEST_CASE("mode names round trip") {
  for (Mode m : {Mode::single, Mode::symbol, Mode::mle}) {
    const auto back = mode_from_name(mode_name(m));
    REQUIRE(back.has_value());
    CHECK(*back == m);
  }
  CHECK(!mode_from_name("coherent").has_value());
  CHECK(!mode_from_name("").has_value());
}

TEST_CASE("config stream applies keys on top of defaults") {
  std::istringstream in(
      "# comment line\n"
      "\n"
      "subcarriers = 64   # trailing comment\n"
      "symbols=32\n"
      "carrier_hz = 26e9\n"
      "bandwidth_hz = 50e6\n"
      "symbol_duration_s = 1e-5\n"
      "range_min_m = 10\n"
      "range_max_m = 150\n"
      "range_count = 201\n"
      "velocity_min_mps = -20\n"
      "velocity_max_mps = 20\n"
      "velocity_count = 81\n"
      "location_half_extent = 4\n"
      "location_spacing = 0.2\n"
      "location_refine_half_extent = 0.1\n"
      "location_refine_spacing = 0.01\n"
      "velocity_half_extent = 3\n"
      "velocity_spacing = 0.1\n"
      "velocity_refine_half_extent = 0.05\n"
      "velocity_refine_spacing = 0.005\n"
      "zone_min = -1, -2\n"
      "zone_max = 11, 12\n"
      "target_speed_mps = 13\n"
      "bs_arc_radius_m = 90\n"
      "region_center = 5, 6\n"
      "region_radius = 55\n"
      "explicit_bs = 0,0, 100,0, 0,100\n"
      "gain_magnitudes = 1, 0.5, 2\n"
      "snr_dbs = -20, -10, -5\n"
      "bs_counts = 2, 4\n"
      "theta_degs = 30, 90, 150\n"
      "modes = single, mle\n"
      "trials = 7\n"
      "master_seed = 42\n"
      "noiseless = true\n"
      "workers = 3\n"
      "fixed_target = 4, 4\n"
      "fixed_velocity = -3, 2\n");
  HarnessConfig cfg;
  apply_config_stream(in, cfg);

  CHECK(cfg.ofdm.subcarriers == 64);
  CHECK(cfg.ofdm.symbols == 32);
  CHECK(cfg.ofdm.carrier_hz == 26e9);
  CHECK(cfg.ofdm.bandwidth_hz == 50e6);
  CHECK(cfg.ofdm.symbol_duration_s == 1e-5);
  CHECK(cfg.grid.range_min_m == 10.0);
  CHECK(cfg.grid.range_max_m == 150.0);
  CHECK(cfg.grid.range_count == 201);
  CHECK(cfg.grid.velocity_min_mps == -20.0);
  CHECK(cfg.grid.velocity_max_mps == 20.0);
  CHECK(cfg.grid.velocity_count == 81);
  CHECK(cfg.location_lattice.half_extent == 4.0);
  CHECK(cfg.location_lattice.spacing == 0.2);
  CHECK(cfg.location_lattice.refine_half_extent == 0.1);
  CHECK(cfg.location_lattice.refine_spacing == 0.01);
  CHECK(cfg.velocity_lattice.half_extent == 3.0);
  CHECK(cfg.velocity_lattice.spacing == 0.1);
  CHECK(cfg.velocity_lattice.refine_half_extent == 0.05);
  CHECK(cfg.velocity_lattice.refine_spacing == 0.005);
  CHECK((cfg.zone_min - Vec2(-1.0, -2.0)).norm() == 0.0);
  CHECK((cfg.zone_max - Vec2(11.0, 12.0)).norm() == 0.0);
  CHECK(cfg.target_speed_mps == 13.0);
  CHECK(cfg.bs_arc_radius_m == 90.0);
  CHECK((cfg.region.center - Vec2(5.0, 6.0)).norm() == 0.0);
  CHECK(cfg.region.radius == 55.0);
  REQUIRE(cfg.explicit_bs.size() == 3);
  CHECK((cfg.explicit_bs[1] - Vec2(100.0, 0.0)).norm() == 0.0);
  REQUIRE(cfg.gain_magnitudes.size() == 3);
  CHECK(cfg.gain_magnitudes[2] == 2.0);
  CHECK(cfg.snr_dbs == std::vector<double>{-20.0, -10.0, -5.0});
  CHECK(cfg.bs_counts == std::vector<int>{2, 4});
  CHECK(cfg.theta_degs == std::vector<double>{30.0, 90.0, 150.0});
  REQUIRE(cfg.modes.size() == 2);
  CHECK(cfg.modes[0] == Mode::single);
  CHECK(cfg.modes[1] == Mode::mle);
  CHECK(cfg.trials == 7);
  CHECK(cfg.master_seed == 42);
  CHECK(cfg.noiseless);
  CHECK(cfg.workers == 3);
  REQUIRE(cfg.fixed_target.has_value());
  CHECK((*cfg.fixed_target - Vec2(4.0, 4.0)).norm() == 0.0);
  REQUIRE(cfg.fixed_velocity.has_value());
  CHECK((*cfg.fixed_velocity - Vec2(-3.0, 2.0)).norm() == 0.0);
}

TEST_CASE("config stream rejects malformed input") {
  HarnessConfig cfg;
  auto feed = [&cfg](const std::string& text) {
    std::istringstream in(text);
    apply_config_stream(in, cfg);
  };
  CHECK_THROWS_AS(feed("unknown_key = 1\n"), ValidationError);
  CHECK_THROWS_AS(feed("trials\n"), ValidationError);
  CHECK_THROWS_AS(feed("= 3\n"), ValidationError);
  CHECK_THROWS_AS(feed("trials = seven\n"), ValidationError);
  CHECK_THROWS_AS(feed("trials = 3x\n"), ValidationError);
  CHECK_THROWS_AS(feed("snr_dbs = -5, oops\n"), ValidationError);
  CHECK_THROWS_AS(feed("noiseless = maybe\n"), ValidationError);
  CHECK_THROWS_AS(feed("zone_min = 1\n"), ValidationError);
  CHECK_THROWS_AS(feed("zone_min = 1, 2, 3\n"), ValidationError);
  CHECK_THROWS_AS(feed("explicit_bs = 1, 2, 3\n"), ValidationError);
  CHECK_THROWS_AS(feed("modes = single, turbo\n"), ValidationError);
  CHECK_THROWS_AS(load_config_file("/nonexistent/path.cfg"), IoError);
}

TEST_CASE("boolean spellings") {
  for (const std::string v : {"true", "1", "yes", "on"}) {
    HarnessConfig cfg;
    std::istringstream in("noiseless = " + v + "\n");
    apply_config_stream(in, cfg);
    CHECK(cfg.noiseless);
  }
  for (const std::string v : {"false", "0", "no", "off"}) {
    HarnessConfig cfg;
    cfg.noiseless = true;
    std::istringstream in("noiseless = " + v + "\n");
    apply_config_stream(in, cfg);
    CHECK(!cfg.noiseless);
  }
}

TEST_CASE("station layouts") {
  const Vec2 center(5.0, 5.0);
  const double r = 100.0;

  SUBCASE("two stations straddle the vertical through the center") {
    const auto bs = bs_layout(2, 90.0, center, r);
    REQUIRE(bs.size() == 2);
    // 90 degrees spacing -> stations at 45 and 135 degrees.
    CHECK((bs[0] - (center + r * Vec2(std::cos(M_PI / 4), std::sin(M_PI / 4))))
              .norm() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK((bs[1] - (center + r * Vec2(std::cos(3 * M_PI / 4), std::sin(3 * M_PI / 4))))
              .norm() == doctest::Approx(0.0).epsilon(1e-12));
    for (const auto& p : bs)
      CHECK((p - center).norm() == doctest::Approx(r).epsilon(1e-12));
  }

  SUBCASE("angular spacing between two stations matches theta") {
    for (double theta : {20.0, 60.0, 120.0, 160.0}) {
      const auto bs = bs_layout(2, theta, center, r);
      const Vec2 d0 = (bs[0] - center).normalized();
      const Vec2 d1 = (bs[1] - center).normalized();
      const double angle = std::acos(std::clamp(d0.dot(d1), -1.0, 1.0));
      CHECK(angle == doctest::Approx(theta * M_PI / 180.0).epsilon(1e-9));
    }
  }

  SUBCASE("three or more stations spread equally") {
    for (int count : {3, 4, 6}) {
      const auto bs = bs_layout(count, 0.0, center, r);
      REQUIRE(bs.size() == static_cast<size_t>(count));
      for (int w = 0; w < count; ++w) {
        const Vec2 a = (bs[static_cast<size_t>(w)] - center).normalized();
        const Vec2 b =
            (bs[static_cast<size_t>((w + 1) % count)] - center).normalized();
        const double angle = std::acos(std::clamp(a.dot(b), -1.0, 1.0));
        CHECK(angle == doctest::Approx(2.0 * M_PI / count).epsilon(1e-9));
      }
    }
  }

  SUBCASE("validation") {
    CHECK_THROWS_AS(bs_layout(1, 90.0, center, r), ValidationError);
    CHECK_THROWS_AS(bs_layout(2, 0.0, center, r), ValidationError);
    CHECK_THROWS_AS(bs_layout(2, 360.0, center, r), ValidationError);
    CHECK_THROWS_AS(bs_layout(3, 90.0, center, 0.0), ValidationError);
  }

  SUBCASE("reported spacing column") {
    CHECK(layout_theta_deg(2, 75.0) == 75.0);
    CHECK(layout_theta_deg(3, 75.0) == doctest::Approx(120.0));
    CHECK(layout_theta_deg(4, 75.0) == doctest::Approx(90.0));
  }
}

TEST_CASE("harness config validation") {
  HarnessConfig cfg;
  CHECK_NOTHROW(cfg.validate());

  HarnessConfig bad = cfg;
  bad.trials = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.modes.clear();
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.snr_dbs.clear();
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.bs_counts = {1};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.bs_counts = {17};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.zone_max = Vec2(-1.0, 5.0);
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.location_lattice.spacing = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.workers = -1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.gain_magnitudes = {1.0, 0.0};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("csv writer pins the exact format") {
  std::vector<ResultRow> rows;
  ResultRow r;
  r.mode = "symbol";
  r.metric = "location";
  r.snr_db = -5.0;
  r.bs_count = 3;
  r.theta_deg = 120.0;
  r.nc = 128;
  r.ns = 256;
  r.trials = 10;
  r.failures = 0;
  r.rmse = 0.0123456789;
  rows.push_back(r);
  r.snr_db = -10.0;
  r.failures = 1;
  r.rmse = 1.5;
  rows.push_back(r);
  r = rows[0];
  r.mode = "mle";
  r.rmse = 0.025;
  rows.push_back(r);

  const std::string expect =
      "mode,metric,snr_db,bs_count,theta_deg,nc,ns,trials,failures,rmse\n"
      "mle,location,-5,3,120,128,256,10,0,0.025\n"
      "symbol,location,-10,3,120,128,256,10,1,1.5\n"
      "symbol,location,-5,3,120,128,256,10,0,0.0123457\n";
  CHECK(csv_string(rows) == expect);

  rows.push_back(rows.back());  // duplicate axis tuple
  CHECK_THROWS_AS(csv_string(rows), ValidationError);
}

TEST_CASE("summary table renders every row") {
  std::vector<ResultRow> rows(1);
  rows[0].mode = "single";
  rows[0].metric = "range";
  rows[0].snr_db = -5.0;
  rows[0].bs_count = 2;
  rows[0].theta_deg = 90.0;
  rows[0].nc = 16;
  rows[0].ns = 16;
  rows[0].trials = 3;
  rows[0].failures = 0;
  rows[0].rmse = 0.125;
  std::ostringstream ss;
  write_summary(ss, rows);
  const std::string text = ss.str();
  CHECK(text.find("single") != std::string::npos);
  CHECK(text.find("range") != std::string::npos);
  CHECK(text.find("0.125") != std::string::npos);
}

TEST_CASE("sweep output is deterministic and worker independent") {
  HarnessConfig cfg = small_config();
  cfg.trials = 8;
  cfg.snr_dbs = {0.0};
  cfg.bs_counts = {2, 3};
  cfg.master_seed = 11;

  cfg.workers = 1;
  const auto rows_a = run_snr_bs_sweep(cfg);
  cfg.workers = 3;
  const auto rows_b = run_snr_bs_sweep(cfg);
  CHECK(csv_string(rows_a) == csv_string(rows_b));

  cfg.workers = 1;
  cfg.master_seed = 12;
  const auto rows_c = run_snr_bs_sweep(cfg);
  CHECK(csv_string(rows_a) != csv_string(rows_c));
}

TEST_CASE("noiseless sweep recovers the scene to lattice precision") {
  HarnessConfig cfg = small_config();
  cfg.noiseless = true;
  cfg.trials = 3;
  cfg.snr_dbs = {0.0};
  cfg.bs_counts = {3};

  const auto rows = run_snr_bs_sweep(cfg);
  // single range, single radial_velocity, then 4 metrics each for symbol/mle.
  CHECK(rows.size() == 10);
  const ResultRow* row = nullptr;
  std::string err = find_row(rows, "symbol", "location", &row);
  REQUIRE_MESSAGE(row != nullptr, err);
  CHECK(row->failures == 0);
  CHECK(row->trials == 3);
  CHECK(row->rmse < 0.1);
  err = find_row(rows, "symbol", "velocity", &row);
  REQUIRE_MESSAGE(row != nullptr, err);
  CHECK(row->failures == 0);
  CHECK(row->rmse < 0.1);
  // Per-station estimates stay on the search grid, so their noiseless error
  // is bounded by half a grid step (0.5 m range, 0.25 m/s velocity here).
  err = find_row(rows, "single", "range", &row);
  REQUIRE_MESSAGE(row != nullptr, err);
  CHECK(row->rmse <= 0.5);
  err = find_row(rows, "single", "radial_velocity", &row);
  REQUIRE_MESSAGE(row != nullptr, err);
  CHECK(row->rmse <= 0.25);
  for (const auto& r : rows) {
    CHECK(r.nc == 16);
    CHECK(r.ns == 16);
    CHECK(std::isfinite(r.rmse));
  }
}

TEST_CASE("collinear explicit stations count as failures") {
  HarnessConfig cfg = small_config();
  cfg.noiseless = true;
  cfg.trials = 2;
  cfg.snr_dbs = {0.0};
  cfg.bs_counts = {3};
  cfg.explicit_bs = {Vec2(-60.0, -50.0), Vec2(5.0, -50.0), Vec2(70.0, -50.0)};
  cfg.fixed_target = Vec2(5.0, 5.0);

  const auto rows = run_snr_bs_sweep(cfg);
  const ResultRow* row = nullptr;
  const std::string err = find_row(rows, "symbol", "location", &row);
  REQUIRE_MESSAGE(row != nullptr, err);
  CHECK(row->failures == row->trials);
  CHECK(std::isnan(row->rmse));
  // The per-station path has no fix to fail.
  const ResultRow* single_row = nullptr;
  find_row(rows, "single", "range", &single_row);
  REQUIRE(single_row != nullptr);
  CHECK(single_row->failures == 0);
  CHECK(std::isfinite(single_row->rmse));
}

TEST_CASE("geometry sweep emits symbol location rows per spacing") {
  HarnessConfig cfg = small_config();
  cfg.noiseless = true;
  cfg.trials = 2;
  cfg.snr_dbs = {0.0};
  cfg.theta_degs = {60.0, 90.0};

  const auto rows = run_geometry_sweep(cfg);
  REQUIRE(rows.size() == 4);  // location + range per spacing
  for (const auto& r : rows) {
    CHECK(r.mode == "symbol");
    CHECK(r.bs_count == 2);
    CHECK((r.metric == "location" || r.metric == "range"));
    CHECK((r.theta_deg == 60.0 || r.theta_deg == 90.0));
  }

  HarnessConfig no_theta = small_config();
  CHECK_THROWS_AS(run_geometry_sweep(no_theta), ValidationError);
}

TEST_CASE("single trial diagnostics") {
  HarnessConfig cfg = small_config();
  cfg.noiseless = true;
  cfg.fixed_target = Vec2(4.0, 6.0);
  cfg.fixed_velocity = Vec2(12.0, -9.0);

  const auto res = run_single_trial(cfg, 0.0, 3, 90.0, 0);
  REQUIRE(res.reports.size() == 3);
  REQUIRE(res.true_ranges.size() == 3);
  CHECK((res.scenario.target_position - Vec2(4.0, 6.0)).norm() == 0.0);
  CHECK((res.scenario.target_velocity - Vec2(12.0, -9.0)).norm() == 0.0);
  REQUIRE(res.location_ok);
  CHECK((res.symbol_location - Vec2(4.0, 6.0)).norm() < 0.1);
  // The MLE fix inherits the grid quantization of the scalar ranges.
  CHECK((res.mle_location - Vec2(4.0, 6.0)).norm() < 1.0);
  REQUIRE(res.velocity_ok);
  CHECK((res.symbol_velocity - Vec2(12.0, -9.0)).norm() < 0.1);
  for (int w = 0; w < 3; ++w) {
    CHECK(res.reports[static_cast<size_t>(w)].bs_index == w);
    CHECK(std::abs(res.reports[static_cast<size_t>(w)].range_m -
                   res.true_ranges[static_cast<size_t>(w)]) <= 0.5);
  }

  // Same arguments, same trial: bit-identical scene and estimates.
  const auto res2 = run_single_trial(cfg, 0.0, 3, 90.0, 0);
  CHECK((res.symbol_location - res2.symbol_location).norm() == 0.0);
  // A different trial index draws a different scene.
  HarnessConfig free_cfg = small_config();
  const auto r0 = run_single_trial(free_cfg, 0.0, 3, 90.0, 0);
  const auto r1 = run_single_trial(free_cfg, 0.0, 3, 90.0, 1);
  CHECK((r0.scenario.target_position - r1.scenario.target_position).norm() > 0.0);
}

TEST_CASE("weight grid csv layout") {
  Lattice lat{Vec2(1.0, 2.0), 0.1, 0.1};
  Eigen::MatrixXd grid(3, 3);
  for (int iy = 0; iy < 3; ++iy)
    for (int ix = 0; ix < 3; ++ix) grid(iy, ix) = iy * 10 + ix;
  std::ostringstream ss;
  write_weight_grid_csv(ss, lat, grid);
  const std::string expect =
      "x,y,weight\n"
      "0.9,1.9,0\n"
      "1,1.9,1\n"
      "1.1,1.9,2\n"
      "0.9,2,10\n"
      "1,2,11\n"
      "1.1,2,12\n"
      "0.9,2.1,20\n"
      "1,2.1,21\n"
      "1.1,2.1,22\n";
  CHECK(ss.str() == expect);

  Eigen::MatrixXd wrong(2, 3);
  CHECK_THROWS_AS(write_weight_grid_csv(ss, lat, wrong), ValidationError);
}

TEST_CASE("mini sweep matches the pinned golden csv") {
  const std::string dir = std::string(COOPSENSE_SOURCE_DIR) + "/tests/golden";
  HarnessConfig cfg = load_config_file(dir + "/mini_sweep.cfg");
  const auto rows = run_snr_bs_sweep(cfg);

  std::ifstream f(dir + "/mini_sweep.csv", std::ios::binary);
  REQUIRE_MESSAGE(f.good(), "golden file missing; regenerate with the CLI");
  std::ostringstream ss;
  ss << f.rdbuf();
  CHECK(csv_string(rows) == ss.str());
}
