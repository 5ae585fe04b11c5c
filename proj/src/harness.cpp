#include "coopsense/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "coopsense/echo_model.hpp"
#include "coopsense/fusion_velocity.hpp"
#include "coopsense/mle_baseline.hpp"
#include "coopsense/rng.hpp"

namespace coopsense {

namespace {

constexpr std::uint64_t kScenarioTag = 1;
constexpr std::uint64_t kNoiseTag = 2;
constexpr double kDegToRad = kTwoPi / 360.0;

std::uint64_t bits(double x) { return std::bit_cast<std::uint64_t>(x); }

// The scene stream deliberately ignores the SNR axis: every SNR point of a
// sweep replays the same targets, headings, and gain phases, so RMSE curves
// versus SNR differ only through the noise draws below.
std::uint64_t scene_hash(std::uint64_t master, int bs_count, double theta_deg,
                         const OfdmConfig& ofdm) {
  return mix_seed(master, static_cast<std::uint64_t>(bs_count), bits(theta_deg),
                  static_cast<std::uint64_t>(ofdm.subcarriers),
                  static_cast<std::uint64_t>(ofdm.symbols));
}

std::uint64_t noise_hash(std::uint64_t master, double snr_db, int bs_count,
                         double theta_deg, const OfdmConfig& ofdm) {
  return mix_seed(master, bits(snr_db), static_cast<std::uint64_t>(bs_count),
                  bits(theta_deg), static_cast<std::uint64_t>(ofdm.subcarriers),
                  static_cast<std::uint64_t>(ofdm.symbols));
}

void parallel_for(int count, int workers, const std::function<void(int)>& body) {
  if (workers <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto run = [&] {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n = std::min(workers, count);
  pool.reserve(static_cast<size_t>(n));
  for (int t = 0; t < n; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct ModeOutcome {
  bool loc_ok = false;
  bool vel_ok = false;
  Vec2 loc{0.0, 0.0};
  Vec2 vel{0.0, 0.0};
};

struct TrialRecord {
  Vec2 true_pos{0.0, 0.0};
  Vec2 true_vel{0.0, 0.0};
  std::vector<double> true_ranges;
  std::vector<double> true_radials;
  std::vector<double> est_ranges;   // per-station grid-search estimates
  std::vector<double> est_radials;
  std::optional<Vec2> rough;  // shared rough location fix
  ModeOutcome symbol;
  ModeOutcome mle;
};

struct PointSetup {
  const HarnessConfig* cfg = nullptr;
  double snr_db = 0.0;
  int bs_count = 0;
  double theta_deg = 90.0;
  std::vector<Vec2> bs;
  bool want_velocity = true;
  bool want_symbol = true;
  bool want_mle = true;
  bool want_single = true;
};

Scenario draw_scenario(const PointSetup& pt, std::uint64_t trial) {
  const HarnessConfig& cfg = *pt.cfg;
  const std::uint64_t sh =
      scene_hash(cfg.master_seed, pt.bs_count, pt.theta_deg, cfg.ofdm);
  RandomStream rng(mix_seed(sh, trial, kScenarioTag));

  Scenario scen;
  scen.bs_positions = pt.bs;
  if (cfg.fixed_target) {
    scen.target_position = *cfg.fixed_target;
  } else {
    scen.target_position = {rng.uniform(cfg.zone_min.x(), cfg.zone_max.x()),
                            rng.uniform(cfg.zone_min.y(), cfg.zone_max.y())};
  }
  if (cfg.fixed_velocity) {
    scen.target_velocity = *cfg.fixed_velocity;
  } else {
    const double heading = rng.uniform(0.0, kTwoPi);
    scen.target_velocity =
        cfg.target_speed_mps * Vec2(std::cos(heading), std::sin(heading));
  }
  scen.channel_gains.resize(static_cast<size_t>(pt.bs_count));
  for (int w = 0; w < pt.bs_count; ++w) {
    const double mag = cfg.gain_magnitudes.empty()
                           ? 1.0
                           : cfg.gain_magnitudes[static_cast<size_t>(w)];
    scen.channel_gains[static_cast<size_t>(w)] =
        std::polar(mag, rng.uniform(0.0, kTwoPi));
  }
  scen.noise_seed = mix_seed(
      noise_hash(cfg.master_seed, pt.snr_db, pt.bs_count, pt.theta_deg, cfg.ofdm),
      trial, kNoiseTag);
  return scen;
}

Lattice stage_lattice(const Vec2& center, double half, double spacing) {
  Lattice lat;
  lat.center = center;
  lat.half_extent = half;
  lat.spacing = spacing;
  return lat;
}

/// Pass A of one trial: preprocessing, single-station estimates, coherent
/// fusion. MLE runs later once variances are calibrated.
TrialRecord run_trial_pass_a(const PointSetup& pt, std::uint64_t trial,
                             std::vector<BsReport>* keep_reports = nullptr) {
  const HarnessConfig& cfg = *pt.cfg;
  const int w_count = pt.bs_count;
  TrialRecord rec;
  const Scenario scen = draw_scenario(pt, trial);
  rec.true_pos = scen.target_position;
  rec.true_vel = scen.target_velocity;

  std::vector<CVec> range_lags(static_cast<size_t>(w_count));
  std::vector<CVec> velocity_lags(static_cast<size_t>(w_count));
  rec.true_ranges.resize(static_cast<size_t>(w_count));
  rec.true_radials.resize(static_cast<size_t>(w_count));
  rec.est_ranges.resize(static_cast<size_t>(w_count));
  rec.est_radials.resize(static_cast<size_t>(w_count));

  for (int w = 0; w < w_count; ++w) {
    const auto sw = static_cast<size_t>(w);
    rec.true_ranges[sw] = true_range(scen, w);
    rec.true_radials[sw] = true_radial_velocity(scen, w);

    const EchoMatrix echo =
        synthesize_echo(cfg.ofdm, scen, w, pt.snr_db, cfg.noiseless);
    const CoarseEstimate est = coarse_estimate(echo, cfg.grid, cfg.ofdm);
    rec.est_ranges[sw] = est.range_m;
    rec.est_radials[sw] = est.radial_velocity_mps;

    const CVec e = range_feature_vector(echo, est.radial_velocity_mps, cfg.ofdm);
    range_lags[sw] = build_range_lags(e);
    if (pt.want_velocity) {
      const CVec f = velocity_feature_vector(echo, est.range_m, cfg.ofdm);
      velocity_lags[sw] = build_velocity_lags(f);
    }
    if (keep_reports) {
      BsReport rep;
      rep.bs_index = w;
      rep.range_m = est.range_m;
      rep.radial_velocity_mps = est.radial_velocity_mps;
      rep.range_features = e;
      rep.velocity_features =
          pt.want_velocity ? velocity_feature_vector(echo, est.range_m, cfg.ofdm)
                           : CVec();
      keep_reports->push_back(std::move(rep));
    }
  }

  rec.rough = rough_location(pt.bs, rec.est_ranges, cfg.region);

  if (pt.want_symbol || pt.want_mle) {
    if (rec.rough) {
      const auto& lp = cfg.location_lattice;
      Vec2 loc = estimate_location(range_lags, pt.bs, cfg.ofdm,
                                   stage_lattice(*rec.rough, lp.half_extent,
                                                 lp.spacing));
      if (lp.refine_half_extent > 0.0)
        loc = estimate_location(range_lags, pt.bs, cfg.ofdm,
                                stage_lattice(loc, lp.refine_half_extent,
                                              lp.refine_spacing));
      rec.symbol.loc_ok = true;
      rec.symbol.loc = loc;

      if (pt.want_velocity) {
        std::vector<double> bearings(static_cast<size_t>(w_count));
        for (int w = 0; w < w_count; ++w)
          bearings[static_cast<size_t>(w)] = bearing(loc, pt.bs[static_cast<size_t>(w)]);
        const auto vrough = rough_velocity(rec.est_radials, bearings);
        if (vrough) {
          const auto& vp = cfg.velocity_lattice;
          Vec2 vel = estimate_velocity(velocity_lags, loc, pt.bs, cfg.ofdm,
                                       stage_lattice(*vrough, vp.half_extent,
                                                     vp.spacing));
          if (vp.refine_half_extent > 0.0)
            vel = estimate_velocity(velocity_lags, loc, pt.bs, cfg.ofdm,
                                    stage_lattice(vel, vp.refine_half_extent,
                                                  vp.refine_spacing));
          rec.symbol.vel_ok = true;
          rec.symbol.vel = vel;
        }
      }
    }
  }
  return rec;
}

/// Mean-removed variance of per-station estimate errors, floored so the
/// likelihood stays finite in noiseless runs.
std::vector<double> calibrate_variances(const std::vector<TrialRecord>& recs,
                                        int w_count, bool radial) {
  std::vector<double> out(static_cast<size_t>(w_count), 1e-12);
  for (int w = 0; w < w_count; ++w) {
    const auto sw = static_cast<size_t>(w);
    double mean = 0.0;
    for (const auto& r : recs)
      mean += radial ? r.est_radials[sw] - r.true_radials[sw]
                     : r.est_ranges[sw] - r.true_ranges[sw];
    mean /= static_cast<double>(recs.size());
    double var = 0.0;
    for (const auto& r : recs) {
      const double e = (radial ? r.est_radials[sw] - r.true_radials[sw]
                               : r.est_ranges[sw] - r.true_ranges[sw]) -
                       mean;
      var += e * e;
    }
    var /= static_cast<double>(recs.size());
    out[sw] = std::max(var, 1e-12);
  }
  return out;
}

/// Pass B: maximum-likelihood baseline on the stored per-trial tuples.
void run_trial_pass_b(const PointSetup& pt, TrialRecord& rec,
                      const std::vector<double>& range_vars,
                      const std::vector<double>& radial_vars) {
  const HarnessConfig& cfg = *pt.cfg;
  if (!rec.rough) return;
  const auto& lp = cfg.location_lattice;
  Vec2 loc = mle_locate(pt.bs, rec.est_ranges, range_vars,
                        stage_lattice(*rec.rough, lp.half_extent, lp.spacing));
  if (lp.refine_half_extent > 0.0)
    loc = mle_locate(pt.bs, rec.est_ranges, range_vars,
                     stage_lattice(loc, lp.refine_half_extent, lp.refine_spacing));
  rec.mle.loc_ok = true;
  rec.mle.loc = loc;

  if (!pt.want_velocity) return;
  std::vector<double> bearings(rec.est_radials.size());
  for (size_t w = 0; w < bearings.size(); ++w) bearings[w] = bearing(loc, pt.bs[w]);
  const auto vrough = rough_velocity(rec.est_radials, bearings);
  if (!vrough) return;
  const auto& vp = cfg.velocity_lattice;
  Vec2 vel = mle_velocity(loc, pt.bs, rec.est_radials, radial_vars,
                          stage_lattice(*vrough, vp.half_extent, vp.spacing));
  if (vp.refine_half_extent > 0.0)
    vel = mle_velocity(loc, pt.bs, rec.est_radials, radial_vars,
                       stage_lattice(vel, vp.refine_half_extent, vp.refine_spacing));
  rec.mle.vel_ok = true;
  rec.mle.vel = vel;
}

double rmse_of(const std::vector<double>& errors) {
  if (errors.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double e : errors) s += e * e;
  return std::sqrt(s / static_cast<double>(errors.size()));
}

ResultRow make_row(const PointSetup& pt, const std::string& mode,
                   const std::string& metric, int failures, double rmse) {
  const HarnessConfig& cfg = *pt.cfg;
  ResultRow row;
  row.mode = mode;
  row.metric = metric;
  row.snr_db = pt.snr_db;
  row.bs_count = pt.bs_count;
  row.theta_deg = layout_theta_deg(pt.bs_count, pt.theta_deg);
  row.nc = cfg.ofdm.subcarriers;
  row.ns = cfg.ofdm.symbols;
  row.trials = cfg.trials;
  row.failures = failures;
  row.rmse = rmse;
  return row;
}

/// Radial-error pools for a fused location/velocity estimate.
void fused_mode_rows(const PointSetup& pt, const std::string& mode,
                     const std::vector<TrialRecord>& recs, bool use_mle,
                     std::vector<ResultRow>& rows) {
  std::vector<double> range_errs, radial_errs, loc_errs, vel_errs;
  int loc_failures = 0;
  int vel_failures = 0;
  for (const auto& rec : recs) {
    const ModeOutcome& out = use_mle ? rec.mle : rec.symbol;
    if (!out.loc_ok) {
      ++loc_failures;
      ++vel_failures;
      continue;
    }
    loc_errs.push_back((out.loc - rec.true_pos).norm());
    for (size_t w = 0; w < pt.bs.size(); ++w) {
      range_errs.push_back((out.loc - pt.bs[w]).norm() - rec.true_ranges[w]);
    }
    if (pt.want_velocity) {
      if (!out.vel_ok) {
        ++vel_failures;
        continue;
      }
      vel_errs.push_back((out.vel - rec.true_vel).norm());
      for (size_t w = 0; w < pt.bs.size(); ++w) {
        radial_errs.push_back(radial_velocity_toward(out.vel, out.loc, pt.bs[w]) -
                              rec.true_radials[w]);
      }
    }
  }
  rows.push_back(make_row(pt, mode, "location", loc_failures, rmse_of(loc_errs)));
  rows.push_back(make_row(pt, mode, "range", loc_failures, rmse_of(range_errs)));
  if (pt.want_velocity) {
    rows.push_back(make_row(pt, mode, "velocity", vel_failures, rmse_of(vel_errs)));
    rows.push_back(
        make_row(pt, mode, "radial_velocity", vel_failures, rmse_of(radial_errs)));
  }
}

std::vector<ResultRow> run_point(const PointSetup& pt) {
  const HarnessConfig& cfg = *pt.cfg;
  if (!cfg.gain_magnitudes.empty() &&
      cfg.gain_magnitudes.size() < static_cast<size_t>(pt.bs_count))
    throw ValidationError("gain_magnitudes shorter than the station count");

  std::vector<TrialRecord> recs(static_cast<size_t>(cfg.trials));
  const int workers =
      cfg.workers > 0 ? cfg.workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  parallel_for(cfg.trials, workers, [&](int t) {
    recs[static_cast<size_t>(t)] =
        run_trial_pass_a(pt, static_cast<std::uint64_t>(t));
  });

  if (pt.want_mle) {
    const auto range_vars = calibrate_variances(recs, pt.bs_count, false);
    const auto radial_vars = calibrate_variances(recs, pt.bs_count, true);
    parallel_for(cfg.trials, workers, [&](int t) {
      run_trial_pass_b(pt, recs[static_cast<size_t>(t)], range_vars, radial_vars);
    });
  }

  std::vector<ResultRow> rows;
  if (pt.want_single) {
    std::vector<double> range_errs, radial_errs;
    for (const auto& rec : recs)
      for (size_t w = 0; w < pt.bs.size(); ++w) {
        range_errs.push_back(rec.est_ranges[w] - rec.true_ranges[w]);
        radial_errs.push_back(rec.est_radials[w] - rec.true_radials[w]);
      }
    rows.push_back(make_row(pt, "single", "range", 0, rmse_of(range_errs)));
    rows.push_back(
        make_row(pt, "single", "radial_velocity", 0, rmse_of(radial_errs)));
  }
  if (pt.want_symbol) fused_mode_rows(pt, "symbol", recs, false, rows);
  if (pt.want_mle) fused_mode_rows(pt, "mle", recs, true, rows);
  return rows;
}

PointSetup make_point(const HarnessConfig& cfg, double snr_db, int bs_count,
                      double theta_deg, bool want_velocity) {
  PointSetup pt;
  pt.cfg = &cfg;
  pt.snr_db = snr_db;
  pt.bs_count = bs_count;
  pt.theta_deg = theta_deg;
  const Vec2 zone_center = 0.5 * (cfg.zone_min + cfg.zone_max);
  pt.bs = cfg.explicit_bs.empty()
              ? bs_layout(bs_count, theta_deg, zone_center, cfg.bs_arc_radius_m)
              : cfg.explicit_bs;
  if (pt.bs.size() != static_cast<size_t>(bs_count))
    throw ValidationError("explicit station list does not match bs_count");
  pt.want_velocity = want_velocity;
  pt.want_single = false;
  pt.want_symbol = false;
  pt.want_mle = false;
  for (Mode m : cfg.modes) {
    if (m == Mode::single) pt.want_single = true;
    if (m == Mode::symbol) pt.want_symbol = true;
    if (m == Mode::mle) pt.want_mle = true;
  }
  return pt;
}

int row_sort_key_cmp(const ResultRow& a, const ResultRow& b) {
  const auto ka = std::tie(a.mode, a.metric, a.snr_db, a.bs_count, a.theta_deg,
                           a.nc, a.ns);
  const auto kb = std::tie(b.mode, b.metric, b.snr_db, b.bs_count, b.theta_deg,
                           b.nc, b.ns);
  if (ka < kb) return -1;
  if (kb < ka) return 1;
  return 0;
}

std::string fmt_g6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::single: return "single";
    case Mode::symbol: return "symbol";
    case Mode::mle: return "mle";
  }
  return "unknown";
}

std::optional<Mode> mode_from_name(const std::string& name) {
  if (name == "single") return Mode::single;
  if (name == "symbol") return Mode::symbol;
  if (name == "mle") return Mode::mle;
  return std::nullopt;
}

void HarnessConfig::validate() const {
  ofdm.validate();
  grid.validate();
  if (trials < 1) throw ValidationError("trials must be positive");
  if (!(zone_max.x() >= zone_min.x()) || !(zone_max.y() >= zone_min.y()))
    throw ValidationError("target zone is inverted");
  if (!(target_speed_mps >= 0.0)) throw ValidationError("bad target speed");
  if (!(bs_arc_radius_m > 0.0)) throw ValidationError("bad arc radius");
  if (!(region.radius > 0.0)) throw ValidationError("bad sensing region");
  for (double m : gain_magnitudes)
    if (!(m > 0.0)) throw ValidationError("gain magnitudes must be positive");
  if (modes.empty()) throw ValidationError("no modes selected");
  if (snr_dbs.empty()) throw ValidationError("no SNR points");
  if (bs_counts.empty()) throw ValidationError("no station counts");
  for (int w : bs_counts)
    if (w < 2 || w > 16) throw ValidationError("station counts must be 2..16");
  auto lat_ok = [](const LatticeParams& p) {
    return p.half_extent > 0.0 && p.spacing > 0.0 &&
           (p.refine_half_extent <= 0.0 || p.refine_spacing > 0.0);
  };
  if (!lat_ok(location_lattice) || !lat_ok(velocity_lattice))
    throw ValidationError("bad lattice parameters");
  if (workers < 0) throw ValidationError("workers must be non-negative");
}

std::vector<Vec2> bs_layout(int count, double theta_deg, const Vec2& zone_center,
                            double radius) {
  if (count < 2) throw ValidationError("need at least two stations");
  if (!(radius > 0.0)) throw ValidationError("bad arc radius");
  std::vector<Vec2> bs;
  bs.reserve(static_cast<size_t>(count));
  if (count == 2) {
    if (!(theta_deg > 0.0 && theta_deg < 360.0))
      throw ValidationError("two-station spacing must be in (0, 360) degrees");
    const double base = 90.0 * kDegToRad;
    const double half = 0.5 * theta_deg * kDegToRad;
    for (double a : {base - half, base + half})
      bs.push_back(zone_center + radius * Vec2(std::cos(a), std::sin(a)));
    return bs;
  }
  for (int w = 0; w < count; ++w) {
    const double a = (90.0 + 360.0 * w / count) * kDegToRad;
    bs.push_back(zone_center + radius * Vec2(std::cos(a), std::sin(a)));
  }
  return bs;
}

double layout_theta_deg(int count, double theta_deg) {
  return count == 2 ? theta_deg : 360.0 / count;
}

std::vector<ResultRow> run_snr_bs_sweep(const HarnessConfig& cfg) {
  cfg.validate();
  std::vector<ResultRow> rows;
  for (double snr : cfg.snr_dbs) {
    for (int w : cfg.bs_counts) {
      const auto pt = make_point(cfg, snr, w, 90.0, /*want_velocity=*/true);
      auto point_rows = run_point(pt);
      rows.insert(rows.end(), point_rows.begin(), point_rows.end());
    }
  }
  return rows;
}

std::vector<ResultRow> run_geometry_sweep(const HarnessConfig& cfg) {
  cfg.validate();
  if (cfg.theta_degs.empty())
    throw ValidationError("geometry sweep needs theta_deg points");
  std::vector<ResultRow> rows;
  for (double theta : cfg.theta_degs) {
    for (double snr : cfg.snr_dbs) {
      auto pt = make_point(cfg, snr, 2, theta, /*want_velocity=*/false);
      // The study isolates the coherent location path.
      pt.want_single = false;
      pt.want_mle = false;
      pt.want_symbol = true;
      auto point_rows = run_point(pt);
      rows.insert(rows.end(), point_rows.begin(), point_rows.end());
    }
  }
  return rows;
}

SingleTrialResult run_single_trial(const HarnessConfig& cfg, double snr_db,
                                   int bs_count, double theta_deg,
                                   std::uint64_t trial_index) {
  cfg.validate();
  auto pt = make_point(cfg, snr_db, bs_count, theta_deg, /*want_velocity=*/true);
  pt.want_symbol = true;
  pt.want_mle = true;

  SingleTrialResult out;
  out.snr_db = snr_db;
  out.scenario = draw_scenario(pt, trial_index);

  std::vector<BsReport> reports;
  TrialRecord rec = run_trial_pass_a(pt, trial_index, &reports);
  out.reports = std::move(reports);
  out.true_ranges = rec.true_ranges;
  out.true_radials = rec.true_radials;
  if (rec.rough) out.rough_fix = *rec.rough;
  out.location_ok = rec.symbol.loc_ok;
  out.velocity_ok = rec.symbol.vel_ok;
  out.symbol_location = rec.symbol.loc;
  out.symbol_velocity = rec.symbol.vel;

  // A single trial has no batch to calibrate from; use the search grid
  // quantization steps as the nominal measurement variances.
  const double qr = cfg.grid.range_step_m();
  const double qv = cfg.grid.velocity_step_mps();
  const std::vector<double> range_vars(static_cast<size_t>(bs_count),
                                       std::max(qr * qr, 1e-12));
  const std::vector<double> radial_vars(static_cast<size_t>(bs_count),
                                        std::max(qv * qv, 1e-12));
  run_trial_pass_b(pt, rec, range_vars, radial_vars);
  out.mle_location = rec.mle.loc;
  out.mle_velocity = rec.mle.vel;
  return out;
}

void write_csv(std::ostream& os, std::span<const ResultRow> rows) {
  std::vector<ResultRow> sorted(rows.begin(), rows.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const ResultRow& a, const ResultRow& b) {
                     return row_sort_key_cmp(a, b) < 0;
                   });
  for (size_t i = 1; i < sorted.size(); ++i)
    if (row_sort_key_cmp(sorted[i - 1], sorted[i]) == 0)
      throw ValidationError("duplicate result rows for one sweep point");

  os << "mode,metric,snr_db,bs_count,theta_deg,nc,ns,trials,failures,rmse\n";
  for (const auto& r : sorted) {
    os << r.mode << ',' << r.metric << ',' << fmt_g6(r.snr_db) << ','
       << r.bs_count << ',' << fmt_g6(r.theta_deg) << ',' << r.nc << ','
       << r.ns << ',' << r.trials << ',' << r.failures << ','
       << fmt_g6(r.rmse) << '\n';
  }
}

std::string csv_string(std::span<const ResultRow> rows) {
  std::ostringstream ss;
  write_csv(ss, rows);
  return ss.str();
}

void write_summary(std::ostream& os, std::span<const ResultRow> rows) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-8s %-16s %8s %4s %8s %6s %6s %7s %6s %12s\n",
                "mode", "metric", "snr_db", "bs", "theta", "nc", "ns", "trials",
                "fail", "rmse");
  os << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf,
                  "%-8s %-16s %8.6g %4d %8.6g %6d %6d %7d %6d %12.6g\n",
                  r.mode.c_str(), r.metric.c_str(), r.snr_db, r.bs_count,
                  r.theta_deg, r.nc, r.ns, r.trials, r.failures, r.rmse);
    os << buf;
  }
}

void write_weight_grid_csv(std::ostream& os, const Lattice& lattice,
                           const Eigen::MatrixXd& grid) {
  lattice.validate();
  if (grid.rows() != lattice.per_axis() || grid.cols() != lattice.per_axis())
    throw ValidationError("weight grid does not match the lattice");
  os << "x,y,weight\n";
  for (int iy = 0; iy < grid.rows(); ++iy)
    for (int ix = 0; ix < grid.cols(); ++ix) {
      const Vec2 node = lattice.node(ix, iy);
      os << fmt_g6(node.x()) << ',' << fmt_g6(node.y()) << ','
         << fmt_g6(grid(iy, ix)) << '\n';
    }
}

}  // namespace coopsense
