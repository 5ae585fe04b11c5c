// Command line front end: Monte Carlo sweeps, geometry studies, single-trial
// diagnostics, and closed-form SNR predictions.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coopsense/config_io.hpp"
#include "coopsense/fusion_velocity.hpp"
#include "coopsense/harness.hpp"
#include "coopsense/report_io.hpp"
#include "coopsense/snr_theory.hpp"

namespace {

using namespace coopsense;

struct CommonArgs {
  std::string config_path;
  std::vector<double> snr_dbs;
  std::vector<int> bs_counts;
  std::vector<std::string> modes;
  int trials = -1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool noiseless = false;
  int workers = -1;
  std::string out_path;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "key = value config file");
  cmd->add_option("--snr", args.snr_dbs, "per-entry SNR points in dB")
      ->delimiter(',');
  cmd->add_option("--bs-count", args.bs_counts, "station counts")->delimiter(',');
  cmd->add_option("--mode", args.modes, "modes: single, symbol, mle")
      ->delimiter(',');
  cmd->add_option("--trials", args.trials, "Monte Carlo trials per point");
  cmd->add_option("--seed", args.seed, "master seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_flag("--noiseless", args.noiseless, "disable the noise term");
  cmd->add_option("--workers", args.workers, "worker threads (0 = auto)");
  cmd->add_option("--out", args.out_path,
                  "CSV output file (default: CSV on stdout, table on stderr)");
}

HarnessConfig resolve_config(const CommonArgs& args) {
  HarnessConfig cfg;
  if (!args.config_path.empty()) cfg = load_config_file(args.config_path);
  if (!args.snr_dbs.empty()) cfg.snr_dbs = args.snr_dbs;
  if (!args.bs_counts.empty()) cfg.bs_counts = args.bs_counts;
  if (!args.modes.empty()) {
    cfg.modes.clear();
    for (const auto& name : args.modes) {
      const auto m = mode_from_name(name);
      if (!m) throw ValidationError("unknown mode: " + name);
      cfg.modes.push_back(*m);
    }
  }
  if (args.trials >= 0) cfg.trials = args.trials;
  if (args.seed_set) cfg.master_seed = args.seed;
  if (args.noiseless) cfg.noiseless = true;
  if (args.workers >= 0) cfg.workers = args.workers;
  return cfg;
}

void emit_rows(const std::vector<ResultRow>& rows, const std::string& out_path) {
  if (out_path.empty()) {
    write_csv(std::cout, rows);
    write_summary(std::cerr, rows);
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw IoError("cannot open output file: " + out_path);
  write_csv(f, rows);
  if (!f) throw IoError("failed writing output file: " + out_path);
  write_summary(std::cout, rows);
}

void dump_weight_maps(const HarnessConfig& cfg, const SingleTrialResult& res,
                      const std::string& prefix) {
  if (!res.location_ok)
    throw ValidationError("no location fix; nothing to dump");
  const auto& bs = res.scenario.bs_positions;
  std::vector<CVec> range_lags, velocity_lags;
  for (const auto& rep : res.reports) {
    range_lags.push_back(build_range_lags(rep.range_features));
    velocity_lags.push_back(build_velocity_lags(rep.velocity_features));
  }

  Lattice loc_lat{res.rough_fix, cfg.location_lattice.half_extent,
                  cfg.location_lattice.spacing};
  const auto loc_grid = location_weight_grid(loc_lat, range_lags, bs, cfg.ofdm);
  {
    std::ofstream f(prefix + "_location.csv");
    if (!f) throw IoError("cannot open " + prefix + "_location.csv");
    write_weight_grid_csv(f, loc_lat, loc_grid);
  }

  if (res.velocity_ok) {
    Lattice vel_lat{res.symbol_velocity, cfg.velocity_lattice.half_extent,
                    cfg.velocity_lattice.spacing};
    const auto vel_grid = velocity_weight_grid(vel_lat, velocity_lags,
                                               res.symbol_location, bs, cfg.ofdm);
    std::ofstream f(prefix + "_velocity.csv");
    if (!f) throw IoError("cannot open " + prefix + "_velocity.csv");
    write_weight_grid_csv(f, vel_lat, vel_grid);
  }
}

void print_single_trial(const HarnessConfig& cfg, const SingleTrialResult& res) {
  const auto& scen = res.scenario;
  std::printf("target position   : (%.6g, %.6g) m\n", scen.target_position.x(),
              scen.target_position.y());
  std::printf("target velocity   : (%.6g, %.6g) m/s\n", scen.target_velocity.x(),
              scen.target_velocity.y());
  std::printf("snr per entry     : %.6g dB%s\n", res.snr_db,
              cfg.noiseless ? " (noiseless)" : "");
  std::printf("stations          : %zu\n\n", scen.bs_positions.size());
  std::printf("%3s %22s %12s %12s %12s %12s\n", "bs", "position", "true R",
              "est R", "true v_r", "est v_r");
  for (size_t w = 0; w < scen.bs_positions.size(); ++w) {
    char pos[48];
    std::snprintf(pos, sizeof pos, "(%.6g, %.6g)", scen.bs_positions[w].x(),
                  scen.bs_positions[w].y());
    std::printf("%3zu %22s %12.6g %12.6g %12.6g %12.6g\n", w, pos,
                res.true_ranges[w], res.reports[w].range_m, res.true_radials[w],
                res.reports[w].radial_velocity_mps);
  }
  std::printf("\n");
  if (!res.location_ok) {
    std::printf("location fix      : FAILED (no rough fix)\n");
    return;
  }
  std::printf("rough fix         : (%.6g, %.6g) m\n", res.rough_fix.x(),
              res.rough_fix.y());
  std::printf("symbol location   : (%.6g, %.6g) m   error %.6g m\n",
              res.symbol_location.x(), res.symbol_location.y(),
              (res.symbol_location - scen.target_position).norm());
  std::printf("mle location      : (%.6g, %.6g) m   error %.6g m\n",
              res.mle_location.x(), res.mle_location.y(),
              (res.mle_location - scen.target_position).norm());
  if (res.velocity_ok) {
    std::printf("symbol velocity   : (%.6g, %.6g) m/s error %.6g m/s\n",
                res.symbol_velocity.x(), res.symbol_velocity.y(),
                (res.symbol_velocity - scen.target_velocity).norm());
    std::printf("mle velocity      : (%.6g, %.6g) m/s error %.6g m/s\n",
                res.mle_velocity.x(), res.mle_velocity.y(),
                (res.mle_velocity - scen.target_velocity).norm());
  } else {
    std::printf("velocity fix      : FAILED (no rough fix)\n");
  }
}

void save_reports(const SingleTrialResult& res, const std::string& prefix,
                  bool text) {
  for (const auto& rep : res.reports) {
    const std::string path = prefix + "_bs" + std::to_string(rep.bs_index) +
                             (text ? ".txt" : ".rpt");
    std::ofstream f(path, text ? std::ios::out : std::ios::out | std::ios::binary);
    if (!f) throw IoError("cannot open " + path);
    if (text)
      write_report_text(f, rep);
    else
      write_report_binary(f, rep);
    if (!f) throw IoError("failed writing " + path);
    std::printf("wrote %s\n", path.c_str());
  }
}

void print_theory(double snr_db, int nc, int ns) {
  OfdmConfig ofdm;
  ofdm.subcarriers = nc;
  ofdm.symbols = ns;
  ofdm.validate();
  const double noise_var = std::pow(10.0, -snr_db / 10.0);
  const SnrPrediction p = predict_snr(ofdm, noise_var);
  std::printf("subcarriers                 : %d\n", nc);
  std::printf("symbols                     : %d\n", ns);
  std::printf("per-entry snr               : %.6g dB (noise var %.6g)\n", snr_db,
              noise_var);
  std::printf("matched filter peak snr     : %.6g (%.6g dB)\n",
              p.matched_filter_snr, 10.0 * std::log10(p.matched_filter_snr));
  std::printf("lag sum snr                 : %.6g (%.6g dB)\n", p.lag_sum_snr,
              10.0 * std::log10(p.lag_sum_snr));
  std::printf("lag sum lower bound         : %.6g (%.6g dB)\n",
              p.lag_sum_snr_bound, 10.0 * std::log10(p.lag_sum_snr_bound));
  std::printf("margin constant (natural)   : %.6g\n",
              snr_margin_constant(nc, ns, LogBase::natural));
  std::printf("margin constant (base 10)   : %.6g\n",
              snr_margin_constant(nc, ns, LogBase::base10));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative multi-station OFDM sensing experiments"};
  app.require_subcommand(1);

  CommonArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "RMSE sweep over SNR and station count");
  add_common_options(sweep, sweep_args);

  CommonArgs geo_args;
  std::vector<double> theta_degs;
  auto* geo = app.add_subcommand(
      "geometry", "two-station location RMSE versus angular spacing");
  add_common_options(geo, geo_args);
  geo->add_option("--theta-deg", theta_degs, "angular spacings in degrees")
      ->delimiter(',');

  CommonArgs trial_args;
  double trial_snr = -5.0;
  int trial_bs = 3;
  double trial_theta = 90.0;
  std::uint64_t trial_index = 0;
  std::string dump_prefix, report_prefix;
  bool report_text = false;
  auto* trial = app.add_subcommand("single-trial", "one diagnostic trial");
  trial->add_option("--config", trial_args.config_path, "key = value config file");
  trial->add_option("--snr", trial_snr, "per-entry SNR in dB");
  trial->add_option("--bs-count", trial_bs, "station count");
  trial->add_option("--theta-deg", trial_theta, "two-station spacing in degrees");
  trial->add_option("--trial", trial_index, "trial index within the stream");
  trial->add_option("--seed", trial_args.seed, "master seed")
      ->each([&trial_args](const std::string&) { trial_args.seed_set = true; });
  trial->add_flag("--noiseless", trial_args.noiseless, "disable the noise term");
  trial->add_option("--dump-weights", dump_prefix,
                    "write <prefix>_location.csv / <prefix>_velocity.csv");
  trial->add_option("--save-reports", report_prefix,
                    "write per-station reports <prefix>_bs<i>.rpt");
  trial->add_flag("--text", report_text, "save reports as text instead");

  double theory_snr = -5.0;
  int theory_nc = 128;
  int theory_ns = 256;
  auto* theory = app.add_subcommand("theory", "closed-form SNR predictions");
  theory->add_option("--snr", theory_snr, "per-entry SNR in dB");
  theory->add_option("--nc", theory_nc, "subcarrier count");
  theory->add_option("--ns", theory_ns, "symbol count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      const HarnessConfig cfg = resolve_config(sweep_args);
      emit_rows(run_snr_bs_sweep(cfg), sweep_args.out_path);
    } else if (geo->parsed()) {
      HarnessConfig cfg = resolve_config(geo_args);
      if (!theta_degs.empty()) cfg.theta_degs = theta_degs;
      if (cfg.theta_degs.empty())
        cfg.theta_degs = {20.0, 40.0, 60.0, 80.0, 90.0, 100.0, 120.0, 140.0, 160.0};
      emit_rows(run_geometry_sweep(cfg), geo_args.out_path);
    } else if (trial->parsed()) {
      HarnessConfig cfg;
      if (!trial_args.config_path.empty())
        cfg = load_config_file(trial_args.config_path);
      if (trial_args.seed_set) cfg.master_seed = trial_args.seed;
      if (trial_args.noiseless) cfg.noiseless = true;
      const SingleTrialResult res =
          run_single_trial(cfg, trial_snr, trial_bs, trial_theta, trial_index);
      print_single_trial(cfg, res);
      if (!report_prefix.empty()) save_reports(res, report_prefix, report_text);
      if (!dump_prefix.empty()) dump_weight_maps(cfg, res, dump_prefix);
    } else if (theory->parsed()) {
      print_theory(theory_snr, theory_nc, theory_ns);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
