#include "coopsense/fusion_velocity.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "internal.hpp"

namespace coopsense {

namespace {

constexpr double kParallelSine = 1e-3;

struct WeightInputs {
  std::span<const CVec> lags;
  std::span<const Vec2> bs;
  Vec2 origin;            // estimated target location
  double phase_per_mps;   // lag-1 rotation rate
};

WeightInputs check_weight_inputs(std::span<const CVec> lags,
                                 const Vec2& est_location,
                                 std::span<const Vec2> bs,
                                 const OfdmConfig& cfg) {
  cfg.validate();
  if (lags.size() != bs.size())
    throw ValidationError("one lag vector per station required");
  if (lags.size() < 2) throw ValidationError("need at least two stations");
  for (const auto& l : lags)
    if (l.size() != lags.front().size() || l.size() < 1)
      throw ValidationError("lag vectors must share a nonzero length");
  if (!std::isfinite(est_location.x()) || !std::isfinite(est_location.y()))
    throw ValidationError("estimated location must be finite");
  for (const auto& b : bs)
    if ((b - est_location).squaredNorm() <= 1e-18)
      throw ValidationError("estimated location coincides with a station");
  return {lags, bs, est_location,
          kTwoPi * cfg.carrier_hz * 2.0 * cfg.symbol_duration_s / kLightSpeed};
}

double weight_unchecked(const Vec2& candidate, const WeightInputs& in) {
  constexpr size_t kMaxStations = 16;
  if (in.bs.size() > kMaxStations) throw ValidationError("too many stations");
  cplx rot[kMaxStations];
  cplx cur[kMaxStations];
  const size_t w_count = in.bs.size();
  for (size_t w = 0; w < w_count; ++w) {
    const Vec2 u = (in.bs[w] - in.origin).normalized();
    const double radial = candidate.dot(u);
    rot[w] = std::polar(1.0, in.phase_per_mps * radial);
    cur[w] = rot[w];
  }
  const Eigen::Index lag_count = in.lags.front().size();
  double total = 0.0;
  for (Eigen::Index k = 0; k < lag_count; ++k) {
    double prod = 1.0;
    for (size_t w = 0; w < w_count; ++w) {
      prod *= (in.lags[w](k) * cur[w]).real();
      cur[w] *= rot[w];
    }
    total += prod;
  }
  return total;
}

}  // namespace

double bearing(const Vec2& from, const Vec2& to) {
  const Vec2 d = to - from;
  if (d.squaredNorm() <= 1e-18) throw ValidationError("coincident points");
  return std::atan2(d.y(), d.x());
}

double radial_velocity_toward(const Vec2& velocity, const Vec2& position,
                              const Vec2& bs) {
  const Vec2 d = bs - position;
  const double r = d.norm();
  if (r <= 1e-9) throw ValidationError("position coincides with a station");
  return velocity.dot(d) / r;
}

std::optional<Vec2> rough_velocity_pair(double theta_q, double theta_s,
                                        double radial_q, double radial_s) {
  if (!std::isfinite(theta_q) || !std::isfinite(theta_s) ||
      !std::isfinite(radial_q) || !std::isfinite(radial_s))
    throw ValidationError("velocity fix inputs must be finite");
  const double cq = std::cos(theta_q), sq = std::sin(theta_q);
  const double cs = std::cos(theta_s), ss = std::sin(theta_s);
  const double det = cq * ss - cs * sq;  // sin(theta_s - theta_q)
  if (std::abs(det) < kParallelSine) return std::nullopt;
  return Vec2{(radial_q * ss - radial_s * sq) / det,
              (radial_s * cq - radial_q * cs) / det};
}

std::optional<Vec2> rough_velocity(std::span<const double> radial_speeds,
                                   std::span<const double> bearings) {
  if (radial_speeds.size() != bearings.size())
    throw ValidationError("one bearing per radial speed required");
  if (radial_speeds.size() < 2) throw ValidationError("need at least two stations");
  if (radial_speeds.size() == 2)
    return rough_velocity_pair(bearings[0], bearings[1], radial_speeds[0],
                               radial_speeds[1]);

  const int rows = static_cast<int>(radial_speeds.size());
  Eigen::MatrixXd m(rows, 2);
  Eigen::VectorXd rhs(rows);
  for (int w = 0; w < rows; ++w) {
    m(w, 0) = std::cos(bearings[w]);
    m(w, 1) = std::sin(bearings[w]);
    rhs(w) = radial_speeds[w];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(0) <= 0.0 || sv(1) <= kParallelSine * sv(0)) return std::nullopt;
  const Eigen::Vector2d v = svd.solve(rhs);
  return Vec2{v(0), v(1)};
}

CVec build_velocity_lags(const CVec& velocity_features) {
  return detail::conjugate_lag_means(velocity_features);
}

double velocity_weight(const Vec2& candidate, std::span<const CVec> velocity_lags,
                       const Vec2& est_location, std::span<const Vec2> bs,
                       const OfdmConfig& cfg) {
  const auto in = check_weight_inputs(velocity_lags, est_location, bs, cfg);
  return weight_unchecked(candidate, in);
}

Eigen::MatrixXd velocity_weight_grid(const Lattice& lattice,
                                     std::span<const CVec> velocity_lags,
                                     const Vec2& est_location,
                                     std::span<const Vec2> bs,
                                     const OfdmConfig& cfg) {
  lattice.validate();
  const auto in = check_weight_inputs(velocity_lags, est_location, bs, cfg);
  const int n = lattice.per_axis();
  Eigen::MatrixXd grid(n, n);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      grid(iy, ix) = weight_unchecked(lattice.node(ix, iy), in);
  return grid;
}

Vec2 estimate_velocity(std::span<const CVec> velocity_lags,
                       const Vec2& est_location, std::span<const Vec2> bs,
                       const OfdmConfig& cfg, const Lattice& lattice) {
  lattice.validate();
  const auto in = check_weight_inputs(velocity_lags, est_location, bs, cfg);
  return detail::lattice_argmax(
      lattice, [&](const Vec2& node) { return weight_unchecked(node, in); });
}

Vec2 estimate_velocity(std::span<const BsReport> reports,
                       const Vec2& est_location, std::span<const Vec2> bs,
                       const OfdmConfig& cfg, const Lattice& lattice) {
  std::vector<CVec> lags;
  lags.reserve(reports.size());
  for (const auto& r : reports)
    lags.push_back(build_velocity_lags(r.velocity_features));
  return estimate_velocity(std::span<const CVec>(lags), est_location, bs, cfg,
                           lattice);
}

}  // namespace coopsense
