#include "coopsense/fusion_location.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "internal.hpp"

namespace coopsense {

namespace detail {

CVec conjugate_lag_means(const CVec& x) {
  const Eigen::Index len = x.size();
  if (len < 2) throw ValidationError("need at least two feature entries");
  CVec out(len - 1);
  for (Eigen::Index k = 1; k < len; ++k) {
    cplx s(0.0, 0.0);
    for (Eigen::Index a = 0; a + k < len; ++a) s += x(a) * std::conj(x(a + k));
    out(k - 1) = s / static_cast<double>(len - k);
  }
  return out;
}

}  // namespace detail

namespace {

void check_pair_inputs(const Vec2& q, const Vec2& s, double rq, double rs) {
  if (!std::isfinite(rq) || !std::isfinite(rs) || rq <= 0.0 || rs <= 0.0)
    throw ValidationError("ranges must be positive and finite");
  if ((q - s).squaredNorm() <= 1e-18)
    throw ValidationError("stations coincide");
}

/// Validated station/lag bundle for the weight evaluations.
struct WeightInputs {
  std::span<const CVec> lags;
  std::span<const Vec2> bs;
  double phase_per_meter;  // lag-1 rotation rate
};

WeightInputs check_weight_inputs(std::span<const CVec> lags,
                                 std::span<const Vec2> bs,
                                 const OfdmConfig& cfg) {
  cfg.validate();
  if (lags.size() != bs.size())
    throw ValidationError("one lag vector per station required");
  if (lags.size() < 2) throw ValidationError("need at least two stations");
  for (const auto& l : lags)
    if (l.size() != lags.front().size() || l.size() < 1)
      throw ValidationError("lag vectors must share a nonzero length");
  return {lags, bs,
          -kTwoPi * cfg.subcarrier_spacing_hz() * 2.0 / kLightSpeed};
}

/// Rotate every station's lags by its candidate range phase and accumulate
/// the lag sum of across-station products of the real parts.
double weight_unchecked(const Vec2& candidate, const WeightInputs& in) {
  const size_t w_count = in.bs.size();
  // Per-station geometric rotation recurrence: one polar() per station.
  constexpr size_t kMaxStations = 16;
  cplx rot[kMaxStations];
  cplx cur[kMaxStations];
  const size_t used = std::min(w_count, kMaxStations);
  if (w_count > kMaxStations) throw ValidationError("too many stations");
  for (size_t w = 0; w < used; ++w) {
    const double range = (candidate - in.bs[w]).norm();
    rot[w] = std::polar(1.0, in.phase_per_meter * range);
    cur[w] = rot[w];
  }
  const Eigen::Index lag_count = in.lags.front().size();
  double total = 0.0;
  for (Eigen::Index k = 0; k < lag_count; ++k) {
    double prod = 1.0;
    for (size_t w = 0; w < used; ++w) {
      prod *= (in.lags[w](k) * cur[w]).real();
      cur[w] *= rot[w];
    }
    total += prod;
  }
  return total;
}

}  // namespace

void Lattice::validate() const {
  if (!std::isfinite(center.x()) || !std::isfinite(center.y()))
    throw ValidationError("lattice center must be finite");
  if (!std::isfinite(spacing) || spacing <= 0.0)
    throw ValidationError("lattice spacing must be positive");
  if (!std::isfinite(half_extent) || half_extent < 0.0)
    throw ValidationError("lattice half extent must be non-negative");
}

std::optional<std::array<Vec2, 2>> rough_location_pair(const Vec2& bs_q,
                                                       const Vec2& bs_s,
                                                       double range_q,
                                                       double range_s) {
  check_pair_inputs(bs_q, bs_s, range_q, range_s);
  const Vec2 delta = bs_s - bs_q;
  const double d2 = delta.squaredNorm();
  const double rq2 = range_q * range_q;
  const double rs2 = range_s * range_s;

  const double offset = (rq2 - rs2) / (2.0 * d2);
  double disc =
      2.0 * (rq2 + rs2) / d2 - (rq2 - rs2) * (rq2 - rs2) / (d2 * d2) - 1.0;
  if (disc < 0.0) {
    if (disc < -1e-12) return std::nullopt;
    disc = 0.0;  // numerically tangent
  }
  const double root = std::sqrt(disc);
  const Vec2 mid = 0.5 * (bs_q + bs_s) + offset * delta;
  const Vec2 perp{delta.y(), -delta.x()};
  return std::array<Vec2, 2>{mid + 0.5 * root * perp, mid - 0.5 * root * perp};
}

Vec2 closest_approach_midpoint(const Vec2& bs_q, const Vec2& bs_s,
                               double range_q, double range_s) {
  check_pair_inputs(bs_q, bs_s, range_q, range_s);
  const Vec2 u = (bs_s - bs_q).normalized();
  const Vec2 on_q[2] = {bs_q + range_q * u, bs_q - range_q * u};
  const Vec2 on_s[2] = {bs_s + range_s * u, bs_s - range_s * u};
  double best = std::numeric_limits<double>::infinity();
  Vec2 mid{0.0, 0.0};
  for (const auto& a : on_q)
    for (const auto& b : on_s) {
      const double d = (a - b).squaredNorm();
      if (d < best) {
        best = d;
        mid = 0.5 * (a + b);
      }
    }
  return mid;
}

std::optional<Vec2> rough_location(std::span<const Vec2> bs,
                                   std::span<const double> ranges,
                                   const SensingRegion& region) {
  if (bs.size() != ranges.size())
    throw ValidationError("one range per station required");
  if (bs.size() < 2) throw ValidationError("need at least two stations");
  for (double r : ranges)
    if (!std::isfinite(r) || r <= 0.0)
      throw ValidationError("ranges must be positive and finite");

  if (bs.size() == 2) {
    const auto pair = rough_location_pair(bs[0], bs[1], ranges[0], ranges[1]);
    if (!pair)
      return closest_approach_midpoint(bs[0], bs[1], ranges[0], ranges[1]);
    const bool in0 = region.contains((*pair)[0]);
    const bool in1 = region.contains((*pair)[1]);
    if (in0 != in1) return in0 ? (*pair)[0] : (*pair)[1];
    // Both or neither inside: prefer the point nearest the region center.
    const double d0 = ((*pair)[0] - region.center).squaredNorm();
    const double d1 = ((*pair)[1] - region.center).squaredNorm();
    return d1 < d0 ? (*pair)[1] : (*pair)[0];
  }

  // Differencing the squared range equations against station 0 linearizes
  // the fix; solve the stack by least squares.
  const int rows = static_cast<int>(bs.size()) - 1;
  Eigen::MatrixXd m(rows, 2);
  Eigen::VectorXd rhs(rows);
  for (int w = 1; w <= rows; ++w) {
    m.row(w - 1) = 2.0 * (bs[w] - bs[0]).transpose();
    rhs(w - 1) = bs[w].squaredNorm() - bs[0].squaredNorm() -
                 (ranges[w] * ranges[w] - ranges[0] * ranges[0]);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv(0) <= 0.0 || sv(1) <= 1e-6 * sv(0)) return std::nullopt;  // collinear
  const Eigen::Vector2d p = svd.solve(rhs);
  return Vec2{p(0), p(1)};
}

CVec build_range_lags(const CVec& range_features) {
  return detail::conjugate_lag_means(range_features);
}

double location_weight(const Vec2& candidate, std::span<const CVec> range_lags,
                       std::span<const Vec2> bs, const OfdmConfig& cfg) {
  const auto in = check_weight_inputs(range_lags, bs, cfg);
  return weight_unchecked(candidate, in);
}

Eigen::MatrixXd location_weight_grid(const Lattice& lattice,
                                     std::span<const CVec> range_lags,
                                     std::span<const Vec2> bs,
                                     const OfdmConfig& cfg) {
  lattice.validate();
  const auto in = check_weight_inputs(range_lags, bs, cfg);
  const int n = lattice.per_axis();
  Eigen::MatrixXd grid(n, n);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix)
      grid(iy, ix) = weight_unchecked(lattice.node(ix, iy), in);
  return grid;
}

Vec2 estimate_location(std::span<const CVec> range_lags,
                       std::span<const Vec2> bs, const OfdmConfig& cfg,
                       const Lattice& lattice) {
  lattice.validate();
  const auto in = check_weight_inputs(range_lags, bs, cfg);
  return detail::lattice_argmax(
      lattice, [&](const Vec2& node) { return weight_unchecked(node, in); });
}

Vec2 estimate_location(std::span<const BsReport> reports,
                       std::span<const Vec2> bs, const OfdmConfig& cfg,
                       const Lattice& lattice) {
  std::vector<CVec> lags;
  lags.reserve(reports.size());
  for (const auto& r : reports) lags.push_back(build_range_lags(r.range_features));
  return estimate_location(std::span<const CVec>(lags), bs, cfg, lattice);
}

}  // namespace coopsense
