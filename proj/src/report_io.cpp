#include "coopsense/report_io.hpp"

#include <bit>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

namespace coopsense {

namespace {

static_assert(std::endian::native == std::endian::little,
              "serialized reports are little-endian");

constexpr char kMagic[4] = {'B', 'S', 'R', 'P'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint64_t kMaxFeatureLen = 1u << 24;

template <class T>
void put(std::ostream& os, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  os.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <class T>
T get(std::istream& is) {
  static_assert(std::is_trivially_copyable_v<T>);
  T value;
  is.read(reinterpret_cast<char*>(&value), sizeof value);
  if (!is || is.gcount() != sizeof value) throw IoError("truncated report stream");
  return value;
}

void put_vector(std::ostream& os, const CVec& v) {
  put<std::uint64_t>(os, static_cast<std::uint64_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    put<double>(os, v(i).real());
    put<double>(os, v(i).imag());
  }
}

CVec get_vector(std::istream& is) {
  const auto len = get<std::uint64_t>(is);
  if (len > kMaxFeatureLen) throw IoError("implausible feature length");
  CVec v(static_cast<Eigen::Index>(len));
  for (std::uint64_t i = 0; i < len; ++i) {
    const double re = get<double>(is);
    const double im = get<double>(is);
    v(static_cast<Eigen::Index>(i)) = cplx{re, im};
  }
  return v;
}

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void put_line_vector(std::ostream& os, const char* name, const CVec& v) {
  os << name << ' ' << v.size() << '\n';
  for (Eigen::Index i = 0; i < v.size(); ++i)
    os << fmt_double(v(i).real()) << ' ' << fmt_double(v(i).imag()) << '\n';
}

void expect_token(std::istream& is, const char* want) {
  std::string tok;
  if (!(is >> tok) || tok != want) throw IoError("malformed report text");
}

double read_double(std::istream& is) {
  double x;
  if (!(is >> x)) throw IoError("malformed report text");
  return x;
}

CVec read_line_vector(std::istream& is, const char* name) {
  expect_token(is, name);
  long long len = -1;
  if (!(is >> len) || len < 0 || len > static_cast<long long>(kMaxFeatureLen))
    throw IoError("malformed report text");
  CVec v(static_cast<Eigen::Index>(len));
  for (long long i = 0; i < len; ++i) {
    const double re = read_double(is);
    const double im = read_double(is);
    v(static_cast<Eigen::Index>(i)) = cplx{re, im};
  }
  return v;
}

}  // namespace

void write_report_binary(std::ostream& os, const BsReport& report) {
  os.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(os, kVersion);
  put<std::int32_t>(os, static_cast<std::int32_t>(report.bs_index));
  put<double>(os, report.range_m);
  put<double>(os, report.radial_velocity_mps);
  put_vector(os, report.range_features);
  put_vector(os, report.velocity_features);
  if (!os) throw IoError("failed to write report");
}

BsReport read_report_binary(std::istream& is) {
  char magic[4];
  is.read(magic, sizeof magic);
  if (!is || is.gcount() != sizeof magic || std::memcmp(magic, kMagic, 4) != 0)
    throw IoError("not a station report stream");
  const auto version = get<std::uint32_t>(is);
  if (version != kVersion) throw IoError("unsupported report version");

  BsReport report;
  report.bs_index = static_cast<int>(get<std::int32_t>(is));
  report.range_m = get<double>(is);
  report.radial_velocity_mps = get<double>(is);
  report.range_features = get_vector(is);
  report.velocity_features = get_vector(is);
  return report;
}

void write_report_text(std::ostream& os, const BsReport& report) {
  os << "bs_report v1\n";
  os << "bs_index " << report.bs_index << '\n';
  os << "range_m " << fmt_double(report.range_m) << '\n';
  os << "radial_velocity_mps " << fmt_double(report.radial_velocity_mps) << '\n';
  put_line_vector(os, "range_features", report.range_features);
  put_line_vector(os, "velocity_features", report.velocity_features);
  os << "end\n";
  if (!os) throw IoError("failed to write report");
}

BsReport read_report_text(std::istream& is) {
  expect_token(is, "bs_report");
  expect_token(is, "v1");
  BsReport report;
  expect_token(is, "bs_index");
  if (!(is >> report.bs_index)) throw IoError("malformed report text");
  expect_token(is, "range_m");
  report.range_m = read_double(is);
  expect_token(is, "radial_velocity_mps");
  report.radial_velocity_mps = read_double(is);
  report.range_features = read_line_vector(is, "range_features");
  report.velocity_features = read_line_vector(is, "velocity_features");
  expect_token(is, "end");
  return report;
}

}  // namespace coopsense
