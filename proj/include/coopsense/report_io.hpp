/// Serialization of station reports for transport to the fusion center.
/// Binary form is little-endian and round-trips bit-exactly; text form is a
/// line-oriented format that round-trips through shortest-exact decimals.
#pragma once

#include <iosfwd>

#include "coopsense/single_bs.hpp"

namespace coopsense {

void write_report_binary(std::ostream& os, const BsReport& report);
BsReport read_report_binary(std::istream& is);  // throws IoError

void write_report_text(std::ostream& os, const BsReport& report);
BsReport read_report_text(std::istream& is);  // throws IoError

}  // namespace coopsense
