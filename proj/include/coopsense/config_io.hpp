/// Flat key = value configuration files. '#' starts a comment, blank lines
/// are skipped, arrays are comma separated. Unknown keys and malformed
/// values raise ValidationError. The full key list lives in README.md.
#pragma once

#include <iosfwd>
#include <string>

#include "coopsense/harness.hpp"

namespace coopsense {

/// Applies the file's keys on top of the defaults already in `cfg`.
void apply_config_stream(std::istream& is, HarnessConfig& cfg);

/// Loads `path` on top of defaults; throws IoError if unreadable.
HarnessConfig load_config_file(const std::string& path);

}  // namespace coopsense
