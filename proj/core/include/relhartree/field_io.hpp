#pragma once

#include <string>

#include "relhartree/field.hpp"

namespace relhartree {

/// Binary field snapshot: magic, n, extent, space tag, raw complex doubles
/// (little-endian). Round-trips exactly.
void save_field(const std::string& path, const Field& f);
Field load_field(const std::string& path);

} // namespace relhartree
