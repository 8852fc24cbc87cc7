#pragma once

#include <string>
#include <vector>

#include "idgsem/reference.hpp"

namespace idgsem {

/// Shortest round-trip decimal formatting (locale-independent, 17
/// significant digits), shared by every CSV writer so identical runs yield
/// byte-identical files.
std::string format_g17(double v);

void save_profile_csv(const std::string& path, const FvProfile& profile);
FvProfile load_profile_csv(const std::string& path);

}  // namespace idgsem
