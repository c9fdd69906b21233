#pragma once

#include <string>
#include <vector>

namespace fostab::cli {

// One polyline per series against a shared x axis; non-finite samples are skipped.
std::string polyline_svg(const std::vector<double>& x, const std::vector<std::vector<double>>& series,
                         const std::vector<std::string>& labels);

void write_svg(const std::string& path, const std::string& svg);

}  // namespace fostab::cli
