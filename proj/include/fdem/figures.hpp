#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fdem {

// Writes the data behind the Section-5 survey-design figures and tables of
// the reference study as CSV files into dir (created if needed). Always uses
// the seed device catalog and the built-in models M1/M2, so the output only
// depends on the library version. Returns the file names written, in order.
std::vector<std::string> write_figures(const std::filesystem::path& dir);

}  // namespace fdem
