#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fdem/diagnostics.hpp"
#include "fdem/forward.hpp"
#include "fdem/geometry.hpp"

namespace fdem {

// Shortest decimal text that reads back to the same double ('.' decimal point,
// locale independent).
[[nodiscard]] std::string format_number(double value);
[[nodiscard]] double parse_number(std::string_view text);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> row);
    [[nodiscard]] std::size_t column(std::string_view name) const;
    [[nodiscard]] std::string str() const;
};

// Comma separated, first line is the header. Fields may be double-quoted.
[[nodiscard]] CsvTable parse_csv(std::string_view text);

inline const std::vector<std::string> kResponseColumns = {
    "orientation", "spacing_m", "frequency_Hz", "height_m", "Q_raw", "P_raw", "Q_mS_per_m", "P_device_unit"};

[[nodiscard]] CsvTable response_table(const ResponseSet& set, DeviceScale scale);
[[nodiscard]] std::string response_csv(const ResponseSet& set, DeviceScale scale);
// Rebuilds geometry and values from the Q_raw/P_raw columns. Rows must cover
// the full grid spanned by the axis values, in any order.
[[nodiscard]] ResponseSet read_response_csv(std::string_view text);

inline const std::vector<std::string> kSensitivityColumns = {
    "depth_m", "Re(S_sigma)", "Im(S_sigma)", "Re(S_mu)", "Im(S_mu)", "cumulative"};

[[nodiscard]] CsvTable sensitivity_table(const SensitivityProfile& profile, const CumulativeCurve& curve);
[[nodiscard]] std::string sensitivity_csv(const SensitivityProfile& profile, const CumulativeCurve& curve);

[[nodiscard]] std::vector<double> log_space(double lo, double hi, std::size_t count);
[[nodiscard]] CsvTable g_beta_table(const std::vector<double>& betas);

}  // namespace fdem
