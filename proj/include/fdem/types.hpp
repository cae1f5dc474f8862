#pragma once

#include <complex>
#include <numbers>
#include <string>
#include <string_view>

namespace fdem {

using cplx = std::complex<double>;

inline constexpr double kMu0 = 4.0e-7 * std::numbers::pi;
inline constexpr double kEpsilon0 = 8.8541878128e-12;

enum class Orientation { HCP, VCP, PERP };

[[nodiscard]] std::string_view to_string(Orientation o) noexcept;
[[nodiscard]] Orientation parse_orientation(std::string_view text);

[[nodiscard]] inline constexpr double angular_frequency(double hz) noexcept
{
    return 2.0 * std::numbers::pi * hz;
}

}  // namespace fdem
