#ifndef MUDR_CONSTANTS_HPP
#define MUDR_CONSTANTS_HPP

#include <cmath>
#include <numbers>

namespace mudr {

/// Speed of light in vacuum (m/s).
inline constexpr double speed_of_light = 299'792'458.0;

/// Boltzmann constant, exact SI value (J/K).
inline constexpr double boltzmann = 1.380649e-23;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// log2(1 + x), accurate for small x.
inline double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

} // namespace mudr

#endif // MUDR_CONSTANTS_HPP
