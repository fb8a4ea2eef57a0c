#pragma once

#include <cmath>

namespace polsim {

inline constexpr double kPi = 3.14159265358979323846;

/// Convert a linear variance ratio to decibels. Negative values mean
/// squeezing (below the shot-noise reference).
inline double to_db(double linear) { return 10.0 * std::log10(linear); }

inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace polsim
