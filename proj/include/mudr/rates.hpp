#ifndef MUDR_RATES_HPP
#define MUDR_RATES_HPP

#include <string>
#include <vector>

namespace mudr {

/// Joint operating point: estimation rate and communications rate, bits/s.
struct RatePoint {
    double r_est = 0.0;
    double r_com = 0.0;

    friend bool operator==(const RatePoint&, const RatePoint&) = default;
};

/// Labeled polyline in the (R_est, R_com) plane.
struct RateCurve {
    std::string label;
    std::vector<RatePoint> points;
};

} // namespace mudr

#endif // MUDR_RATES_HPP
