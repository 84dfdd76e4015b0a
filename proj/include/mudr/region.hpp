#ifndef MUDR_REGION_HPP
#define MUDR_REGION_HPP

#include <span>
#include <string_view>
#include <vector>

#include "mudr/bounds.hpp"
#include "mudr/rates.hpp"
#include "mudr/waterfill.hpp"

namespace mudr {

/// All curves of the joint rate plot, plus per-alpha water-filling diagnostics.
struct RegionResult {
    std::vector<RateCurve> curves; // outer, sic, interpolated, waterfill, hull
    WaterfillSweep waterfill;

    const RateCurve* find(std::string_view label) const {
        for (const auto& c : curves) {
            if (c.label == label) {
                return &c;
            }
        }
        return nullptr;
    }
};

inline RegionResult compute_region(const LinkBudget& lb, std::span<const double> alpha_grid) {
    detail::require_single_target(lb, "rate_region");
    const double r_est_max = est_outer_rate(lb);
    const double r_com_max = comms_outer_rate(lb);
    const double r_sic = sic_comms_rate(lb);

    RegionResult out;
    out.curves.push_back({"outer", {{0.0, r_com_max}, {r_est_max, r_com_max}, {r_est_max, 0.0}}});
    out.curves.push_back({"sic", {{0.0, r_sic}, {r_est_max, r_sic}}});
    out.curves.push_back(interpolated_inner(lb));

    out.waterfill = waterfill_sweep(lb, alpha_grid);
    out.curves.push_back(out.waterfill.curve);

    std::vector<RatePoint> cloud = out.curves[2].points;
    cloud.insert(cloud.end(), out.waterfill.curve.points.begin(), out.waterfill.curve.points.end());
    out.curves.push_back(upper_convex_hull(cloud));
    return out;
}

/// Curves of the joint rate plot: outer, sic, interpolated, waterfill, hull.
inline std::vector<RateCurve> rate_region(const LinkBudget& lb, std::span<const double> alpha_grid) {
    return compute_region(lb, alpha_grid).curves;
}

} // namespace mudr

#endif // MUDR_REGION_HPP
