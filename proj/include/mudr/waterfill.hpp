#ifndef MUDR_WATERFILL_HPP
#define MUDR_WATERFILL_HPP

/**
 * @file waterfill.hpp
 * @brief Two-subband water-filling inner bound.
 *
 * The band is split into a communications-only subband of width alpha B and
 * a mixed radar/communications subband of width (1 - alpha) B. Comms power
 * is water-filled across the two; the mixed subband runs at the SIC vertex
 * with the radar waveform integration kappa held fixed.
 *
 * alpha = 0 is handled as the limit point (the full-band SIC vertex).
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mudr/bounds.hpp"
#include "mudr/error.hpp"
#include "mudr/rates.hpp"
#include "mudr/scenario.hpp"

namespace mudr {

/// Effective gains (1/W) of the two subbands.
struct ChannelGains {
    double mu_com = 0.0;
    double mu_mix = 0.0;
};

struct SubbandSplit {
    double alpha = 0.0;
    double b_com_hz = 0.0;
    double b_mix_hz = 0.0;
    double mu_com = 0.0;
    double mu_mix = 0.0;
    double nu = 0.0; ///< water level (W)
    double beta = 0.0;
    double p_com_com_w = 0.0;
    double p_com_mix_w = 0.0;
    bool dual_use = false;     ///< both subbands carry comms power
    bool beta_clamped = false; ///< closed-form beta left [0, 1] and was clamped
};

struct WaterfillPoint {
    SubbandSplit split;
    double r_com_com = 0.0;
    double r_com_mix = 0.0;
    double r_est = 0.0;
    double kappa = 0.0;
    bool self_consistent = true; ///< mixed-band pulse still fits inside one PRI

    double r_com() const noexcept { return r_com_com + r_com_mix; }
    RatePoint rate() const noexcept { return {r_est, r_com()}; }
};

namespace detail {

inline void require_open_alpha(double alpha, const char* op) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw PreconditionError(std::string(op) + ": alpha must lie in (0, 1)");
    }
}

/// Interference plus noise in the mixed subband of width (1 - alpha) B.
inline double mixed_band_int_plus_noise(const LinkBudget& lb, double alpha) {
    return int_plus_noise_variance(lb, (1.0 - alpha) * lb.bandwidth_hz);
}

/// Estimation rate of the mixed subband with integration kappa held fixed.
inline double mixed_band_est_rate(const LinkBudget& lb, double alpha, double kappa) {
    const double b_mix = (1.0 - alpha) * lb.bandwidth_hz;
    const double snr_radar = lb.sigma_tau_proc_sq[0] * lb.gamma_sq * b_mix * kappa * lb.a_sq[0] *
                             lb.radar_power_w / (boltzmann * lb.temperature_k);
    return b_mix * (lb.duty_factor / kappa) * log2_1p(snr_radar);
}

} // namespace detail

/// Subband gains mu_com = b^2 / (k_B T alpha B) and mu_mix = b^2 / sigma_int+n(B_mix).
inline ChannelGains subband_channels(const LinkBudget& lb, double alpha) {
    detail::require_single_target(lb, "subband_channels");
    detail::require_open_alpha(alpha, "subband_channels");
    return {lb.b_sq / noise_power(lb.temperature_k, alpha * lb.bandwidth_hz),
            lb.b_sq / detail::mixed_band_int_plus_noise(lb, alpha)};
}

/// Dual-use threshold: both subbands are used iff P_com >= alpha / ((1-alpha) mu_mix) - 1 / mu_com.
inline double dual_use_threshold(double alpha, const ChannelGains& g) {
    return alpha / ((1.0 - alpha) * g.mu_mix) - 1.0 / g.mu_com;
}

/**
 * Water-filled comms power split for a given bandwidth fraction.
 *
 * Below the dual-use threshold all power stays in the comms-only subband.
 * Above it the closed-form beta is used; if rounding (or a comms-only band
 * worse than the mixed one) pushes beta outside [0, 1] it is clamped and
 * beta_clamped is set.
 */
inline SubbandSplit power_split(const LinkBudget& lb, double alpha) {
    const ChannelGains g = subband_channels(lb, alpha);
    const double p = lb.comms_power_w;

    SubbandSplit s;
    s.alpha = alpha;
    s.b_com_hz = alpha * lb.bandwidth_hz;
    s.b_mix_hz = lb.bandwidth_hz - s.b_com_hz;
    s.mu_com = g.mu_com;
    s.mu_mix = g.mu_mix;

    if (p >= dual_use_threshold(alpha, g)) {
        s.dual_use = true;
        s.nu = p + 1.0 / g.mu_com + 1.0 / g.mu_mix;
        double beta = (p > 0.0) ? alpha + ((alpha - 1.0) / g.mu_com + alpha / g.mu_mix) / p : 1.0;
        if (beta < 0.0 || beta > 1.0) {
            s.beta_clamped = true;
            beta = std::clamp(beta, 0.0, 1.0);
        }
        s.beta = beta;
    } else {
        s.nu = (p + 1.0 / g.mu_com) / alpha;
        s.beta = 1.0;
    }
    if (s.beta == 1.0) {
        s.p_com_com_w = p;
        s.p_com_mix_w = 0.0;
    } else {
        s.p_com_com_w = s.beta * p;
        s.p_com_mix_w = p - s.p_com_com_w;
    }
    return s;
}

/// Rates of one water-filling operating point; alpha in [0, 1), kappa > 0.
inline WaterfillPoint waterfill_point(const LinkBudget& lb, double alpha, double kappa) {
    detail::require_single_target(lb, "waterfill_point");
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw PreconditionError("waterfill_point: alpha must lie in [0, 1)");
    }
    if (!(kappa > 0.0)) {
        throw PreconditionError("waterfill_point: kappa must be > 0");
    }

    WaterfillPoint w;
    w.kappa = kappa;
    if (alpha == 0.0) {
        // Limit alpha -> 0+: the whole band is mixed use.
        SubbandSplit& s = w.split;
        s.b_mix_hz = lb.bandwidth_hz;
        s.mu_com = std::numeric_limits<double>::infinity();
        s.mu_mix = lb.b_sq / detail::mixed_band_int_plus_noise(lb, 0.0);
        s.nu = lb.comms_power_w + 1.0 / s.mu_mix;
        s.dual_use = true;
        s.p_com_mix_w = lb.comms_power_w;
        w.r_com_mix = lb.bandwidth_hz * log2_1p(s.p_com_mix_w * s.mu_mix);
    } else {
        w.split = power_split(lb, alpha);
        const SubbandSplit& s = w.split;
        w.r_com_com = s.b_com_hz * log2_1p(s.p_com_com_w * s.mu_com);
        w.r_com_mix = s.b_mix_hz * log2_1p(s.p_com_mix_w * s.mu_mix);
    }
    w.r_est = detail::mixed_band_est_rate(lb, alpha, kappa);

    const double t_mix = kappa / ((1.0 - alpha) * lb.bandwidth_hz);
    w.self_consistent = t_mix <= lb.pri_s();
    return w;
}

/// waterfill_point with kappa held at the scenario's time-bandwidth product.
inline WaterfillPoint waterfill_point(const LinkBudget& lb, double alpha) {
    return waterfill_point(lb, alpha, lb.time_bandwidth);
}

/// Every evaluated point plus the published curve (self-consistent points only).
struct WaterfillSweep {
    std::vector<double> alpha;
    std::vector<WaterfillPoint> points;
    RateCurve curve{"waterfill", {}};
};

inline void validate_alpha_grid(std::span<const double> alpha_grid) {
    for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
        if (!(alpha_grid[i] >= 0.0 && alpha_grid[i] < 1.0)) {
            throw PreconditionError("alpha grid values must lie in [0, 1)");
        }
        if (i > 0 && alpha_grid[i] < alpha_grid[i - 1]) {
            throw PreconditionError("alpha grid must be sorted ascending");
        }
    }
}

inline WaterfillSweep waterfill_sweep(const LinkBudget& lb, std::span<const double> alpha_grid) {
    validate_alpha_grid(alpha_grid);
    WaterfillSweep sweep;
    sweep.alpha.assign(alpha_grid.begin(), alpha_grid.end());
    sweep.points.reserve(alpha_grid.size());
    for (double alpha : alpha_grid) {
        sweep.points.push_back(waterfill_point(lb, alpha));
        if (sweep.points.back().self_consistent) {
            sweep.curve.points.push_back(sweep.points.back().rate());
        }
    }
    return sweep;
}

inline RateCurve waterfill_curve(const LinkBudget& lb, std::span<const double> alpha_grid) {
    return waterfill_sweep(lb, alpha_grid).curve;
}

/// n points uniform on [1e-4, 1 - 1e-4]; a single point sits at 0.5.
inline std::vector<double> default_alpha_grid(std::size_t n = 400) {
    constexpr double lo = 1e-4;
    constexpr double hi = 1.0 - 1e-4;
    if (n == 0) {
        return {};
    }
    if (n == 1) {
        return {0.5};
    }
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return grid;
}

/**
 * Upper-left Pareto convex hull of a point cloud.
 *
 * Monotone chain over R_est keeping right turns only (collinear points are
 * dropped), then trimmed to start at the maximal R_com. If that vertex does
 * not sit on the R_com axis the curve is anchored there at the same height.
 */
inline RateCurve upper_convex_hull(std::span<const RatePoint> points, std::string label = "hull") {
    if (points.size() < 2) {
        throw PreconditionError("upper_convex_hull needs at least 2 points");
    }
    std::vector<RatePoint> sorted(points.begin(), points.end());
    for (const auto& p : sorted) {
        if (!std::isfinite(p.r_est) || !std::isfinite(p.r_com)) {
            throw PreconditionError("upper_convex_hull: non-finite coordinate");
        }
    }
    std::sort(sorted.begin(), sorted.end(), [](const RatePoint& a, const RatePoint& b) {
        return a.r_est < b.r_est || (a.r_est == b.r_est && a.r_com > b.r_com);
    });

    std::vector<RatePoint> hull;
    for (const auto& p : sorted) {
        if (!hull.empty() && hull.back().r_est == p.r_est) {
            continue; // same abscissa, lower R_com
        }
        while (hull.size() >= 2) {
            const RatePoint& o = hull[hull.size() - 2];
            const RatePoint& a = hull.back();
            const double cross =
                (a.r_est - o.r_est) * (p.r_com - o.r_com) - (a.r_com - o.r_com) * (p.r_est - o.r_est);
            if (cross < 0.0) {
                break;
            }
            hull.pop_back();
        }
        hull.push_back(p);
    }

    const auto top = std::max_element(hull.begin(), hull.end(), [](const RatePoint& a, const RatePoint& b) {
        return a.r_com < b.r_com;
    });
    hull.erase(hull.begin(), top);
    if (hull.front().r_est > 0.0) {
        hull.insert(hull.begin(), RatePoint{0.0, hull.front().r_com});
    }
    return {std::move(label), std::move(hull)};
}

/// Linear interpolation of a curve sorted by R_est; NaN outside its span.
inline double interpolate_r_com(const RateCurve& curve, double r_est) {
    const auto& pts = curve.points;
    if (pts.empty() || r_est < pts.front().r_est || r_est > pts.back().r_est) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (pts[i].r_est == r_est) {
            return pts[i].r_com;
        }
        if (i + 1 < pts.size() && r_est < pts[i + 1].r_est) {
            const double t = (r_est - pts[i].r_est) / (pts[i + 1].r_est - pts[i].r_est);
            return pts[i].r_com + t * (pts[i + 1].r_com - pts[i].r_com);
        }
    }
    return pts.back().r_com;
}

} // namespace mudr

#endif // MUDR_WATERFILL_HPP
