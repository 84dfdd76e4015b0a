#ifndef MUDR_BOUNDS_HPP
#define MUDR_BOUNDS_HPP

/**
 * @file bounds.hpp
 * @brief Closed-form rate bounds for a receiver that sees a radar return and
 *        a communications signal in the same band.
 *
 * Rates are in bits/s. The multiple-access pentagon is the exception and is
 * expressed in bits per channel use with unit noise.
 */

#include <cmath>
#include <cstddef>
#include <string>

#include "mudr/constants.hpp"
#include "mudr/error.hpp"
#include "mudr/rates.hpp"
#include "mudr/scenario.hpp"

namespace mudr {

struct RatePair {
    double r1 = 0.0;
    double r2 = 0.0;
};

/// Two-user multiple-access rate region (bits per channel use).
struct PentagonRegion {
    double r1_max = 0.0;
    double r2_max = 0.0;
    double sum_max = 0.0;
    RatePair vertex_a; ///< user 2 decoded first: (sum - r2_max, r2_max)
    RatePair vertex_b; ///< user 1 decoded first: (r1_max, sum - r1_max)
};

/// Multiple-access pentagon for normalized SNRs a1^2 P1 and a2^2 P2.
inline PentagonRegion ma_pentagon(double snr1, double snr2) {
    if (!(snr1 >= 0.0) || !(snr2 >= 0.0)) {
        throw PreconditionError("ma_pentagon: SNRs must be >= 0");
    }
    PentagonRegion p;
    p.r1_max = log2_1p(snr1);
    p.r2_max = log2_1p(snr2);
    p.sum_max = log2_1p(snr1 + snr2);
    p.vertex_a = {log2_1p(snr1 / (1.0 + snr2)), p.r2_max};
    p.vertex_b = {p.r1_max, log2_1p(snr2 / (1.0 + snr1))};
    return p;
}

namespace detail {

inline void require_target(const LinkBudget& lb, std::size_t idx) {
    if (idx >= lb.target_count()) {
        throw PreconditionError("target index " + std::to_string(idx) + " out of range");
    }
}

inline void require_single_target(const LinkBudget& lb, const char* op) {
    if (lb.target_count() != 1) {
        throw MultiTargetError(std::string(op) + " is defined for a single target, got " +
                               std::to_string(lb.target_count()));
    }
}

} // namespace detail

/// Cramer-Rao delay variance (s^2): k_B T / (gamma^2 B TB a^2 P_radar).
inline double crb_delay_variance(const LinkBudget& lb, std::size_t target_idx) {
    detail::require_target(lb, target_idx);
    const double echo = lb.a_sq[target_idx] * lb.radar_power_w;
    if (!(echo > 0.0)) {
        throw DegenerateLinkError("radar return has zero power for target " +
                                  std::to_string(target_idx));
    }
    return boltzmann * lb.temperature_k /
           (lb.gamma_sq * lb.bandwidth_hz * lb.time_bandwidth * echo);
}

/// Integrated SNR TB a^2 P_radar / sigma_noise^2.
inline double integrated_snr(const LinkBudget& lb, std::size_t target_idx) {
    detail::require_target(lb, target_idx);
    return lb.time_bandwidth * lb.a_sq[target_idx] * lb.radar_power_w / lb.noise_power_w;
}

/// Differential entropy (bits) of a circular Gaussian with the given variance.
inline double estimation_entropy(double variance_s2) {
    if (!(variance_s2 > 0.0)) {
        throw PreconditionError("estimation_entropy: variance must be > 0");
    }
    return std::log2(pi * std::numbers::e * variance_s2);
}

/**
 * Estimation-rate outer bound (bits/s), summed over targets:
 * sum_m (delta / T) log2(1 + sigma_proc^2 / sigma_est^2).
 */
inline double est_outer_rate(const LinkBudget& lb) {
    const double per_second = lb.duty_factor / lb.pulse_duration_s(); // 1 / T_pri
    double rate = 0.0;
    for (std::size_t m = 0; m < lb.target_count(); ++m) {
        const double ratio = lb.sigma_tau_proc_sq[m] / crb_delay_variance(lb, m);
        rate += per_second * log2_1p(ratio);
    }
    return rate;
}

/// Same bound written as B log2(1 + sigma_proc^2 gamma^2 B TB a^2 P / (k_B T))^(delta/TB).
inline double est_outer_rate_bandwidth_form(const LinkBudget& lb) {
    const double b = lb.bandwidth_hz;
    double rate = 0.0;
    for (std::size_t m = 0; m < lb.target_count(); ++m) {
        const double echo = lb.a_sq[m] * lb.radar_power_w;
        if (!(echo > 0.0)) {
            throw DegenerateLinkError("radar return has zero power for target " + std::to_string(m));
        }
        const double snr = lb.sigma_tau_proc_sq[m] * lb.gamma_sq * b * lb.time_bandwidth * echo /
                           (boltzmann * lb.temperature_k);
        rate += b * (lb.duty_factor / lb.time_bandwidth) * log2_1p(snr);
    }
    return rate;
}

/**
 * Interference-plus-noise power (W) after subtracting the predicted radar
 * return, over a band of width bandwidth_hz:
 * P_radar sum_m a_m^2 gamma^2 bw^2 sigma_proc,m^2 + k_B T bw.
 */
inline double int_plus_noise_variance(const LinkBudget& lb, double bandwidth_hz) {
    if (!(bandwidth_hz > 0.0) || bandwidth_hz > lb.bandwidth_hz * (1.0 + 1e-12)) {
        throw PreconditionError("int_plus_noise_variance: bandwidth must lie in (0, B]");
    }
    double residual = 0.0;
    for (std::size_t m = 0; m < lb.target_count(); ++m) {
        residual += lb.a_sq[m] * lb.sigma_tau_proc_sq[m];
    }
    residual *= lb.radar_power_w * lb.gamma_sq * bandwidth_hz * bandwidth_hz;
    return residual + noise_power(lb.temperature_k, bandwidth_hz);
}

/// Radar-free communications bound B log2(1 + b^2 P_com / sigma_noise^2).
inline double comms_outer_rate(const LinkBudget& lb) {
    return lb.bandwidth_hz * log2_1p(lb.b_sq * lb.comms_power_w / lb.noise_power_w);
}

/// Communications rate that still allows decoding through the residual radar interference.
inline double sic_comms_rate(const LinkBudget& lb) {
    const double sigma_sq = int_plus_noise_variance(lb, lb.bandwidth_hz);
    return lb.bandwidth_hz * log2_1p(lb.b_sq * lb.comms_power_w / sigma_sq);
}

/// SIC vertex: radar at its outer bound, comms at the SIC rate.
inline RatePoint sic_vertex(const LinkBudget& lb) {
    return {est_outer_rate(lb), sic_comms_rate(lb)};
}

/// Segment from the radar-free comms point to the SIC vertex.
inline RateCurve interpolated_inner(const LinkBudget& lb) {
    detail::require_single_target(lb, "interpolated_inner");
    return {"interpolated", {{0.0, comms_outer_rate(lb)}, sic_vertex(lb)}};
}

} // namespace mudr

#endif // MUDR_BOUNDS_HPP
