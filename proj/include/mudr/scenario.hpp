#ifndef MUDR_SCENARIO_HPP
#define MUDR_SCENARIO_HPP

/**
 * @file scenario.hpp
 * @brief Physical scenario description and the derived link budget.
 *
 * A Scenario holds user-facing parameters in SI linear units. The scenario
 * file uses the conventional engineering units (dBm, dBi) and is converted
 * at load time. derive_link_budget() turns a scenario into the handful of
 * quantities every rate bound consumes.
 */

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "mudr/constants.hpp"
#include "mudr/error.hpp"

namespace mudr {

enum class SpectralShape { flat };

struct Target {
    double range_m = 0.0;
    double cross_section_m2 = 0.0;
    double process_range_std_m = 0.0; ///< range-domain std of the target motion process
};

struct Scenario {
    double bandwidth_hz = 0.0;
    double center_freq_hz = 0.0;
    double temperature_k = 0.0;
    double comms_range_m = 0.0;
    double comms_power_w = 0.0;
    double comms_antenna_gain_lin = 0.0;
    double radar_power_w = 0.0;
    double radar_antenna_gain_lin = 0.0;
    std::vector<Target> targets;
    double time_bandwidth = 0.0;
    double duty_factor = 0.0;
    SpectralShape spectral_shape = SpectralShape::flat;

    /// Throws ValidationError naming the first offending field.
    void validate() const;
};

/// Everything the closed-form bounds need, in SI linear units.
struct LinkBudget {
    std::vector<double> a_sq;              ///< radar gain/cross-section/propagation product, per target
    double b_sq = 0.0;                     ///< comms propagation-gain product
    double noise_power_w = 0.0;            ///< thermal noise over the full band
    std::vector<double> sigma_tau_proc_sq; ///< delay-process variance (s^2), per target
    double gamma_sq = 0.0;                 ///< (2 pi B_rms / B)^2
    double temperature_k = 0.0;
    double bandwidth_hz = 0.0;
    double time_bandwidth = 0.0;
    double duty_factor = 0.0;
    double comms_power_w = 0.0;
    double radar_power_w = 0.0;

    std::size_t target_count() const noexcept { return a_sq.size(); }
    /// Pulse duration T = TB / B.
    double pulse_duration_s() const noexcept { return time_bandwidth / bandwidth_hz; }
    /// Pulse repetition interval T_pri = T / delta.
    double pri_s() const noexcept { return pulse_duration_s() / duty_factor; }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// Round-trip delay for a monostatic range: 2 r / c.
inline double delay_from_range(double range_m) { return 2.0 * range_m / speed_of_light; }
inline double range_from_delay(double delay_s) { return delay_s * speed_of_light / 2.0; }

/// Thermal noise power k_B T B.
inline double noise_power(double temperature_k, double bandwidth_hz) {
    return boltzmann * temperature_k * bandwidth_hz;
}

/// Ratio (2 pi B_rms)^2 / B^2 for a power-spectral shape.
inline double spectral_gamma_sq(SpectralShape shape) {
    switch (shape) {
    case SpectralShape::flat:
        return two_pi * two_pi / 12.0;
    }
    throw Error("unknown spectral shape");
}

namespace detail {

inline void require_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ValidationError(field, "must be finite and > 0");
    }
}

} // namespace detail

inline void Scenario::validate() const {
    using detail::require_positive;
    require_positive(bandwidth_hz, "bandwidth_hz");
    require_positive(center_freq_hz, "center_freq_hz");
    require_positive(temperature_k, "temperature_k");
    require_positive(comms_range_m, "comms_range_m");
    require_positive(comms_power_w, "comms_power_w");
    require_positive(comms_antenna_gain_lin, "comms_antenna_gain_lin");
    require_positive(radar_power_w, "radar_power_w");
    require_positive(radar_antenna_gain_lin, "radar_antenna_gain_lin");
    if (!(duty_factor > 0.0 && duty_factor <= 1.0)) {
        throw ValidationError("duty_factor", "must lie in (0, 1]");
    }
    if (!(time_bandwidth >= 1.0) || !std::isfinite(time_bandwidth)) {
        throw ValidationError("time_bandwidth", "must be finite and >= 1");
    }
    if (targets.empty()) {
        throw ValidationError("targets", "at least one target is required");
    }
    for (const auto& t : targets) {
        require_positive(t.range_m, "targets.range_m");
        require_positive(t.cross_section_m2, "targets.cross_section_m2");
        if (!(t.process_range_std_m >= 0.0) || !std::isfinite(t.process_range_std_m)) {
            throw ValidationError("targets.process_range_std_m", "must be finite and >= 0");
        }
    }
}

/**
 * Link budget for a validated scenario.
 *
 * Radar: monostatic range equation, a^2 = G^2 lambda^2 sigma / ((4 pi)^3 r^4).
 * Comms: free-space Friis with the same scalar gain on both ends,
 * b^2 = G^2 lambda^2 / (4 pi r)^2.
 */
inline LinkBudget derive_link_budget(const Scenario& s) {
    s.validate();
    const double lambda = speed_of_light / s.center_freq_hz;
    const double four_pi = 4.0 * pi;

    LinkBudget lb;
    lb.a_sq.reserve(s.targets.size());
    lb.sigma_tau_proc_sq.reserve(s.targets.size());
    const double g_radar_sq = s.radar_antenna_gain_lin * s.radar_antenna_gain_lin;
    for (const auto& t : s.targets) {
        const double r2 = t.range_m * t.range_m;
        lb.a_sq.push_back(g_radar_sq * lambda * lambda * t.cross_section_m2 /
                          (four_pi * four_pi * four_pi * r2 * r2));
        const double sigma_tau = delay_from_range(t.process_range_std_m);
        lb.sigma_tau_proc_sq.push_back(sigma_tau * sigma_tau);
    }
    const double path = lambda / (four_pi * s.comms_range_m);
    lb.b_sq = s.comms_antenna_gain_lin * s.comms_antenna_gain_lin * path * path;
    lb.noise_power_w = noise_power(s.temperature_k, s.bandwidth_hz);
    lb.gamma_sq = spectral_gamma_sq(s.spectral_shape);
    lb.temperature_k = s.temperature_k;
    lb.bandwidth_hz = s.bandwidth_hz;
    lb.time_bandwidth = s.time_bandwidth;
    lb.duty_factor = s.duty_factor;
    lb.comms_power_w = s.comms_power_w;
    lb.radar_power_w = s.radar_power_w;
    return lb;
}

namespace detail {

inline const nlohmann::json& member(const nlohmann::json& obj, const char* key,
                                    const std::string& path) {
    if (!obj.is_object()) {
        throw ParseError(path.empty() ? "scenario root must be a JSON object"
                                      : path + " must be a JSON object");
    }
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError("missing key " + (path.empty() ? std::string{} : path + ".") + key);
    }
    return *it;
}

inline double number(const nlohmann::json& obj, const char* key, const std::string& path) {
    const auto& v = member(obj, key, path);
    if (!v.is_number()) {
        throw ParseError((path.empty() ? std::string{} : path + ".") + key + " must be a number");
    }
    return v.get<double>();
}

} // namespace detail

/// Builds a Scenario from the scenario-file JSON layout and validates it.
inline Scenario scenario_from_json(const nlohmann::json& j) {
    using detail::member;
    using detail::number;

    Scenario s;
    s.bandwidth_hz = number(j, "bandwidth_hz", "");
    s.center_freq_hz = number(j, "center_freq_hz", "");
    s.temperature_k = number(j, "temperature_k", "");

    const auto& comms = member(j, "comms", "");
    s.comms_range_m = number(comms, "range_m", "comms");
    s.comms_power_w = dbm_to_watts(number(comms, "power_dbm", "comms"));
    s.comms_antenna_gain_lin = db_to_linear(number(comms, "antenna_gain_dbi", "comms"));

    const auto& radar = member(j, "radar", "");
    s.radar_power_w = number(radar, "power_w", "radar");
    s.radar_antenna_gain_lin = db_to_linear(number(radar, "antenna_gain_dbi", "radar"));
    s.duty_factor = number(radar, "duty_factor", "radar");
    s.time_bandwidth = number(radar, "time_bandwidth", "radar");

    const auto& targets = member(j, "targets", "");
    if (!targets.is_array()) {
        throw ParseError("targets must be an array");
    }
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const std::string path = "targets[" + std::to_string(i) + "]";
        Target t;
        t.range_m = number(targets[i], "range_m", path);
        t.cross_section_m2 = number(targets[i], "cross_section_m2", path);
        t.process_range_std_m = number(targets[i], "process_range_std_m", path);
        s.targets.push_back(t);
    }

    if (j.contains("spectral_shape")) {
        const auto& shape = j.at("spectral_shape");
        if (!shape.is_string() || shape.get<std::string>() != "flat") {
            throw ValidationError("spectral_shape", "only \"flat\" is supported");
        }
    }
    s.spectral_shape = SpectralShape::flat;

    s.validate();
    return s;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open scenario file " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("malformed scenario file " + path.string() + ": " + e.what());
    }
    return scenario_from_json(j);
}

} // namespace mudr

#endif // MUDR_SCENARIO_HPP
