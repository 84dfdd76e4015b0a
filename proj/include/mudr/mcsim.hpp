#ifndef MUDR_MCSIM_HPP
#define MUDR_MCSIM_HPP

/**
 * @file mcsim.hpp
 * @brief Seeded Monte Carlo checks of the delay Cramer-Rao variance, the
 *        residual interference left after predicted-return subtraction, and
 *        the flat-spectrum rms-bandwidth constant.
 *
 * Waveforms are periodic complex baseband sequences sampled at
 * oversample * B. Periodicity makes frequency-domain phase ramps exact
 * fractional delays for the band-limited signal.
 *
 * Trial t draws from its own engine seeded by (seed, t); per-trial results
 * are stored by index and reduced with pairwise summation, so the report
 * does not depend on evaluation order.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <random>
#include <sstream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "mudr/bounds.hpp"
#include "mudr/constants.hpp"
#include "mudr/error.hpp"
#include "mudr/fft.hpp"
#include "mudr/scenario.hpp"

namespace mudr::mc {

using dsp::cplx;

struct WaveformSpec {
    std::size_t n_samples = 4096;
    std::size_t oversample = 8; ///< samples per 1/B
    SpectralShape spectral_shape = SpectralShape::flat;
    bool unit_variance = true;

    /// Number of DFT bins spanned by the bandwidth B.
    std::size_t band_bins() const noexcept { return n_samples / oversample; }
};

struct McReport {
    std::string experiment;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double empirical = 0.0;
    double analytic = 0.0;
    double rel_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double standard_error = 0.0; ///< MC standard error of `empirical`; not serialized
};

inline nlohmann::ordered_json to_json(const McReport& r) {
    nlohmann::ordered_json j;
    j["experiment"] = r.experiment;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["empirical"] = r.empirical;
    j["analytic"] = r.analytic;
    j["rel_error"] = r.rel_error;
    j["tolerance"] = r.tolerance;
    j["pass"] = r.pass;
    return j;
}

/// Independent engine for stream `stream` of a run seeded with `seed`.
inline std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x6d756472u};
    return std::mt19937_64(seq);
}

/// Stream id reserved for per-run (non-trial) draws such as a reference waveform.
inline constexpr std::uint64_t reference_stream = ~std::uint64_t{0};

/// Pairwise summation; the result depends only on the element order.
inline double pairwise_sum(std::span<const double> x) {
    if (x.size() <= 8) {
        double s = 0.0;
        for (double v : x) {
            s += v;
        }
        return s;
    }
    const std::size_t half = x.size() / 2;
    return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

struct SampleMoments {
    double mean = 0.0;
    double variance = 0.0;       ///< unbiased
    double variance_se = 0.0;    ///< standard error of `variance`
    double mean_se = 0.0;        ///< standard error of `mean`
};

inline SampleMoments sample_moments(std::span<const double> x) {
    SampleMoments m;
    const auto n = static_cast<double>(x.size());
    if (x.empty()) {
        return m;
    }
    m.mean = pairwise_sum(x) / n;
    if (x.size() < 2) {
        return m;
    }
    std::vector<double> d2(x.size());
    std::vector<double> d4(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - m.mean;
        d2[i] = d * d;
        d4[i] = d2[i] * d2[i];
    }
    const double m2 = pairwise_sum(d2) / n;
    const double m4 = pairwise_sum(d4) / n;
    m.variance = m2 * n / (n - 1.0);
    m.variance_se = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
    m.mean_se = std::sqrt(m.variance / n);
    return m;
}

namespace detail {

inline std::string short_number(double v) {
    std::ostringstream out;
    out << std::setprecision(4) << v;
    return out.str();
}

inline void check_spec(const WaveformSpec& spec) {
    if (spec.oversample == 0 || spec.n_samples < 3 * spec.oversample) {
        throw PreconditionError("WaveformSpec: need oversample >= 1 and n_samples >= 3 * oversample "
                                "(the band must span at least 3 DFT bins)");
    }
}

/// Largest |bin index| inside the band: the band holds 2 * half + 1 bins.
inline std::size_t half_band(const WaveformSpec& spec) {
    const std::size_t k = spec.band_bins();
    return k >= 1 ? (k - 1) / 2 : 0;
}

/// Circular Gaussian spectrum, flat over the band, zero outside.
/// Scaled so that the time-domain samples have unit expected variance.
inline std::vector<cplx> flat_spectrum(const WaveformSpec& spec, std::mt19937_64& rng) {
    const std::size_t n = spec.n_samples;
    const std::size_t half = half_band(spec);
    const double in_band = static_cast<double>(2 * half + 1);
    const double sigma = static_cast<double>(n) / std::sqrt(2.0 * in_band);
    std::normal_distribution<double> gauss(0.0, sigma);
    std::vector<cplx> spectrum(n, cplx{});
    for (std::size_t k = 0; k <= half; ++k) {
        const double re = gauss(rng);
        spectrum[k] = cplx(re, gauss(rng));
    }
    for (std::size_t k = 1; k <= half; ++k) {
        const double re = gauss(rng);
        spectrum[n - k] = cplx(re, gauss(rng));
    }
    return spectrum;
}

inline double mean_power(std::span<const cplx> x) {
    std::vector<double> p(x.size());
    std::transform(x.begin(), x.end(), p.begin(), [](cplx v) { return std::norm(v); });
    return pairwise_sum(p) / static_cast<double>(x.size());
}

} // namespace detail

/// Band-limited flat-spectrum circular Gaussian waveform.
inline std::vector<cplx> generate_waveform(const WaveformSpec& spec, std::uint64_t seed) {
    detail::check_spec(spec);
    auto rng = stream_engine(seed, reference_stream);
    const auto spectrum = detail::flat_spectrum(spec, rng);
    dsp::Fft fft(spec.n_samples);
    std::vector<cplx> s(spec.n_samples);
    fft.inverse(spectrum, s);
    if (spec.unit_variance) {
        const double scale = 1.0 / std::sqrt(detail::mean_power(s));
        for (auto& v : s) {
            v *= scale;
        }
    }
    return s;
}

/// Measured (2 pi B_rms)^2 / B^2 from the periodogram of a sampled waveform.
inline double measure_gamma_sq(std::span<const cplx> samples, std::size_t oversample) {
    const std::size_t n = samples.size();
    dsp::Fft fft(n);
    std::vector<cplx> spectrum(n);
    fft.forward(samples, spectrum);
    std::vector<double> weighted(n);
    std::vector<double> power(n);
    const double bins_per_b = static_cast<double>(n) / static_cast<double>(oversample);
    for (std::size_t k = 0; k < n; ++k) {
        const double f_over_b = dsp::signed_bin(k, n) / bins_per_b;
        power[k] = std::norm(spectrum[k]);
        weighted[k] = f_over_b * f_over_b * power[k];
    }
    return two_pi * two_pi * pairwise_sum(weighted) / pairwise_sum(power);
}

/// Circular delay by a (possibly fractional) number of samples via a phase ramp.
inline std::vector<cplx> fractional_delay(std::span<const cplx> x, double delay_samples) {
    const std::size_t n = x.size();
    dsp::Fft fft(n);
    std::vector<cplx> spectrum(n);
    fft.forward(x, spectrum);
    for (std::size_t k = 0; k < n; ++k) {
        const double phase = -two_pi * dsp::signed_bin(k, n) * delay_samples / static_cast<double>(n);
        spectrum[k] *= std::polar(1.0, phase);
    }
    std::vector<cplx> out(n);
    fft.inverse(spectrum, out);
    return out;
}

/// Inclusive range of candidate lags, in samples.
struct LagWindow {
    std::size_t first = 0;
    std::size_t last = 0;
};

struct DelayEstimate {
    double delay_s = 0.0;
    double delay_samples = 0.0;
    double peak_magnitude = 0.0;
    bool degenerate = false; ///< no correlation energy in the window (SNR ~ 0)
};

namespace detail {

/// Peak of |corr| over the window with 3-point parabolic refinement.
inline DelayEstimate pick_peak(std::span<const cplx> corr, LagWindow window, double sample_rate_hz) {
    const std::size_t n = corr.size();
    std::size_t best = window.first;
    double best_mag = -1.0;
    for (std::size_t l = window.first; l <= window.last; ++l) {
        const double mag = std::abs(corr[l]);
        if (mag > best_mag) {
            best_mag = mag;
            best = l;
        }
    }

    DelayEstimate est;
    est.peak_magnitude = best_mag;
    double offset = 0.0;
    if (!(best_mag > 0.0)) {
        est.degenerate = true;
    } else {
        const double left = std::abs(corr[(best + n - 1) % n]);
        const double right = std::abs(corr[(best + 1) % n]);
        const double curvature = left - 2.0 * best_mag + right;
        if (curvature < 0.0) {
            offset = 0.5 * (left - right) / curvature;
        }
    }
    est.delay_samples = static_cast<double>(best) + offset;
    est.delay_s = est.delay_samples / sample_rate_hz;
    return est;
}

/// Circular cross-correlation given the observed spectrum and conj(reference spectrum).
inline void correlate(dsp::Fft& fft, std::span<const cplx> observed_spectrum,
                      std::span<const cplx> ref_spectrum_conj, std::span<cplx> corr) {
    std::vector<cplx> product(observed_spectrum.size());
    for (std::size_t k = 0; k < product.size(); ++k) {
        product[k] = observed_spectrum[k] * ref_spectrum_conj[k];
    }
    fft.inverse(product, corr);
}

inline void check_window(LagWindow window, std::size_t n) {
    if (window.first > window.last || window.last >= n) {
        throw PreconditionError("empty or out-of-range lag window");
    }
}

} // namespace detail

/// Matched filter against a fixed reference: circular cross-correlation via FFT,
/// magnitude peak search, then 3-point parabolic refinement.
class MatchedFilter {
public:
    MatchedFilter(std::span<const cplx> reference, double sample_rate_hz)
        : fft_(reference.empty() ? 1 : reference.size()), ref_spectrum_(reference.size()),
          sample_rate_hz_(sample_rate_hz) {
        if (reference.empty()) {
            throw PreconditionError("matched filter reference is empty");
        }
        fft_.forward(reference, ref_spectrum_);
        for (auto& v : ref_spectrum_) {
            v = std::conj(v);
        }
    }

    DelayEstimate estimate(std::span<const cplx> observed, LagWindow window) {
        const std::size_t n = ref_spectrum_.size();
        if (observed.size() != n) {
            throw PreconditionError("observed length differs from the reference length");
        }
        detail::check_window(window, n);
        std::vector<cplx> spec(n);
        fft_.forward(observed, spec);
        std::vector<cplx> corr(n);
        detail::correlate(fft_, spec, ref_spectrum_, corr);
        return detail::pick_peak(corr, window, sample_rate_hz_);
    }

private:
    dsp::Fft fft_;
    std::vector<cplx> ref_spectrum_;
    double sample_rate_hz_;
};

inline DelayEstimate matched_filter_delay(std::span<const cplx> observed, std::span<const cplx> reference,
                                          LagWindow window, double sample_rate_hz) {
    MatchedFilter mf(reference, sample_rate_hz);
    return mf.estimate(observed, window);
}

namespace detail {

inline McReport finish_report(McReport r) {
    r.rel_error = std::abs(r.empirical - r.analytic) / r.analytic;
    r.pass = r.rel_error <= r.tolerance;
    return r;
}

} // namespace detail

/// Minimum integrated SNR at which the delay estimator is run.
inline constexpr double crb_min_isnr = 10.0;

/**
 * Delay-estimation variance of the magnitude matched filter against the
 * closed-form Cramer-Rao variance.
 *
 * Every trial transmits a fresh flat-spectrum Gaussian pulse of
 * round(TB * oversample) samples (spec.n_samples is not used), known at the
 * receiver. The echo is observed in complex circular white noise with
 * E|n|^2 chosen so that pulse energy over noise density equals the
 * scenario's integrated SNR.
 */
inline McReport crb_experiment(const LinkBudget& lb, const WaveformSpec& spec, std::uint64_t trials,
                               std::uint64_t seed) {
    mudr::detail::require_single_target(lb, "crb_experiment");
    if (trials < 2) {
        throw PreconditionError("crb_experiment needs at least 2 trials");
    }
    const double isnr = integrated_snr(lb, 0);
    if (!(isnr >= crb_min_isnr)) {
        throw PreconditionError(
            "integrated SNR TB*a^2*P_radar/sigma_noise^2 = " + detail::short_number(isnr) +
            " is below " + detail::short_number(crb_min_isnr) +
            "; the matched-filter delay estimator only approaches the Cramer-Rao variance "
            "above threshold, so the comparison would be meaningless. Raise radar power, "
            "cross section or time-bandwidth product.");
    }

    WaveformSpec pulse = spec;
    pulse.n_samples =
        static_cast<std::size_t>(std::lround(lb.time_bandwidth * static_cast<double>(spec.oversample)));
    detail::check_spec(pulse);
    const std::size_t n = pulse.n_samples;
    const double fs = static_cast<double>(spec.oversample) * lb.bandwidth_hz;

    const double true_delay = static_cast<double>(n / 4) + 0.3;
    const double quad_sigma = std::sqrt(static_cast<double>(n) / isnr / 2.0);

    const std::size_t half_window = 4 * spec.oversample;
    const std::size_t centre = n / 4;
    const LagWindow window{centre >= half_window ? centre - half_window : 0,
                           std::min(centre + half_window, n - 1)};

    std::vector<cplx> ramp(n);
    for (std::size_t k = 0; k < n; ++k) {
        ramp[k] = std::polar(1.0, -two_pi * dsp::signed_bin(k, n) * true_delay / static_cast<double>(n));
    }

    dsp::Fft fft(n);
    std::vector<cplx> echo_spectrum(n);
    std::vector<cplx> observed(n);
    std::vector<cplx> observed_spectrum(n);
    std::vector<cplx> corr(n);
    std::vector<double> errors(trials);
    for (std::uint64_t t = 0; t < trials; ++t) {
        auto rng = stream_engine(seed, t);
        auto ref_spectrum = detail::flat_spectrum(pulse, rng);
        double energy = 0.0;
        for (const auto& v : ref_spectrum) {
            energy += std::norm(v);
        }
        // unit mean power in time: sum|S|^2 = n^2
        const double scale = static_cast<double>(n) / std::sqrt(energy);
        for (std::size_t k = 0; k < n; ++k) {
            ref_spectrum[k] *= scale;
            echo_spectrum[k] = ref_spectrum[k] * ramp[k];
            ref_spectrum[k] = std::conj(ref_spectrum[k]);
        }
        fft.inverse(echo_spectrum, observed);
        std::normal_distribution<double> gauss(0.0, quad_sigma);
        for (auto& v : observed) {
            const double re = gauss(rng);
            v += cplx(re, gauss(rng));
        }
        fft.forward(observed, observed_spectrum);
        detail::correlate(fft, observed_spectrum, ref_spectrum, corr);
        errors[t] = detail::pick_peak(corr, window, fs).delay_samples - true_delay;
    }

    const SampleMoments m = sample_moments(errors);
    McReport r;
    r.experiment = "crb";
    r.trials = trials;
    r.seed = seed;
    r.empirical = m.variance / (fs * fs);
    r.standard_error = m.variance_se / (fs * fs);
    r.analytic = crb_delay_variance(lb, 0);
    r.tolerance = isnr >= 1e4 * (1.0 - 1e-9) ? 0.15 : 0.25;
    return detail::finish_report(r);
}

/// Largest sigma_tau,proc * B for which the residual experiment runs.
inline constexpr double residual_max_spread = 0.2;

/**
 * Interference-plus-noise power after subtracting the predicted return,
 * formed from the exact waveform difference s(t - tau) - s(t - tau_pre)
 * rather than its first-order derivative expansion. Thermal noise is added
 * analytically.
 */
inline McReport residual_experiment(const LinkBudget& lb, const WaveformSpec& spec, std::uint64_t trials,
                                    std::uint64_t seed) {
    mudr::detail::require_single_target(lb, "residual_experiment");
    detail::check_spec(spec);
    if (trials < 2) {
        throw PreconditionError("residual_experiment needs at least 2 trials");
    }
    const double sigma_tau = std::sqrt(lb.sigma_tau_proc_sq[0]);
    const double spread = sigma_tau * lb.bandwidth_hz;
    if (spread > residual_max_spread) {
        throw PreconditionError("target process spread sigma_tau,proc*B = " + detail::short_number(spread) +
                                " exceeds " + detail::short_number(residual_max_spread) +
                                "; the first-order residual model assumes delay uncertainty well "
                                "inside one over the bandwidth.");
    }

    McReport r;
    r.experiment = "residual";
    r.trials = trials;
    r.seed = seed;
    r.tolerance = 0.10;
    r.analytic = int_plus_noise_variance(lb, lb.bandwidth_hz);
    const double noise = lb.noise_power_w;
    if (sigma_tau == 0.0) {
        r.empirical = noise;
        return detail::finish_report(r);
    }

    const std::size_t n = spec.n_samples;
    const double fs = static_cast<double>(spec.oversample) * lb.bandwidth_hz;
    const double echo_power = lb.a_sq[0] * lb.radar_power_w;
    dsp::Fft fft(n);
    std::vector<cplx> s(n);
    std::vector<cplx> diff_spectrum(n);
    std::vector<cplx> diff(n);
    std::vector<double> residual(trials);
    for (std::uint64_t t = 0; t < trials; ++t) {
        auto rng = stream_engine(seed, t);
        std::normal_distribution<double> unit(0.0, 1.0);
        const double shift = unit(rng) * sigma_tau * fs; // tau - tau_pre, in samples
        const auto spectrum = detail::flat_spectrum(spec, rng);
        fft.inverse(spectrum, s);
        for (std::size_t k = 0; k < n; ++k) {
            const double phase = two_pi * dsp::signed_bin(k, n) * shift / static_cast<double>(n);
            diff_spectrum[k] = spectrum[k] * (1.0 - std::polar(1.0, phase));
        }
        fft.inverse(diff_spectrum, diff);
        residual[t] = echo_power * detail::mean_power(diff) / detail::mean_power(s);
    }

    const SampleMoments m = sample_moments(residual);
    r.empirical = m.mean + noise;
    r.standard_error = m.mean_se;
    return detail::finish_report(r);
}

/// Mean measured gamma^2 over `trials` independent flat-spectrum waveforms.
inline McReport gamma_experiment(const WaveformSpec& spec, std::uint64_t trials, std::uint64_t seed) {
    detail::check_spec(spec);
    if (trials < 1) {
        throw PreconditionError("gamma_experiment needs at least 1 trial");
    }
    dsp::Fft fft(spec.n_samples);
    std::vector<cplx> s(spec.n_samples);
    std::vector<double> gamma(trials);
    for (std::uint64_t t = 0; t < trials; ++t) {
        auto rng = stream_engine(seed, t);
        fft.inverse(detail::flat_spectrum(spec, rng), s);
        gamma[t] = measure_gamma_sq(s, spec.oversample);
    }
    const SampleMoments m = sample_moments(gamma);
    McReport r;
    r.experiment = "gamma";
    r.trials = trials;
    r.seed = seed;
    r.empirical = m.mean;
    r.standard_error = m.mean_se;
    r.analytic = spectral_gamma_sq(spec.spectral_shape);
    r.tolerance = 0.05;
    return detail::finish_report(r);
}

} // namespace mudr::mc

#endif // MUDR_MCSIM_HPP
