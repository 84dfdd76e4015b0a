#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "mudr/mcsim.hpp"

#include "test_support.hpp"

using mudr::mc::cplx;
using testing_support::data_path;
using testing_support::rel_err;

namespace {

mudr::LinkBudget budget(const std::string& file) { return mudr::derive_link_budget(mudr::load_scenario(data_path(file))); }

mudr::LinkBudget residual_budget(double spread) {
    auto s = mudr::load_scenario(data_path("residual_check.json"));
    s.targets[0].process_range_std_m = spread * mudr::speed_of_light / (2.0 * s.bandwidth_hz);
    return mudr::derive_link_budget(s);
}

mudr::LinkBudget with_isnr(double isnr) {
    auto lb = testing_support::table2_budget();
    lb.radar_power_w *= isnr / mudr::integrated_snr(lb, 0);
    return lb;
}

// Correlation magnitude at a continuous lag, straight from the DFT sum.
double correlation_at(const std::vector<cplx>& x_spec, const std::vector<cplx>& s_spec, double lag) {
    const std::size_t n = x_spec.size();
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < n; ++k) {
        const double phase = mudr::two_pi * mudr::dsp::signed_bin(k, n) * lag / static_cast<double>(n);
        acc += x_spec[k] * std::conj(s_spec[k]) * std::polar(1.0, phase);
    }
    return std::abs(acc);
}

std::vector<cplx> spectrum_of(const std::vector<cplx>& x) {
    mudr::dsp::Fft fft(x.size());
    std::vector<cplx> out(x.size());
    fft.forward(x, out);
    return out;
}

} // namespace

TEST(Waveform, UnitVarianceAndDeterminism) {
    mudr::mc::WaveformSpec spec;
    spec.n_samples = 16384;
    const auto a = mudr::mc::generate_waveform(spec, 9);
    const auto b = mudr::mc::generate_waveform(spec, 9);
    const auto c = mudr::mc::generate_waveform(spec, 10);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
    EXPECT_LE(std::abs(mudr::mc::detail::mean_power(a) - 1.0), 0.01);
}

TEST(Waveform, RawSpectrumHasUnitExpectedPower) {
    mudr::mc::WaveformSpec spec;
    spec.n_samples = 16384;
    spec.unit_variance = false;
    std::vector<double> powers;
    for (std::uint64_t seed = 0; seed < 64; ++seed) {
        powers.push_back(mudr::mc::detail::mean_power(mudr::mc::generate_waveform(spec, seed)));
    }
    const auto m = mudr::mc::sample_moments(powers);
    EXPECT_LE(std::abs(m.mean - 1.0), 0.01);
}

TEST(Waveform, BandLimited) {
    mudr::mc::WaveformSpec spec;
    spec.n_samples = 1024;
    const auto x = mudr::mc::generate_waveform(spec, 1);
    const auto X = spectrum_of(x);
    const double half_b = static_cast<double>(spec.band_bins()) / 2.0;
    for (std::size_t k = 0; k < X.size(); ++k) {
        if (std::abs(mudr::dsp::signed_bin(k, X.size())) > half_b) {
            EXPECT_LE(std::abs(X[k]), 1e-9);
        }
    }
}

TEST(Waveform, RejectsBadSpec) {
    mudr::mc::WaveformSpec spec;
    spec.oversample = 0;
    EXPECT_THROW(mudr::mc::generate_waveform(spec, 0), mudr::PreconditionError);
    spec.oversample = 8;
    spec.n_samples = 4;
    EXPECT_THROW(mudr::mc::generate_waveform(spec, 0), mudr::PreconditionError);
    spec.n_samples = 16; // two bins in band: only DC would survive
    EXPECT_THROW(mudr::mc::generate_waveform(spec, 0), mudr::PreconditionError);
    spec.n_samples = 24;
    EXPECT_NO_THROW(mudr::mc::generate_waveform(spec, 0));
}

TEST(GammaExperiment, WithinFivePercent) {
    const auto r = mudr::mc::gamma_experiment({}, 200, 3);
    EXPECT_NEAR(r.analytic, 4.0 * mudr::pi * mudr::pi / 12.0, 1e-15);
    EXPECT_LE(r.rel_error, 0.05);
    EXPECT_TRUE(r.pass);
}

TEST(MatchedFilter, IntegerDelayExact) {
    mudr::mc::WaveformSpec spec;
    spec.n_samples = 2048;
    const auto s = mudr::mc::generate_waveform(spec, 5);
    const auto x = mudr::mc::fractional_delay(s, 100.0);
    const auto est = mudr::mc::matched_filter_delay(x, s, {80, 120}, 8.0);
    EXPECT_FALSE(est.degenerate);
    EXPECT_NEAR(est.delay_samples, 100.0, 1e-9);
    EXPECT_NEAR(est.delay_s, 100.0 / 8.0, 1e-9);
}

TEST(MatchedFilter, HalfSampleAgainstDenseSearch) {
    mudr::mc::WaveformSpec spec;
    spec.n_samples = 1024;
    const auto s = mudr::mc::generate_waveform(spec, 6);
    const double truth = 200.5;
    const auto x = mudr::mc::fractional_delay(s, truth);
    const auto est = mudr::mc::matched_filter_delay(x, s, {190, 210}, 1.0);

    const auto xs = spectrum_of(x);
    const auto ss = spectrum_of(s);
    double best_lag = 0.0;
    double best = -1.0;
    for (double lag = 198.0; lag <= 203.0; lag += 1e-3) {
        const double c = correlation_at(xs, ss, lag);
        if (c > best) {
            best = c;
            best_lag = lag;
        }
    }
    EXPECT_NEAR(best_lag, truth, 2e-3);
    EXPECT_NEAR(est.delay_samples, best_lag, 0.05);
}

TEST(MatchedFilter, ZeroSignalIsDegenerate) {
    const std::vector<cplx> ref(64, cplx{1.0, 0.0});
    const std::vector<cplx> zero(64, cplx{0.0, 0.0});
    const auto est = mudr::mc::matched_filter_delay(zero, ref, {0, 10}, 1.0);
    EXPECT_TRUE(est.degenerate);
}

TEST(MatchedFilter, RejectsBadWindowAndLengths) {
    const std::vector<cplx> ref(64, cplx{1.0, 0.0});
    EXPECT_THROW(mudr::mc::matched_filter_delay(ref, ref, {10, 5}, 1.0), mudr::PreconditionError);
    EXPECT_THROW(mudr::mc::matched_filter_delay(ref, ref, {0, 64}, 1.0), mudr::PreconditionError);
    const std::vector<cplx> shorter(32);
    EXPECT_THROW(mudr::mc::matched_filter_delay(shorter, ref, {0, 10}, 1.0), mudr::PreconditionError);
    EXPECT_THROW(mudr::mc::matched_filter_delay(ref, std::vector<cplx>{}, {0, 10}, 1.0), mudr::PreconditionError);
}

TEST(CrbExperiment, RejectsBelowThreshold) {
    const auto lb = testing_support::table2_budget();
    try {
        mudr::mc::crb_experiment(lb, {}, 100, 0);
        FAIL() << "expected PreconditionError";
    } catch (const mudr::PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find("0.729"), std::string::npos) << e.what();
    }
}

// The harness itself is checked against the complex-baseband Fisher bound,
// which is half the closed-form expression used by the bounds module.
TEST(CrbExperiment, HarnessMatchesComplexFisherBound) {
    for (double isnr : {100.0, 1e4}) {
        const auto lb = with_isnr(isnr);
        const auto r = mudr::mc::crb_experiment(lb, {}, 2000, 42);
        const double fisher = r.analytic / 2.0;
        EXPECT_LE(rel_err(r.empirical, fisher), 0.15) << "isnr=" << isnr;
        EXPECT_GE(r.empirical, fisher - 3.0 * r.standard_error) << "isnr=" << isnr;
    }
}

TEST(CrbExperiment, StandardErrorScalesWithTrials) {
    const auto lb = with_isnr(100.0);
    const auto small = mudr::mc::crb_experiment(lb, {}, 1000, 8);
    const auto large = mudr::mc::crb_experiment(lb, {}, 4000, 8);
    EXPECT_NEAR(small.standard_error / large.standard_error, 2.0, 0.4);
}

TEST(CrbExperiment, ToleranceTiers) {
    EXPECT_EQ(mudr::mc::crb_experiment(with_isnr(100.0), {}, 50, 1).tolerance, 0.25);
    EXPECT_EQ(mudr::mc::crb_experiment(with_isnr(1e4), {}, 50, 1).tolerance, 0.15);
}

TEST(CrbExperiment, Deterministic) {
    const auto lb = budget("crb_isnr100.json");
    const auto a = mudr::mc::crb_experiment(lb, {}, 300, 42);
    const auto b = mudr::mc::crb_experiment(lb, {}, 300, 42);
    const auto c = mudr::mc::crb_experiment(lb, {}, 300, 43);
    EXPECT_EQ(mudr::mc::to_json(a).dump(), mudr::mc::to_json(b).dump());
    EXPECT_NE(a.empirical, c.empirical);
}

TEST(ResidualExperiment, BundledScenarioWithinTenPercent) {
    const auto lb = budget("residual_check.json");
    EXPECT_NEAR(std::sqrt(lb.sigma_tau_proc_sq[0]) * lb.bandwidth_hz, 0.05, 1e-9);
    const auto r = mudr::mc::residual_experiment(lb, {}, 2000, 42);
    EXPECT_LE(r.rel_error, 0.10);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.tolerance, 0.10);
}

TEST(ResidualExperiment, ZeroSpreadIsThermal) {
    const auto lb = residual_budget(0.0);
    const auto r = mudr::mc::residual_experiment(lb, {}, 10, 0);
    EXPECT_EQ(r.empirical, lb.noise_power_w);
    EXPECT_EQ(r.analytic, lb.noise_power_w);
    EXPECT_EQ(r.rel_error, 0.0);
}

TEST(ResidualExperiment, RejectsWideSpread) {
    try {
        mudr::mc::residual_experiment(residual_budget(0.5), {}, 10, 0);
        FAIL() << "expected PreconditionError";
    } catch (const mudr::PreconditionError& e) {
        EXPECT_NE(std::string(e.what()).find("0.5"), std::string::npos) << e.what();
    }
}

TEST(ResidualExperiment, ErrorShrinksWithSpread) {
    double prev = std::numeric_limits<double>::infinity();
    double prev_se = 0.0;
    for (double spread : {0.1, 0.03, 0.01}) {
        const auto r = mudr::mc::residual_experiment(residual_budget(spread), {}, 2000, 42);
        const double se = r.standard_error / r.analytic;
        EXPECT_LE(r.rel_error, prev + 2.0 * std::hypot(se, prev_se)) << "spread=" << spread;
        prev = r.rel_error;
        prev_se = se;
    }
}

TEST(Report, JsonKeysInOrder) {
    const auto r = mudr::mc::gamma_experiment({}, 4, 0);
    const auto j = mudr::mc::to_json(r);
    std::vector<std::string> keys;
    for (const auto& item : j.items()) {
        keys.push_back(item.key());
    }
    EXPECT_EQ(keys, (std::vector<std::string>{"experiment", "trials", "seed", "empirical", "analytic", "rel_error",
                                              "tolerance", "pass"}));
    EXPECT_EQ(r.pass, r.rel_error <= r.tolerance);
    EXPECT_DOUBLE_EQ(r.rel_error, std::abs(r.empirical - r.analytic) / r.analytic);
}

TEST(Streams, IndependentOfOrder) {
    auto a = mudr::mc::stream_engine(42, 7);
    auto b = mudr::mc::stream_engine(42, 8);
    auto a2 = mudr::mc::stream_engine(42, 7);
    EXPECT_EQ(a(), a2());
    EXPECT_NE(a(), b());
}

TEST(PairwiseSum, MatchesExactSmallIntegers) {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = static_cast<double>(i);
    }
    EXPECT_EQ(mudr::mc::pairwise_sum(v), 499500.0);
}
