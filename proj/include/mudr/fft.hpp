#ifndef MUDR_FFT_HPP
#define MUDR_FFT_HPP

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <stdexcept>

#include <fftw3.h>

namespace mudr::dsp {

using cplx = std::complex<double>;

/// Owning wrapper around a pair of FFTW plans of fixed length.
/// The inverse transform is normalized by 1/n.
class Fft {
public:
    explicit Fft(std::size_t n) : n_(n) {
        if (n == 0) {
            throw std::invalid_argument("Fft: length must be > 0");
        }
        in_ = fftw_alloc_complex(n);
        out_ = fftw_alloc_complex(n);
        const int len = static_cast<int>(n);
        std::lock_guard lock(planner_mutex());
        fwd_ = fftw_plan_dft_1d(len, in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_1d(len, in_, out_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    ~Fft() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
        fftw_free(in_);
        fftw_free(out_);
    }

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    std::size_t size() const noexcept { return n_; }

    void forward(std::span<const cplx> in, std::span<cplx> out) { run(fwd_, in, out, 1.0); }

    void inverse(std::span<const cplx> in, std::span<cplx> out) {
        run(inv_, in, out, 1.0 / static_cast<double>(n_));
    }

private:
    // FFTW planning is not thread safe; execution is.
    static std::mutex& planner_mutex() {
        static std::mutex m;
        return m;
    }

    void run(fftw_plan plan, std::span<const cplx> in, std::span<cplx> out, double scale) {
        if (in.size() != n_ || out.size() != n_) {
            throw std::invalid_argument("Fft: buffer length mismatch");
        }
        auto* src = reinterpret_cast<const double*>(in.data());
        for (std::size_t i = 0; i < n_; ++i) {
            in_[i][0] = src[2 * i];
            in_[i][1] = src[2 * i + 1];
        }
        fftw_execute(plan);
        for (std::size_t i = 0; i < n_; ++i) {
            out[i] = cplx(out_[i][0] * scale, out_[i][1] * scale);
        }
    }

    std::size_t n_;
    fftw_complex* in_ = nullptr;
    fftw_complex* out_ = nullptr;
    fftw_plan fwd_ = nullptr;
    fftw_plan inv_ = nullptr;
};

/// Signed frequency index of DFT bin k in an n-point transform.
inline double signed_bin(std::size_t k, std::size_t n) {
    return (2 * k < n) ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
}

} // namespace mudr::dsp

#endif // MUDR_FFT_HPP
