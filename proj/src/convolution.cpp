#include "convolution.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <mutex>

#include <fftw3.h>

#include "fracneumann/error.hpp"

namespace fracneumann::detail {

namespace {

// Planning is not thread safe in FFTW; execution with new-array calls is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffer {
    explicit FftwBuffer(std::size_t bytes) : ptr(fftw_malloc(bytes)) {
        if (ptr == nullptr) throw Error("fftw_malloc failed");
    }
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    double* real() const { return static_cast<double*>(ptr); }
    fftw_complex* complex() const { return static_cast<fftw_complex*>(ptr); }
    void* ptr;
};

}  // namespace

ToeplitzConvolver::ToeplitzConvolver(std::vector<double> profile, std::size_t dense_limit)
    : profile_(std::move(profile)) {
    const std::size_t n = profile_.size();
    if (n <= dense_limit) return;

    fft_size_ = std::bit_ceil(2 * n);
    const std::size_t m = fft_size_;
    const std::size_t mc = m / 2 + 1;
    FftwBuffer re(sizeof(double) * m);
    FftwBuffer co(sizeof(fftw_complex) * mc);
    {
        std::lock_guard lock(planner_mutex());
        forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(m), re.real(), co.complex(), FFTW_ESTIMATE);
        backward_ = fftw_plan_dft_c2r_1d(static_cast<int>(m), co.complex(), re.real(), FFTW_ESTIMATE);
    }
    if (forward_ == nullptr || backward_ == nullptr) throw Error("FFTW planning failed");

    // First column of the circulant embedding.
    std::fill(re.real(), re.real() + m, 0.0);
    for (std::size_t k = 0; k < n; ++k) re.real()[k] = profile_[k];
    for (std::size_t k = 1; k < n; ++k) re.real()[m - k] = profile_[k];
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_), re.real(), co.complex());
    spectrum_.resize(mc);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < mc; ++k) {
        spectrum_[k] = std::complex<double>(co.complex()[k][0], co.complex()[k][1]) * scale;
    }
}

ToeplitzConvolver::~ToeplitzConvolver() {
    std::lock_guard lock(planner_mutex());
    if (forward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
    if (backward_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

void ToeplitzConvolver::apply(std::span<const double> in, std::span<double> out, int workers) const {
    const std::size_t n = profile_.size();
    if (in.size() != n || out.size() != n) throw PreconditionError("convolve: size mismatch");

    if (dense()) {
        const double* c = profile_.data();
        const double* u = in.data();
        const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for num_threads(std::max(workers, 1)) schedule(static)
        for (std::ptrdiff_t i = 0; i < nn; ++i) {
            double acc = 0.0;
            for (std::ptrdiff_t j = 0; j < i; ++j) acc += c[i - j] * u[j];
            for (std::ptrdiff_t j = i; j < nn; ++j) acc += c[j - i] * u[j];
            out[static_cast<std::size_t>(i)] = acc;
        }
        return;
    }

    const std::size_t m = fft_size_;
    const std::size_t mc = m / 2 + 1;
    FftwBuffer re(sizeof(double) * m);
    FftwBuffer co(sizeof(fftw_complex) * mc);
    std::memcpy(re.real(), in.data(), sizeof(double) * n);
    std::fill(re.real() + n, re.real() + m, 0.0);
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_), re.real(), co.complex());
    for (std::size_t k = 0; k < mc; ++k) {
        const std::complex<double> z(co.complex()[k][0], co.complex()[k][1]);
        const std::complex<double> w = z * spectrum_[k];
        co.complex()[k][0] = w.real();
        co.complex()[k][1] = w.imag();
    }
    fftw_execute_dft_c2r(static_cast<fftw_plan>(backward_), co.complex(), re.real());
    std::memcpy(out.data(), re.real(), sizeof(double) * n);
}

}  // namespace fracneumann::detail
