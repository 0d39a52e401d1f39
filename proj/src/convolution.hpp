#pragma once

#include <cstddef>
#include <complex>
#include <span>
#include <vector>

namespace fracneumann::detail {

/// Symmetric Toeplitz matrix-vector product, out_i = Σ_j c[|i - j|] in_j.
///
/// Dense row sums (rows split across workers, each row summed left to right)
/// when the size is at most dense_limit, otherwise circulant embedding and
/// FFTW. Either path is bitwise independent of the worker count.
class ToeplitzConvolver {
public:
    ToeplitzConvolver(std::vector<double> profile, std::size_t dense_limit);
    ~ToeplitzConvolver();
    ToeplitzConvolver(const ToeplitzConvolver&) = delete;
    ToeplitzConvolver& operator=(const ToeplitzConvolver&) = delete;

    void apply(std::span<const double> in, std::span<double> out, int workers) const;
    bool dense() const noexcept { return fft_size_ == 0; }

private:
    std::vector<double> profile_;
    std::size_t fft_size_ = 0;
    std::vector<std::complex<double>> spectrum_;
    void* forward_ = nullptr;
    void* backward_ = nullptr;
};

}  // namespace fracneumann::detail
