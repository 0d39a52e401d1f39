#include "fracneumann/params.hpp"

#include <cmath>

#include <fmt/format.h>

#include "fracneumann/error.hpp"

namespace fracneumann {

double Params::intrinsic_length() const { return std::pow(d, 1.0 / (2.0 * s)); }

void Params::validate_common() const {
    if (n < 1) throw PreconditionError(fmt::format("need n >= 1, got {}", n));
    if (!(s > 0.0 && s < 1.0)) throw PreconditionError(fmt::format("need 0 < s < 1, got {}", s));
    if (!(n > 2.0 * s)) throw PreconditionError(fmt::format("need n > 2s, got n = {}, s = {}", n, s));
    if (!(p > 1.0) || !std::isfinite(p)) throw PreconditionError(fmt::format("need p > 1, got {}", p));
    if (!(d > 0.0) || !std::isfinite(d)) throw PreconditionError(fmt::format("need d > 0, got {}", d));
}

void Params::validate_neumann() const {
    validate_common();
    if (!(p < neumann_p_bound())) {
        throw PreconditionError(
            fmt::format("Neumann runs need p < (n + s)/(n - s) = {:.6g}, got p = {}", neumann_p_bound(), p));
    }
}

void Params::validate_whole_space() const {
    validate_common();
    if (!(p < whole_space_p_bound())) {
        throw PreconditionError(fmt::format("whole-space runs need p < (n + 2s)/(n - 2s) = {:.6g}, got p = {}",
                                            whole_space_p_bound(), p));
    }
}

}  // namespace fracneumann
