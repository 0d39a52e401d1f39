#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fracneumann/energy.hpp"
#include "fracneumann/error.hpp"
#include "fracneumann/grid.hpp"
#include "fracneumann/kernel.hpp"
#include "fracneumann/neumann.hpp"
#include "fracneumann/params.hpp"
#include "fracneumann/records.hpp"

namespace fracneumann {

struct SolverConfig {
    enum class Init { gaussian_bump, transplanted_ground_state, warm_start };

    double tol_residual = 1e-8;
    int max_iters = 50000;
    double step = 0.1;       ///< first trial step; later steps are Barzilai-Borwein
    double backtrack = 0.5;  ///< step shrink factor of the Armijo search
    Init init = Init::gaussian_bump;
    std::uint64_t seed = 0;

    void validate() const;
};

const char* to_string(SolverConfig::Init init);

/// Symmetric whole-space window [-half_width, half_width].
struct WindowConfig {
    double half_width = 60.0;
    double h = 0.05;
};

struct GroundStateResult {
    Grid grid;
    std::vector<double> w;
    double F_value = 0.0;
    double pohozaev_residual = 0.0;  ///< P(w) over its largest term
    double decay_exponent_fit = 0.0;
    double symmetric_error = 0.0;    ///< max |w(x) - w(-x)|
    double residual = 0.0;           ///< sup |(-Δ)^s w + w - w^p| on |x| <= L/2
    int iterations = 0;
    double s = 0.25;

    /// w(y) by linear interpolation in |y|, with a |y|^{-(1+2s)} tail beyond the window.
    double evaluate(double y) const;
};

struct LeastEnergyResult {
    explicit LeastEnergyResult(ExtendedField field) : u(std::move(field)) {}

    ExtendedField u;
    double c_d = 0.0;
    double M_d = 0.0;
    double argmax_x = 0.0;
    double nehari_residual = 0.0;
    double flux_residual = 0.0;
    double residual = 0.0;
    int iterations = 0;
    bool constant_branch = false;
    SolverConfig::Init init = SolverConfig::Init::gaussian_bump;
    /// Peak energy after each accepted iteration (the first entry is the start).
    std::vector<double> energy_history;
};

/// Least-squares slope of -log w against log|x| over lo <= |x| <= hi.
double decay_exponent(const Grid& grid, std::span<const double> w, double lo, double hi);

GroundStateResult solve_ground_state(const Params& params, const WindowConfig& window, const SolverConfig& config,
                                     int workers = 1);

/// Nehari-projected descent on the peak energy over interior fields.
///
/// `initial` holds interior values; when empty a boundary-centred Gaussian
/// bump is used (only valid with Init::gaussian_bump). Returns a
/// constant-branch result instead of failing when the iterate flattens.
LeastEnergyResult solve_least_energy(const Params& params, const KernelTable& table, const SolverConfig& config,
                                     std::span<const double> initial = {});

/// Interior values of w((x - x0)/d^{1/(2s)}) on the grid.
std::vector<double> transplant(const GroundStateResult& gs, const Grid& grid, const Params& params, double x0);

/// Interior values 1 + 2 exp(-((x - x0)/width)^2).
std::vector<double> gaussian_bump(const Grid& grid, double x0, double width);

/// Grid per d for sweeps: h = min(h_max, d^{1/(2s)}/resolution), collar r_ext_factor (b - a).
struct GridPolicy {
    double a = 0.0;
    double b = 1.0;
    double h_max = 0.02;
    double resolution = 10.0;
    double r_ext_factor = 2.0;

    Grid grid_for(double d, double s) const;
};

SweepRecord make_record(const LeastEnergyResult& result, const Params& params, const KernelTable& table);

/// Thrown when a member run of a sweep fails; carries the records so far.
class SweepError : public Error {
public:
    SweepError(const std::string& what, std::vector<SweepRecord> partial)
        : Error(what), records(std::move(partial)) {}
    std::vector<SweepRecord> records;
};

using SweepObserver = std::function<void(const SweepRecord&, const LeastEnergyResult&, const KernelTable&)>;

/// Continuation in d (strictly decreasing). Each solve is warm-started from
/// the previous nonconstant solution; after a constant result the next solve
/// starts from the transplanted ground state when one is given.
std::vector<SweepRecord> sweep(std::span<const double> d_values, const Params& params, const GridPolicy& policy,
                               const SolverConfig& config, const GroundStateResult* ground = nullptr,
                               int workers = 1, const SweepObserver& observer = {});

}  // namespace fracneumann
