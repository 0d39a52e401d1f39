#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracneumann/records.hpp"
#include "fracneumann/solvers.hpp"

namespace fracneumann {

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double d_min = 0.0;  ///< fit window
    double d_max = 0.0;
    std::size_t count = 0;
};

/// Least-squares line through (log x, log y).
FitResult log_log_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Record field selector: "r:<r>" for ∫u^r (r in {0.5, 1, 2, p+1, 4}; "r:p+1"
/// is accepted), "cd" for c_d, "sup" for sup u.
struct Quantity {
    enum class Kind { lr, cd, sup };
    Kind kind = Kind::cd;
    double r = 0.0;

    static Quantity parse(const std::string& text, double p);
    double value(const SweepRecord& rec, double p) const;
    std::string name() const;
};

/// Nonconstant records without the one at the largest d.
std::vector<SweepRecord> fit_window(const std::vector<SweepRecord>& records);

/// Slope of log(quantity) against log d over fit_window(records). Throws
/// Error with fewer than 4 usable records or less than one decade of d.
FitResult scaling_fit(const std::vector<SweepRecord>& records, const Quantity& q, double p);

struct MigrationResult {
    double K_star = 0.0;           ///< max dist_boundary/d^{1/(2s)} over nonconstant records
    bool boundary = false;         ///< argmax within h of ∂Ω at the two smallest d
    std::optional<FitResult> fit;  ///< log dist against log d, when every distance is positive
    std::string verdict() const { return boundary ? "boundary" : "interior"; }
};

/// Record spacing h is taken from the record, or from policy when the record
/// was read back from CSV.
MigrationResult boundary_migration(const std::vector<SweepRecord>& records, double s, const GridPolicy& policy);

/// sup over |y| <= 5 of |φ(y)/φ(0) - w(y)/w(0)| with φ(y) = u(y d^{1/(2s)} + z),
/// z the argmax. In the boundary cell only the inward half-line is used.
double profile_compare(const LeastEnergyResult& result, const Grid& grid, const GroundStateResult& gs,
                       const Params& params);

/// max/min over fit_window(records) of ∫u^r / d^{n/(2s)}.
double lr_ratio_spread(const std::vector<SweepRecord>& records, double r, const Params& params);

/// Largest d* such that records with d > d* are constant and records with d < d* are not.
/// Empty when the branches interleave or one of them is missing.
std::optional<double> nonconstancy_onset(const std::vector<SweepRecord>& records);

struct VerifyOptions {
    WindowConfig window;
    GridPolicy policy;
    SolverConfig solver;
    double solve_d = 0.1;       ///< d of the Neumann identity solve
    double kernel_scale = 1.0;  ///< multiplies every kernel weight (fault injection)
    int workers = 1;
    std::uint64_t seed = 7;
};

struct VerifyItem {
    enum class Status { pass, fail, precondition };
    std::string name;
    Status status = Status::fail;
    std::string detail;
};

struct VerifyReport {
    std::vector<VerifyItem> items;
    bool all_passed() const;
    const VerifyItem* find(const std::string& name) const;
};

const char* to_string(VerifyItem::Status status);

VerifyReport verify_suite(const Params& params, const VerifyOptions& options = {});

}  // namespace fracneumann
