#include <gtest/gtest.h>

#include <cmath>

#include "fracneumann/config.hpp"
#include "fracneumann/error.hpp"
#include "fracneumann/harness.hpp"
#include "fracneumann/kernel.hpp"
#include "fracneumann/neumann.hpp"

using namespace fracneumann;

namespace {

// Records with c_d = 7 d^2, argmax at K d^2 from the left boundary.
std::vector<SweepRecord> synthetic(double K, bool leading_constant = true) {
    std::vector<SweepRecord> out;
    if (leading_constant) {
        SweepRecord r;
        r.d = 2.0;
        r.c_d = 0.1;
        r.constant_branch = true;
        out.push_back(r);
    }
    for (double d : {1.0, 0.5, 0.2, 0.1, 0.05, 0.02, 0.01}) {
        SweepRecord r;
        r.d = d;
        r.c_d = 7.0 * d * d;
        r.sup_u = 3.0;
        r.dist_boundary = K * d * d;
        r.argmax_x = r.dist_boundary;
        r.L1 = 2.0 * d * d;
        r.L2 = 3.0 * d * d * (1.0 + 0.01 * d);
        r.h = 0.1 * d * d;
        out.push_back(r);
    }
    return out;
}

const GroundStateResult& ground() {
    static const GroundStateResult gs = solve_ground_state(Params{}, WindowConfig{}, SolverConfig{});
    return gs;
}

LeastEnergyResult fake_result(const KernelTable& t, const Params& prm, std::size_t centre) {
    const Grid& g = t.grid();
    const double x0 = g.nodes[centre];
    LeastEnergyResult res(extend(transplant(ground(), g, prm, x0), t));
    res.argmax_x = x0;
    res.M_d = res.u[centre];
    return res;
}

}  // namespace

TEST(LogLogFit, RecoversPowerLaw) {
    const auto fit = scaling_fit(synthetic(3.0), Quantity::parse("cd", 1.5), 1.5);
    EXPECT_NEAR(fit.slope, 2.0, 1e-12);
    EXPECT_NEAR(std::exp(fit.intercept), 7.0, 1e-10);
    EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
    EXPECT_EQ(fit.count, 6u);
    EXPECT_DOUBLE_EQ(fit.d_max, 0.5);
    EXPECT_DOUBLE_EQ(fit.d_min, 0.01);
    const auto flat = scaling_fit(synthetic(3.0), Quantity::parse("sup", 1.5), 1.5);
    EXPECT_NEAR(flat.slope, 0.0, 1e-12);
}

TEST(LogLogFit, NeedsEnoughRecordsAndOneDecade) {
    auto recs = synthetic(3.0);
    recs.resize(5);
    EXPECT_THROW(scaling_fit(recs, Quantity{}, 1.5), Error);
    auto narrow = synthetic(3.0);
    for (auto& r : narrow) r.d = 1.0 + 0.01 * r.d;
    EXPECT_THROW(scaling_fit(narrow, Quantity{}, 1.5), Error);
}

TEST(Quantity, ParsesSelectors) {
    const double p = 1.5;
    EXPECT_EQ(Quantity::parse("cd", p).kind, Quantity::Kind::cd);
    EXPECT_EQ(Quantity::parse("sup", p).kind, Quantity::Kind::sup);
    EXPECT_DOUBLE_EQ(Quantity::parse("r:p+1", p).r, 2.5);
    EXPECT_DOUBLE_EQ(Quantity::parse("r:0.5", p).r, 0.5);
    EXPECT_THROW(Quantity::parse("r:3", p), PreconditionError);
    EXPECT_THROW(Quantity::parse("r:x", p), PreconditionError);
    EXPECT_THROW(Quantity::parse("mass", p), PreconditionError);
    SweepRecord r;
    r.L2 = 4.0;
    r.Lp1 = 5.0;
    EXPECT_EQ(Quantity::parse("r:2", p).value(r, p), 4.0);
    EXPECT_EQ(Quantity::parse("r:p+1", p).value(r, p), 5.0);
}

TEST(FitWindow, DropsConstantsAndLargestD) {
    const auto w = fit_window(synthetic(3.0));
    ASSERT_EQ(w.size(), 6u);
    for (const auto& r : w) {
        EXPECT_FALSE(r.constant_branch);
        EXPECT_LT(r.d, 1.0);
    }
}

TEST(Migration, InteriorMaximumAtFixedScaledDistance) {
    const auto m = boundary_migration(synthetic(3.0), 0.25, GridPolicy{});
    EXPECT_NEAR(m.K_star, 3.0, 1e-12);
    EXPECT_FALSE(m.boundary);
    EXPECT_EQ(m.verdict(), "interior");
    ASSERT_TRUE(m.fit.has_value());
    EXPECT_NEAR(m.fit->slope, 2.0, 1e-12);
}

TEST(Migration, BoundaryCellVerdict) {
    const auto m = boundary_migration(synthetic(0.05), 0.25, GridPolicy{});
    EXPECT_TRUE(m.boundary);
    EXPECT_EQ(m.verdict(), "boundary");
    auto recs = synthetic(0.05);
    for (auto& r : recs) r.h = NAN;
    EXPECT_TRUE(boundary_migration(recs, 0.25, GridPolicy{}).boundary);
    recs.resize(4);
    EXPECT_THROW(boundary_migration(recs, 0.25, GridPolicy{}), Error);
}

TEST(LrRatio, SpreadOfScaledIntegrals) {
    const Params prm;
    EXPECT_NEAR(lr_ratio_spread(synthetic(3.0), 1.0, prm), 1.0, 1e-12);
    EXPECT_NEAR(lr_ratio_spread(synthetic(3.0), 2.0, prm), 1.005 / 1.0001, 1e-12);
}

TEST(NonconstancyOnset, GeometricMidpoint) {
    const auto onset = nonconstancy_onset(synthetic(3.0));
    ASSERT_TRUE(onset.has_value());
    EXPECT_NEAR(*onset, std::sqrt(2.0), 1e-15);
    EXPECT_FALSE(nonconstancy_onset(synthetic(3.0, false)).has_value());
    auto mixed = synthetic(3.0);
    mixed[4].constant_branch = true;
    EXPECT_FALSE(nonconstancy_onset(mixed).has_value());
}

TEST(ProfileCompare, ExactTransplantHasNoDiscrepancy) {
    Params prm;
    prm.d = 0.2;
    const Grid g = build_grid(0.0, 1.0, 0.004, 2.0);
    const KernelTable t(g, prm);
    const std::size_t mid = g.first_interior + g.interior_count / 2;
    EXPECT_LT(profile_compare(fake_result(t, prm, mid), g, ground(), prm), 1e-12);
    EXPECT_LT(profile_compare(fake_result(t, prm, g.first_interior), g, ground(), prm), 1e-12);
    EXPECT_LT(profile_compare(fake_result(t, prm, g.end_interior() - 1), g, ground(), prm), 1e-12);
}

TEST(ProfileCompare, DetectsWrongScale) {
    Params prm;
    prm.d = 0.2;
    const Grid g = build_grid(0.0, 1.0, 0.004, 2.0);
    const KernelTable t(g, prm);
    const std::size_t mid = g.first_interior + g.interior_count / 2;
    const auto res = fake_result(t, prm, mid);
    Params other = prm;
    other.d = 0.3;
    EXPECT_GT(profile_compare(res, g, ground(), other), 0.05);
}

TEST(Verify, FullSuitePassesExceptUpperBound) {
    const auto report = verify_suite(Params{});
    for (const auto& item : report.items) {
        if (item.name == "ground-state upper bound") continue;
        EXPECT_EQ(item.status, VerifyItem::Status::pass) << item.name << ": " << item.detail;
    }
    ASSERT_NE(report.find("kernel symbol"), nullptr);
    EXPECT_EQ(report.find("no such item"), nullptr);
}

TEST(Verify, TamperedKernelFailsSymbolCheck) {
    VerifyOptions opt;
    opt.kernel_scale = 0.5;
    const auto report = verify_suite(Params{}, opt);
    const auto* item = report.find("kernel symbol");
    ASSERT_NE(item, nullptr);
    EXPECT_EQ(item->status, VerifyItem::Status::fail);
    EXPECT_FALSE(report.all_passed());
}

TEST(Verify, NeumannItemsGatedAboveExponentBound) {
    Params prm;
    prm.p = 1.7;
    const auto report = verify_suite(prm);
    EXPECT_EQ(report.find("critical-point identities")->status, VerifyItem::Status::precondition);
    EXPECT_EQ(report.find("nonconstancy")->status, VerifyItem::Status::precondition);
    EXPECT_EQ(report.find("kernel symbol")->status, VerifyItem::Status::pass);
}

TEST(Config, ParsesKnownKeys) {
    RunConfig cfg;
    apply_config_text("# comment\ns = 0.4\np = 1.3\ndomain.a = -1\ndomain.b = 2  # trailing\n"
                      "grid.h = 0.01\ngrid.Rext = 7\nsolver.tol = 1e-9\nsolver.max_iters = 77\n"
                      "solver.step = 0.2\nsweep.d_max = 0.5\nsweep.d_min = 0.05\nsweep.points = 5\n",
                      cfg);
    EXPECT_EQ(cfg.params.s, 0.4);
    EXPECT_EQ(cfg.params.p, 1.3);
    EXPECT_EQ(cfg.a, -1.0);
    EXPECT_EQ(cfg.b, 2.0);
    EXPECT_EQ(cfg.h.value(), 0.01);
    EXPECT_EQ(cfg.r_ext.value(), 7.0);
    EXPECT_EQ(cfg.solver.tol_residual, 1e-9);
    EXPECT_EQ(cfg.solver.max_iters, 77);
    EXPECT_EQ(cfg.solver.step, 0.2);
    EXPECT_EQ(cfg.d_max, 0.5);
    EXPECT_EQ(cfg.d_min, 0.05);
    EXPECT_EQ(cfg.points, 5);
    const GridPolicy pol = cfg.policy();
    EXPECT_EQ(pol.a, -1.0);
    EXPECT_EQ(pol.b, 2.0);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
    RunConfig cfg;
    EXPECT_THROW(apply_config_text("grid.size = 3\n", cfg), Error);
    EXPECT_THROW(apply_config_text("s = abc\n", cfg), Error);
    EXPECT_THROW(apply_config_text("s 0.3\n", cfg), Error);
    EXPECT_THROW(load_config_file("/nonexistent/fracneumann.cfg", cfg), Error);
}

TEST(Config, GeometricSweepValues) {
    const auto ds = RunConfig::d_values_for(1.0, 1e-2, 13);
    ASSERT_EQ(ds.size(), 13u);
    EXPECT_EQ(ds.front(), 1.0);
    EXPECT_NEAR(ds[6], 0.1, 1e-15);
    EXPECT_NEAR(ds.back(), 1e-2, 1e-17);
    for (std::size_t i = 1; i < ds.size(); ++i) EXPECT_LT(ds[i], ds[i - 1]);
    EXPECT_EQ(RunConfig::d_values_for(0.3, 0.1, 1), std::vector<double>{0.3});
    EXPECT_THROW(RunConfig::d_values_for(0.1, 0.3, 4), PreconditionError);
    EXPECT_THROW(RunConfig::d_values_for(1.0, 0.1, 0), PreconditionError);
}
