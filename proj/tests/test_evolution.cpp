#include "novikov/evolution.hpp"
#include "novikov/profiles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace novikov;
using novikov::testing::max_diff;
using novikov::testing::random_state;

namespace {

PrimitiveState smooth_state(const Grid1D& g)
{
    return {sample_profile(g, {ProfileFamily::gaussian, 0.6, -1.0, 2.0}),
            sample_profile(g, {ProfileFamily::gaussian, 0.9, 0.5, 2.5}),
            sample_profile(g, {ProfileFamily::gaussian, 0.8, 1.0, 2.2}), 0.0};
}

double state_diff(const PrimitiveState& a, const PrimitiveState& b)
{
    return std::max({max_diff(a.rho, b.rho), max_diff(a.u, b.u), max_diff(a.v, b.v)});
}

} // namespace

TEST(Stepper, ConfigValidation)
{
    StepperConfig c;
    c.dt = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.scheme = "euler";
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.cfl_guard = 1.5;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.dt = 0.3;
    c.t_end = 1.0;
    EXPECT_EQ(c.n_steps(), 4);
    EXPECT_DOUBLE_EQ(c.effective_dt(), 0.25);
}

TEST(Evolve, ZeroStateStaysZero)
{
    Grid1D g(64, 40.0);
    StepperConfig cfg;
    cfg.dt = 0.1;
    cfg.t_end = 1.0;
    for (auto form : {Formulation::momentum, Formulation::convolution}) {
        auto traj = evolve(PrimitiveState::zeros(g), cfg, form);
        ASSERT_TRUE(traj.ok());
        EXPECT_EQ(traj.snapshots.size(), 11u);
        for (const auto& s : traj.snapshots) {
            EXPECT_EQ(s.u.max_abs() + s.v.max_abs() + s.rho.max_abs(), 0.0);
        }
    }
}

TEST(Evolve, SnapshotStrideAndTimes)
{
    Grid1D g(64, 40.0);
    StepperConfig cfg;
    cfg.dt = 0.1;
    cfg.t_end = 1.0;
    cfg.snapshot_stride = 3;
    auto traj = evolve(smooth_state(g), cfg);
    ASSERT_TRUE(traj.ok());
    auto t = traj.times();
    ASSERT_EQ(t.size(), 5u); // 0, 0.3, 0.6, 0.9, 1.0
    EXPECT_DOUBLE_EQ(t[1], 0.30000000000000004);
    EXPECT_DOUBLE_EQ(t.back(), 1.0);
    for (std::size_t i = 1; i < t.size(); ++i) {
        EXPECT_GT(t[i], t[i - 1]);
    }
    EXPECT_EQ(traj.diagnostics.size(), 11u);
}

TEST(Evolve, MassConserved)
{
    Grid1D g(512, 40.0 * M_PI);
    StepperConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 1.0;
    cfg.snapshot_stride = 100;
    auto traj = evolve(smooth_state(g), cfg);
    ASSERT_TRUE(traj.ok());
    const double m0 = traj.diagnostics.front().mass;
    for (const auto& d : traj.diagnostics) {
        EXPECT_LT(std::abs(d.mass - m0) / std::abs(m0), 1e-9);
    }
}

TEST(Evolve, RichardsonOrder)
{
    Grid1D g(256, 40.0 * M_PI);
    auto s0 = smooth_state(g);
    StepperConfig cfg;
    cfg.t_end = 1.0;
    cfg.snapshot_stride = 1000000;
    std::vector<PrimitiveState> finals;
    for (double dt : {0.1, 0.05, 0.025}) {
        cfg.dt = dt;
        auto traj = evolve(s0, cfg);
        ASSERT_TRUE(traj.ok());
        finals.push_back(traj.final_state());
    }
    const double e1 = state_diff(finals[0], finals[1]);
    const double e2 = state_diff(finals[1], finals[2]);
    EXPECT_GE(std::log2(e1 / e2), 3.8) << e1 << " " << e2;
}

TEST(Evolve, FormulationsAgree)
{
    Grid1D g(256, 40.0 * M_PI);
    StepperConfig cfg;
    cfg.dt = 0.02;
    cfg.t_end = 0.5;
    cfg.snapshot_stride = 1000;
    auto a = evolve(smooth_state(g), cfg, Formulation::momentum);
    auto b = evolve(smooth_state(g), cfg, Formulation::convolution);
    ASSERT_TRUE(a.ok() && b.ok());
    EXPECT_LT(state_diff(a.final_state(), b.final_state()), 1e-9);
}

TEST(Evolve, ReversibleWithNegatedRhs)
{
    Grid1D g(256, 40.0 * M_PI);
    auto s0 = smooth_state(g);
    StepperConfig cfg;
    cfg.t_end = 0.5;
    cfg.snapshot_stride = 1000;
    double prev = 0.0;
    for (double dt : {0.05, 0.025}) {
        cfg.dt = dt;
        cfg.negate_rhs = false;
        auto fwd = evolve(s0, cfg);
        cfg.negate_rhs = true;
        auto back = evolve(fwd.final_state(), cfg);
        const double err = state_diff(back.final_state(), s0);
        EXPECT_LT(err, 1e-5);
        if (prev > 0.0) {
            EXPECT_GT(prev / err, 10.0);
        }
        prev = err;
    }
}

TEST(Evolve, NovikovReductionKeepsUEqualV)
{
    Grid1D g(256, 40.0 * M_PI);
    auto s = apply_reduction(smooth_state(g), ReductionTag::novikov).state;
    StepperConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 1.0;
    cfg.snapshot_stride = 10;
    auto traj = evolve(s, cfg);
    ASSERT_TRUE(traj.ok());
    for (const auto& snap : traj.snapshots) {
        EXPECT_LT(max_diff(snap.u, snap.v), 1e-9);
        EXPECT_EQ(snap.rho.max_abs(), 0.0);
        EXPECT_EQ(snap.reduction, ReductionTag::novikov);
    }
}

TEST(Evolve, CflGuardAbortsWithPartialTrajectory)
{
    Grid1D g(256, 40.0);
    auto s0 = smooth_state(g);
    StepperConfig cfg;
    cfg.dt = 0.5;
    cfg.t_end = 2.0;
    auto traj = evolve(s0, cfg);
    EXPECT_FALSE(traj.ok());
    EXPECT_NE(traj.reason.find("CFL"), std::string::npos);
    ASSERT_EQ(traj.snapshots.size(), 1u);
    EXPECT_EQ(traj.snapshots[0].time, 0.0);
}
