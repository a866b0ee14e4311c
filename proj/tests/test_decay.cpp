#include "novikov/decay.hpp"
#include "novikov/profiles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace novikov;

namespace {

SpectralField exp_tail(const Grid1D& g, double amp, double rate, double shift = 0.0)
{
    return SpectralField::sample(g, [&](double x) { return amp * std::exp(-rate * std::abs(x - shift)); });
}

// amp * exp(-rate |x|) blended smoothly to zero over the last tenth of the half domain.
SpectralField cut_exp_tail(const Grid1D& g, double amp, double rate)
{
    const double half = 0.5 * g.length();
    return SpectralField::sample(g, [&](double x) {
        const double s = (std::abs(x) - 0.9 * half) / (0.1 * half);
        const double cut = s <= 0.0 ? 1.0 : 0.5 * (1.0 + std::cos(M_PI * std::min(s, 1.0)));
        return amp * std::exp(-rate * std::abs(x)) * cut;
    });
}

SpectralField bumps(const Grid1D& g, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return novikov::testing::random_bumps(g, rng, 1.0);
}

} // namespace

TEST(Weights, CapsAndLowerBound)
{
    for (const auto& w : {WeightSpec::phi_left(0.5, 20), WeightSpec::phi_right(0.3, 10), WeightSpec::phi_min(20),
                          WeightSpec::exp_sym(2.0), WeightSpec::psi(0.5, 0.5, 1.0, 2.0)}) {
        for (double x = -100.0; x <= 100.0; x += 0.37) {
            EXPECT_GE(w.log_value(x), 0.0) << w.describe();
            EXPECT_LE(w.log_value(x), w.log_cap() + 1e-14) << w.describe();
        }
    }
    EXPECT_DOUBLE_EQ(WeightSpec::phi_left(0.5, 20).value(-30.0), std::exp(10.0));
    EXPECT_DOUBLE_EQ(WeightSpec::phi_left(0.5, 20).value(-4.0), std::exp(2.0));
    EXPECT_EQ(WeightSpec::phi_left(0.5, 20).value(3.0), 1.0);
    EXPECT_DOUBLE_EQ(WeightSpec::phi_right(0.5, 20).value(4.0), std::exp(2.0));
    EXPECT_DOUBLE_EQ(WeightSpec::phi_min(20).value(1.0), std::exp(1.0));
    EXPECT_DOUBLE_EQ(WeightSpec::phi_min(20).value(-10.0), 20.0);
    EXPECT_NEAR(WeightSpec::psi(1.0, 2.0, 1.0, 1.0).value(2.0), std::exp(4.0) * 3.0 * std::log(M_E + 2.0), 1e-10);
}

TEST(Weights, AlphaHypothesisEnforced)
{
    EXPECT_THROW(WeightSpec::phi_left(1.5, 20), std::invalid_argument);
    EXPECT_THROW(WeightSpec::phi_right(1.0, 20), std::invalid_argument);
    EXPECT_THROW(WeightSpec::phi_left(0.0, 20), std::invalid_argument);
    auto w = WeightSpec::phi_left(0.5, 20);
    w.alpha = 1.5;
    try {
        check_weight(w);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("(0, 1)"), std::string::npos);
    }
    EXPECT_EQ(weight_kind_from_string("phi_min"), WeightKind::phi_min);
    EXPECT_THROW(weight_kind_from_string("gauss"), std::invalid_argument);
}

TEST(WeightedNorms, ExactExamples)
{
    Grid1D g(1024, 60.0);
    auto f = exp_tail(g, 1.0, 0.6);
    EXPECT_NEAR(weighted_sup(f, WeightSpec::exp_sym(0.5)), 1.0, 1e-15);

    Grid1D wide(2048, 80.0);
    auto steep = exp_tail(wide, 1.0, 6.0);
    const double s = weighted_sup(steep, WeightSpec::exp_sym(5.0));
    EXPECT_TRUE(std::isfinite(s));
    EXPECT_NEAR(s, 1.0, 1e-15);
    EXPECT_EQ(weighted_sup(SpectralField::zeros(g), WeightSpec::exp_sym(3.0)), 0.0);
    EXPECT_EQ(weighted_lp(SpectralField::zeros(g), WeightSpec::exp_sym(3.0), 4.0), 0.0);
}

TEST(WeightedNorms, LogSpaceMatchesDirectProduct)
{
    Grid1D g(512, 40.0);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto f = bumps(g, seed);
        for (double a : {0.3, 1.0, 2.5}) {
            const auto w = WeightSpec::exp_sym(a);
            double sup = 0.0, sum = 0.0;
            for (int i = 0; i < g.n_points(); ++i) {
                const double v = std::exp(a * std::abs(g.x(i))) * std::abs(f.value(i));
                sup = std::max(sup, v);
                sum += v * v;
            }
            EXPECT_NEAR(weighted_sup(f, w), sup, 1e-12 * sup);
            const double l2 = std::sqrt(sum * g.spacing());
            EXPECT_NEAR(weighted_lp(f, w, 2.0), l2, 1e-12 * l2);
        }
    }
}

TEST(WeightedNorms, PowerLadderApproachesSup)
{
    Grid1D g(1024, 60.0);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        auto f = bumps(g, seed);
        const auto w = WeightSpec::exp_sym(0.4);
        const double sup = weighted_sup(f, w);
        double prev = std::numeric_limits<double>::infinity();
        for (int k : {1, 2, 4, 8, 16}) {
            const double gap = std::abs(weighted_lp(f, w, 2.0 * k) - sup);
            EXPECT_LT(gap, prev) << "k=" << k;
            prev = gap;
        }
        EXPECT_EQ(weighted_lp(f, w, std::numeric_limits<double>::infinity()), sup);
    }
}

TEST(WeightedNorms, PhiNormsGrowWithN)
{
    Grid1D g(512, 60.0);
    auto f = bumps(g, 7);
    double prev_sup = 0.0, prev_l2 = 0.0;
    for (double n : {1.0, 5.0, 10.0, 20.0, 40.0}) {
        const auto w = WeightSpec::phi_left(0.5, n);
        const double s = weighted_sup(f, w), l2 = weighted_lp(f, w, 2.0);
        EXPECT_GE(s, prev_sup);
        EXPECT_GE(l2, prev_l2);
        prev_sup = s;
        prev_l2 = l2;
    }
}

TEST(CheckWeight, PhiPropertiesAndStableC0)
{
    std::vector<double> c0;
    for (double n : {10.0, 20.0, 40.0}) {
        auto r = check_weight(WeightSpec::phi_left(0.5, n));
        EXPECT_TRUE(r.property_i);
        EXPECT_FALSE(r.literal_nonnegative); // decreasing toward +x
        EXPECT_NEAR(r.max_derivative_ratio, 0.5, 1e-3);
        EXPECT_TRUE(r.c0_finite);
        c0.push_back(r.c0);
        auto m = check_weight(WeightSpec::phi_right(0.5, n));
        EXPECT_TRUE(m.property_i);
        EXPECT_TRUE(m.literal_nonnegative);
        EXPECT_NEAR(m.c0, r.c0, 1e-9 * r.c0);
    }
    for (double c : c0) {
        EXPECT_NEAR(c, c0.back(), 0.01 * c0.back());
    }
}

TEST(CheckWeight, ExponentialWeightClosedForm)
{
    // e^{a|x|} (g * e^{-a|.|})(x) increases to 1/(1 - a^2); the derivative kernel to a/(1 - a^2).
    for (double a : {0.3, 0.5}) {
        auto r = check_weight(WeightSpec::exp_sym(a));
        EXPECT_TRUE(r.c0_finite);
        EXPECT_NEAR(r.c0, 1.0 / (1.0 - a * a), 1e-6);
        EXPECT_NEAR(r.c0_derivative, a / (1.0 - a * a), 1e-6);
    }
}

TEST(CheckWeight, DivergenceAboveOne)
{
    auto ok = check_weight(WeightSpec::exp_sym(0.99));
    EXPECT_TRUE(ok.c0_finite);
    EXPECT_LT(ok.c0, 1.0 / (1.0 - 0.99 * 0.99));
    auto bad = check_weight(WeightSpec::exp_sym(1.5));
    EXPECT_FALSE(bad.c0_finite);
    EXPECT_NEAR(bad.c0_growth_rate, 0.5, 0.01);
    EXPECT_FALSE(bad.property_i);
    EXPECT_FALSE(bad.notes.empty());
}

TEST(TailFit, ConstructedExponential)
{
    Grid1D g(1024, 60.0);
    auto fit = fit_tail_rate(cut_exp_tail(g, 3.0, 0.7));
    EXPECT_NEAR(fit.rate, 0.7, 1e-3);
    EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-3);
    EXPECT_FALSE(fit.super_exponential);
    EXPECT_NEAR(fit.window_lo, 7.5, g.spacing());
    EXPECT_NEAR(fit.window_hi, 13.5, g.spacing());
    for (auto side : {TailSide::left, TailSide::right}) {
        TailOptions o;
        o.side = side;
        EXPECT_NEAR(fit_tail_rate(cut_exp_tail(g, 3.0, 0.7), o).rate, 0.7, 1e-3);
    }
}

TEST(TailFit, GaussianFlaggedSuperExponential)
{
    Grid1D g(1024, 60.0);
    auto f = sample_profile(g, {ProfileFamily::gaussian, 1.0, 0.0, 3.0});
    auto fit = fit_tail_rate(f);
    EXPECT_TRUE(fit.super_exponential);
    ASSERT_TRUE(fit.warning.has_value());
    EXPECT_GT(fit.outer_rate, fit.inner_rate);
}

TEST(TailFit, FloorEndsWindow)
{
    Grid1D g(1024, 60.0);
    // Zero beyond |x| = 10, well inside the default window [7.5, 13.5].
    auto f = SpectralField::sample(g, [](double x) { return std::abs(x) < 10.0 ? std::exp(-0.5 * std::abs(x)) : 0.0; });
    auto fit = fit_tail_rate(f);
    EXPECT_LT(fit.window_hi, 10.0);
    EXPECT_GT(fit.window_hi, 10.0 - 2.0 * g.spacing());
    EXPECT_NEAR(fit.rate, 0.5, 1e-9);
}

TEST(TailFit, TooFewPointsNamesFloorAndWindow)
{
    Grid1D g(512, 60.0);
    auto f = sample_profile(g, {ProfileFamily::gaussian, 1.0, 0.0, 0.5});
    EXPECT_EQ(usable_tail_points(f), 0);
    try {
        fit_tail_rate(f);
        FAIL();
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("floor"), std::string::npos);
        EXPECT_NE(msg.find("window"), std::string::npos);
    }
}

TEST(TailFit, TranslationMovesWindowNotRate)
{
    Grid1D g(2048, 120.0);
    TailOptions o;
    o.side = TailSide::right;
    auto base = fit_tail_rate(exp_tail(g, 1.0, 0.6), o);
    auto moved = fit_tail_rate(exp_tail(g, 1.0, 0.6, 2.0), o);
    EXPECT_NEAR(base.rate, moved.rate, 1e-9);
    EXPECT_NEAR(moved.intercept - base.intercept, 1.2, 1e-9);
    o.window_lo_fraction = 0.35;
    o.window_hi_fraction = 0.55;
    auto shifted = fit_tail_rate(exp_tail(g, 1.0, 0.6, 2.0), o);
    EXPECT_GT(shifted.window_lo, moved.window_lo);
    EXPECT_NEAR(shifted.rate, 0.6, 1e-9);
}

TEST(DecayExperiment, ComponentsAndNames)
{
    Grid1D g(256, 40.0);
    auto s = novikov::testing::random_state(g, 3);
    EXPECT_EQ(decay_components().size(), 8u);
    for (const auto& c : decay_components()) {
        EXPECT_EQ(decay_component(s, c).grid(), g);
    }
    EXPECT_THROW(decay_component(s, "w"), std::invalid_argument);
}

TEST(DecayExperiment, SlowTailsPersist)
{
    Grid1D g(512, 60.0);
    ProfileSpec p{ProfileFamily::sech, 1.0, 0.0};
    p.rate = 0.5;
    auto f = sample_profile(g, p);
    DecayScenario sc{PrimitiveState{f, f, f, 0.0}, {}};
    sc.stepper.dt = 5e-3;
    sc.stepper.t_end = 0.25;
    sc.stepper.snapshot_stride = 10;
    sc.sample_times = {0.0, 0.25};
    for (const char* c : {"rho", "u", "v", "m"}) {
        sc.expectations.push_back({c, 0.475});
    }
    auto rep = decay_persistence_experiment(sc);
    EXPECT_TRUE(rep.pass) << rep.reason;
    EXPECT_EQ(rep.fits.size(), 16u);
    ASSERT_EQ(rep.verdicts.size(), 4u);
    for (const auto& v : rep.verdicts) {
        EXPECT_DOUBLE_EQ(v.time, 0.25);
        EXPECT_GT(v.margin, 0.0);
        EXPECT_LT(v.rate, 0.52);
    }
    EXPECT_FALSE(rep.warnings.empty()); // sech(x/2) does not fit under L = 60 to 1e-12
}

TEST(DecayExperiment, CompactDataReportsBelowFloor)
{
    Grid1D g(512, 60.0);
    auto rho = sample_profile(g, {ProfileFamily::gaussian, 0.5, 0.0, 0.8});
    DecayScenario sc{PrimitiveState{rho, SpectralField::zeros(g), SpectralField::zeros(g), 0.0}, {}};
    sc.stepper.dt = 0.05;
    sc.stepper.t_end = 0.1;
    sc.sample_times = {0.1};
    sc.expectations = {{"rho", 1.0}};
    auto rep = decay_persistence_experiment(sc);
    ASSERT_EQ(rep.verdicts.size(), 1u);
    EXPECT_TRUE(std::isinf(rep.verdicts[0].rate));
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.fits[0].status, "below_floor");
}

TEST(DecayExperiment, AbortPropagates)
{
    Grid1D g(256, 40.0);
    auto f = sample_profile(g, {ProfileFamily::gaussian, 2.0, 0.0, 2.0});
    DecayScenario sc{PrimitiveState{f, f, f, 0.0}, {}};
    sc.stepper.dt = 0.5;
    sc.stepper.t_end = 1.0;
    sc.sample_times = {1.0};
    sc.expectations = {{"u", 0.0}};
    auto rep = decay_persistence_experiment(sc);
    EXPECT_EQ(rep.run_status, RunStatus::aborted);
    EXPECT_FALSE(rep.pass);
    EXPECT_NE(rep.reason.find("aborted"), std::string::npos);
    EXPECT_THROW(decay_persistence_experiment(DecayScenario{PrimitiveState{f, f, f, 0.0}, {}}),
                 std::invalid_argument);
}
