#include <gtest/gtest.h>

#include <gaussopt/gaussopt.hpp>

using namespace gaussopt;

namespace {

struct Chain {
    ChainModel chain;
    TangentFrame frame;
    Objective f;
};

Chain kg(int N, double m)
{
    Chain s{klein_gordon_chain(N, m), pure_state_frame(Kind::boson, N), {}};
    s.f = energy_objective(s.chain.H, standard_vacuum(Kind::boson, N), s.frame);
    return s;
}

} // namespace

TEST(Config, Validation)
{
    OptimizerConfig c;
    EXPECT_NO_THROW(c.validate());
    c.grad_tol = 0;
    EXPECT_THROW(c.validate(), Error);
    c = OptimizerConfig{};
    c.prune_keep_fraction = 1.5;
    EXPECT_THROW(c.validate(), Error);
    c = OptimizerConfig{};
    c.starts = 0;
    EXPECT_THROW(c.validate(), Error);
}

TEST(Config, Seeds)
{
    OptimizerConfig c;
    c.starts = 3;
    c.base_seed = 10;
    EXPECT_EQ(c.seed_list(), (std::vector<std::uint64_t>{10, 11, 12}));
    c.seeds = {5, 7};
    EXPECT_EQ(c.seed_list(), (std::vector<std::uint64_t>{5, 7}));
}

TEST(Gradient, VanishesAtGroundState)
{
    Chain s = kg(3, 0.7);
    // M with M Mᵀ = G_ground: symplectic square root from the Williamson form
    Williamson w = williamson(s.chain.gamma);
    GradientVector g = gradient(s.f, w.S, s.frame);
    EXPECT_LT(g.norm, 1e-10);
}

TEST(Gradient, OrthonormalFrameCoefficients)
{
    Chain s = kg(2, 1.0);
    Mat M = sample_group(Kind::boson, 2, 4, 0.5);
    GradientVector g = gradient(s.f, M, s.frame);
    EXPECT_LT(max_abs(Vec(g.coeffs + s.f.differential(M))), 1e-14);
    EXPECT_NEAR(g.norm, s.f.differential(M).norm(), 1e-14);
}

TEST(Run, ConvergesMonotonically)
{
    Chain s = kg(2, 1.0);
    OptimizerConfig cfg;
    cfg.keep_trace = true;
    OptimizationRun r = run(s.f, s.frame, sample_group(Kind::boson, 2, 3, 0.5), cfg, 3);
    EXPECT_TRUE(r.monotone);
    EXPECT_NEAR(r.final_value, (1 + std::sqrt(5.0)) / 2, 1e-10);
    EXPECT_TRUE(r.stop_reason == StopReason::GradTol || r.stop_reason == StopReason::ValueTol);
    ASSERT_FALSE(r.trace.empty());
    for (size_t k = 1; k < r.trace.size(); ++k)
        EXPECT_LT(r.trace[k].value, r.trace[k - 1].value);
    EXPECT_LT(group_defect(Kind::boson, r.final_M), 1e-9);
}

TEST(Run, StopsAtStartingMinimum)
{
    Chain s = kg(2, 1.0);
    Williamson w = williamson(s.chain.gamma);
    OptimizationRun r = run(s.f, s.frame, w.S, OptimizerConfig{});
    EXPECT_EQ(r.stop_reason, StopReason::GradTol);
    EXPECT_EQ(r.iterations, 0);
}

TEST(Run, MaxIters)
{
    Chain s = kg(4, 0.1);
    OptimizerConfig cfg;
    cfg.max_iters = 3;
    cfg.value_tol = 1e-300;
    OptimizationRun r = run(s.f, s.frame, sample_group(Kind::boson, 4, 1, 0.5), cfg);
    EXPECT_EQ(r.stop_reason, StopReason::MaxIters);
    EXPECT_EQ(r.iterations, 3);
}

TEST(Run, ExactExponentialAgrees)
{
    Chain s = kg(2, 1.0);
    OptimizerConfig cfg;
    cfg.exact_exponential = true;
    OptimizationRun r = run(s.f, s.frame, sample_group(Kind::boson, 2, 5, 0.5), cfg);
    EXPECT_NEAR(r.final_value, (1 + std::sqrt(5.0)) / 2, 1e-10);
}

TEST(MultiStart, DeterministicAcrossThreadCounts)
{
    Chain s = kg(3, 0.5);
    auto sampler = [](std::uint64_t seed) { return sample_group(Kind::boson, 3, seed, 0.5); };
    OptimizerConfig cfg;
    cfg.starts = 12;
    cfg.threads = 1;
    MultiStartResult a = multi_start(s.f, s.frame, sampler, cfg);
    cfg.threads = 4;
    MultiStartResult b = multi_start(s.f, s.frame, sampler, cfg);
    EXPECT_EQ(a.best.seed, b.best.seed);
    EXPECT_EQ(a.best.final_value, b.best.final_value);
    ASSERT_EQ(a.finals.size(), 12u);
    for (size_t i = 0; i < a.finals.size(); ++i) {
        EXPECT_EQ(a.finals[i].seed, cfg.base_seed + i);
        EXPECT_EQ(a.finals[i].final_value, b.finals[i].final_value);
    }
    EXPECT_NEAR(a.best.final_value, s.chain.E0, 1e-9 * s.chain.E0);
}

TEST(MultiStart, PruningKeepsBestCohort)
{
    Chain s = kg(3, 0.5);
    auto sampler = [](std::uint64_t seed) { return sample_group(Kind::boson, 3, seed, 0.8); };
    OptimizerConfig cfg;
    cfg.starts = 20;
    cfg.prune_keep_fraction = 0.1;
    MultiStartResult r = multi_start(s.f, s.frame, sampler, cfg);
    int pruned = 0;
    for (auto& run : r.finals)
        pruned += run.pruned;
    EXPECT_GT(pruned, 0);
    EXPECT_FALSE(r.best.pruned);
    for (auto& run : r.finals)
        if (!run.pruned)
            EXPECT_GE(run.final_value, r.best.final_value);
}

TEST(Flow, ConservesEnergy)
{
    Chain s = kg(2, 1.0);
    Mat M = sample_group(Kind::boson, 2, 8, 0.3);
    const double E0 = s.f.value(M);
    double drift = 0;
    for (int k = 0; k < 200; ++k) {
        M = hamiltonian_flow_step(s.f, M, s.frame, 1e-3);
        drift = std::max(drift, std::abs(s.f.value(M) - E0));
    }
    EXPECT_LT(drift, 1e-6);
    EXPECT_LT(group_defect(Kind::boson, M), 1e-10);
}
