#pragma once

#include <cstdint>
#include <future>
#include <limits>
#include <memory>
#include <thread>

#include "lie.hpp"

namespace gaussopt {

struct OptimizerConfig {
    double initial_step = 0.5;
    double min_step = 1e-12;
    double grad_tol = 1e-9;
    double value_tol = 1e-12;
    long max_iters = 100000;
    int halvings_per_iter = 40;
    int starts = 1;
    std::vector<std::uint64_t> seeds;
    std::uint64_t base_seed = 1;
    int prune_period = 5;
    double prune_keep_fraction = 0.1;
    bool exact_exponential = false;
    bool keep_trace = false;
    int threads = 0;  // 0: hardware concurrency

    void validate() const
    {
        require(initial_step > 0 && min_step > 0 && grad_tol > 0 && value_tol > 0 && max_iters > 0 &&
                    halvings_per_iter > 0 && prune_period > 0,
                ErrorCode::InvalidConfig, "optimizer parameters must be positive");
        require(prune_keep_fraction > 0 && prune_keep_fraction <= 1, ErrorCode::InvalidConfig,
                "prune_keep_fraction must lie in (0, 1]");
        require(starts >= 1, ErrorCode::InvalidConfig, "need at least one start");
    }

    std::vector<std::uint64_t> seed_list() const
    {
        if (!seeds.empty())
            return seeds;
        std::vector<std::uint64_t> s;
        for (int k = 0; k < starts; ++k)
            s.push_back(base_seed + static_cast<std::uint64_t>(k));
        return s;
    }
};

enum class StopReason { GradTol, ValueTol, MaxIters, StepUnderflow };

inline const char* to_string(StopReason r)
{
    switch (r) {
    case StopReason::GradTol: return "GradTol";
    case StopReason::ValueTol: return "ValueTol";
    case StopReason::MaxIters: return "MaxIters";
    case StopReason::StepUnderflow: return "StepUnderflow";
    }
    return "Unknown";
}

// f(M) on the group and its differential ∂f/∂x^μ along M e^{x^μ Ξ_μ}.
struct Objective {
    std::function<double(const Mat&)> value;
    std::function<Vec(const Mat&)> differential;
};

struct TracePoint {
    double value;
    double grad_norm;
    double step;
};

struct OptimizationRun {
    Mat final_M;
    double final_value = 0.0;
    double final_grad_norm = 0.0;
    StopReason stop_reason = StopReason::MaxIters;
    std::uint64_t seed = 0;
    long iterations = 0;
    bool monotone = true;
    bool pruned = false;  // stopped by multi-start pruning; stop_reason is then meaningless
    std::vector<TracePoint> trace;
};

struct GradientVector {
    Vec coeffs;  // ℱ^μ = −∂f/∂x^μ in an orthonormal frame
    Mat K;       // ℱ^μ Ξ_μ
    double norm = 0.0;
};

inline Mat frame_combination(const TangentFrame& frame, const Vec& coeffs, Eigen::Index dim)
{
    Mat K = Mat::Zero(dim, dim);
    for (size_t mu = 0; mu < frame.size(); ++mu)
        K += coeffs(mu) * frame.generators[mu];
    return K;
}

inline GradientVector gradient(const Objective& f, const Mat& M, const TangentFrame& frame)
{
    GradientVector g;
    g.coeffs = frame.size() ? Vec(-f.differential(M)) : Vec();
    g.norm = g.coeffs.size() ? g.coeffs.norm() : 0.0;
    g.K = frame_combination(frame, g.coeffs, M.rows());
    return g;
}

inline Mat retract(const Mat& K, double s, bool exact)
{
    return exact ? expm(Mat(s * K)) : cayley_retract(K, s);
}

struct StepResult {
    Mat M;
    double value;
    double step;
    bool accepted;
};

// Moves along M e^{s K/‖K‖}, halving s until the value drops.
inline StepResult step(const Mat& M, const GradientVector& g, double F, const Objective& f,
                       const OptimizerConfig& cfg)
{
    require(g.norm > 0, ErrorCode::InvalidConfig, "step needs a nonzero direction");
    Mat Khat = g.K / g.norm;
    double s = cfg.initial_step;
    for (int h = 0; h <= cfg.halvings_per_iter && s >= cfg.min_step; ++h, s *= 0.5) {
        Mat Mn = M * retract(Khat, s, cfg.exact_exponential);
        double Fn = f.value(Mn);
        if (Fn < F)
            return {Mn, Fn, s, true};
    }
    return {M, F, s, false};
}

// One descent trajectory that can be advanced a few iterations at a time.
class Trajectory {
public:
    Trajectory(const Objective& f, const TangentFrame& frame, const OptimizerConfig& cfg, Mat M0,
               std::uint64_t seed)
        : f_(&f), frame_(&frame), cfg_(cfg)
    {
        run_.seed = seed;
        run_.final_M = std::move(M0);
        run_.final_value = f.value(run_.final_M);
        refresh_gradient();
    }

    bool done() const { return done_; }
    const OptimizationRun& run() const { return run_; }
    double value() const { return run_.final_value; }
    double grad_norm() const { return g_.norm; }

    void prune()
    {
        if (!done_) {
            run_.pruned = true;
            done_ = true;
        }
    }

    void advance(long iters)
    {
        for (long k = 0; k < iters && !done_; ++k) {
            if (g_.norm < cfg_.grad_tol) {
                finish(StopReason::GradTol);
                return;
            }
            if (run_.iterations >= cfg_.max_iters) {
                finish(StopReason::MaxIters);
                return;
            }
            StepResult st = step(run_.final_M, g_, run_.final_value, *f_, cfg_);
            if (!st.accepted) {
                finish(StopReason::StepUnderflow);
                return;
            }
            const double drop = run_.final_value - st.value;
            run_.monotone = run_.monotone && drop > 0;
            run_.final_M = std::move(st.M);
            run_.final_value = st.value;
            ++run_.iterations;
            refresh_gradient();
            if (cfg_.keep_trace)
                run_.trace.push_back({run_.final_value, g_.norm, st.step});
            if (drop < cfg_.value_tol) {
                finish(g_.norm < cfg_.grad_tol ? StopReason::GradTol : StopReason::ValueTol);
                return;
            }
        }
    }

private:
    void refresh_gradient()
    {
        g_ = gradient(*f_, run_.final_M, *frame_);
        run_.final_grad_norm = g_.norm;
    }

    void finish(StopReason r)
    {
        run_.stop_reason = r;
        done_ = true;
    }

    const Objective* f_;
    const TangentFrame* frame_;
    OptimizerConfig cfg_;
    OptimizationRun run_;
    GradientVector g_;
    bool done_ = false;
};

inline OptimizationRun run(const Objective& f, const TangentFrame& frame, const Mat& M_start,
                           const OptimizerConfig& cfg, std::uint64_t seed = 0)
{
    cfg.validate();
    Trajectory t(f, frame, cfg, M_start, seed);
    t.advance(cfg.max_iters + 1);
    return t.run();
}

struct MultiStartResult {
    OptimizationRun best;
    std::vector<OptimizationRun> finals;  // one per start, in seed order
};

namespace detail {

template <class F>
void parallel_for(size_t n, int threads, F&& body)
{
    const size_t workers = std::max<size_t>(
        1, std::min<size_t>(n, threads > 0 ? threads : std::max(1u, std::thread::hardware_concurrency())));
    if (workers == 1) {
        for (size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::future<void>> jobs;
    for (size_t w = 0; w < workers; ++w)
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (size_t i = w; i < n; i += workers)
                body(i);
        }));
    for (auto& j : jobs)
        j.get();
}

} // namespace detail

// Trajectories from sampler(seed); every prune_period iterations only the lowest-value and the
// highest-gradient cohorts of the current survivors continue.
inline MultiStartResult multi_start(const Objective& f, const TangentFrame& frame,
                                    const std::function<Mat(std::uint64_t)>& sampler, const OptimizerConfig& cfg)
{
    cfg.validate();
    auto seeds = cfg.seed_list();
    std::vector<Mat> starts(seeds.size());
    detail::parallel_for(seeds.size(), cfg.threads, [&](size_t i) { starts[i] = sampler(seeds[i]); });
    std::vector<std::unique_ptr<Trajectory>> traj(seeds.size());
    detail::parallel_for(seeds.size(), cfg.threads, [&](size_t i) {
        traj[i] = std::make_unique<Trajectory>(f, frame, cfg, starts[i], seeds[i]);
    });

    std::vector<size_t> alive(seeds.size());
    std::iota(alive.begin(), alive.end(), 0);
    while (true) {
        std::vector<size_t> active;
        for (size_t i : alive)
            if (!traj[i]->done())
                active.push_back(i);
        if (active.empty())
            break;
        detail::parallel_for(active.size(), cfg.threads,
                             [&](size_t k) { traj[active[k]]->advance(cfg.prune_period); });

        if (alive.size() > 1) {
            const size_t keep = std::max<size_t>(1, static_cast<size_t>(cfg.prune_keep_fraction * alive.size()));
            auto by_value = alive, by_grad = alive;
            std::stable_sort(by_value.begin(), by_value.end(),
                             [&](size_t a, size_t b) { return traj[a]->value() < traj[b]->value(); });
            std::stable_sort(by_grad.begin(), by_grad.end(), [&](size_t a, size_t b) {
                return traj[a]->grad_norm() > traj[b]->grad_norm();
            });
            std::vector<bool> flag(seeds.size(), false);
            for (size_t k = 0; k < keep; ++k)
                flag[by_value[k]] = flag[by_grad[k]] = true;
            std::vector<size_t> next;
            for (size_t i : alive) {
                if (flag[i])
                    next.push_back(i);
                else
                    traj[i]->prune();
            }
            alive = std::move(next);
        }
    }

    MultiStartResult res;
    for (auto& t : traj)
        res.finals.push_back(t->run());
    size_t best = alive.front();
    for (size_t i : alive) {
        const auto& a = traj[i]->run();
        const auto& b = traj[best]->run();
        if (a.final_value < b.final_value || (a.final_value == b.final_value && a.seed < b.seed))
            best = i;
    }
    res.best = traj[best]->run();
    return res;
}

// Real-time flow: 𝒳^μ = −Ω^{μν} ∂f/∂x^ν with Ω^{μν} the inverse of ω_μν; fixed dt.
// Implicit midpoint (fixed-point iteration), so the energy error stays O(dt²) without secular drift.
inline Mat hamiltonian_flow_step(const Objective& f, const Mat& M, const TangentFrame& frame, double dt,
                                 bool exact = false)
{
    if (frame.size() == 0)
        return M;
    Eigen::FullPivLU<Mat> lu(frame.symplectic);
    require(lu.isInvertible(), ErrorCode::DegenerateSymplecticForm, "ω is not invertible on the frame");
    const Mat Winv = lu.inverse();
    auto velocity = [&](const Mat& at) { return Vec(-Winv * f.differential(at)); };
    Vec X = velocity(M);
    if (X.norm() == 0.0)
        return M;
    for (int it = 0; it < 50; ++it) {
        Vec next = velocity(Mat(M * retract(frame_combination(frame, X, M.rows()), 0.5 * dt, exact)));
        const double change = (next - X).norm();
        X = next;
        if (change <= 1e-14 * std::max(1.0, X.norm()))
            break;
    }
    return M * retract(frame_combination(frame, X, M.rows()), dt, exact);
}

} // namespace gaussopt
