#pragma once

#include "optimizer.hpp"
#include "purification.hpp"

namespace gaussopt {

// Ĥ = c + h_ab ξ^a ξ^b (bosons, h symmetric) or c + i h_ab ξ^a ξ^b (fermions, h antisymmetric).
struct QuadraticHamiltonian {
    Kind kind = Kind::boson;
    double offset = 0.0;
    Mat h;

    int modes() const { return static_cast<int>(h.rows()) / 2; }
};

// E = c + ½ Tr(h Γ) for both kinds.
inline double energy(const QuadraticHamiltonian& H, const Mat& gamma)
{
    require(H.h.rows() == gamma.rows() && H.h.cols() == gamma.cols(), ErrorCode::DimensionMismatch,
            "Hamiltonian and state sizes differ");
    return H.offset + 0.5 * (H.h * gamma).trace();
}

// Bosons: J = X(−X²)^{−1/2} with X = Ω₀h. Fermions: Ω = h(−h²)^{−1/2}.
inline Mat ground_state(const QuadraticHamiltonian& H)
{
    const int n = H.modes();
    if (H.kind == Kind::boson) {
        EigenDecomp d = eigen_decompose(Mat(omega0(n) * H.h));
        for (Eigen::Index k = 0; k < d.values.size(); ++k)
            require(std::abs(d.values(k).real()) < 1e-8 * std::max(1.0, std::abs(d.values(k))) &&
                        std::abs(d.values(k).imag()) > 1e-12,
                    ErrorCode::NotPositive, "Hamiltonian is not dynamically stable");
        Mat J = apply_function(d, [](cplx x) { return cplx(0, x.imag() > 0 ? 1.0 : -1.0); }).real();
        return covariance_from_J(Kind::boson, J);
    }
    NormalForm nf = antisymmetric_normal_form(H.h);
    return antisymmetrize(nf.O * omega0(n) * nf.O.transpose());
}

inline double ground_energy(const QuadraticHamiltonian& H) { return energy(H, ground_state(H)); }

// Energy over Γ = M Γ₀ Mᵀ; dE_μ = ½ Tr(Mᵀ h M (Ξ_μ Γ₀ + Γ₀ Ξ_μᵀ)).
inline Objective energy_objective(const QuadraticHamiltonian& H, const Mat& gamma0, const TangentFrame& frame)
{
    auto D = std::make_shared<std::vector<Mat>>();
    for (auto& X : frame.generators)
        D->push_back((X * gamma0 + gamma0 * X.transpose()).transpose());
    auto Hp = std::make_shared<QuadraticHamiltonian>(H);
    auto G0 = std::make_shared<Mat>(gamma0);
    Objective f;
    f.value = [Hp, G0](const Mat& M) { return energy(*Hp, M * *G0 * M.transpose()); };
    f.differential = [Hp, D](const Mat& M) {
        Mat Ht = M.transpose() * Hp->h * M;
        Vec d(D->size());
        for (size_t mu = 0; mu < D->size(); ++mu)
            d(mu) = 0.5 * Ht.cwiseProduct((*D)[mu]).sum();
        return d;
    };
    return f;
}

struct GroundStateResult {
    double energy = 0.0;
    Mat gamma;
    MultiStartResult runs;
};

// Descent over all pure states Γ = M Γ₀ Mᵀ from random group elements.
inline GroundStateResult variational_ground_state(const QuadraticHamiltonian& H, const OptimizerConfig& cfg,
                                                  double spread = 0.5)
{
    const int n = H.modes();
    const Mat gamma0 = standard_vacuum(H.kind, n);
    TangentFrame frame = pure_state_frame(H.kind, n);
    Objective f = energy_objective(H, gamma0, frame);
    GroundStateResult r;
    r.runs = multi_start(f, frame, [&](std::uint64_t seed) { return sample_group(H.kind, n, seed, spread); }, cfg);
    const Mat& M = r.runs.best.final_M;
    r.gamma = M * gamma0 * M.transpose();
    r.energy = r.runs.best.final_value;
    return r;
}

// Entropy of one standard-form mode with restricted eigenvalue c.
inline double mode_entropy(Kind kind, double c)
{
    auto xlogx = [](double x) { return x > 0 ? x * std::log(x) : 0.0; };
    if (kind == Kind::boson) {
        c = std::max(c, 1.0 + 1e-14);
        return xlogx((c + 1) / 2) - xlogx((c - 1) / 2);
    }
    c = std::min(std::max(c, 0.0), 1.0 - 1e-14);
    return -xlogx((1 + c) / 2) - xlogx((1 - c) / 2);
}

struct EntropyResult {
    double value = 0.0;
    Vec spectrum;       // c_i
    Vec D_eigenvalues;  // (1 ± c_i)/2
};

inline EntropyResult entanglement_entropy(const Mat& J_block, Kind kind)
{
    require(J_block.rows() % 2 == 0 && J_block.rows() == J_block.cols(), ErrorCode::NotRestricted,
            "block must be 2N×2N");
    EntropyResult r;
    r.spectrum = restricted_spectrum(J_block, kind);
    const auto n = r.spectrum.size();
    r.D_eigenvalues = Vec(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        r.value += mode_entropy(kind, r.spectrum(i));
        r.D_eigenvalues(2 * i) = 0.5 * (1 + r.spectrum(i));
        r.D_eigenvalues(2 * i + 1) = 0.5 * (1 - r.spectrum(i));
    }
    return r;
}

inline EntropyResult entanglement_entropy(const Mat& J, const SubsystemPartition& p,
                                          const std::vector<std::string>& blocks, Kind kind)
{
    return entanglement_entropy(restrict(J, p, blocks), kind);
}

// F with dS = Re Tr(F δJ_block): S = Σ_k φ(λ_k) over eigenvalues λ of iJ_block, F = i φ'(iJ).
inline Mat entropy_differential(const Mat& J_block, Kind kind)
{
    const cplx i(0, 1);
    const auto d = J_block.rows();
    if (kind == Kind::fermion) {
        CMat H = i * antisymmetrize(J_block).cast<cplx>();
        Eigen::SelfAdjointEigenSolver<CMat> es(H);
        Vec w(d);
        for (Eigen::Index k = 0; k < d; ++k) {
            double lam = std::min(std::max(es.eigenvalues()(k), -1.0 + 1e-14), 1.0 - 1e-14);
            w(k) = -0.5 * std::log((1 + lam) / 2);
        }
        CMat F = i * es.eigenvectors() * w.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
        return F.real();
    }
    EigenDecomp dec = eigen_decompose(CMat(i * J_block.cast<cplx>()));
    CMat F = i * apply_function(dec, [](cplx lam) {
        double x = lam.real();
        double a = std::max(std::abs(x), 1.0 + 1e-14);
        x = x < 0 ? -a : a;
        return cplx(0.5 * std::log(std::abs((x + 1) / 2)), 0.0);
    });
    return F.real();
}

// Common machinery for objectives of J = M J₀ M⁻¹ with δJ_μ = M [Ξ_μ, J₀] M⁻¹.
struct ConjugationContext {
    Kind kind;
    Mat J0;
    std::vector<Mat> C;  // [Ξ_μ, J₀]ᵀ, stored transposed for Tr(R C_μ) = Σ R ∘ C_μᵀ

    ConjugationContext(Kind k, const Mat& j0, const TangentFrame& frame) : kind(k), J0(j0)
    {
        for (auto& X : frame.generators)
            C.push_back(tangent_vector(X, j0).transpose());
    }

    Mat J(const Mat& M) const { return M * J0 * group_inverse(kind, M); }

    // Components Tr(Mi F_full M C_μ) for a block matrix F living on `idx`.
    Vec contract(const Mat& M, const Mat& F, const std::vector<int>& idx) const
    {
        Mat Mi = group_inverse(kind, M);
        Mat Mr(idx.size(), M.cols()), Mic(M.rows(), idx.size());
        for (size_t a = 0; a < idx.size(); ++a) {
            Mr.row(a) = M.row(idx[a]);
            Mic.col(a) = Mi.col(idx[a]);
        }
        Mat R = Mic * F * Mr;
        Vec d(C.size());
        for (size_t mu = 0; mu < C.size(); ++mu)
            d(mu) = R.cwiseProduct(C[mu]).sum();
        return d;
    }
};

// S of the block `blocks` of M J₀ M⁻¹, e.g. S_{AA'} over a purification problem.
inline Objective entropy_objective(Kind kind, const Mat& J0, const TangentFrame& frame, const std::vector<int>& modes)
{
    auto ctx = std::make_shared<ConjugationContext>(kind, J0, frame);
    auto idx = std::make_shared<std::vector<int>>(qp_indices(modes, static_cast<int>(J0.rows()) / 2));
    Objective f;
    f.value = [ctx, idx](const Mat& M) {
        return entanglement_entropy(submatrix(ctx->J(M), *idx), ctx->kind).value;
    };
    f.differential = [ctx, idx](const Mat& M) {
        Mat Jb = submatrix(ctx->J(M), *idx);
        return ctx->contract(M, entropy_differential(Jb, ctx->kind), *idx);
    };
    return f;
}

inline Objective eop_objective(const PurificationProblem& p)
{
    return entropy_objective(p.kind, p.J_init, p.ancilla_frame, p.partition.modes({"A", "A'"}));
}

inline double hashing_bound(const Mat& J_AB, int nA, Kind kind)
{
    return entanglement_entropy(restrict_modes(J_AB, range(0, nA)), kind).value -
           entanglement_entropy(J_AB, kind).value;
}

struct EopOptions {
    OptimizerConfig optimizer;
    double spread = -1.0;  // negative: per-kind default
};

struct EopResult {
    double value = 0.0;
    Mat J_opt;
    double hashing = 0.0;
    bool hashing_ok = true;
    MultiStartResult runs;
};

inline double default_spread(Kind kind) { return kind == Kind::boson ? 0.3 : 1.0; }

inline EopResult gaussian_eop(const PurificationProblem& p, const EopOptions& opt)
{
    EopResult r;
    Objective f = eop_objective(p);
    const double spread = opt.spread < 0 ? default_spread(p.kind) : opt.spread;
    auto sampler = [&](std::uint64_t seed) { return sample_ancilla(p, seed, spread); };
    r.runs = multi_start(f, p.ancilla_frame, sampler, opt.optimizer);
    r.value = r.runs.best.final_value;
    ConjugationContext ctx(p.kind, p.J_init, p.ancilla_frame);
    r.J_opt = ctx.J(r.runs.best.final_M);
    r.hashing = hashing_bound(p.J_AB, static_cast<int>(p.partition.block("A").size()), p.kind);
    r.hashing_ok = r.hashing <= r.value + 1e-7;
    return r;
}

// Tr log²Δ with Δ = −J_T J_R, principal branch.
inline cplx trace_log_squared(const Mat& J_T, const Mat& J_R)
{
    Eigen::EigenSolver<Mat> es(Mat(-J_T * J_R), false);
    cplx s = 0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        cplx l = std::log(es.eigenvalues()(k));
        s += l * l;
    }
    return s;
}

inline double complexity(const Mat& J_T, const Mat& J_R)
{
    require(J_T.rows() == J_R.rows(), ErrorCode::DimensionMismatch, "complex structures differ in size");
    return std::sqrt(std::abs(trace_log_squared(J_T, J_R)) / 8.0);
}

// f = |Tr log²Δ|/8 over M J₀ M⁻¹; df = (sign/4) Re Tr(log Δ Δ⁻¹ δΔ) with δΔ = −δJ J_R.
inline Objective complexity_objective(Kind kind, const Mat& J0, const Mat& J_R, const TangentFrame& frame)
{
    auto ctx = std::make_shared<ConjugationContext>(kind, J0, frame);
    auto JR = std::make_shared<Mat>(J_R);
    auto all = std::make_shared<std::vector<int>>(range(0, static_cast<int>(J0.rows())));
    Objective f;
    f.value = [ctx, JR](const Mat& M) { return std::abs(trace_log_squared(ctx->J(M), *JR)) / 8.0; };
    f.differential = [ctx, JR, all](const Mat& M) {
        Mat J = ctx->J(M);
        EigenDecomp d = eigen_decompose(Mat(-J * *JR));
        cplx tls = 0;
        for (Eigen::Index k = 0; k < d.values.size(); ++k)
            tls += std::log(d.values(k)) * std::log(d.values(k));
        const double sign = tls.real() >= 0 ? 1.0 : -1.0;
        CMat Q = apply_function(d, [](cplx l) { return std::log(l) / l; });
        Mat F = (-sign / 4.0) * (JR->cast<cplx>() * Q).real();
        return ctx->contract(M, F, *all);
    };
    return f;
}

struct CopResult {
    double value = 0.0;
    Mat J_opt;
    MultiStartResult runs;
};

// Reference: the standard vacuum on every mode of A ∪ A'.
inline CopResult cop(const Mat& J_A, int n_ancilla, Kind kind, const EopOptions& opt)
{
    const int nA = static_cast<int>(J_A.rows()) / 2;
    PurificationProblem p = build_problem(J_A, nA, 0, n_ancilla, 0, kind);
    Mat JR = omega0(p.n_total());
    Objective f = complexity_objective(kind, p.J_init, JR, p.ancilla_frame);
    const double spread = opt.spread < 0 ? default_spread(kind) : opt.spread;
    auto sampler = [&](std::uint64_t seed) { return sample_ancilla(p, seed, spread); };
    CopResult r;
    r.runs = multi_start(f, p.ancilla_frame, sampler, opt.optimizer);
    r.value = std::sqrt(r.runs.best.final_value);
    r.J_opt = ConjugationContext(kind, p.J_init, p.ancilla_frame).J(r.runs.best.final_M);
    return r;
}

} // namespace gaussopt
