#pragma once

#include <bit>
#include <random>

#include "objectives.hpp"
#include "representations.hpp"

namespace gaussopt {

inline constexpr int max_fock_modes = 6;

// Jordan-Wigner operators on 2^n states; mode 0 is the most significant bit of a basis index.
struct FockRep {
    int n_modes = 0;
    std::vector<CMat> a;   // annihilators
    std::vector<CMat> xi;  // Majoranas (q_1..q_n, p_1..p_n), q = (a+a†)/√2, p = −i(a−a†)/√2

    explicit FockRep(int n) : n_modes(n)
    {
        require(n >= 1, ErrorCode::DimensionMismatch, "need at least one mode");
        require(n <= max_fock_modes, ErrorCode::TooManyModes,
                "dense Fock space limited to " + std::to_string(max_fock_modes) + " modes");
        const int D = dim();
        const double s = 1.0 / std::sqrt(2.0);
        for (int i = 0; i < n; ++i) {
            CMat m = CMat::Zero(D, D);
            const int bit = 1 << (n - 1 - i);
            for (int k = 0; k < D; ++k) {
                if (!(k & bit))
                    continue;
                const int before = std::popcount(static_cast<unsigned>(k >> (n - i)));
                m(k ^ bit, k) = (before % 2) ? -1.0 : 1.0;
            }
            a.push_back(m);
        }
        xi.resize(2 * n);
        for (int i = 0; i < n; ++i) {
            CMat ad = a[i].adjoint();
            xi[i] = s * (a[i] + ad);
            xi[n + i] = cplx(0, -s) * (a[i] - ad);
        }
    }

    int dim() const { return 1 << n_modes; }

    // max over i, j of the {a_i, a_j†} and {a_i, a_j} defects
    double car_defect() const
    {
        const int D = dim();
        double d = 0.0;
        for (int i = 0; i < n_modes; ++i)
            for (int j = 0; j < n_modes; ++j) {
                CMat ac = a[i] * a[j].adjoint() + a[j].adjoint() * a[i];
                if (i == j)
                    ac -= CMat::Identity(D, D);
                d = std::max({d, max_abs(ac), max_abs(CMat(a[i] * a[j] + a[j] * a[i]))});
            }
        return d;
    }

    CMat parity() const
    {
        CMat P = CMat::Zero(dim(), dim());
        for (int k = 0; k < dim(); ++k)
            P(k, k) = std::popcount(static_cast<unsigned>(k)) % 2 ? -1.0 : 1.0;
        return P;
    }
};

struct DenseState {
    int n_modes = 0;
    CMat rho;

    void validate(double tol = 1e-12) const
    {
        require(rho.rows() == (1 << n_modes) && rho.cols() == rho.rows(), ErrorCode::DimensionMismatch,
                "density matrix must be 2^n × 2^n");
        require(max_abs(CMat(rho - rho.adjoint())) < tol, ErrorCode::InvalidState, "ρ is not Hermitian");
        require(std::abs(rho.trace() - 1.0) < tol, ErrorCode::InvalidState, "Tr ρ ≠ 1");
        Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
        require(es.eigenvalues().minCoeff() > -tol, ErrorCode::NotPositive, "ρ has negative eigenvalues");
    }
};

// ρ = 2^{−n} ∏_k (𝟙 − 2i c_k ξ'_k ξ'_{n+k}) with ξ' = Oᵀξ from Ω = O [[0, c], [−c, 0]] Oᵀ. Works for pure J too.
inline DenseState gaussian_density(const Mat& J, const FockRep& rep)
{
    const int n = rep.n_modes;
    require(J.rows() == 2 * n && J.cols() == 2 * n, ErrorCode::DimensionMismatch, "J does not match the Fock space");
    NormalForm nf = antisymmetric_normal_form(antisymmetrize(J));
    const int D = rep.dim();
    auto rotated = [&](int k) {
        CMat x = CMat::Zero(D, D);
        for (int a = 0; a < 2 * n; ++a)
            if (nf.O(a, k) != 0.0)
                x += nf.O(a, k) * rep.xi[a];
        return x;
    };
    CMat rho = CMat::Identity(D, D);
    for (int k = 0; k < n; ++k) {
        CMat f = CMat::Identity(D, D) - cplx(0, 2.0 * nf.c(k)) * rotated(k) * rotated(n + k);
        rho = rho * f;
    }
    rho /= static_cast<double>(D);
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return {n, rho};
}

// ρ = exp(−c₀ − i q_ab ξ^a ξ^b); mixed states only.
inline DenseState gaussian_density(const ThermalData& t, const FockRep& rep)
{
    require(t.kind == Kind::fermion, ErrorCode::InvalidConfig, "exact Fock states are fermionic only");
    const int n = rep.n_modes;
    require(t.q.rows() == 2 * n, ErrorCode::DimensionMismatch, "q does not match the Fock space");
    const int D = rep.dim();
    CMat Q = CMat::Zero(D, D);
    for (int a = 0; a < 2 * n; ++a)
        for (int b = 0; b < 2 * n; ++b)
            if (t.q(a, b) != 0.0)
                Q += t.q(a, b) * rep.xi[a] * rep.xi[b];
    CMat X = cplx(0, -1) * Q - t.c0 * CMat::Identity(D, D);
    CMat rho = X.exp();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return {n, rho};
}

// Dominant eigenvector; the state vector of a pure ρ.
inline CVec pure_vector(const DenseState& s)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(s.rho);
    return es.eigenvectors().col(s.rho.rows() - 1);
}

// Ω^{ab} = −i Tr(ρ [ξ^a, ξ^b]).
inline Mat two_point(const DenseState& s, const FockRep& rep)
{
    const int n2 = 2 * rep.n_modes;
    Mat O = Mat::Zero(n2, n2);
    for (int a = 0; a < n2; ++a)
        for (int b = a + 1; b < n2; ++b) {
            cplx v = (s.rho * (rep.xi[a] * rep.xi[b] - rep.xi[b] * rep.xi[a])).trace();
            O(a, b) = (cplx(0, -1) * v).real();
            O(b, a) = -O(a, b);
        }
    return O;
}

// Signed permutation of basis states taking mode order[k] to position k.
inline CMat fermionic_reorder(int n, const std::vector<int>& order)
{
    require(static_cast<int>(order.size()) == n, ErrorCode::DimensionMismatch, "order must list every mode");
    const int D = 1 << n;
    CMat P = CMat::Zero(D, D);
    for (int k = 0; k < D; ++k) {
        std::vector<int> occ;
        int target = 0;
        for (int pos = 0; pos < n; ++pos) {
            const int m = order[pos];
            if (k & (1 << (n - 1 - m))) {
                occ.push_back(m);
                target |= 1 << (n - 1 - pos);
            }
        }
        // creators appear in the new order; count swaps back to ascending mode order
        int inversions = 0;
        for (size_t i = 0; i < occ.size(); ++i)
            for (size_t j = i + 1; j < occ.size(); ++j)
                if (occ[i] > occ[j])
                    ++inversions;
        P(target, k) = inversions % 2 ? -1.0 : 1.0;
    }
    return P;
}

// Modes in `keep` stay in their original relative order.
inline std::vector<int> keep_first_order(int n, std::vector<int> keep)
{
    std::sort(keep.begin(), keep.end());
    std::vector<int> order = keep;
    for (int m = 0; m < n; ++m)
        if (!std::binary_search(keep.begin(), keep.end(), m))
            order.push_back(m);
    return order;
}

inline DenseState fermionic_partial_trace(const DenseState& s, const std::vector<int>& keep)
{
    const int n = s.n_modes;
    require(!keep.empty(), ErrorCode::DimensionMismatch, "keep must be nonempty");
    for (int m : keep)
        require(m >= 0 && m < n, ErrorCode::DimensionMismatch, "mode index out of range");
    const int nk = static_cast<int>(keep.size());
    CMat P = fermionic_reorder(n, keep_first_order(n, keep));
    CMat r = P * s.rho * P.adjoint();
    const int dk = 1 << nk, dt = 1 << (n - nk);
    CMat out = CMat::Zero(dk, dk);
    for (int i = 0; i < dk; ++i)
        for (int j = 0; j < dk; ++j)
            for (int t = 0; t < dt; ++t)
                out(i, j) += r(i * dt + t, j * dt + t);
    return {nk, out};
}

inline double von_neumann(const Vec& p)
{
    double S = 0.0;
    for (Eigen::Index k = 0; k < p.size(); ++k)
        if (p(k) > 0)
            S -= p(k) * std::log(p(k));
    return S;
}

inline double exact_entropy(const DenseState& s)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(s.rho, Eigen::EigenvaluesOnly);
    return von_neumann(es.eigenvalues());
}

struct WickComparison {
    cplx exact;
    cplx wick;
};

namespace detail {

inline cplx wick_sum(const CMat& C2, std::vector<int> idx)
{
    if (idx.empty())
        return 1.0;
    if (idx.size() % 2)
        return 0.0;
    cplx total = 0.0;
    const int first = idx[0];
    for (size_t j = 1; j < idx.size(); ++j) {
        std::vector<int> rest;
        for (size_t k = 1; k < idx.size(); ++k)
            if (k != j)
                rest.push_back(idx[k]);
        const double sign = (j % 2) ? 1.0 : -1.0;
        total += sign * C2(first, idx[j]) * wick_sum(C2, rest);
    }
    return total;
}

} // namespace detail

// Tr(ρ ξ^{a₁}⋯ξ^{a_k}) against the pairing sum over C₂ = ½(𝟙 + iΩ).
inline WickComparison wick_oracle(const Mat& J, const FockRep& rep, const std::vector<int>& indices)
{
    require(indices.size() <= 8, ErrorCode::InvalidConfig, "at most 8 operators");
    const int n2 = 2 * rep.n_modes;
    for (int a : indices)
        require(a >= 0 && a < n2, ErrorCode::DimensionMismatch, "phase-space index out of range");
    DenseState s = gaussian_density(J, rep);
    CMat prod = CMat::Identity(rep.dim(), rep.dim());
    for (int a : indices)
        prod = prod * rep.xi[a];
    CMat C2 = 0.5 * (CMat::Identity(n2, n2) + cplx(0, 1) * antisymmetrize(J).cast<cplx>());
    return {(s.rho * prod).trace(), detail::wick_sum(C2, indices)};
}

// Real embedding A + iB ↦ [[A, −B], [B, A]] so the real optimizer can walk U(d).
inline Mat real_embed(const CMat& K)
{
    const auto d = K.rows();
    Mat R(2 * d, 2 * d);
    R << K.real(), -K.imag(), K.imag(), K.real();
    return R;
}

inline CMat complex_part(const Mat& R)
{
    const auto d = R.rows() / 2;
    return R.topLeftCorner(d, d).cast<cplx>() + cplx(0, 1) * R.bottomLeftCorner(d, d).cast<cplx>();
}

// Frobenius-orthonormal basis of u(d); with parity_preserving only the blocks that keep the
// fermion parity of the basis index (u(d/2) ⊕ u(d/2)).
inline std::vector<CMat> unitary_algebra_basis(int d, bool parity_preserving = false)
{
    auto same = [](int j, int k) {
        return std::popcount(static_cast<unsigned>(j)) % 2 == std::popcount(static_cast<unsigned>(k)) % 2;
    };
    std::vector<CMat> out;
    const double s = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < d; ++j) {
        CMat K = CMat::Zero(d, d);
        K(j, j) = cplx(0, 1);
        out.push_back(K);
    }
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            if (parity_preserving && !same(j, k))
                continue;
            CMat A = CMat::Zero(d, d), B = CMat::Zero(d, d);
            A(j, k) = s;
            A(k, j) = -s;
            B(j, k) = cplx(0, s);
            B(k, j) = cplx(0, s);
            out.push_back(A);
            out.push_back(B);
        }
    return out;
}

// Pure states |ψ(U)⟩ = (𝟙_AB ⊗ U)|ψ₀⟩ on modes (A, B, A', B'); objective S_{AA'}.
struct ExactPurification {
    int nA = 0, nB = 0, nAp = 0, nBp = 0;
    CVec psi0;  // system ⊗ ancilla, system index most significant
    CMat reorder;  // moves A ∪ A' to the front
    std::vector<CMat> algebra;

    int n_system() const { return nA + nB; }
    int n_ancilla() const { return nAp + nBp; }
    int n_total() const { return n_system() + n_ancilla(); }
    int d_ancilla() const { return 1 << n_ancilla(); }
    int d_keep() const { return 1 << (nA + nAp); }

    std::vector<int> keep_modes() const
    {
        std::vector<int> k = range(0, nA);
        for (int m = n_system(); m < n_system() + nAp; ++m)
            k.push_back(m);
        return k;
    }

    CVec state(const CMat& U) const
    {
        const int da = d_ancilla(), ds = 1 << n_system();
        CVec out(ds * da);
        for (int s = 0; s < ds; ++s)
            out.segment(s * da, da) = U * psi0.segment(s * da, da);
        return out;
    }

    // ρ_{AA'} as the keep × tail reshaping Φ Φ†
    CMat reduced(const CVec& psi) const
    {
        CVec phi = reorder * psi;
        const int dk = d_keep(), dt = static_cast<int>(phi.size()) / dk;
        Eigen::Map<const CMat> Phi(phi.data(), dt, dk);  // column k holds the tail of keep index k
        return Phi.transpose() * Phi.conjugate();
    }
};

inline ExactPurification make_exact_purification(const CVec& psi, int nA, int nB, int nAp, int nBp,
                                                  bool parity_preserving = true)
{
    const int n = nA + nB + nAp + nBp;
    require(n <= max_fock_modes, ErrorCode::TooManyModes,
            "dense Fock space limited to " + std::to_string(max_fock_modes) + " modes");
    require(psi.size() == (1 << n), ErrorCode::DimensionMismatch, "state vector does not match the modes");
    ExactPurification p;
    p.nA = nA;
    p.nB = nB;
    p.nAp = nAp;
    p.nBp = nBp;
    p.psi0 = psi;
    p.reorder = fermionic_reorder(n, keep_first_order(n, p.keep_modes()));
    p.algebra = unitary_algebra_basis(p.d_ancilla(), parity_preserving);
    return p;
}

// Sector-wise eigenvectors of ρ_AB paired with ancilla basis states of equal parity; the total state is even.
inline CVec canonical_purification(const DenseState& rho_AB, int n_ancilla, double drop_tol = 1e-10)
{
    const int ns = rho_AB.n_modes, D = 1 << ns, da = 1 << n_ancilla;
    CVec psi = CVec::Zero(D * da);
    double dropped = 0.0;
    for (int parity = 0; parity < 2; ++parity) {
        std::vector<int> sys, anc;
        for (int k = 0; k < D; ++k)
            if (std::popcount(static_cast<unsigned>(k)) % 2 == parity)
                sys.push_back(k);
        for (int k = 0; k < da; ++k)
            if (std::popcount(static_cast<unsigned>(k)) % 2 == parity)
                anc.push_back(k);
        CMat block(sys.size(), sys.size());
        for (size_t i = 0; i < sys.size(); ++i)
            for (size_t j = 0; j < sys.size(); ++j)
                block(i, j) = rho_AB.rho(sys[i], sys[j]);
        Eigen::SelfAdjointEigenSolver<CMat> es(block);
        const int m = static_cast<int>(sys.size());
        for (int r = 0; r < m; ++r) {
            const int col = m - 1 - r;  // descending weight
            const double lam = std::max(es.eigenvalues()(col), 0.0);
            if (r >= static_cast<int>(anc.size())) {
                dropped += lam;
                continue;
            }
            for (size_t i = 0; i < sys.size(); ++i)
                psi(sys[i] * da + anc[r]) += std::sqrt(lam) * es.eigenvectors()(i, col);
        }
    }
    require(dropped < drop_tol, ErrorCode::DimensionMismatch, "ancilla too small to purify ρ_AB");
    return psi / psi.norm();
}

inline CMat hermitian_log(const CMat& rho, double floor = 1e-18)
{
    Eigen::SelfAdjointEigenSolver<CMat> es(rho);
    Vec l = es.eigenvalues().unaryExpr([&](double x) { return std::log(std::max(x, floor)); });
    return es.eigenvectors() * l.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

// dS_μ = −2 Re⟨ψ| L (𝟙 ⊗ U K_μ)|ψ₀⟩ with L = Π†(log ρ_{AA'} ⊗ 𝟙)Π.
inline Vec exact_eop_differential(const ExactPurification& p, const CMat& U)
{
    CVec psi = p.state(U);
    CMat L = hermitian_log(p.reduced(psi));
    CVec phi = p.reorder * psi;
    const int dk = p.d_keep(), dt = static_cast<int>(phi.size()) / dk;
    Eigen::Map<const CMat> Phi(phi.data(), dt, dk);
    CMat LPhi = Phi * L.transpose();
    CVec Lphi = Eigen::Map<const CVec>(LPhi.data(), phi.size());
    CVec Lpsi = p.reorder.adjoint() * Lphi;
    Vec d(p.algebra.size());
    for (size_t mu = 0; mu < p.algebra.size(); ++mu) {
        CVec chi = p.state(U * p.algebra[mu]);
        d(mu) = -2.0 * Lpsi.dot(chi).real();
    }
    return d;
}

inline Objective exact_eop_objective(const ExactPurification& p)
{
    auto pp = std::make_shared<ExactPurification>(p);
    Objective f;
    f.value = [pp](const Mat& M) {
        CMat r = pp->reduced(pp->state(complex_part(M)));
        Eigen::SelfAdjointEigenSolver<CMat> es(r, Eigen::EigenvaluesOnly);
        return von_neumann(es.eigenvalues());
    };
    f.differential = [pp](const Mat& M) { return exact_eop_differential(*pp, complex_part(M)); };
    return f;
}

inline TangentFrame unitary_frame(const ExactPurification& p)
{
    TangentFrame fr;
    fr.kind = Kind::fermion;
    fr.J0 = Mat::Identity(2 * p.d_ancilla(), 2 * p.d_ancilla());
    for (auto& K : p.algebra)
        fr.generators.push_back(real_embed(K));
    fr.metric = Mat::Identity(fr.generators.size(), fr.generators.size());
    fr.metric_inverse = fr.metric;
    fr.symplectic = Mat::Zero(fr.generators.size(), fr.generators.size());
    return fr;
}

inline CMat sample_unitary(int d, std::uint64_t seed, double spread, bool parity_preserving = true)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    CMat K = CMat::Zero(d, d);
    for (auto& X : unitary_algebra_basis(d, parity_preserving))
        K += nd(rng) * X;
    return CMat(spread * K).exp();
}

struct ExactEopResult {
    double value = 0.0;
    CVec psi_opt;
    MultiStartResult runs;
};

// Ancilla unitaries respect fermion parity unless parity_preserving is false.
inline ExactEopResult exact_eop(const DenseState& rho_AB, int nA, int nB, int nAp, int nBp, const EopOptions& opt,
                                bool parity_preserving = true)
{
    require(nA + nB == rho_AB.n_modes, ErrorCode::DimensionMismatch, "N_A + N_B must match ρ_AB");
    require(nA + nB + nAp + nBp <= max_fock_modes, ErrorCode::TooManyModes,
            "dense Fock space limited to " + std::to_string(max_fock_modes) + " modes");
    ExactPurification p =
        make_exact_purification(canonical_purification(rho_AB, nAp + nBp), nA, nB, nAp, nBp, parity_preserving);
    Objective f = exact_eop_objective(p);
    ExactEopResult r;
    if (p.n_ancilla() == 0) {
        r.value = f.value(Mat::Identity(2, 2));
        r.psi_opt = p.psi0;
        return r;
    }
    TangentFrame frame = unitary_frame(p);
    const double spread = opt.spread < 0 ? 1.0 : opt.spread;
    auto sampler = [&](std::uint64_t seed) { return real_embed(sample_unitary(p.d_ancilla(), seed, spread, parity_preserving)); };
    r.runs = multi_start(f, frame, sampler, opt.optimizer);
    r.value = r.runs.best.final_value;
    r.psi_opt = p.state(complex_part(r.runs.best.final_M));
    return r;
}

// Full u(2^{n_anc}) gradient at the Fock embedding of a pure Gaussian J on (A, B, A', B').
inline Vec nongaussian_gradient(const Mat& J_pure, int nA, int nB, int nAp, int nBp, bool parity_preserving = false)
{
    FockRep rep(nA + nB + nAp + nBp);
    CVec psi = pure_vector(gaussian_density(J_pure, rep));
    ExactPurification p = make_exact_purification(psi, nA, nB, nAp, nBp, parity_preserving);
    return exact_eop_differential(p, CMat::Identity(p.d_ancilla(), p.d_ancilla()));
}

} // namespace gaussopt
