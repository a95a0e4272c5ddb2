#pragma once

#include "linalg.hpp"

namespace gaussopt {

// State-independent structure: Ω for bosons, G for fermions.
struct Background {
    Kind kind = Kind::boson;
    Basis basis = Basis::qp;
    int N = 0;
    CMat form;
};

// Change of basis ξ_aab = U ξ_qp induced by â = (q̂ + i p̂)/√2.
inline CMat qp_to_aab_unitary(int N)
{
    const double s = 1.0 / std::sqrt(2.0);
    CMat U = CMat::Zero(2 * N, 2 * N);
    for (int i = 0; i < N; ++i) {
        U(i, i) = s;
        U(i, N + i) = cplx(0, s);
        U(N + i, i) = s;
        U(N + i, N + i) = cplx(0, -s);
    }
    return U;
}

// Upper-index bilinears (Γ^{ab}) transform as U Γ Uᵀ.
inline CMat tensor_to_aab(const CMat& t)
{
    CMat U = qp_to_aab_unitary(static_cast<int>(t.rows()) / 2);
    return U * t * U.transpose();
}

inline CMat tensor_to_qp(const CMat& t)
{
    CMat Ui = qp_to_aab_unitary(static_cast<int>(t.rows()) / 2).inverse();
    return Ui * t * Ui.transpose();
}

// Linear maps (J^a_b) transform by similarity.
inline CMat map_to_aab(const CMat& m)
{
    CMat U = qp_to_aab_unitary(static_cast<int>(m.rows()) / 2);
    return U * m * U.inverse();
}

inline CMat map_to_qp(const CMat& m)
{
    CMat U = qp_to_aab_unitary(static_cast<int>(m.rows()) / 2);
    return U.inverse() * m * U;
}

inline Background standard_background(Kind kind, Basis basis, int N)
{
    require(N >= 1, ErrorCode::DimensionMismatch, "need at least one mode");
    CMat form = background_form(kind, N).cast<cplx>();
    if (basis == Basis::aab)
        form = tensor_to_aab(form);
    return {kind, basis, N, form};
}

// J = −Γ ω for bosons (ω = Ω⁻¹), J = Γ g for fermions (g = G⁻¹).
inline CMat complex_structure(const CMat& gamma, const Background& bg)
{
    require(gamma.rows() == bg.form.rows() && gamma.cols() == bg.form.cols(), ErrorCode::DimensionMismatch,
            "covariance and background sizes differ");
    CMat inv = bg.form.inverse();
    return bg.kind == Kind::boson ? CMat(-gamma * inv) : CMat(gamma * inv);
}

inline Mat complex_structure(Kind kind, const Mat& gamma)
{
    const int n = static_cast<int>(gamma.rows()) / 2;
    require(gamma.rows() == 2 * n && gamma.cols() == 2 * n, ErrorCode::DimensionMismatch, "covariance must be 2N×2N");
    return kind == Kind::boson ? Mat(gamma * omega0(n)) : gamma;
}

inline Mat covariance_from_J(Kind kind, const Mat& J)
{
    const int n = static_cast<int>(J.rows()) / 2;
    return kind == Kind::boson ? Mat(symmetrize(-J * omega0(n))) : antisymmetrize(J);
}

inline double purity_defect(const Mat& J)
{
    return max_abs(J * J + Mat::Identity(J.rows(), J.cols()));
}

inline double purity_defect(const CMat& J)
{
    return max_abs(J * J + CMat::Identity(J.rows(), J.cols()));
}

// Pure state in standard background; Γ₀ = 𝟙 for bosons, Ω₀ for fermions.
inline Mat standard_vacuum(Kind kind, int N)
{
    return kind == Kind::boson ? Mat::Identity(2 * N, 2 * N) : omega0(N);
}

struct GaussianState {
    Kind kind = Kind::boson;
    int N = 0;
    Mat gamma;
    Mat J;

    bool pure(double tol = 1e-10) const { return purity_defect(J) <= tol; }
};

inline GaussianState make_state(Kind kind, const Mat& gamma, double tol = 1e-10)
{
    const int n = static_cast<int>(gamma.rows()) / 2;
    require(n >= 1 && gamma.rows() == 2 * n && gamma.cols() == 2 * n, ErrorCode::DimensionMismatch,
            "covariance must be 2N×2N");
    const double scale = std::max(1.0, max_abs(gamma));
    if (kind == Kind::boson) {
        require(max_abs(gamma - gamma.transpose()) <= tol * scale, ErrorCode::InvalidState, "G must be symmetric");
        Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(gamma));
        require(es.eigenvalues().minCoeff() > 0, ErrorCode::NotPositive, "G must be positive definite");
    } else {
        require(max_abs(gamma + gamma.transpose()) <= tol * scale, ErrorCode::InvalidState, "Ω must be antisymmetric");
    }
    return {kind, n, gamma, complex_structure(kind, gamma)};
}

// c_i ≥ 0 with J's eigenvalues ±i c_i, sorted descending.
inline Vec restricted_spectrum(const Mat& J, Kind kind)
{
    const int n = static_cast<int>(J.rows()) / 2;
    std::vector<double> mags;
    if (kind == Kind::fermion) {
        // Ω is antisymmetric, so iJ is Hermitian.
        CMat H = cplx(0, 1) * antisymmetrize(J).cast<cplx>();
        Eigen::SelfAdjointEigenSolver<CMat> es(H, Eigen::EigenvaluesOnly);
        for (int i = 0; i < 2 * n; ++i)
            mags.push_back(std::abs(es.eigenvalues()(i)));
    } else {
        Eigen::EigenSolver<Mat> es(J, false);
        for (int i = 0; i < 2 * n; ++i)
            mags.push_back(std::abs(es.eigenvalues()(i).imag()));
    }
    std::sort(mags.begin(), mags.end(), std::greater<>());
    Vec c(n);
    for (int i = 0; i < n; ++i)
        c(i) = 0.5 * (mags[2 * i] + mags[2 * i + 1]);
    return c;
}

// Named, ordered mode blocks; the order is the Jordan-Wigner order for fermions.
struct SubsystemPartition {
    std::vector<std::string> labels;
    std::vector<std::vector<int>> blocks;

    static SubsystemPartition contiguous(const std::vector<std::pair<std::string, int>>& sizes)
    {
        SubsystemPartition p;
        int offset = 0;
        for (auto& [label, n] : sizes) {
            p.labels.push_back(label);
            p.blocks.push_back(range(offset, offset + n));
            offset += n;
        }
        return p;
    }

    int total() const
    {
        int n = 0;
        for (auto& b : blocks)
            n += static_cast<int>(b.size());
        return n;
    }

    const std::vector<int>& block(const std::string& label) const
    {
        for (size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label)
                return blocks[i];
        throw Error(ErrorCode::DimensionMismatch, "no block labelled " + label);
    }

    // Union of blocks, e.g. modes({"A", "A'"}).
    std::vector<int> modes(const std::vector<std::string>& which) const
    {
        std::vector<int> out;
        for (auto& l : which) {
            auto& b = block(l);
            out.insert(out.end(), b.begin(), b.end());
        }
        return out;
    }

    void validate() const
    {
        std::vector<int> all;
        for (auto& b : blocks)
            all.insert(all.end(), b.begin(), b.end());
        std::sort(all.begin(), all.end());
        for (size_t i = 0; i < all.size(); ++i)
            require(all[i] == static_cast<int>(i), ErrorCode::DimensionMismatch,
                    "partition blocks must be disjoint and cover all modes");
    }
};

inline Mat restrict_modes(const Mat& J, const std::vector<int>& modes)
{
    const int n = static_cast<int>(J.rows()) / 2;
    for (int m : modes)
        require(m >= 0 && m < n, ErrorCode::DimensionMismatch, "mode index out of range");
    return submatrix(J, qp_indices(modes, n));
}

inline Mat restrict(const Mat& J, const SubsystemPartition& p, const std::vector<std::string>& which)
{
    return restrict_modes(J, p.modes(which));
}

// Places a block acting on `modes` into an identity of size 2N.
inline Mat embed_modes(const Mat& block, const std::vector<int>& modes, int N, bool identity_elsewhere = true)
{
    Mat out = identity_elsewhere ? Mat(Mat::Identity(2 * N, 2 * N)) : Mat(Mat::Zero(2 * N, 2 * N));
    auto idx = qp_indices(modes, N);
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = 0; j < idx.size(); ++j)
            out(idx[i], idx[j]) = block(i, j);
    return out;
}

// Direct sum of J's on consecutive mode blocks, in the global qp ordering.
inline Mat direct_sum(const Mat& a, const Mat& b)
{
    const int na = static_cast<int>(a.rows()) / 2, nb = static_cast<int>(b.rows()) / 2;
    const int n = na + nb;
    Mat out = Mat::Zero(2 * n, 2 * n);
    auto ia = qp_indices(range(0, na), n);
    auto ib = qp_indices(range(na, n), n);
    for (int i = 0; i < 2 * na; ++i)
        for (int j = 0; j < 2 * na; ++j)
            out(ia[i], ia[j]) = a(i, j);
    for (int i = 0; i < 2 * nb; ++i)
        for (int j = 0; j < 2 * nb; ++j)
            out(ib[i], ib[j]) = b(i, j);
    return out;
}

} // namespace gaussopt
