#pragma once

#include <random>

#include "phase_space.hpp"

namespace gaussopt {

struct AlgebraBasis {
    Kind kind = Kind::boson;
    int N = 0;
    std::vector<Mat> generators;
};

// sp(2N,ℝ): Ω₀ S with S running over elementary symmetric matrices.
// so(2N,ℝ): E_ij − E_ji.
inline AlgebraBasis full_algebra_basis(Kind kind, int N)
{
    AlgebraBasis b{kind, N, {}};
    const int d = 2 * N;
    Mat w = omega0(N);
    for (int i = 0; i < d; ++i) {
        for (int j = i; j < d; ++j) {
            Mat e = Mat::Zero(d, d);
            if (kind == Kind::boson) {
                e(i, j) = 1.0;
                e(j, i) = 1.0;
                if (i != j)
                    e /= std::sqrt(2.0);
                b.generators.push_back(w * e);
            } else if (i != j) {
                e(i, j) = 1.0 / std::sqrt(2.0);
                e(j, i) = -1.0 / std::sqrt(2.0);
                b.generators.push_back(e);
            }
        }
    }
    return b;
}

inline bool in_algebra(Kind kind, const Mat& K, double tol = 1e-12)
{
    const int n = static_cast<int>(K.rows()) / 2;
    Mat F = background_form(kind, n);
    return max_abs(K * F + F * K.transpose()) <= tol * std::max(1.0, max_abs(K));
}

// Orthonormal (Frobenius) basis of span(mats), dropping dependent directions.
inline std::vector<Mat> span_basis(const std::vector<Mat>& mats, double tol = 1e-10)
{
    if (mats.empty())
        return {};
    const auto rows = mats[0].rows(), cols = mats[0].cols();
    Mat A(rows * cols, mats.size());
    for (size_t k = 0; k < mats.size(); ++k)
        A.col(k) = Eigen::Map<const Vec>(mats[k].data(), rows * cols);
    Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU);
    std::vector<Mat> out;
    const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
        if (svd.singularValues()(k) <= tol * std::max(1.0, smax))
            break;
        Vec u = svd.matrixU().col(k);
        out.push_back(Eigen::Map<Mat>(u.data(), rows, cols));
    }
    return out;
}

struct StabilizerSplit {
    std::vector<Mat> h;       // commute with J₀
    std::vector<Mat> h_perp;  // anticommute with J₀
};

// K = ½(K − J₀KJ₀) + ½(K + J₀KJ₀) splits into commuting and anticommuting parts when J₀² = −𝟙.
inline StabilizerSplit stabilizer_split(const std::vector<Mat>& gens, const Mat& J0)
{
    std::vector<Mat> c, a;
    for (auto& K : gens) {
        c.push_back(0.5 * (K - J0 * K * J0));
        a.push_back(0.5 * (K + J0 * K * J0));
    }
    return {span_basis(c), span_basis(a)};
}

inline Mat tangent_vector(const Mat& Xi, const Mat& J0) { return Xi * J0 - J0 * Xi; }

namespace detail {

// Rows vec(X_i); Tr(X_i Y_j) = (rows(X) · rows(Yᵀ)ᵀ)_ij.
inline Mat stack_rows(const std::vector<Mat>& mats, bool transpose)
{
    if (mats.empty())
        return Mat();
    const auto r = mats[0].rows(), c = mats[0].cols();
    Mat A(mats.size(), r * c);
    for (size_t i = 0; i < mats.size(); ++i) {
        Mat X = transpose ? Mat(mats[i].transpose()) : mats[i];
        A.row(i) = Eigen::Map<const Vec>(X.data(), r * c).transpose();
    }
    return A;
}

} // namespace detail

// g_μν = σ/8 Tr(δJ_μ J₀ δJ_ν J₀), σ = +1 bosons, −1 fermions (keeps g positive for both kinds).
inline Mat manifold_metric(Kind kind, const std::vector<Mat>& gens, const Mat& J0)
{
    const double sigma = kind == Kind::boson ? 1.0 : -1.0;
    if (gens.empty())
        return Mat(0, 0);
    std::vector<Mat> dJJ;
    for (auto& K : gens)
        dJJ.push_back(tangent_vector(K, J0) * J0);
    Mat g = sigma * 0.125 * detail::stack_rows(dJJ, false) * detail::stack_rows(dJJ, true).transpose();
    return symmetrize(g);
}

// ω_μν = 1/8 Tr(δJ_μ J₀ δJ_ν).
inline Mat manifold_symplectic(const std::vector<Mat>& gens, const Mat& J0)
{
    if (gens.empty())
        return Mat(0, 0);
    std::vector<Mat> dJ, dJJ;
    for (auto& K : gens) {
        dJ.push_back(tangent_vector(K, J0));
        dJJ.push_back(dJ.back() * J0);
    }
    return 0.125 * detail::stack_rows(dJJ, false) * detail::stack_rows(dJ, true).transpose();
}

struct TangentFrame {
    Kind kind = Kind::boson;
    Mat J0;
    std::vector<Mat> generators;
    Mat metric;
    Mat metric_inverse;
    Mat symplectic;

    size_t size() const { return generators.size(); }
};

inline std::vector<Mat> combine(const std::vector<Mat>& gens, const Mat& coeffs)
{
    std::vector<Mat> out;
    for (Eigen::Index k = 0; k < coeffs.cols(); ++k) {
        Mat X = Mat::Zero(gens[0].rows(), gens[0].cols());
        for (size_t mu = 0; mu < gens.size(); ++mu)
            if (coeffs(mu, k) != 0.0)
                X += coeffs(mu, k) * gens[mu];
        out.push_back(X);
    }
    return out;
}

inline TangentFrame finish_frame(Kind kind, std::vector<Mat> gens, const Mat& J0)
{
    TangentFrame f;
    f.kind = kind;
    f.J0 = J0;
    f.generators = std::move(gens);
    f.metric = manifold_metric(kind, f.generators, J0);
    f.metric_inverse = f.metric.size() ? Mat(f.metric.inverse()) : Mat();
    f.symplectic = manifold_symplectic(f.generators, J0);
    return f;
}

// Whitening by the symmetric eigendecomposition of g; duplicated directions are an error.
inline TangentFrame orthonormalize(const TangentFrame& frame, double tol = 1e-10)
{
    if (frame.size() == 0)
        return frame;
    Eigen::SelfAdjointEigenSolver<Mat> es(frame.metric);
    const double top = es.eigenvalues().maxCoeff();
    require(es.eigenvalues().minCoeff() > tol * std::max(1.0, top),
            ErrorCode::RankDeficient, "frame metric is singular");
    Mat W = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal();
    return finish_frame(frame.kind, combine(frame.generators, W), frame.J0);
}

inline TangentFrame make_frame(Kind kind, const std::vector<Mat>& gens, const Mat& J0)
{
    return finish_frame(kind, gens, J0);
}

// Orthonormal frame of the directions in span(gens) that move J₀.
// For the full algebra at a pure J₀ this is 𝔥′_⊥; for subalgebras whose anticommuting
// parts leave the span (ancilla-only transformations) the g-complement of 𝔥′ is used.
inline TangentFrame build_frame(Kind kind, const std::vector<Mat>& gens, const Mat& J0, double tol = 1e-10)
{
    std::vector<Mat> span = span_basis(gens);
    if (span.empty())
        return finish_frame(kind, {}, J0);
    if (purity_defect(J0) < 1e-8) {
        StabilizerSplit s = stabilizer_split(span, J0);
        if (s.h.size() + s.h_perp.size() == span.size()) {
            TangentFrame f = make_frame(kind, s.h_perp, J0);
            return orthonormalize(f, tol);
        }
    }
    Mat g = manifold_metric(kind, span, J0);
    Eigen::SelfAdjointEigenSolver<Mat> es(g);
    const double top = es.eigenvalues().size() ? es.eigenvalues().maxCoeff() : 0.0;
    std::vector<int> keep;
    for (Eigen::Index k = es.eigenvalues().size() - 1; k >= 0; --k)
        if (es.eigenvalues()(k) > tol * std::max(1.0, top))
            keep.push_back(static_cast<int>(k));
    Mat W(span.size(), keep.size());
    for (size_t j = 0; j < keep.size(); ++j)
        W.col(j) = es.eigenvectors().col(keep[j]) / std::sqrt(es.eigenvalues()(keep[j]));
    return finish_frame(kind, combine(span, W), J0);
}

// 𝔥′_⊥ at J₀ = Ω₀ written down directly: bosons Ω₀[[a, b], [b, −a]] with a, b symmetric,
// fermions [[a, b], [b, −a]] with a, b antisymmetric. Scaled to g = 𝟙.
inline TangentFrame pure_state_frame(Kind kind, int N)
{
    require(N >= 1, ErrorCode::DimensionMismatch, "need at least one mode");
    const bool boson = kind == Kind::boson;
    const Mat w = omega0(N);
    std::vector<Mat> gens;
    for (int i = 0; i < N; ++i)
        for (int j = boson ? i : i + 1; j < N; ++j)
            for (int part = 0; part < 2; ++part) {
                Mat e = Mat::Zero(N, N);
                e(i, j) = 1.0;
                e(j, i) += boson ? 1.0 : -1.0;
                Mat K = Mat::Zero(2 * N, 2 * N);
                if (part == 0) {
                    K.topLeftCorner(N, N) = e;
                    K.bottomRightCorner(N, N) = -e;
                } else {
                    K.topRightCorner(N, N) = e;
                    K.bottomLeftCorner(N, N) = e;
                }
                gens.push_back(boson ? Mat(w * K) : K);
            }
    const Mat J0 = omega0(N);
    for (auto& K : gens) {
        Mat dJJ = tangent_vector(K, J0) * J0;
        const double g = (boson ? 0.125 : -0.125) * dJJ.cwiseProduct(dJJ.transpose()).sum();
        K /= std::sqrt(g);
    }
    return finish_frame(kind, std::move(gens), J0);
}

inline Mat cayley_retract(const Mat& K, double eps) { return cayley(K, eps); }

// Fermions: Haar-random SO(2N) from the sign-fixed QR of a Gaussian matrix (spread unused).
// Bosons: exp(spread Σ x_μ Ξ_μ) with x_μ standard normal over the full algebra.
inline Mat sample_group(Kind kind, int N, std::uint64_t seed, double spread)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    if (kind == Kind::fermion) {
        Mat X(2 * N, 2 * N);
        for (Eigen::Index j = 0; j < X.cols(); ++j)
            for (Eigen::Index i = 0; i < X.rows(); ++i)
                X(i, j) = normal(rng);
        Eigen::HouseholderQR<Mat> qr(X);
        Mat Q = qr.householderQ();
        Mat R = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Eigen::Index k = 0; k < Q.cols(); ++k)
            if (R(k, k) < 0)
                Q.col(k) *= -1.0;
        if (Q.determinant() < 0)
            Q.col(0) *= -1.0;
        return Q;
    }
    if (spread == 0.0)
        return Mat::Identity(2 * N, 2 * N);
    AlgebraBasis b = full_algebra_basis(kind, N);
    Mat K = Mat::Zero(2 * N, 2 * N);
    for (auto& X : b.generators)
        K += normal(rng) * X;
    return expm(Mat(spread * K));
}

} // namespace gaussopt
