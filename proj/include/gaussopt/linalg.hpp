#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <unsupported/Eigen/MatrixFunctions>

#include "core.hpp"

namespace gaussopt {

// Ω₀ = [[0, 𝟙], [−𝟙, 0]] in (q₁..q_N, p₁..p_N) ordering.
inline Mat omega0(int N)
{
    Mat w = Mat::Zero(2 * N, 2 * N);
    w.topRightCorner(N, N).setIdentity();
    w.bottomLeftCorner(N, N) = -Mat::Identity(N, N);
    return w;
}

// Phase-space rows for a list of modes: (q_{m₁}..q_{m_k}, p_{m₁}..p_{m_k}).
inline std::vector<int> qp_indices(const std::vector<int>& modes, int N)
{
    std::vector<int> idx;
    idx.reserve(2 * modes.size());
    for (int m : modes)
        idx.push_back(m);
    for (int m : modes)
        idx.push_back(N + m);
    return idx;
}

inline std::vector<int> range(int begin, int end)
{
    std::vector<int> r(std::max(0, end - begin));
    std::iota(r.begin(), r.end(), begin);
    return r;
}

inline Mat submatrix(const Mat& m, const std::vector<int>& rows, const std::vector<int>& cols)
{
    Mat out(rows.size(), cols.size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j)
            out(i, j) = m(rows[i], cols[j]);
    return out;
}

inline Mat submatrix(const Mat& m, const std::vector<int>& idx) { return submatrix(m, idx, idx); }

struct EigenDecomp {
    CVec values;
    CMat vectors;
    CMat inverse;
};

inline EigenDecomp eigen_decompose(const Mat& m)
{
    Eigen::EigenSolver<Mat> es(m);
    EigenDecomp d{es.eigenvalues(), es.eigenvectors(), {}};
    d.inverse = d.vectors.inverse();
    return d;
}

inline EigenDecomp eigen_decompose(const CMat& m)
{
    Eigen::ComplexEigenSolver<CMat> es(m);
    EigenDecomp d{es.eigenvalues(), es.eigenvectors(), {}};
    d.inverse = d.vectors.inverse();
    return d;
}

// f(M) = V f(Λ) V⁻¹ for diagonalizable M.
inline CMat apply_function(const EigenDecomp& d, const std::function<cplx(cplx)>& f)
{
    CVec fv(d.values.size());
    for (Eigen::Index i = 0; i < d.values.size(); ++i)
        fv(i) = f(d.values(i));
    return d.vectors * fv.asDiagonal() * d.inverse;
}

inline Mat expm(const Mat& k) { return k.exp(); }
inline CMat expm(const CMat& k) { return k.exp(); }

inline Mat cayley(const Mat& k, double eps)
{
    const Mat I = Mat::Identity(k.rows(), k.cols());
    Mat lhs = I - 0.5 * eps * k;
    return lhs.partialPivLu().solve(I + 0.5 * eps * k).eval();
}

inline Mat symmetrize(const Mat& m) { return 0.5 * (m + m.transpose()); }
inline Mat antisymmetrize(const Mat& m) { return 0.5 * (m - m.transpose()); }

inline Mat sym_sqrt(const Mat& s)
{
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(s));
    require(es.eigenvalues().minCoeff() > 0, ErrorCode::NotPositive, "matrix is not positive definite");
    return es.operatorSqrt();
}

// Real antisymmetric A = O [[0, diag c], [−diag c, 0]] Oᵀ with O orthogonal and c sorted descending.
struct NormalForm {
    Mat O;
    Vec c;
};

inline NormalForm antisymmetric_normal_form(const Mat& a, double zero_tol = 1e-12)
{
    const int n2 = static_cast<int>(a.rows());
    require(n2 % 2 == 0 && a.cols() == n2, ErrorCode::DimensionMismatch, "normal form needs an even square matrix");
    const int n = n2 / 2;
    Mat A = antisymmetrize(a);
    CMat H = cplx(0, 1) * A.cast<cplx>();
    Eigen::SelfAdjointEigenSolver<CMat> es(H);
    const double scale = std::max(1.0, max_abs(A));

    // iA v = c v with c > 0 gives A x = c y, A y = −c x for v = x + i y.
    std::vector<std::pair<double, Mat>> pairs;
    for (int k = n2 - 1; k >= 0; --k) {
        double c = es.eigenvalues()(k);
        if (c <= zero_tol * scale)
            break;
        CVec v = es.eigenvectors().col(k);
        Mat uw(n2, 2);
        uw.col(0) = std::sqrt(2.0) * v.imag();
        uw.col(1) = std::sqrt(2.0) * v.real();
        pairs.emplace_back(c, uw);
    }
    Mat O = Mat::Zero(n2, n2);
    Vec c = Vec::Zero(n);
    int k = 0;
    for (auto& [val, uw] : pairs) {
        O.col(k) = uw.col(0);
        O.col(n + k) = uw.col(1);
        c(k) = val;
        ++k;
    }
    if (k < n) {
        Mat Q = O.leftCols(k);
        Mat Pm = O.middleCols(n, k);
        Mat P = Mat::Identity(n2, n2) - Q * Q.transpose() - Pm * Pm.transpose();
        Eigen::SelfAdjointEigenSolver<Mat> ps(symmetrize(P));
        int col = n2 - 1;
        for (int j = k; j < n; ++j) {
            O.col(j) = ps.eigenvectors().col(col--);
            O.col(n + j) = ps.eigenvectors().col(col--);
        }
    }
    return {O, c};
}

// G = S diag(c, c) Sᵀ with S Ω₀ Sᵀ = Ω₀ and c sorted descending.
struct Williamson {
    Mat S;
    Vec c;
};

inline Williamson williamson(const Mat& G)
{
    const int n = static_cast<int>(G.rows()) / 2;
    Mat Gh = sym_sqrt(G);
    Mat Ghi = Gh.inverse();
    Mat B = antisymmetrize(Ghi * omega0(n) * Ghi);
    NormalForm nf = antisymmetric_normal_form(B);
    // c = 1/e, so ascending e gives descending c.
    std::vector<int> order = range(0, n);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return nf.c(i) < nf.c(j); });
    Mat S(2 * n, 2 * n);
    Vec c(n);
    for (int k = 0; k < n; ++k) {
        int i = order[k];
        double e = nf.c(i);
        require(e > 0, ErrorCode::NotPositive, "degenerate symplectic spectrum");
        S.col(k) = Gh * nf.O.col(i) * std::sqrt(e);
        S.col(n + k) = Gh * nf.O.col(n + i) * std::sqrt(e);
        c(k) = 1.0 / e;
    }
    return {S, c};
}

inline Mat background_form(Kind kind, int N)
{
    return kind == Kind::boson ? omega0(N) : Mat::Identity(2 * N, 2 * N);
}

// Inverse inside Sp(2N,ℝ) or O(2N,ℝ) without a general solve.
inline Mat group_inverse(Kind kind, const Mat& M)
{
    if (kind == Kind::fermion)
        return M.transpose();
    const int n = static_cast<int>(M.rows()) / 2;
    Mat w = omega0(n);
    return -w * M.transpose() * w;
}

inline double group_defect(Kind kind, const Mat& M)
{
    const int n = static_cast<int>(M.rows()) / 2;
    Mat F = background_form(kind, n);
    return max_abs(M * F * M.transpose() - F);
}

} // namespace gaussopt
