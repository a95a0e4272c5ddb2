#pragma once

#include <optional>

#include "lie.hpp"

namespace gaussopt {

struct RelativeStructure {
    Mat delta;
    std::optional<Mat> sqrt;
    std::optional<Mat> log_generator;
    bool same_component = true;
    bool ambiguous = false;
    CVec eigenvalues;
};

// Δ = ΓΓ₀⁻¹ = −JJ₀. Fermionic eigenvalues −1 come in pairs; an odd number of pairs
// means the states sit in different components of O(2N).
inline RelativeStructure relative_structure(const Mat& gamma, const Mat& gamma0, Kind kind)
{
    require(gamma.rows() == gamma0.rows(), ErrorCode::DimensionMismatch, "covariance sizes differ");
    RelativeStructure r;
    r.delta = gamma * gamma0.inverse();
    Eigen::EigenSolver<Mat> es(r.delta, false);
    r.eigenvalues = es.eigenvalues();
    if (kind == Kind::fermion) {
        int minus = 0;
        for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i)
            if (std::abs(r.eigenvalues(i) + 1.0) < 1e-6)
                ++minus;
        const int pairs = (minus + 1) / 2;
        r.same_component = pairs % 2 == 0;
        r.ambiguous = r.same_component && pairs > 0;
        if (!r.same_component || r.ambiguous)
            return r;
    }
    r.sqrt = r.delta.sqrt().eval();
    r.log_generator = Mat(0.5 * r.delta.log());
    return r;
}

inline const Mat& require_log(const RelativeStructure& r)
{
    require(r.same_component, ErrorCode::DifferentComponent, "states lie in different components");
    require(!r.ambiguous, ErrorCode::AmbiguousSqrt, "Δ has a −1 eigenvalue quadruple");
    return *r.log_generator;
}

// Γ = e^K Γ₀ e^{Kᵀ}.
inline Mat generator_to_covariance(const Mat& K, const Mat& gamma0)
{
    Mat E = expm(K);
    return E * gamma0 * E.transpose();
}

inline Mat covariance_to_generator(const Mat& gamma, const Mat& gamma0, Kind kind)
{
    return require_log(relative_structure(gamma, gamma0, kind));
}

struct SqueezingMatrix {
    Kind kind = Kind::boson;
    CMat gamma;
};

// L = tanh(½ log Δ) = (Δ − 𝟙)(Δ + 𝟙)⁻¹ and γ = L₁ + i L₂ from L = [[L₁, L₂], [L₂, −L₁]].
inline SqueezingMatrix covariance_to_squeezing(const Mat& gamma, Kind kind)
{
    const int n = static_cast<int>(gamma.rows()) / 2;
    RelativeStructure r = relative_structure(gamma, standard_vacuum(kind, n), kind);
    require(r.same_component, ErrorCode::DifferentComponent, "state not connected to the reference vacuum");
    require(!r.ambiguous, ErrorCode::AmbiguousSqrt, "Δ has a −1 eigenvalue quadruple");
    const Mat I = Mat::Identity(2 * n, 2 * n);
    Mat L = (r.delta + I).transpose().partialPivLu().solve((r.delta - I).transpose()).transpose();
    CMat g(n, n);
    g.real() = L.topLeftCorner(n, n);
    g.imag() = L.topRightCorner(n, n);
    if (kind == Kind::boson)
        g = 0.5 * (g + g.transpose()).eval();
    else
        g = 0.5 * (g - g.transpose()).eval();
    return {kind, g};
}

// Explicit block formulas for (G₁..G₄) or (Ω₁..Ω₄).
inline Mat squeezing_to_covariance(const SqueezingMatrix& s)
{
    const auto n = s.gamma.rows();
    const CMat& g = s.gamma;
    const CMat I = CMat::Identity(n, n);
    const CMat gg = g.adjoint() * g;
    Mat out(2 * n, 2 * n);
    if (s.kind == Kind::boson) {
        Eigen::JacobiSVD<CMat> svd(g);
        require(n == 0 || svd.singularValues()(0) < 1.0, ErrorCode::NonNormalizable,
                "squeezing matrix must have spectral norm below one");
        CMat X = (I - gg).inverse();
        CMat a = (I + 2.0 * g + gg) * X;
        CMat b = (-I + 2.0 * g - gg) * X;
        CMat c = (I - 2.0 * g + gg) * X;
        out.topLeftCorner(n, n) = a.real();
        out.topRightCorner(n, n) = a.imag();
        out.bottomLeftCorner(n, n) = b.imag();
        out.bottomRightCorner(n, n) = c.real();
        return symmetrize(out);
    }
    CMat Y = (I + gg).inverse();
    out.topLeftCorner(n, n) = (2.0 * (-I - g) * Y).imag();
    out.topRightCorner(n, n) = ((I + 2.0 * g - gg) * Y).real();
    out.bottomLeftCorner(n, n) = ((-I + 2.0 * g + gg) * Y).real();
    out.bottomRightCorner(n, n) = (2.0 * (-I + g) * Y).imag();
    return antisymmetrize(out);
}

// Closed-form inverse of the block formulas.
inline SqueezingMatrix squeezing_from_blocks(const Mat& gamma, Kind kind)
{
    const int n = static_cast<int>(gamma.rows()) / 2;
    const CMat I = CMat::Identity(n, n);
    const CMat b1 = gamma.topLeftCorner(n, n).cast<cplx>(), b2 = gamma.topRightCorner(n, n).cast<cplx>();
    const CMat b3 = gamma.bottomLeftCorner(n, n).cast<cplx>(), b4 = gamma.bottomRightCorner(n, n).cast<cplx>();
    const cplx i(0, 1);
    CMat num, den;
    if (kind == Kind::boson) {
        num = b1 - b4 + i * (b2 + b3);
        den = 2.0 * I + b1 + b4 + i * (b2 - b3);
    } else {
        num = b2 + b3 - i * (b1 - b4);
        den = 2.0 * I + b2 - b3 - i * (b1 + b4);
    }
    CMat g = den.transpose().partialPivLu().solve(num.transpose()).transpose();
    return {kind, g};
}

struct BogoliubovData {
    CMat alpha;
    CMat beta;
};

inline Mat bogoliubov_to_group(const BogoliubovData& d)
{
    const auto n = d.alpha.rows();
    require(d.beta.rows() == n && d.alpha.cols() == n && d.beta.cols() == n, ErrorCode::DimensionMismatch,
            "α and β must be N×N");
    Mat M(2 * n, 2 * n);
    M.topLeftCorner(n, n) = d.alpha.real() + d.beta.real();
    M.topRightCorner(n, n) = d.beta.imag() - d.alpha.imag();
    M.bottomLeftCorner(n, n) = d.alpha.imag() + d.beta.imag();
    M.bottomRightCorner(n, n) = d.alpha.real() - d.beta.real();
    return M;
}

inline CMat bogoliubov_to_group_aab(const BogoliubovData& d)
{
    const auto n = d.alpha.rows();
    CMat M(2 * n, 2 * n);
    M.topLeftCorner(n, n) = d.alpha;
    M.topRightCorner(n, n) = d.beta;
    M.bottomLeftCorner(n, n) = d.beta.conjugate();
    M.bottomRightCorner(n, n) = d.alpha.conjugate();
    return M;
}

inline Mat checked_bogoliubov_to_group(const BogoliubovData& d, Kind kind, double tol = 1e-8)
{
    Mat M = bogoliubov_to_group(d);
    require(group_defect(kind, M) <= tol, ErrorCode::NotInGroup, "α, β do not define a group element");
    return M;
}

inline BogoliubovData bogoliubov_from_group(const Mat& M)
{
    const auto n = M.rows() / 2;
    Mat m11 = M.topLeftCorner(n, n), m12 = M.topRightCorner(n, n);
    Mat m21 = M.bottomLeftCorner(n, n), m22 = M.bottomRightCorner(n, n);
    BogoliubovData d;
    d.alpha = CMat(n, n);
    d.beta = CMat(n, n);
    d.alpha.real() = 0.5 * (m11 + m22);
    d.alpha.imag() = 0.5 * (m21 - m12);
    d.beta.real() = 0.5 * (m11 - m22);
    d.beta.imag() = 0.5 * (m21 + m12);
    return d;
}

// u ∈ U(N) acting as [[X, −Y], [Y, X]] on (q, p), u = X + iY.
inline Mat unitary_to_group(const CMat& u)
{
    const auto n = u.rows();
    Mat M(2 * n, 2 * n);
    M << u.real(), -u.imag(), u.imag(), u.real();
    return M;
}

// M = T u with T = √Δ.
inline BogoliubovData group_to_bogoliubov(const Mat& gamma, const Mat& gamma0, Kind kind,
                                          const std::optional<CMat>& u = std::nullopt)
{
    RelativeStructure r = relative_structure(gamma, gamma0, kind);
    require(r.same_component, ErrorCode::DifferentComponent, "states lie in different components");
    require(!r.ambiguous, ErrorCode::AmbiguousSqrt, "Δ has a −1 eigenvalue quadruple");
    Mat M = *r.sqrt;
    if (u)
        M = M * unitary_to_group(*u);
    return bogoliubov_from_group(M);
}

struct ThermalData {
    Kind kind = Kind::boson;
    Mat q;
    double c0 = 0.0;
};

// Bosons q = −iω arccoth(iJ), c₀ = ¼ log|det((𝟙+J²)/4)|.
// Fermions q = −ig arctanh(iJ), c₀ = −¼ log|det((𝟙+J²)/4)|.
inline ThermalData covariance_to_thermal(const Mat& J, Kind kind, double pure_tol = 1e-10)
{
    const int n = static_cast<int>(J.rows()) / 2;
    Vec c = restricted_spectrum(J, kind);
    std::string bad;
    for (int i = 0; i < n; ++i)
        if (std::abs(c(i) - 1.0) < pure_tol)
            bad += (bad.empty() ? "" : ",") + std::to_string(i);
    require(bad.empty(), ErrorCode::PureModeDivergence, "pure modes have no modular Hamiltonian: " + bad);

    EigenDecomp d = eigen_decompose(J);
    const cplx i(0, 1);
    ThermalData t;
    t.kind = kind;
    double logdet = 0.0;
    for (Eigen::Index k = 0; k < d.values.size(); ++k)
        logdet += std::log(std::abs((1.0 + d.values(k) * d.values(k)) / 4.0));
    if (kind == Kind::boson) {
        CMat f = apply_function(d, [&](cplx x) { return std::atanh(1.0 / (i * x)); });
        t.q = (-i * (-omega0(n)).cast<cplx>() * f).real();
        t.q = symmetrize(t.q);
        t.c0 = 0.25 * logdet;
    } else {
        CMat f = apply_function(d, [&](cplx x) { return std::atanh(i * x); });
        t.q = antisymmetrize((-i * f).real());
        t.c0 = -0.25 * logdet;
    }
    return t;
}

// Inverses: J = −i coth(iΩq) for bosons, J = −i tanh(iq) for fermions.
inline Mat thermal_to_J(const ThermalData& t)
{
    const int n = static_cast<int>(t.q.rows()) / 2;
    const cplx i(0, 1);
    if (t.kind == Kind::boson) {
        EigenDecomp d = eigen_decompose(Mat(omega0(n) * t.q));
        return (-i * apply_function(d, [&](cplx x) { return 1.0 / std::tanh(i * x); })).real();
    }
    EigenDecomp d = eigen_decompose(t.q);
    return (-i * apply_function(d, [&](cplx x) { return std::tanh(i * x); })).real();
}

// S = ⟨−log ρ⟩ with −log ρ = c₀ + q ξξ (bosons) or c₀ + i q ξξ (fermions).
inline double thermal_entropy(const ThermalData& t)
{
    Mat gamma = covariance_from_J(t.kind, thermal_to_J(t));
    return t.c0 + 0.5 * (t.q * gamma).trace();
}

// χ_s(w) = exp(−wᵀ X w): X = ¼(G + sG₀) or (i/4)(Ω − sΩ₀).
inline CMat characteristic_exponent(const Mat& gamma, const Mat& gamma0, double s, Kind kind)
{
    require(s >= -1.0 && s <= 1.0, ErrorCode::InvalidConfig, "s must lie in [−1, 1]");
    if (kind == Kind::boson)
        return (0.25 * (gamma + s * gamma0)).cast<cplx>();
    return cplx(0, 0.25) * (gamma - s * gamma0).cast<cplx>();
}

struct Quasiprobability {
    CMat exponent;  // W_s(ξ) = normalization · exp(−ξᵀ exponent ξ)
    double normalization = 0.0;
};

inline Quasiprobability quasiprob_exponent(const Mat& gamma, const Mat& gamma0, double s, Kind kind)
{
    require(s >= -1.0 && s <= 1.0, ErrorCode::InvalidConfig, "s must lie in [−1, 1]");
    const double pi = 3.14159265358979323846;
    Mat X = kind == Kind::boson ? Mat(gamma + s * gamma0) : Mat(gamma - s * gamma0);
    Eigen::FullPivLU<Mat> lu(X);
    require(lu.isInvertible() && std::abs(lu.determinant()) > 1e-12 * std::max(1.0, max_abs(X)),
            ErrorCode::SingularDistribution, "quasiprobability exponent is singular");
    Quasiprobability w;
    if (kind == Kind::boson) {
        w.exponent = lu.inverse().cast<cplx>();
        w.normalization = 1.0 / std::sqrt((pi * X).determinant());
    } else {
        w.exponent = cplx(0, -1) * lu.inverse().cast<cplx>();
        w.normalization = 1.0 / std::sqrt(std::abs((0.5 * X).determinant()));
    }
    return w;
}

struct WaveFunctionData {
    Mat A, B, C, D;
    bool mixed = false;
};

// ψ(q) ∝ exp(−½ qᵀ(A + iB)q); mixed ρ(q, q̄) adds C, D.
inline WaveFunctionData covariance_to_wavefunction(const Mat& G, bool mixed)
{
    const int n = static_cast<int>(G.rows()) / 2;
    Mat Gqq = G.topLeftCorner(n, n), Gqp = G.topRightCorner(n, n);
    Mat Gpq = G.bottomLeftCorner(n, n), Gpp = G.bottomRightCorner(n, n);
    Eigen::FullPivLU<Mat> lu(Gqq);
    require(lu.isInvertible(), ErrorCode::SingularPositionBlock, "position block of G is singular");
    Mat X = lu.inverse();
    WaveFunctionData w;
    w.mixed = mixed;
    if (!mixed) {
        w.A = symmetrize(X);
        w.B = symmetrize(-X * Gqp);
        w.C = Mat::Zero(n, n);
        w.D = Mat::Zero(n, n);
        return w;
    }
    Mat W = Gpp - Gpq * X * Gqp;
    Mat Y = -X * Gqp;
    Mat Z = -Gpq * X;
    w.A = symmetrize(0.5 * (X + W));
    w.C = symmetrize(0.5 * (X - W));
    w.B = symmetrize(0.5 * (Y + Z));
    w.D = antisymmetrize(0.5 * (Z - Y));
    return w;
}

inline Mat wavefunction_to_covariance(const WaveFunctionData& w)
{
    const auto n = w.A.rows();
    Mat C = w.C.size() ? w.C : Mat::Zero(n, n);
    Mat D = w.D.size() ? w.D : Mat::Zero(n, n);
    Mat X = w.A + C;
    Eigen::LLT<Mat> llt(X);
    require(llt.info() == Eigen::Success, ErrorCode::NotPositive, "A (+C) must be positive definite");
    Mat Xi = llt.solve(Mat::Identity(n, n));
    Mat G(2 * n, 2 * n);
    G.topLeftCorner(n, n) = Xi;
    G.topRightCorner(n, n) = -Xi * (w.B - D);
    G.bottomLeftCorner(n, n) = -(w.B + D) * Xi;
    G.bottomRightCorner(n, n) = w.A - C + (w.B + D) * Xi * (w.B - D);
    return symmetrize(G);
}

} // namespace gaussopt
