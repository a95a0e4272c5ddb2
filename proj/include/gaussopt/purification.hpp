#pragma once

#include "lie.hpp"

namespace gaussopt {

struct MixedStandardForm {
    Kind kind = Kind::boson;
    Vec c;
    Vec r;
    Mat T;  // J_AB = T J^m T⁻¹
};

// J^m = [[0, diag c], [−diag c, 0]].
inline Mat mixed_standard_J(const Vec& c)
{
    const auto n = c.size();
    Mat J = Mat::Zero(2 * n, 2 * n);
    J.topRightCorner(n, n) = c.asDiagonal();
    J.bottomLeftCorner(n, n) = -Mat(c.asDiagonal());
    return J;
}

inline MixedStandardForm mixed_standard_form(const Mat& J_AB, Kind kind)
{
    const int n = static_cast<int>(J_AB.rows()) / 2;
    require(J_AB.rows() == 2 * n && J_AB.cols() == 2 * n && n >= 1, ErrorCode::DimensionMismatch,
            "J_AB must be 2N×2N");
    MixedStandardForm sf;
    sf.kind = kind;
    if (kind == Kind::boson) {
        Williamson w = williamson(covariance_from_J(kind, J_AB));
        sf.T = w.S;
        sf.c = w.c;
        sf.r = Vec(n);
        for (int i = 0; i < n; ++i) {
            sf.c(i) = std::max(sf.c(i), 1.0);
            sf.r(i) = 0.5 * std::acosh(sf.c(i));
        }
    } else {
        NormalForm nf = antisymmetric_normal_form(J_AB);
        sf.T = nf.O;
        sf.c = nf.c;
        sf.r = Vec(n);
        for (int i = 0; i < n; ++i) {
            sf.c(i) = std::min(sf.c(i), 1.0);
            sf.r(i) = 0.5 * std::acos(sf.c(i));
        }
    }
    return sf;
}

// Two-mode purification of a standard-form mode (system mode i, ancilla mode a) written into J.
inline void write_purified_pair(Mat& J, Kind kind, int i, int a, int Ntot, double c)
{
    const int qi = i, pi = Ntot + i, qa = a, pa = Ntot + a;
    if (kind == Kind::boson) {
        const double ch = c, sh = std::sqrt(std::max(c * c - 1.0, 0.0));
        J(qi, pi) = ch;
        J(pi, qi) = -ch;
        J(qa, pa) = ch;
        J(pa, qa) = -ch;
        J(qi, pa) = sh;
        J(pi, qa) = sh;
        J(qa, pi) = sh;
        J(pa, qi) = sh;
    } else {
        const double co = c, si = std::sqrt(std::max(1.0 - c * c, 0.0));
        J(qi, pi) = co;
        J(pi, qi) = -co;
        J(qa, pa) = co;
        J(pa, qa) = -co;
        J(qi, pa) = si;
        J(pi, qa) = si;
        J(qa, pi) = -si;
        J(pa, qi) = -si;
    }
}

// Pure J^p on (system, ancilla) modes; restricting it to the system gives J^m exactly.
inline Mat standard_purification(const MixedStandardForm& sf, int n_ancilla_A, int n_ancilla_B,
                                 double pure_tol = 1e-10)
{
    const int n = static_cast<int>(sf.c.size());
    const int nanc = n_ancilla_A + n_ancilla_B;
    const int Ntot = n + nanc;
    // r ~ √(|c − 1|) near purity, so test c itself
    auto is_mixed = [&](int i) { return std::abs(std::abs(sf.c(i)) - 1.0) > pure_tol; };
    int mixed = 0;
    for (int i = 0; i < n; ++i)
        if (is_mixed(i))
            ++mixed;
    require(nanc >= mixed, ErrorCode::DimensionMismatch,
            "ancilla too small: need at least " + std::to_string(mixed) + " modes");
    Mat J = Mat::Zero(2 * Ntot, 2 * Ntot);
    int next = n;
    const bool pair_all = nanc >= n;
    for (int i = 0; i < n; ++i) {
        if (pair_all || is_mixed(i)) {
            write_purified_pair(J, sf.kind, i, next++, Ntot, sf.c(i));
        } else {
            J(i, Ntot + i) = 1.0;
            J(Ntot + i, i) = -1.0;
        }
    }
    for (int a = next; a < Ntot; ++a) {
        J(a, Ntot + a) = 1.0;
        J(Ntot + a, a) = -1.0;
    }
    return J;
}

struct PurificationProblem {
    Kind kind = Kind::boson;
    SubsystemPartition partition;  // A, B, A', B' in this order
    Mat J_AB;
    MixedStandardForm standard;
    Mat J_init;
    TangentFrame ancilla_frame;
    int n_system = 0;
    int n_ancilla = 0;

    int n_total() const { return n_system + n_ancilla; }
    std::vector<int> ancilla_modes() const { return range(n_system, n_total()); }
};

inline PurificationProblem build_problem(const Mat& J_AB, int nA, int nB, int nAp, int nBp, Kind kind)
{
    require(nA >= 0 && nB >= 0 && nAp >= 0 && nBp >= 0, ErrorCode::DimensionMismatch, "negative block size");
    require(J_AB.rows() == 2 * (nA + nB), ErrorCode::DimensionMismatch, "J_AB does not match N_A + N_B");
    PurificationProblem p;
    p.kind = kind;
    p.partition = SubsystemPartition::contiguous({{"A", nA}, {"B", nB}, {"A'", nAp}, {"B'", nBp}});
    p.J_AB = J_AB;
    p.n_system = nA + nB;
    p.n_ancilla = nAp + nBp;
    const int Ntot = p.n_total();
    p.standard = mixed_standard_form(J_AB, kind);
    Mat Jp = standard_purification(p.standard, nAp, nBp);
    Mat T = embed_modes(p.standard.T, range(0, p.n_system), Ntot);
    Mat Tinv = embed_modes(p.standard.T.inverse(), range(0, p.n_system), Ntot);
    p.J_init = T * Jp * Tinv;

    std::vector<Mat> gens;
    if (p.n_ancilla > 0) {
        for (auto& K : full_algebra_basis(kind, p.n_ancilla).generators)
            gens.push_back(embed_modes(K, p.ancilla_modes(), Ntot, false));
    }
    p.ancilla_frame = gens.empty() ? TangentFrame{kind, p.J_init, {}, Mat(), Mat(), Mat()}
                                   : build_frame(kind, gens, p.J_init);
    return p;
}

// Random 𝟙_AB ⊕ M̃ with M̃ drawn on the ancilla.
inline Mat sample_ancilla(const PurificationProblem& p, std::uint64_t seed, double spread)
{
    if (p.n_ancilla == 0)
        return Mat::Identity(2 * p.n_total(), 2 * p.n_total());
    return embed_modes(sample_group(p.kind, p.n_ancilla, seed, spread), p.ancilla_modes(), p.n_total());
}

} // namespace gaussopt
