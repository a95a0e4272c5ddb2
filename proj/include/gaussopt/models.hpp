#pragma once

#include "objectives.hpp"

namespace gaussopt {

struct ChainModel {
    QuadraticHamiltonian H;
    Mat gamma;  // ground-state covariance
    double E0 = 0.0;
};

// Ĥ = ½ Σ [π_i² + m² φ_i² + (φ_i − φ_{i+1})²] on a periodic ring, lattice spacing 1.
inline ChainModel klein_gordon_chain(int N, double m)
{
    require(N >= 2, ErrorCode::InvalidConfig, "chain needs at least two sites");
    require(m > 0, ErrorCode::InvalidConfig, "mass must be positive");
    const double pi = 3.14159265358979323846;
    ChainModel c;
    c.H.kind = Kind::boson;
    c.H.h = Mat::Zero(2 * N, 2 * N);
    for (int i = 0; i < N; ++i) {
        int j = (i + 1) % N;
        c.H.h(i, i) += 0.5 * (m * m + 2.0);
        c.H.h(i, j) -= 0.5;
        c.H.h(j, i) -= 0.5;
        c.H.h(N + i, N + i) = 0.5;
    }
    Vec w(N);
    for (int k = 0; k < N; ++k) {
        double s = std::sin(pi * k / N);
        w(k) = std::sqrt(m * m + 4.0 * s * s);
    }
    // Circulant ground state: G_φφ(r) = (1/N) Σ_k cos(2πkr/N)/ω_k, G_ππ(r) = (1/N) Σ_k ω_k cos(2πkr/N).
    Vec gq(N), gp(N);
    for (int r = 0; r < N; ++r) {
        double a = 0, b = 0;
        for (int k = 0; k < N; ++k) {
            double cs = std::cos(2 * pi * k * r / N);
            a += cs / w(k);
            b += cs * w(k);
        }
        gq(r) = a / N;
        gp(r) = b / N;
    }
    c.gamma = Mat::Zero(2 * N, 2 * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            int r = (j - i + N) % N;
            c.gamma(i, j) = gq(r);
            c.gamma(N + i, N + j) = gp(r);
        }
    c.E0 = 0.5 * w.sum();
    return c;
}

// Transverse-field Ising ring Ĥ = −Σ (J/2 σˣσˣ + h/2 σᶻ) after Jordan-Wigner, even-parity sector
// (antiperiodic fermion boundary). Majoranas ξ = (q, p) with q = (a+a†)/√2, p = −i(a−a†)/√2.
inline ChainModel ising_chain(int N, double J, double h)
{
    require(N >= 2, ErrorCode::InvalidConfig, "chain needs at least two sites");
    ChainModel c;
    c.H.kind = Kind::fermion;
    c.H.h = Mat::Zero(2 * N, 2 * N);
    for (int i = 0; i < N; ++i) {
        int j = (i + 1) % N;
        double sign = j == 0 ? -1.0 : 1.0;
        c.H.h(N + i, j) += sign * J / 2;
        c.H.h(j, N + i) -= sign * J / 2;
        c.H.h(i, N + i) += h / 2;
        c.H.h(N + i, i) -= h / 2;
    }
    c.gamma = ground_state(c.H);
    c.E0 = energy(c.H, c.gamma);
    return c;
}

// A = sites 0..N_A−1; B starts d sites after the end of A.
inline std::vector<int> two_block_sites(int nA, int nB, int d)
{
    std::vector<int> s = range(0, nA);
    for (int k = 0; k < nB; ++k)
        s.push_back(nA + d + k);
    return s;
}

inline Mat chain_block_J(const ChainModel& c, const std::vector<int>& sites)
{
    return restrict_modes(complex_structure(c.H.kind, c.gamma), sites);
}

} // namespace gaussopt
