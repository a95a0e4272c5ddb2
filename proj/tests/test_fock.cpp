#include <gtest/gtest.h>

#include <gaussopt/gaussopt.hpp>

using namespace gaussopt;

namespace {

Mat mixed_fermion_J(const Vec& c, std::uint64_t seed)
{
    Mat O = sample_group(Kind::fermion, static_cast<int>(c.size()), seed, 1.0);
    return O * mixed_standard_J(c) * O.transpose();
}

} // namespace

TEST(FockRep, Anticommutators)
{
    for (int n = 1; n <= 4; ++n)
        EXPECT_EQ(FockRep(n).car_defect(), 0.0);
    FockRep rep(3);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
            CMat ac = rep.xi[a] * rep.xi[b] + rep.xi[b] * rep.xi[a];
            if (a == b)
                ac -= CMat::Identity(8, 8);
            EXPECT_LT(max_abs(ac), 1e-15);
        }
    EXPECT_THROW(FockRep(max_fock_modes + 1), Error);
}

TEST(FockRep, VacuumTwoPoint)
{
    FockRep rep(2);
    DenseState vac{2, CMat::Zero(4, 4)};
    vac.rho(0, 0) = 1;
    EXPECT_LT(max_abs(Mat(two_point(vac, rep) - omega0(2))), 1e-15);
}

TEST(GaussianDensity, ReproducesTwoPoint)
{
    FockRep rep(3);
    Vec c(3);
    c << 0.9, 0.5, 0.2;
    Mat J = mixed_fermion_J(c, 5);
    DenseState s = gaussian_density(J, rep);
    EXPECT_NO_THROW(s.validate());
    EXPECT_LT(max_abs(Mat(two_point(s, rep) - J)), 1e-13);
    EXPECT_LT(max_abs(CMat(s.rho * rep.parity() - rep.parity() * s.rho)), 1e-14);

    DenseState t = gaussian_density(covariance_to_thermal(J, Kind::fermion), rep);
    EXPECT_LT(max_abs(CMat(s.rho - t.rho)), 1e-12);
}

TEST(GaussianDensity, PureState)
{
    FockRep rep(3);
    Mat O = sample_group(Kind::fermion, 3, 2, 1.0);
    Mat J = O * omega0(3) * O.transpose();
    DenseState s = gaussian_density(J, rep);
    EXPECT_NEAR((s.rho * s.rho).trace().real(), 1.0, 1e-12);
    CVec v = pure_vector(s);
    EXPECT_LT(max_abs(CMat(v * v.adjoint() - s.rho)), 1e-12);
}

TEST(Entropy, MatchesGaussianFormula)
{
    FockRep rep(3);
    Vec c(3);
    c << 0.95, 0.4, 0.05;
    Mat J = mixed_fermion_J(c, 6);
    EXPECT_NEAR(exact_entropy(gaussian_density(J, rep)), entanglement_entropy(J, Kind::fermion).value, 1e-12);
}

TEST(Wick, PairingSum)
{
    FockRep rep(3);
    Vec c(3);
    c << 0.8, 0.6, 0.1;
    Mat J = mixed_fermion_J(c, 7);
    for (auto idx : std::vector<std::vector<int>>{{0, 3}, {0, 3, 4, 5}, {1, 1, 2, 4}, {0, 1, 2, 3, 4, 5}, {2, 5, 3}}) {
        WickComparison w = wick_oracle(J, rep, idx);
        EXPECT_LT(std::abs(w.exact - w.wick), 1e-13);
    }
    EXPECT_THROW(wick_oracle(J, rep, {0, 1, 2, 3, 4, 5, 0, 1, 2}), Error);
}

TEST(PartialTrace, MatchesRestriction)
{
    FockRep rep(4);
    Vec c(4);
    c << 0.95, 0.6, 0.3, 0.1;
    Mat J = mixed_fermion_J(c, 8);
    DenseState s = gaussian_density(J, rep);
    for (auto keep : std::vector<std::vector<int>>{{0}, {3}, {1, 3}, {0, 2}, {0, 1, 3}, {1, 2, 3}}) {
        DenseState red = fermionic_partial_trace(s, keep);
        EXPECT_NO_THROW(red.validate());
        FockRep rk(static_cast<int>(keep.size()));
        EXPECT_LT(max_abs(Mat(two_point(red, rk) - restrict_modes(J, keep))), 1e-13);
    }
    EXPECT_THROW(fermionic_partial_trace(s, {}), Error);
    EXPECT_THROW(fermionic_partial_trace(s, {4}), Error);
}

TEST(Reorder, IsSignedPermutation)
{
    CMat P = fermionic_reorder(3, {2, 0, 1});
    EXPECT_LT(max_abs(CMat(P * P.adjoint() - CMat::Identity(8, 8))), 1e-15);
    // a₂† a₀† |0⟩ in the new order is −|110⟩ relative to a₀† a₂† |0⟩
    EXPECT_NEAR(P(0b110, 0b101).real(), -1.0, 1e-15);
}

TEST(Ising, TwoSiteReducedSpectrum)
{
    ChainModel c = ising_chain(4, 1.0, 1.0);
    FockRep rep(4);
    DenseState s = gaussian_density(complex_structure(Kind::fermion, c.gamma), rep);
    DenseState red = fermionic_partial_trace(s, {0, 1});
    Eigen::SelfAdjointEigenSolver<CMat> es(red.rho);
    Vec cs = restricted_spectrum(restrict_modes(c.gamma, {0, 1}), Kind::fermion);
    std::vector<double> expect;
    for (int a : {1, -1})
        for (int b : {1, -1})
            expect.push_back((1 + a * cs(0)) * (1 + b * cs(1)) / 4);
    std::sort(expect.begin(), expect.end());
    for (int k = 0; k < 4; ++k)
        EXPECT_NEAR(es.eigenvalues()(k), expect[k], 1e-12);
}

TEST(Purification, CanonicalStateReducesBack)
{
    FockRep rep(2);
    Vec c(2);
    c << 0.7, 0.3;
    Mat J = mixed_fermion_J(c, 9);
    DenseState rho = gaussian_density(J, rep);
    CVec psi = canonical_purification(rho, 2);
    EXPECT_NEAR(psi.norm(), 1.0, 1e-12);
    FockRep full(4);
    DenseState pure{4, psi * psi.adjoint()};
    EXPECT_LT(max_abs(CMat(pure.rho * full.parity() - full.parity() * pure.rho)), 1e-12);
    EXPECT_LT(max_abs(CMat(fermionic_partial_trace(pure, {0, 1}).rho - rho.rho)), 1e-12);
    EXPECT_THROW(canonical_purification(rho, 1), Error);
}

TEST(ExactEop, DifferentialMatchesFiniteDifference)
{
    FockRep rep(2);
    Vec c(2);
    c << 0.6, 0.2;
    DenseState rho = gaussian_density(mixed_fermion_J(c, 10), rep);
    ExactPurification p = make_exact_purification(canonical_purification(rho, 2), 1, 1, 1, 1);
    Objective f = exact_eop_objective(p);
    Mat M = real_embed(sample_unitary(p.d_ancilla(), 3, 0.7));
    Vec d = f.differential(M);
    TangentFrame fr = unitary_frame(p);
    const double h = 1e-5;
    for (size_t mu = 0; mu < fr.size(); ++mu) {
        const Mat& X = fr.generators[mu];
        const double fd = (f.value(Mat(M * expm(Mat(h * X)))) - f.value(Mat(M * expm(Mat(-h * X))))) / (2 * h);
        EXPECT_NEAR(d(mu), fd, 1e-6 + 1e-5 * std::abs(fd));
    }
}

TEST(ExactEop, AgreesWithGaussianForIsingPair)
{
    ChainModel c = ising_chain(100, 1.0, 1.0);
    Mat JAB = chain_block_J(c, two_block_sites(1, 1, 10));
    EopOptions opt;
    opt.optimizer.starts = 8;
    EopResult g = gaussian_eop(build_problem(JAB, 1, 1, 1, 1, Kind::fermion), opt);
    FockRep rep(2);
    ExactEopResult e = exact_eop(gaussian_density(JAB, rep), 1, 1, 1, 1, opt);
    EXPECT_NEAR(e.value, g.value, 1e-7);
    EXPECT_LT(nongaussian_gradient(g.J_opt, 1, 1, 1, 1).norm(), 1e-6);
}

TEST(ExactEop, TooManyModes)
{
    FockRep rep(4);
    DenseState s = gaussian_density(omega0(4), rep);
    EXPECT_THROW(exact_eop(s, 2, 2, 2, 2, EopOptions{}), Error);
}
