#include <gtest/gtest.h>

#include <gaussopt/gaussopt.hpp>

using namespace gaussopt;

TEST(Algebra, Dimensions)
{
    EXPECT_EQ(full_algebra_basis(Kind::boson, 1).generators.size(), 3u);
    EXPECT_EQ(full_algebra_basis(Kind::fermion, 2).generators.size(), 6u);
    for (int N = 1; N <= 3; ++N) {
        EXPECT_EQ(full_algebra_basis(Kind::boson, N).generators.size(), static_cast<size_t>(N * (2 * N + 1)));
        EXPECT_EQ(full_algebra_basis(Kind::fermion, N).generators.size(), static_cast<size_t>(N * (2 * N - 1)));
    }
}

TEST(Algebra, MembershipDefect)
{
    for (Kind kind : {Kind::boson, Kind::fermion}) {
        Mat F = background_form(kind, 2);
        for (auto& K : full_algebra_basis(kind, 2).generators) {
            EXPECT_LT(max_abs(Mat(K * F + F * K.transpose())), 1e-14);
            EXPECT_TRUE(in_algebra(kind, K));
        }
    }
}

TEST(StabilizerSplit, Dimensions)
{
    auto split = [](Kind k, int N) { return stabilizer_split(full_algebra_basis(k, N).generators, omega0(N)); };
    auto b1 = split(Kind::boson, 1);
    EXPECT_EQ(b1.h.size(), 1u);
    EXPECT_EQ(b1.h_perp.size(), 2u);
    EXPECT_EQ(split(Kind::fermion, 2).h_perp.size(), 2u);
    EXPECT_EQ(split(Kind::fermion, 1).h_perp.size(), 0u);
    for (int N = 1; N <= 4; ++N) {
        auto b = split(Kind::boson, N);
        auto f = split(Kind::fermion, N);
        EXPECT_EQ(b.h_perp.size(), static_cast<size_t>(N * (N + 1)));
        EXPECT_EQ(f.h_perp.size(), static_cast<size_t>(N * (N - 1)));
        EXPECT_EQ(b.h.size() + b.h_perp.size(), static_cast<size_t>(N * (2 * N + 1)));
        EXPECT_EQ(f.h.size(), static_cast<size_t>(N * N));
    }
}

TEST(StabilizerSplit, CommutationProperties)
{
    Mat M = sample_group(Kind::boson, 2, 3, 0.5);
    Mat J0 = M * omega0(2) * group_inverse(Kind::boson, M);
    auto s = stabilizer_split(full_algebra_basis(Kind::boson, 2).generators, J0);
    for (auto& K : s.h)
        EXPECT_LT(max_abs(Mat(K * J0 - J0 * K)), 1e-10);
    for (auto& K : s.h_perp)
        EXPECT_LT(max_abs(Mat(K * J0 + J0 * K)), 1e-10);
}

// Tangent directions at the single-mode vacuum: δΓ = [[a, b], [b, −a]].
TEST(Metric, BosonSingleModeParameters)
{
    Mat Xa(2, 2), Xb(2, 2);
    // K with KΓ₀ + Γ₀Kᵀ = 2K = δΓ for symmetric K ∈ 𝔥′_⊥
    Xa << 0.5, 0, 0, -0.5;
    Xb << 0, 0.5, 0.5, 0;
    Mat J0 = omega0(1);
    Mat g = manifold_metric(Kind::boson, {Xa, Xb}, J0);
    Mat w = manifold_symplectic({Xa, Xb}, J0);
    const double a = 0.3, b = -1.2, at = 0.7, bt = 0.4;
    Vec u(2), v(2);
    u << a, b;
    v << at, bt;
    EXPECT_NEAR(u.dot(g * v), (a * at + b * bt) / 4, 1e-15);
    EXPECT_NEAR(std::abs(u.dot(w * v)), std::abs(a * bt - b * at) / 4, 1e-15);
}

TEST(Metric, FermionTwoModeParameters)
{
    // δΩ = [[A, B], [B, −A]] with A = a𝕀₂-antisymmetric, B = b𝕀₂-antisymmetric; K = δΩ Ω₀ᵀ/2
    auto delta = [](double a, double b) {
        Mat e = Mat::Zero(2, 2);
        e(0, 1) = 1;
        e(1, 0) = -1;
        Mat D = Mat::Zero(4, 4);
        D.topLeftCorner(2, 2) = a * e;
        D.bottomRightCorner(2, 2) = -a * e;
        D.topRightCorner(2, 2) = b * e;
        D.bottomLeftCorner(2, 2) = b * e;
        return D;
    };
    Mat J0 = omega0(2);
    Mat Xa = 0.5 * delta(1, 0) * J0.transpose(), Xb = 0.5 * delta(0, 1) * J0.transpose();
    EXPECT_TRUE(in_algebra(Kind::fermion, Xa));
    Mat g = manifold_metric(Kind::fermion, {Xa, Xb}, J0);
    Mat w = manifold_symplectic({Xa, Xb}, J0);
    const double a = 0.3, b = -1.2, at = 0.7, bt = 0.4;
    Vec u(2), v(2);
    u << a, b;
    v << at, bt;
    EXPECT_NEAR(u.dot(g * v), (a * at + b * bt) / 2, 1e-15);
    EXPECT_NEAR(std::abs(u.dot(w * v)), std::abs(a * bt - b * at) / 2, 1e-15);
    EXPECT_EQ(w(0, 0), 0.0);
}

TEST(Metric, SingleAnticommutingGenerator)
{
    auto s = stabilizer_split(full_algebra_basis(Kind::boson, 2).generators, omega0(2));
    const Mat& X = s.h_perp[0];
    EXPECT_NEAR(manifold_metric(Kind::boson, {X}, omega0(2))(0, 0), 0.5 * (X * X).trace(), 1e-14);
}

TEST(Orthonormalize, RandomFrame)
{
    for (Kind kind : {Kind::boson, Kind::fermion}) {
        Mat M = sample_group(kind, 3, 8, 0.4);
        Mat J0 = M * omega0(3) * group_inverse(kind, M);
        TangentFrame f = build_frame(kind, full_algebra_basis(kind, 3).generators, J0);
        Mat g = manifold_metric(kind, f.generators, J0);
        EXPECT_LT(max_abs(Mat(g - Mat::Identity(g.rows(), g.cols()))), 1e-10);
        for (auto& K : f.generators)
            EXPECT_LT(max_abs(Mat(K * J0 + J0 * K)), 1e-10);
    }
}

TEST(Orthonormalize, DuplicateGeneratorIsRankDeficient)
{
    auto s = stabilizer_split(full_algebra_basis(Kind::boson, 1).generators, omega0(1));
    auto gens = s.h_perp;
    gens.push_back(gens[0]);
    TangentFrame f = make_frame(Kind::boson, gens, omega0(1));
    try {
        orthonormalize(f);
        FAIL() << "expected RankDeficient";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
    }
}

TEST(PureStateFrame, MatchesGenericConstruction)
{
    for (Kind kind : {Kind::boson, Kind::fermion})
        for (int N = 1; N <= 4; ++N) {
            TangentFrame a = pure_state_frame(kind, N);
            TangentFrame b = build_frame(kind, full_algebra_basis(kind, N).generators, omega0(N));
            ASSERT_EQ(a.size(), b.size());
            if (a.size() == 0)
                continue;
            EXPECT_LT(max_abs(Mat(a.metric - Mat::Identity(a.size(), a.size()))), 1e-12);
            // same span: stacking both keeps the rank
            Mat A = detail::stack_rows(a.generators, false), B = detail::stack_rows(b.generators, false);
            Mat AB(A.rows() + B.rows(), A.cols());
            AB << A, B;
            EXPECT_EQ(Eigen::FullPivLU<Mat>(AB).rank(), static_cast<Eigen::Index>(a.size()));
        }
}

TEST(Cayley, ZeroStepAndGroupDefect)
{
    Mat K = full_algebra_basis(Kind::boson, 2).generators[3];
    EXPECT_EQ(max_abs(Mat(cayley_retract(K, 0.0) - Mat::Identity(4, 4))), 0.0);
    Mat R = Mat::Zero(4, 4);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    for (auto& X : full_algebra_basis(Kind::boson, 2).generators)
        R += nd(rng) * X;
    EXPECT_LT(group_defect(Kind::boson, cayley_retract(R, 0.1)), 1e-12);
}

TEST(Cayley, ThirdOrderAgreementWithExponential)
{
    Mat R = Mat::Zero(4, 4);
    std::mt19937_64 rng(6);
    std::normal_distribution<double> nd;
    for (auto& X : full_algebra_basis(Kind::fermion, 2).generators)
        R += nd(rng) * X;
    double prev = 0;
    for (double eps : {1e-1, 5e-2, 2.5e-2}) {
        const double ratio = max_abs(Mat(cayley_retract(R, eps) - expm(Mat(eps * R)))) / std::pow(eps, 3);
        if (prev > 0)
            EXPECT_NEAR(ratio, prev, 0.1 * prev);
        prev = ratio;
    }
}

TEST(SampleGroup, Properties)
{
    Mat M = sample_group(Kind::fermion, 2, 17, 1.0);
    EXPECT_LT(max_abs(Mat(M.transpose() * M - Mat::Identity(4, 4))), 1e-12);
    EXPECT_NEAR(M.determinant(), 1.0, 1e-12);
    EXPECT_EQ(max_abs(Mat(sample_group(Kind::boson, 1, 3, 0.0) - Mat::Identity(2, 2))), 0.0);
    EXPECT_GT(max_abs(Mat(sample_group(Kind::boson, 2, 1, 0.3) - sample_group(Kind::boson, 2, 2, 0.3))), 0.0);
    EXPECT_EQ(max_abs(Mat(sample_group(Kind::boson, 2, 1, 0.3) - sample_group(Kind::boson, 2, 1, 0.3))), 0.0);
    EXPECT_LT(group_defect(Kind::boson, sample_group(Kind::boson, 3, 9, 0.5)), 1e-12);
}

TEST(Frame, LeftInvariance)
{
    for (Kind kind : {Kind::boson, Kind::fermion}) {
        TangentFrame f = pure_state_frame(kind, 3);
        Mat M = sample_group(kind, 3, 21, 0.5);
        Mat Mi = group_inverse(kind, M);
        std::vector<Mat> pushed;
        for (auto& X : f.generators)
            pushed.push_back(M * X * Mi);
        Mat g = manifold_metric(kind, pushed, M * f.J0 * Mi);
        EXPECT_LT(max_abs(Mat(g - Mat::Identity(g.rows(), g.cols()))), 1e-9);
    }
}
