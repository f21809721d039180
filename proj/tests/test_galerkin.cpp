#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include <rieszlab/galerkin.hpp>

using namespace rieszlab;
using namespace rieszlab::galerkin;

namespace {

constexpr double kPi = std::numbers::pi;

BasisSpec sine(std::vector<int> counts, double torus = 0.0) {
    BasisSpec b;
    b.kind = BasisKind::tensor_sine;
    b.counts = std::move(counts);
    b.torus = torus;
    return b;
}

BasisSpec tent(std::vector<int> counts, double torus = 0.0) {
    BasisSpec b;
    b.kind = BasisKind::tent_grid;
    b.counts = std::move(counts);
    b.torus = torus;
    return b;
}

std::vector<double> eig(const Domain& dom, double m, const BasisSpec& b, int k) {
    SpectralParams p;
    p.d = dom.dim();
    p.m = m;
    return spectrum_for(dom, p, b, k).eigenvalues;
}

// first Dirichlet eigenvalue of sqrt(-Laplacian) on (-1, 1)
constexpr double kIntervalGround = 1.1577738836977;

}  // namespace

TEST(Multiplier, StableAndMonotone) {
    EXPECT_DOUBLE_EQ(multiplier(4.0, 0.0), 2.0);
    EXPECT_NEAR(multiplier(16.0, 3.0), 2.0, 1e-15);
    EXPECT_NEAR(multiplier(1e-20, 1.0), 0.5e-20, 1e-35);
    for (double w2 : {0.1, 1.0, 50.0}) EXPECT_LT(multiplier(w2, 2.0), multiplier(w2, 1.0));
}

TEST(SolveSpectrum, DiagonalToy) {
    Eigen::MatrixXd f = Eigen::Vector3d(3, 1, 2).asDiagonal();
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(3, 3);
    const auto ev = galerkin::solve_spectrum(f, m, 2);
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_DOUBLE_EQ(ev[0], 1.0);
    EXPECT_DOUBLE_EQ(ev[1], 2.0);
}

TEST(SolveSpectrum, GeneralizedMatchesReduction) {
    Eigen::MatrixXd M(3, 3), F(3, 3);
    M << 2, 0.5, 0, 0.5, 2, 0.5, 0, 0.5, 2;
    F << 4, 1, 0, 1, 3, 1, 0, 1, 5;
    const auto ev = galerkin::solve_spectrum(F, M, 3);
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    const Eigen::MatrixXd Linv = llt.matrixL().solve(Eigen::MatrixXd::Identity(3, 3));
    const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Linv * F * Linv.transpose()).eigenvalues();
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(ev[i], ref(i), 1e-13);
}

TEST(SolveSpectrum, Errors) {
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
    EXPECT_THROW(galerkin::solve_spectrum(I, I, 4), std::invalid_argument);
    EXPECT_THROW(galerkin::solve_spectrum(I, I, 0), std::invalid_argument);
    Eigen::MatrixXd asym = I;
    asym(0, 1) = 0.5;
    EXPECT_THROW(galerkin::solve_spectrum(asym, I, 1), std::invalid_argument);
    Eigen::MatrixXd singular = I;
    singular(2, 2) = 1e-14;
    EXPECT_THROW(galerkin::solve_spectrum(I, singular, 1), SolverError);
    Eigen::MatrixXd near(2, 2);
    near << 1, 1 - 1e-13, 1 - 1e-13, 1;
    EXPECT_THROW(galerkin::solve_spectrum(Eigen::MatrixXd::Identity(2, 2), near, 1), SolverError);
}

TEST(AssembleForm, SymmetricPositive) {
    for (const auto& [dom, b] : {std::pair{Domain::rectangle(1, 1), sine({8, 8})},
                                 std::pair{Domain::interval(2), sine({16})},
                                 std::pair{Domain::disk(1), tent({10, 10})},
                                 std::pair{Domain::box(1, 1, 1), sine({4, 4, 4})}}) {
        const auto f = assemble_form(dom, 0.5, b);
        const double scale = f.form.cwiseAbs().maxCoeff();
        EXPECT_LE((f.form - f.form.transpose()).cwiseAbs().maxCoeff(), 1e-12 * scale);
        EXPECT_LE((f.mass - f.mass.transpose()).cwiseAbs().maxCoeff(), 1e-12 * f.mass.cwiseAbs().maxCoeff());
        EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(f.form).info(), Eigen::Success);
    }
}

TEST(AssembleForm, LargeMassLimitIsScaledLaplacian) {
    // psi_m(t) ~ t / (2m): the diagonal tends to (n pi / L)^2 (L/2) / (2m)
    const double L = 1.0, m = 100.0;
    const auto f = assemble_form(Domain::interval(L), m, sine({8}));
    for (int n = 1; n <= 8; ++n) {
        const double lap = std::pow(n * kPi / L, 2) * (L / 2) / (2 * m);
        EXPECT_NEAR(f.form(n - 1, n - 1) / lap, 1.0, 0.05) << n;
    }
}

TEST(AssembleForm, DiagonalDecreasesWithMass) {
    const auto dom = Domain::rectangle(1, 1);
    const auto a = assemble_form(dom, 0.0, sine({6, 6})), b = assemble_form(dom, 1.0, sine({6, 6}));
    for (Eigen::Index i = 0; i < a.form.rows(); ++i) EXPECT_LT(b.form(i, i), a.form(i, i));
}

TEST(AssembleForm, BasisValidation) {
    EXPECT_THROW(assemble_form(Domain::disk(1), 0.0, sine({8, 8})), std::invalid_argument);
    EXPECT_THROW(assemble_form(Domain::rectangle(1, 1), 0.0, sine({8})), std::invalid_argument);
    EXPECT_THROW(assemble_form(Domain::rectangle(1, 1), 0.0, sine({8, 0})), std::invalid_argument);
    EXPECT_THROW(assemble_form(Domain::rectangle(1, 1), 0.0, sine({8, 8}, 2.0)), std::invalid_argument);
    EXPECT_THROW(assemble_form(Domain::rectangle(1, 1), -1.0, sine({8, 8})), std::invalid_argument);
    EXPECT_THROW(assemble_form(Domain::disk(1), 0.0, tent({2, 2})), SolverError);
}

TEST(IntervalSpectrum, ConvergesToKnownGroundStateFromAbove) {
    double prev = INFINITY;
    for (int n : {16, 32, 64}) {
        const double l1 = eig(Domain::interval(2.0), 0.0, sine({n}), 1)[0];
        EXPECT_GT(l1, kIntervalGround);
        EXPECT_LT(l1, prev);
        prev = l1;
    }
    EXPECT_NEAR(prev / kIntervalGround, 1.0, 5e-3);
}

TEST(IntervalSpectrum, SelfConvergence) {
    const auto a = eig(Domain::interval(kPi), 0.0, sine({64}), 5);
    const auto b = eig(Domain::interval(kPi), 0.0, sine({128}), 5);
    EXPECT_NEAR(a[0] / b[0], 1.0, 0.02);
}

TEST(IntervalSpectrum, RefinementNeverRaisesEigenvalues) {
    const auto dom = Domain::interval(kPi);
    const auto a = eig(dom, 0.3, sine({32}), 20), b = eig(dom, 0.3, sine({64}), 20), c = eig(dom, 0.3, sine({128}), 20);
    for (int i = 0; i < 20; ++i) {
        EXPECT_LE(b[i], a[i] * (1 + 1e-10)) << i;
        EXPECT_LE(c[i], b[i] * (1 + 1e-10)) << i;
    }
}

TEST(IntervalSpectrum, PhaseRuleIsClose) {
    // exploratory comparison only: loose tolerance on higher modes
    const auto ev = eig(Domain::interval(2.0), 0.0, sine({128}), 12);
    const auto rule = interval_phase_rule(2.0, 0.0, 12);
    for (int n = 5; n < 12; ++n) EXPECT_NEAR(ev[n] / rule[n], 1.0, 0.01) << n;
}

TEST(SquareSpectrum, GroundStateRefinesAndBasesAgree) {
    const auto dom = Domain::rectangle(1, 1);
    const double s16 = eig(dom, 0.0, sine({16, 16}), 1)[0];
    const double s24 = eig(dom, 0.0, sine({24, 24}), 1)[0];
    EXPECT_LT(s24, s16);
    const double t24 = eig(dom, 0.0, tent({24, 24}), 1)[0];
    EXPECT_NEAR(t24 / s24, 1.0, 0.01);
}

TEST(SquareSpectrum, MassLowersEveryEigenvalue) {
    const auto dom = Domain::rectangle(1, 1);
    const auto a = eig(dom, 0.0, sine({12, 12}), 40), b = eig(dom, 1.0, sine({12, 12}), 40);
    for (int i = 0; i < 40; ++i) EXPECT_LT(b[i], a[i]);
}

TEST(SquareSpectrum, SymmetryDegeneracies) {
    const auto ev = eig(Domain::rectangle(1, 1), 1.0, sine({14, 14}), 60);
    ASSERT_GT(ev[0], 0.0);
    for (std::size_t i = 1; i < ev.size(); ++i) EXPECT_GE(ev[i], ev[i - 1]);
    // modes (1,2) and (2,1) share an eigenvalue
    EXPECT_NEAR(ev[1], ev[2], 1e-6 * ev[1]);
    // only the two-dimensional representation of the square's symmetry group is
    // degenerate; unlike the Laplacian, (1,3) and (3,1) combinations split
    int paired = 0;
    for (std::size_t i = 0; i + 1 < 40; ++i)
        if (std::abs(ev[i + 1] - ev[i]) <= 1e-6 * ev[i]) ++paired;
    EXPECT_EQ(paired, 9);
    EXPECT_GT(ev[5] - ev[4], 1e-3 * ev[4]);
}

TEST(SquareSpectrum, DomainMonotonicityWithNestedTents) {
    // equal grid step and torus, so the small tent space sits inside the large one
    const double torus = 3.0 * Domain::rectangle(1.5, 1.5).diameter();
    const auto small = eig(Domain::rectangle(1, 1), 0.5, tent({12, 12}, torus), 30);
    const auto large = eig(Domain::rectangle(1.5, 1.5), 0.5, tent({18, 18}, torus), 30);
    for (int i = 0; i < 30; ++i) EXPECT_GE(small[i], large[i]);
}

TEST(DiskSpectrum, TentGridRuns) {
    const auto ev = eig(Domain::disk(1), 1.0, tent({20, 20}), 20);
    EXPECT_EQ(ev.size(), 20u);
    EXPECT_GT(ev[0], 0.0);
    // dropping straddling cells shrinks the domain, so lambda_1 sits above the square of equal area
    const double side = std::sqrt(kPi);
    const double sq = eig(Domain::rectangle(side, side), 1.0, sine({16, 16}), 1)[0];
    EXPECT_GT(ev[0], sq);
}

TEST(SpectrumFor, Provenance) {
    SpectralParams p;
    p.d = 2;
    p.m = 1.0;
    const auto s = spectrum_for(Domain::rectangle(1, 1), p, sine({8, 8}), 10);
    EXPECT_EQ(s.domain_spec, "rect:1x1");
    EXPECT_EQ(s.count(), 10);
    EXPECT_NEAR(s.basis.torus, 3.0 * std::sqrt(2.0), 1e-14);
    p.d = 3;
    EXPECT_THROW(spectrum_for(Domain::rectangle(1, 1), p, sine({8, 8}), 10), std::invalid_argument);
    p.d = 2;
    p.h = 0.0;
    EXPECT_THROW(spectrum_for(Domain::rectangle(1, 1), p, sine({8, 8}), 10), std::invalid_argument);
}

TEST(SpectrumFor, Deterministic) {
    const auto a = eig(Domain::rectangle(1, 1), 1.0, sine({10, 10}), 30);
    const auto b = eig(Domain::rectangle(1, 1), 1.0, sine({10, 10}), 30);
    EXPECT_EQ(a, b);
}

TEST(SineTransform, Parseval) {
    // sum over the dual lattice of |b^|^2 / L equals the L2 norm len/2
    const double len = 1.0, L = 3.0;
    for (int j : {1, 3}) {
        double s = 0.0;
        for (int k = 0; k <= 20000; ++k) {
            const double v = galerkin::detail::sine_transform(j, len, 2.0 * kPi * k / L);
            s += (k == 0 ? 1.0 : 2.0) * v * v / L;
        }
        EXPECT_NEAR(s, len / 2.0, 1e-4);
    }
}
