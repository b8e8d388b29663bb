#include "ccrlab/ccr_matrix.hpp"
#include "ccrlab/gaussian_algebra.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

using namespace ccrlab::ccr;

namespace {

const Complex I(0.0, 1.0);
constexpr double kTwoPiOverThree = 2.0 * std::numbers::pi / 3.0;

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

Eigen::MatrixXcd commutator(const HermitianMatrix& a, const HermitianMatrix& b)
{
    return a.matrix() * b.matrix() - b.matrix() * a.matrix();
}

Eigen::MatrixXcd random_unitary(int n, unsigned seed)
{
    std::srand(seed);
    const Eigen::MatrixXcd z = Eigen::MatrixXcd::Random(n, n);
    return Eigen::HouseholderQR<Eigen::MatrixXcd>(z).householderQ();
}

Eigen::VectorXcd grid_vacuum(const CcrTriple& triple)
{
    const int n = triple.n;
    const double h = 2.0 * triple.half_width / (n - 1);
    Eigen::VectorXcd v(n);
    for (int j = 0; j < n; ++j) {
        const double x = -triple.half_width + h * j;
        v(j) = std::exp(-0.5 * x * x);
    }
    return v / v.norm();
}

} // namespace

TEST(Hermitian, RejectsNonHermitian)
{
    Eigen::MatrixXcd a(2, 2);
    a << 1.0, I, I, 2.0;
    EXPECT_THROW(HermitianMatrix{a}, std::invalid_argument);
    EXPECT_THROW(HermitianMatrix{Eigen::MatrixXcd::Zero(2, 3)}, std::invalid_argument);
}

TEST(BuildPair, OscillatorTwoByTwo)
{
    const double t = 0.7;
    const auto pair = build_pair(Scheme::oscillator, 2, t);
    Eigen::MatrixXcd expected(2, 2);
    expected << 0.0, std::sqrt(t), std::sqrt(t), 0.0;
    EXPECT_LT((pair.q.matrix() - expected).norm(), 1e-15);
}

TEST(BuildPair, ValidatesArguments)
{
    EXPECT_THROW(build_pair(Scheme::oscillator, 1, 0.5), std::invalid_argument);
    EXPECT_THROW(build_pair(Scheme::oscillator, 8, 0.0), std::invalid_argument);
    EXPECT_THROW(build_pair(Scheme::grid, 8, 0.5, -1.0), std::invalid_argument);
    EXPECT_THROW(parse_scheme("fock"), std::invalid_argument);
}

TEST(BuildPair, ZeroSumIsExact)
{
    for (auto scheme : {Scheme::oscillator, Scheme::grid}) {
        const auto pair = build_pair(scheme, 32, 0.8);
        EXPECT_EQ((pair.p.matrix() + pair.q.matrix() + pair.r.matrix()).cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(BuildPair, OscillatorVacuumMoment)
{
    for (double t : {0.25, 0.5, 2.0}) {
        const auto pair = build_pair(Scheme::oscillator, 16, t);
        const Eigen::MatrixXcd q2 = pair.q.matrix() * pair.q.matrix();
        EXPECT_NEAR(q2(0, 0).real(), t, 1e-12);
    }
}

TEST(BuildPair, GridVacuumMoments)
{
    const double t = 0.5;
    const auto pair = build_pair(Scheme::grid, 256, t);
    const Eigen::VectorXcd v = grid_vacuum(pair);
    const Eigen::VectorXcd qv = pair.q.matrix() * v;
    const Eigen::VectorXcd pv = pair.p.matrix() * v;
    EXPECT_NEAR(qv.squaredNorm(), t, 1e-6);
    EXPECT_NEAR(pv.squaredNorm(), t, 1e-6);
}

TEST(BuildPair, CommutatorDefectIsRankOne)
{
    const int n = 24;
    const double t = 0.6;
    const auto pair = build_pair(Scheme::oscillator, n, t);
    const Eigen::MatrixXcd defect =
        commutator(pair.p, pair.q) + 2.0 * t * I * Eigen::MatrixXcd::Identity(n, n);
    EXPECT_LE(defect.leftCols(n - 1).norm(), 1e-10);
    EXPECT_GT(defect.col(n - 1).norm(), 1.0);
}

TEST(SymmetricTriple, ZeroSumAndCommutators)
{
    const int n = 20;
    const auto triple = symmetric_triple(n);
    EXPECT_EQ((triple.p.matrix() + triple.q.matrix() + triple.r.matrix()).cwiseAbs().maxCoeff(), 0.0);
    const Eigen::MatrixXcd minus_i = -I * Eigen::MatrixXcd::Identity(n - 1, n - 1);
    for (const auto& c : {commutator(triple.p, triple.q), commutator(triple.q, triple.r),
                          commutator(triple.r, triple.p)})
        EXPECT_LE((c.topLeftCorner(n - 1, n - 1) - minus_i).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SgnOp, Diagonal)
{
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 3);
    a(0, 0) = 3.0;
    a(1, 1) = -2.0;
    const auto s = sgn_op(HermitianMatrix(a));
    EXPECT_NEAR(s.matrix()(0, 0).real(), 1.0, 1e-15);
    EXPECT_NEAR(s.matrix()(1, 1).real(), -1.0, 1e-15);
    EXPECT_NEAR(std::abs(s.matrix()(2, 2)), 0.0, 1e-15);
}

TEST(SgnOp, SpectrumScaleInvarianceAndCommutation)
{
    const auto pair = build_pair(Scheme::oscillator, 64, 0.5);
    const HermitianMatrix a = pair.q + 0.3 * pair.p;
    const auto s = sgn_op(a);
    for (double lambda : eigvalsh(s))
        EXPECT_LE(std::min({std::abs(lambda - 1.0), std::abs(lambda + 1.0), std::abs(lambda)}), 1e-10);
    EXPECT_LE((sgn_op(4.5 * a).matrix() - s.matrix()).norm(), 1e-10);
    EXPECT_LE(commutator(s, a).norm(), 1e-8 * operator_norm(a));
}

TEST(SgnOp, ZeroEigenvalueMapsToZero)
{
    // Odd oscillator truncation: q has an exact zero eigenvalue.
    const auto pair = build_pair(Scheme::oscillator, 5, 0.5);
    const auto values = eigvalsh(sgn_op(pair.q));
    int zeros = 0;
    for (double v : values)
        zeros += std::abs(v) < 1e-12;
    EXPECT_EQ(zeros, 1);
}

TEST(SignSumNorm, BelowThreeForEveryDimension)
{
    for (auto scheme : {Scheme::oscillator, Scheme::grid})
        for (int n : {2, 3, 8, 16, 64, 128})
            EXPECT_LT(sign_sum_norm(scheme, n), 3.0) << to_string(scheme) << " N=" << n;
}

TEST(SignSumNorm, ConvergedValue)
{
    // Independent dense-eigensolver evaluation of the oscillator truncation.
    EXPECT_NEAR(sign_sum_norm(Scheme::oscillator, 256), 1.2564, 5e-4);
    EXPECT_NEAR(sign_sum_norm(Scheme::oscillator, 512), 1.2556, 5e-4);
    EXPECT_NEAR(sign_sum_norm(Scheme::grid, 512), 1.2561, 5e-4);
}

TEST(SignSumNorm, SchemesAgree)
{
    EXPECT_LT(std::abs(sign_sum_norm(Scheme::oscillator, 512) - sign_sum_norm(Scheme::grid, 512)),
              0.02);
}

TEST(SignSumNorm, UnitaryInvariance)
{
    const int n = 64;
    const auto triple = symmetric_triple(n);
    const Eigen::MatrixXcd u = random_unitary(n, 17);
    auto conj = [&](const HermitianMatrix& a) {
        Eigen::MatrixXcd m = u * a.matrix() * u.adjoint();
        return HermitianMatrix(0.5 * (m + m.adjoint()));
    };
    CcrTriple rotated{triple.scheme, n, triple.t, 0.0, conj(triple.q), conj(triple.p), conj(triple.r)};
    EXPECT_NEAR(sign_sum_norm(rotated), sign_sum_norm(triple), 1e-8);
}

TEST(SignSumNorm, CyclicRelabeling)
{
    const auto t = symmetric_triple(48);
    const CcrTriple cycled{t.scheme, t.n, t.t, t.half_width, t.r, t.q, t.p};
    EXPECT_NEAR(sign_sum_norm(cycled), sign_sum_norm(t), 1e-12);
}

TEST(SignSumNorm, AsymmetricTripleAgrees)
{
    for (auto scheme : {Scheme::oscillator, Scheme::grid}) {
        auto [q, p] = canonical_pair(scheme, 256);
        const CcrTriple asym{scheme, 256, 0.5, 0.0, q, p, -1.0 * (q + p)};
        EXPECT_NEAR(sign_sum_norm(asym), sign_sum_norm(scheme, 256), 5e-3) << to_string(scheme);
    }
}

TEST(RotatedTriple, DegenerateAngle)
{
    for (double t : {0.25, 0.5, 2.0})
        for (int n : {16, 64, 128})
            EXPECT_LE(lemma23_value(std::numbers::pi, t, n), 1.0 + 1e-8);
}

TEST(RotatedTriple, SymmetricAngleMatchesTriple)
{
    for (auto scheme : {Scheme::oscillator, Scheme::grid})
        EXPECT_NEAR(lemma23_value(kTwoPiOverThree, 0.5, 128, scheme), sign_sum_norm(scheme, 128), 1e-6);
}

TEST(RotatedTriple, IndependentOfTimeScale)
{
    for (double alpha : {1.8, kTwoPiOverThree, 2.8}) {
        const double base = lemma23_value(alpha, 0.5, 96);
        EXPECT_NEAR(lemma23_value(alpha, 0.25, 96), base, 1e-8);
        EXPECT_NEAR(lemma23_value(alpha, 2.0, 96), base, 1e-8);
        EXPECT_LT(base, 3.0);
    }
}

TEST(RotatedTriple, RejectsAngleOutsideRange)
{
    EXPECT_THROW(lemma23_value(std::numbers::pi / 2.0, 0.5, 16), std::invalid_argument);
    EXPECT_THROW(lemma23_value(3.2, 0.5, 16), std::invalid_argument);
    EXPECT_THROW(lemma23_value(1.0, 0.5, 16), std::invalid_argument);
}

TEST(Coherent, VacuumAndNorm)
{
    const auto vac = coherent_vector(0.0, 0.5, 8);
    EXPECT_EQ(vac(0), Complex(1.0));
    EXPECT_EQ(vac.tail(7).norm(), 0.0);

    const Complex zeta(0.9, -0.6);
    const double t = 0.8;
    const auto v = coherent_vector(zeta, t, 64);
    const auto exp_vec = ccrlab::gaussian::ExpSpan::exponential(
        ccrlab::gaussian::StepFunction::constant(t, zeta));
    EXPECT_NEAR(v.squaredNorm(), ccrlab::gaussian::squared_norm(exp_vec), 1e-9);
}

TEST(Coherent, TailPrecondition)
{
    EXPECT_THROW(coherent_vector(3.0, 2.0, 10), std::domain_error);
    EXPECT_NO_THROW(coherent_vector(3.0, 2.0, 80));
    EXPECT_THROW(coherent_vector(0.5, 0.0, 10), std::invalid_argument);
}

TEST(Coherent, MeanPosition)
{
    const double t = 0.5;
    const auto pair = build_pair(Scheme::oscillator, 96, t);
    for (Complex zeta : {Complex(0.5, 0.0), Complex(1.0, 0.4), Complex(-0.7, 1.2)}) {
        auto v = coherent_vector(zeta, t, 96);
        v.normalize();
        EXPECT_NEAR(quadratic_form(pair.q, v), 2.0 * t * zeta.real(), 1e-8);
    }
}

TEST(Coherent, SignExpectationMatchesGaussian)
{
    const double t = 0.5;
    const int n = 512;
    const auto pair = build_pair(Scheme::oscillator, n, t);
    const auto s = sgn_op(pair.q);
    for (double zeta : {0.0, 0.5, 1.0, 1.5}) {
        auto v = coherent_vector(zeta, t, n);
        v.normalize();
        const double expected = 2.0 * normal_cdf(2.0 * zeta * std::sqrt(t)) - 1.0;
        EXPECT_NEAR(quadratic_form(s, v), expected, 1e-3) << "zeta=" << zeta;
    }
}

TEST(SgnExpectation, BoundedByNormAndErrors)
{
    const auto pair = build_pair(Scheme::oscillator, 32, 0.5);
    const auto v = coherent_vector(Complex(0.8, 0.3), 0.5, 32);
    EXPECT_LE(std::abs(sgn_expectation(pair.q, v)), v.squaredNorm());
    EXPECT_NEAR(sgn_expectation(pair.q, coherent_vector(0.0, 0.5, 32)), 0.0, 1e-12);
    EXPECT_THROW(sgn_expectation(pair.q, Eigen::VectorXcd::Ones(31)), std::invalid_argument);
    EXPECT_THROW(sgn_expectation(pair.q, Eigen::VectorXcd::Zero(32)), std::domain_error);
}

TEST(ConvergenceStudy, DifferencesShrinkAndStayBelowThree)
{
    const std::vector<Scheme> schemes{Scheme::oscillator};
    const std::vector<int> dims{64, 128, 256, 512};
    const std::vector<double> alphas{kTwoPiOverThree};
    const auto rows = convergence_study(schemes, dims, alphas);
    ASSERT_EQ(rows.size(), 4u);
    for (const auto& r : rows) {
        EXPECT_LT(r.value, 3.0);
        EXPECT_EQ(r.seconds, 0.0);
    }
    const auto diffs = successive_differences(rows, Scheme::oscillator, kTwoPiOverThree);
    ASSERT_EQ(diffs.size(), 4u);
    EXPECT_TRUE(std::isnan(diffs[0]));
    EXPECT_GT(diffs[1], diffs[3]);
}

TEST(ConvergenceStudy, RejectsUnsortedDims)
{
    const std::vector<Scheme> schemes{Scheme::grid};
    const std::vector<int> dims{64, 32};
    const std::vector<double> alphas{kTwoPiOverThree};
    EXPECT_THROW(convergence_study(schemes, dims, alphas), std::invalid_argument);
}

TEST(NormStudyCsv, RoundTrip)
{
    const std::vector<NormStudyRow> rows{{Scheme::oscillator, 64, kTwoPiOverThree, 0.5, 1.2617990693612, 0.0},
                                         {Scheme::grid, 128, 2.5, 0.25, 1.7, 0.125}};
    std::stringstream ss;
    write_norm_study_csv(ss, rows);
    std::string header;
    std::getline(std::stringstream(ss.str()), header);
    EXPECT_EQ(header, "scheme,N,alpha,t,value,seconds");
    EXPECT_NE(ss.str().find("oscillator,64,2.09439510239,0.5,1.26179906936,0\n"), std::string::npos);
    const auto back = read_norm_study_csv(ss);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].scheme, Scheme::grid);
    EXPECT_EQ(back[1].n, 128);
    EXPECT_NEAR(back[0].value, rows[0].value, 1e-11);

    std::stringstream bad("scheme,N,alpha\n");
    EXPECT_THROW(read_norm_study_csv(bad), std::invalid_argument);
}
