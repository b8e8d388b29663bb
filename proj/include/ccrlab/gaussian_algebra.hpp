#pragma once

// Exponential vectors, units and automorphisms of the white-noise product
// system. Every vector is a finite combination of Exp(f) with f a step
// function, so all inner products are closed form:
//
//     <Exp(f), Exp(g)> = exp <f, g>,   <f, g> = int_0^T f(s) conj(g(s)) ds.
//
// The inner product is linear in the first slot and conjugate-linear in
// the second throughout this header.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace ccrlab::gaussian {

using Complex = std::complex<double>;

/// Piecewise-constant complex function on [0, T].
///
/// Piece j holds on [t_{j-1}, t_j); the last piece is closed at T. Adjacent
/// pieces with bitwise-equal values are merged at construction.
class StepFunction {
public:
    StepFunction(std::vector<double> breakpoints, std::vector<Complex> values);

    static StepFunction constant(double horizon, Complex value);
    /// value * indicator(0, until) on [0, horizon].
    static StepFunction indicator(double horizon, double until, Complex value);

    double horizon() const { return breakpoints_.back(); }
    std::span<const double> breakpoints() const { return breakpoints_; }
    std::span<const Complex> values() const { return values_; }
    std::size_t pieces() const { return values_.size(); }

    Complex operator()(double s) const;
    Complex integral() const;

    StepFunction scaled(Complex factor) const;
    StepFunction shifted(Complex offset) const;

    /// Values agree on the merged partition within tol * max(1, |value|).
    bool approx_equal(const StepFunction& other, double tol) const;

private:
    std::vector<double> breakpoints_;
    std::vector<Complex> values_;
};

StepFunction operator+(const StepFunction& f, const StepFunction& g);

/// int_0^T f conj(g) ds over the merged partition. Throws std::domain_error
/// on horizon mismatch.
Complex step_inner(const StepFunction& f, const StepFunction& g);

struct ExpTerm {
    Complex coefficient;
    StepFunction exponent;
};

/// Finite combination sum_i c_i Exp(f_i) on a common horizon.
///
/// Terms whose exponents agree within kDedupTolerance are combined on
/// insertion, which keeps the Gram matrix free of exact duplicates.
class ExpSpan {
public:
    static constexpr double kDedupTolerance = 1e-14;

    explicit ExpSpan(double horizon);

    static ExpSpan exponential(StepFunction f, Complex coefficient = 1.0);

    void add(Complex coefficient, StepFunction exponent);

    double horizon() const { return horizon_; }
    std::span<const ExpTerm> terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    ExpSpan scaled(Complex factor) const;
    ExpSpan& operator+=(const ExpSpan& other);

private:
    double horizon_;
    std::vector<ExpTerm> terms_;
};

ExpSpan operator+(ExpSpan v, const ExpSpan& w);
ExpSpan operator-(ExpSpan v, const ExpSpan& w);

Complex span_inner(const ExpSpan& v, const ExpSpan& w);
double squared_norm(const ExpSpan& v);
double norm(const ExpSpan& v);

/// [exp <f_i, f_j>] for the exponents of v.
Eigen::MatrixXcd gram_matrix(const ExpSpan& v);

/// Ratio of extreme Gram eigenvalues. Spans above kGramConditionWarning
/// have norms that are only trustworthy to about cond * 1e-16.
double gram_condition(const ExpSpan& v);
inline constexpr double kGramConditionWarning = 1e12;

/// u^(a, zeta)(t) = e^{a t} Exp(zeta chi_(0,t)) on horizon t.
ExpSpan unit(Complex a, Complex zeta, double t);

/// Parameters (lambda, xi, U) of a type I_1 automorphism; |U| = 1.
class AutomorphismParams {
public:
    AutomorphismParams(double lambda, Complex xi, Complex rotation);

    static AutomorphismParams identity() { return {0.0, 0.0, 1.0}; }
    static AutomorphismParams shift(Complex xi) { return {0.0, xi, 1.0}; }
    static AutomorphismParams rotation(Complex u) { return {0.0, 0.0, u}; }

    double lambda() const { return lambda_; }
    Complex xi() const { return xi_; }
    Complex rotation() const { return rotation_; }

private:
    double lambda_;
    Complex xi_;
    Complex rotation_;
};

/// Each term (c, f) goes to (c', U f + xi) with
/// c' = c e^{i lambda T} exp(-|xi|^2 T / 2 - conj(xi) int_0^T U f ds).
ExpSpan apply_automorphism(const AutomorphismParams& p, const ExpSpan& v);

/// Same map built piece by piece: the unit formula is applied on every
/// subinterval of f and the factors are multiplied. Used as a cross-check
/// of the closed form above.
ExpSpan apply_automorphism_piecewise(const AutomorphismParams& p, const ExpSpan& v);

/// ||A B v - e^{i k lambda mu T} B A v|| / ||v|| with A = shift(i lambda),
/// B = shift(mu). The Weyl relation holds for phase_multiplier k = 2.
double ccr_phase_residual(double lambda, double mu, const ExpSpan& v,
                          double phase_multiplier = 2.0);

/// ||a - b|| / ||reference||, evaluated through the Gram matrix of a - b.
double relative_distance(const ExpSpan& a, const ExpSpan& b, const ExpSpan& reference);

struct RelationReport {
    std::uint64_t seed = 0;
    int trials = 0;
    double rotation_composition = 0;     // rotat(U) rotat(V) = rotat(UV)
    double rotation_conjugation = 0;     // rotat(U) shift(xi) rotat(U)^-1 = shift(U xi)
    double imaginary_shift_composition = 0; // shift(i l) shift(i m) = shift(i(l+m))
    double real_shift_composition = 0;   // shift(l) shift(m) = shift(l+m)
    double ccr_phase = 0;
    double gram_preservation = 0;
    double composition_unitarity = 0;
    double closed_vs_piecewise = 0;

    double max_residual() const;
};

/// Evaluates the automorphism relations on seeded random units and step
/// exponentials and reports the worst residual of each.
RelationReport relation_suite(std::uint64_t seed, int trials = 100);

/// Random span of at most max_terms exponentials for tests and the suite.
/// Values have modulus below value_scale.
ExpSpan random_span(std::uint64_t seed, std::uint64_t index, double horizon, int max_terms,
                    bool units_only, double value_scale = 1.5);

} // namespace ccrlab::gaussian
