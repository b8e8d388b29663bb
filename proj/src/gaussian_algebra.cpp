#include "ccrlab/gaussian_algebra.hpp"

#include "ccrlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ccrlab::gaussian {

namespace {

constexpr double kHorizonTolerance = 1e-12;

void require_same_horizon(double a, double b)
{
    if (std::abs(a - b) > kHorizonTolerance * std::max(1.0, std::abs(a)))
        throw std::domain_error("horizon mismatch");
}

// Walks the merged partition of f and g, calling visit(length, f value, g value).
template <typename Visit>
void for_each_common_piece(const StepFunction& f, const StepFunction& g, Visit&& visit)
{
    require_same_horizon(f.horizon(), g.horizon());
    const auto fb = f.breakpoints();
    const auto gb = g.breakpoints();
    const auto fv = f.values();
    const auto gv = g.values();
    std::size_t i = 0, j = 0;
    double left = 0.0;
    while (i < fv.size() && j < gv.size()) {
        const double right = std::min(fb[i + 1], gb[j + 1]);
        if (right > left)
            visit(right - left, fv[i], gv[j]);
        left = right;
        if (fb[i + 1] <= right)
            ++i;
        if (gb[j + 1] <= right)
            ++j;
    }
}

} // namespace

StepFunction::StepFunction(std::vector<double> breakpoints, std::vector<Complex> values)
{
    if (values.empty() || breakpoints.size() != values.size() + 1)
        throw std::invalid_argument("step function needs m >= 1 values and m + 1 breakpoints");
    if (breakpoints.front() != 0.0)
        throw std::invalid_argument("step function breakpoints must start at 0");
    for (std::size_t j = 1; j < breakpoints.size(); ++j)
        if (!(breakpoints[j] > breakpoints[j - 1]) || !std::isfinite(breakpoints[j]))
            throw std::invalid_argument("step function breakpoints must be strictly increasing");
    for (const Complex& z : values)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw std::invalid_argument("step function values must be finite");

    breakpoints_.push_back(0.0);
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (!values_.empty() && values_.back() == values[j]) {
            breakpoints_.back() = breakpoints[j + 1];
            continue;
        }
        values_.push_back(values[j]);
        breakpoints_.push_back(breakpoints[j + 1]);
    }
}

StepFunction StepFunction::constant(double horizon, Complex value)
{
    if (!(horizon > 0.0))
        throw std::invalid_argument("horizon must be positive");
    return StepFunction({0.0, horizon}, {value});
}

StepFunction StepFunction::indicator(double horizon, double until, Complex value)
{
    if (!(until > 0.0) || until > horizon)
        throw std::invalid_argument("indicator end must lie in (0, horizon]");
    if (until == horizon)
        return constant(horizon, value);
    return StepFunction({0.0, until, horizon}, {value, 0.0});
}

Complex StepFunction::operator()(double s) const
{
    const auto it = std::upper_bound(breakpoints_.begin() + 1, breakpoints_.end(), s);
    const auto piece = std::min<std::size_t>(it - breakpoints_.begin() - 1, values_.size() - 1);
    return values_[piece];
}

Complex StepFunction::integral() const
{
    Complex total = 0.0;
    for (std::size_t j = 0; j < values_.size(); ++j)
        total += values_[j] * (breakpoints_[j + 1] - breakpoints_[j]);
    return total;
}

StepFunction StepFunction::scaled(Complex factor) const
{
    std::vector<Complex> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), [&](Complex z) { return factor * z; });
    return StepFunction(breakpoints_, std::move(v));
}

StepFunction StepFunction::shifted(Complex offset) const
{
    std::vector<Complex> v(values_.size());
    std::transform(values_.begin(), values_.end(), v.begin(), [&](Complex z) { return z + offset; });
    return StepFunction(breakpoints_, std::move(v));
}

bool StepFunction::approx_equal(const StepFunction& other, double tol) const
{
    if (std::abs(horizon() - other.horizon()) > kHorizonTolerance * std::max(1.0, horizon()))
        return false;
    bool equal = true;
    for_each_common_piece(*this, other, [&](double, Complex a, Complex b) {
        const double scale = std::max({1.0, std::abs(a), std::abs(b)});
        if (std::abs(a - b) > tol * scale)
            equal = false;
    });
    return equal;
}

StepFunction operator+(const StepFunction& f, const StepFunction& g)
{
    std::vector<double> bp{0.0};
    std::vector<Complex> v;
    double right = 0.0;
    for_each_common_piece(f, g, [&](double length, Complex a, Complex b) {
        right += length;
        bp.push_back(right);
        v.push_back(a + b);
    });
    bp.back() = f.horizon();
    return StepFunction(std::move(bp), std::move(v));
}

Complex step_inner(const StepFunction& f, const StepFunction& g)
{
    Complex total = 0.0;
    for_each_common_piece(f, g, [&](double length, Complex a, Complex b) {
        total += a * std::conj(b) * length;
    });
    return total;
}

ExpSpan::ExpSpan(double horizon) : horizon_(horizon)
{
    if (!(horizon > 0.0))
        throw std::invalid_argument("horizon must be positive");
}

ExpSpan ExpSpan::exponential(StepFunction f, Complex coefficient)
{
    ExpSpan v(f.horizon());
    v.add(coefficient, std::move(f));
    return v;
}

void ExpSpan::add(Complex coefficient, StepFunction exponent)
{
    require_same_horizon(horizon_, exponent.horizon());
    for (ExpTerm& term : terms_) {
        if (term.exponent.approx_equal(exponent, kDedupTolerance)) {
            term.coefficient += coefficient;
            return;
        }
    }
    terms_.push_back({coefficient, std::move(exponent)});
}

ExpSpan ExpSpan::scaled(Complex factor) const
{
    ExpSpan out(horizon_);
    out.terms_ = terms_;
    for (ExpTerm& term : out.terms_)
        term.coefficient *= factor;
    return out;
}

ExpSpan& ExpSpan::operator+=(const ExpSpan& other)
{
    for (const ExpTerm& term : other.terms())
        add(term.coefficient, term.exponent);
    return *this;
}

ExpSpan operator+(ExpSpan v, const ExpSpan& w)
{
    v += w;
    return v;
}

ExpSpan operator-(ExpSpan v, const ExpSpan& w)
{
    v += w.scaled(-1.0);
    return v;
}

Complex span_inner(const ExpSpan& v, const ExpSpan& w)
{
    require_same_horizon(v.horizon(), w.horizon());
    Complex total = 0.0;
    for (const ExpTerm& a : v.terms())
        for (const ExpTerm& b : w.terms())
            total += a.coefficient * std::conj(b.coefficient) *
                     std::exp(step_inner(a.exponent, b.exponent));
    return total;
}

double squared_norm(const ExpSpan& v)
{
    return span_inner(v, v).real();
}

double norm(const ExpSpan& v)
{
    return std::sqrt(std::max(0.0, squared_norm(v)));
}

Eigen::MatrixXcd gram_matrix(const ExpSpan& v)
{
    const auto terms = v.terms();
    const auto n = static_cast<Eigen::Index>(terms.size());
    Eigen::MatrixXcd gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            gram(i, j) = std::exp(step_inner(terms[i].exponent, terms[j].exponent));
    return gram;
}

double gram_condition(const ExpSpan& v)
{
    if (v.empty())
        return 1.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram_matrix(v), Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    if (ev.minCoeff() <= 0.0)
        return std::numeric_limits<double>::infinity();
    return ev.maxCoeff() / ev.minCoeff();
}

ExpSpan unit(Complex a, Complex zeta, double t)
{
    if (!(t > 0.0))
        throw std::invalid_argument("unit requires t > 0");
    return ExpSpan::exponential(StepFunction::constant(t, zeta), std::exp(a * t));
}

AutomorphismParams::AutomorphismParams(double lambda, Complex xi, Complex rotation)
    : lambda_(lambda), xi_(xi), rotation_(rotation)
{
    if (std::abs(std::abs(rotation) - 1.0) > 1e-12)
        throw std::invalid_argument("automorphism rotation must have |U| = 1");
    if (!std::isfinite(lambda) || !std::isfinite(std::abs(xi)))
        throw std::invalid_argument("automorphism parameters must be finite");
}

ExpSpan apply_automorphism(const AutomorphismParams& p, const ExpSpan& v)
{
    const double horizon = v.horizon();
    const Complex i(0.0, 1.0);
    const Complex phase = std::exp(i * p.lambda() * horizon);
    const double xi_sq = std::norm(p.xi());
    ExpSpan out(horizon);
    for (const ExpTerm& term : v.terms()) {
        StepFunction rotated = term.exponent.scaled(p.rotation());
        const Complex factor =
            std::exp(-0.5 * xi_sq * horizon - std::conj(p.xi()) * rotated.integral());
        out.add(term.coefficient * phase * factor, rotated.shifted(p.xi()));
    }
    return out;
}

ExpSpan apply_automorphism_piecewise(const AutomorphismParams& p, const ExpSpan& v)
{
    const Complex i(0.0, 1.0);
    const double xi_sq = std::norm(p.xi());
    ExpSpan out(v.horizon());
    for (const ExpTerm& term : v.terms()) {
        const auto bp = term.exponent.breakpoints();
        const auto values = term.exponent.values();
        Complex factor = 1.0;
        std::vector<Complex> mapped(values.size());
        for (std::size_t j = 0; j < values.size(); ++j) {
            const double length = bp[j + 1] - bp[j];
            const Complex zeta = values[j];
            // theta_t u^(zeta)(t) = exp(i lambda t - |xi|^2 t / 2 - U zeta conj(xi) t) u^(U zeta + xi)(t)
            factor *= std::exp(i * p.lambda() * length - 0.5 * xi_sq * length -
                               p.rotation() * zeta * std::conj(p.xi()) * length);
            mapped[j] = p.rotation() * zeta + p.xi();
        }
        out.add(term.coefficient * factor,
                StepFunction(std::vector<double>(bp.begin(), bp.end()), std::move(mapped)));
    }
    return out;
}

double relative_distance(const ExpSpan& a, const ExpSpan& b, const ExpSpan& reference)
{
    const double ref = norm(reference);
    if (!(ref > 0.0))
        throw std::domain_error("reference vector is zero");
    return norm(a - b) / ref;
}

double ccr_phase_residual(double lambda, double mu, const ExpSpan& v, double phase_multiplier)
{
    if (v.empty() || !(norm(v) > 0.0))
        throw std::domain_error("ccr_phase_residual needs a nonzero vector");
    const Complex i(0.0, 1.0);
    const auto imaginary = AutomorphismParams::shift(i * lambda);
    const auto real = AutomorphismParams::shift(mu);
    const ExpSpan lhs = apply_automorphism(imaginary, apply_automorphism(real, v));
    const ExpSpan rhs = apply_automorphism(real, apply_automorphism(imaginary, v))
                            .scaled(std::exp(i * phase_multiplier * lambda * mu * v.horizon()));
    return relative_distance(lhs, rhs, v);
}

double RelationReport::max_residual() const
{
    return std::max({rotation_composition, rotation_conjugation, imaginary_shift_composition,
                     real_shift_composition, ccr_phase, gram_preservation, composition_unitarity,
                     closed_vs_piecewise});
}

ExpSpan random_span(std::uint64_t seed, std::uint64_t index, double horizon, int max_terms,
                    bool units_only, double value_scale)
{
    rng::Stream draw(seed, index, 7);
    const int terms = 1 + static_cast<int>(draw.uniform() * max_terms);
    ExpSpan v(horizon);
    auto random_value = [&] {
        const double r = value_scale * std::sqrt(draw.uniform());
        return std::polar(r, 2.0 * std::numbers::pi * draw.uniform());
    };
    for (int k = 0; k < terms; ++k) {
        const Complex c(2.0 * draw.uniform() - 1.0, 2.0 * draw.uniform() - 1.0);
        if (units_only) {
            v.add(c, StepFunction::constant(horizon, random_value()));
            continue;
        }
        const int pieces = 1 + static_cast<int>(draw.uniform() * 4);
        std::vector<double> cuts;
        for (int j = 1; j < pieces; ++j)
            cuts.push_back(horizon * draw.uniform());
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        std::vector<double> bp{0.0};
        for (double cut : cuts)
            if (cut > bp.back() && cut < horizon)
                bp.push_back(cut);
        bp.push_back(horizon);
        std::vector<Complex> values(bp.size() - 1);
        for (Complex& z : values)
            z = random_value();
        v.add(c, StepFunction(std::move(bp), std::move(values)));
    }
    return v;
}

RelationReport relation_suite(std::uint64_t seed, int trials)
{
    RelationReport report;
    report.seed = seed;
    report.trials = trials;
    const Complex i(0.0, 1.0);
    auto worst = [](double& slot, double value) { slot = std::max(slot, value); };

    for (int trial = 0; trial < trials; ++trial) {
        rng::Stream draw(seed, static_cast<std::uint64_t>(trial), 11);
        const double horizon = 0.5 + draw.uniform();
        const bool units_only = trial % 2 == 0;
        const ExpSpan v = random_span(seed, 2 * trial, horizon, 8, units_only);
        const ExpSpan w = random_span(seed, 2 * trial + 1, horizon, 8, units_only);

        auto angle = [&] { return std::polar(1.0, 2.0 * std::numbers::pi * draw.uniform()); };
        auto in_range = [&](double half) { return half * (2.0 * draw.uniform() - 1.0); };
        const Complex u = angle();
        const Complex r = angle();
        const Complex xi(in_range(1.5), in_range(1.5));
        const double lambda = in_range(3.0);
        const double mu = in_range(3.0);

        using P = AutomorphismParams;
        auto apply = [](const P& p, const ExpSpan& x) { return apply_automorphism(p, x); };

        worst(report.rotation_composition,
              relative_distance(apply(P::rotation(u), apply(P::rotation(r), v)),
                                apply(P::rotation(u * r), v), v));
        worst(report.rotation_conjugation,
              relative_distance(
                  apply(P::rotation(u), apply(P::shift(xi), apply(P::rotation(std::conj(u)), v))),
                  apply(P::shift(u * xi), v), v));
        worst(report.imaginary_shift_composition,
              relative_distance(apply(P::shift(i * lambda), apply(P::shift(i * mu), v)),
                                apply(P::shift(i * (lambda + mu)), v), v));
        worst(report.real_shift_composition,
              relative_distance(apply(P::shift(lambda), apply(P::shift(mu), v)),
                                apply(P::shift(lambda + mu), v), v));
        worst(report.ccr_phase, ccr_phase_residual(lambda, mu, v));

        const P first(in_range(3.0), xi, u);
        const P second(in_range(3.0), Complex(in_range(1.5), in_range(1.5)), r);
        const double scale = norm(v) * norm(w);
        const Complex before = span_inner(v, w);
        worst(report.gram_preservation,
              std::abs(span_inner(apply(first, v), apply(first, w)) - before) / scale);
        worst(report.composition_unitarity,
              std::abs(span_inner(apply(second, apply(first, v)), apply(second, apply(first, w))) -
                       before) / scale);
        worst(report.closed_vs_piecewise,
              relative_distance(apply(first, v), apply_automorphism_piecewise(first, v), v));
    }
    return report;
}

} // namespace ccrlab::gaussian
