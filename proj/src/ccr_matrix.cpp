#include "ccrlab/ccr_matrix.hpp"

#include "ccrlab/csv.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ccrlab::ccr {

std::string_view to_string(Scheme s)
{
    return s == Scheme::oscillator ? "oscillator" : "grid";
}

Scheme parse_scheme(std::string_view text)
{
    if (text == "oscillator")
        return Scheme::oscillator;
    if (text == "grid")
        return Scheme::grid;
    throw std::invalid_argument("unknown scheme '" + std::string(text) + "'");
}

double default_half_width(int n)
{
    return std::sqrt(std::numbers::pi * n / 2.0);
}

namespace {

void require_dimension(int n)
{
    if (n < 2)
        throw std::invalid_argument("dimension N must be at least 2");
}

std::pair<HermitianMatrix, HermitianMatrix> oscillator_pair(int n)
{
    const Complex i(0.0, 1.0);
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k) {
        const double ladder = std::sqrt((k + 1) / 2.0);
        q(k, k + 1) = q(k + 1, k) = ladder;
        p(k, k + 1) = -i * ladder;
        p(k + 1, k) = i * ladder;
    }
    return {HermitianMatrix(std::move(q)), HermitianMatrix(std::move(p))};
}

std::pair<HermitianMatrix, HermitianMatrix> grid_pair(int n, double half_width)
{
    const Complex i(0.0, 1.0);
    const double h = 2.0 * half_width / (n - 1);
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd p(n, n);
    for (int j = 0; j < n; ++j) {
        q(j, j) = -half_width + h * j;
        for (int k = 0; k < n; ++k) {
            const int d = j - k;
            p(j, k) = d == 0 ? Complex(0.0) : -i * ((d % 2 == 0 ? 1.0 : -1.0) / (h * d));
        }
    }
    return {HermitianMatrix(std::move(q)), HermitianMatrix(std::move(p))};
}

double sign_with_zero(double x, double scale)
{
    if (std::abs(x) <= 64.0 * std::numeric_limits<double>::epsilon() * scale)
        return 0.0;
    return x > 0.0 ? 1.0 : -1.0;
}

} // namespace

std::pair<HermitianMatrix, HermitianMatrix> canonical_pair(Scheme scheme, int n,
                                                           std::optional<double> half_width)
{
    require_dimension(n);
    if (scheme == Scheme::oscillator)
        return oscillator_pair(n);
    const double width = half_width.value_or(default_half_width(n));
    if (!(width > 0.0))
        throw std::invalid_argument("grid half-width L must be positive");
    return grid_pair(n, width);
}

CcrTriple build_pair(Scheme scheme, int n, double t, std::optional<double> half_width)
{
    if (!(t > 0.0))
        throw std::invalid_argument("time scale t must be positive");
    auto [q, p] = canonical_pair(scheme, n, half_width);
    const double scale = std::sqrt(2.0 * t);
    HermitianMatrix qt = scale * q;
    HermitianMatrix pt = scale * p;
    HermitianMatrix r = -1.0 * (pt + qt);
    const double width = scheme == Scheme::grid ? half_width.value_or(default_half_width(n)) : 0.0;
    return {scheme, n, t, width, std::move(qt), std::move(pt), std::move(r)};
}

CcrTriple symmetric_triple(int n, Scheme scheme, std::optional<double> half_width)
{
    auto [q, p] = canonical_pair(scheme, n, half_width);
    const double a = std::sqrt(2.0 / std::sqrt(3.0));
    const double angle = 2.0 * std::numbers::pi / 3.0;
    HermitianMatrix big_q = a * q;
    HermitianMatrix big_p = a * (std::cos(angle) * q + std::sin(angle) * p);
    HermitianMatrix big_r = -1.0 * (big_p + big_q);
    const double width = scheme == Scheme::grid ? half_width.value_or(default_half_width(n)) : 0.0;
    return {scheme, n, 0.5, width, std::move(big_q), std::move(big_p), std::move(big_r)};
}

HermitianMatrix sgn_op(const HermitianMatrix& a)
{
    return spectral_function(a, sign_with_zero);
}

double sign_sum_norm(const CcrTriple& triple)
{
    return operator_norm(sgn_op(triple.p) + sgn_op(triple.q) + sgn_op(triple.r));
}

double sign_sum_norm(Scheme scheme, int n)
{
    return sign_sum_norm(symmetric_triple(n, scheme));
}

double lemma23_value(double alpha, double t, int n, Scheme scheme)
{
    if (!(alpha > std::numbers::pi / 2.0) || alpha > std::numbers::pi)
        throw std::invalid_argument("alpha must lie in (pi/2, pi]");
    const CcrTriple pair = build_pair(scheme, n, t);
    const double c = std::cos(alpha);
    const double s = alpha == std::numbers::pi ? 0.0 : std::sin(alpha);
    const HermitianMatrix plus = c * pair.q + s * pair.p;
    const HermitianMatrix minus = c * pair.q - s * pair.p;
    return operator_norm(sgn_op(pair.q) + sgn_op(plus) + sgn_op(minus));
}

double coherent_tail_mass(Complex zeta, double t, int n)
{
    const double x = std::norm(zeta) * t;
    if (n <= 0)
        return 1.0;
    if (x == 0.0)
        return 0.0;
    double total = 0.0;
    for (int k = n;; ++k) {
        const double term = std::exp(k * std::log(x) - std::lgamma(k + 1.0) - x);
        total += term;
        if (k > x && term <= 1e-18 * total)
            break;
        if (k > n + 100000)
            break;
    }
    return total;
}

Eigen::VectorXcd coherent_vector(Complex zeta, double t, int n)
{
    if (!(t > 0.0))
        throw std::invalid_argument("time scale t must be positive");
    if (n < 1)
        throw std::invalid_argument("dimension must be positive");
    if (coherent_tail_mass(zeta, t, n) > 1e-10)
        throw std::domain_error("truncation too small for coherent vector: tail mass above 1e-10");
    const Complex beta = zeta * std::sqrt(t);
    Eigen::VectorXcd v(n);
    v(0) = 1.0;
    for (int k = 1; k < n; ++k)
        v(k) = v(k - 1) * beta / std::sqrt(static_cast<double>(k));
    return v;
}

double quadratic_form(const HermitianMatrix& s, const Eigen::VectorXcd& v)
{
    if (v.size() != s.dim())
        throw std::invalid_argument("dimension mismatch between operator and vector");
    if (v.squaredNorm() == 0.0)
        throw std::domain_error("quadratic form of the zero vector");
    return v.dot(s.matrix() * v).real();
}

double sgn_expectation(const HermitianMatrix& a, const Eigen::VectorXcd& v)
{
    if (v.size() != a.dim())
        throw std::invalid_argument("dimension mismatch between operator and vector");
    return quadratic_form(sgn_op(a), v);
}

std::vector<NormStudyRow> convergence_study(std::span<const Scheme> schemes,
                                            std::span<const int> dims,
                                            std::span<const double> alphas, double t,
                                            bool record_timing)
{
    if (!std::is_sorted(dims.begin(), dims.end()))
        throw std::invalid_argument("dimension list must be ascending");
    std::vector<NormStudyRow> rows;
    for (Scheme scheme : schemes) {
        for (int n : dims) {
            for (double alpha : alphas) {
                const auto start = std::chrono::steady_clock::now();
                const double value = lemma23_value(alpha, t, n, scheme);
                const double elapsed =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                rows.push_back({scheme, n, alpha, t, value, record_timing ? elapsed : 0.0});
            }
        }
    }
    return rows;
}

std::vector<double> successive_differences(std::span<const NormStudyRow> rows, Scheme scheme,
                                           double alpha)
{
    std::map<int, double> by_dim;
    for (const NormStudyRow& row : rows)
        if (row.scheme == scheme && std::abs(row.alpha - alpha) < 1e-12)
            by_dim[row.n] = row.value;
    std::vector<double> diffs;
    double previous = std::numeric_limits<double>::quiet_NaN();
    for (const auto& [n, value] : by_dim) {
        diffs.push_back(std::abs(value - previous));
        previous = value;
    }
    return diffs;
}

void write_norm_study_csv(std::ostream& out, std::span<const NormStudyRow> rows)
{
    out << kNormStudyHeader << '\n';
    for (const NormStudyRow& row : rows) {
        out << to_string(row.scheme) << ',' << row.n << ',' << format_number(row.alpha) << ','
            << format_number(row.t) << ',' << format_number(row.value) << ','
            << format_number(row.seconds) << '\n';
    }
}

std::vector<NormStudyRow> read_norm_study_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) != split_csv_line(kNormStudyHeader))
        throw std::invalid_argument("norm study CSV: unexpected header");
    std::vector<NormStudyRow> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto f = split_csv_line(line);
        if (f.size() != 6)
            throw std::invalid_argument("norm study CSV: expected 6 fields");
        rows.push_back({parse_scheme(f[0]), static_cast<int>(parse_integer(f[1])),
                        parse_double(f[2]), parse_double(f[3]), parse_double(f[4]),
                        parse_double(f[5])});
    }
    return rows;
}

} // namespace ccrlab::ccr
