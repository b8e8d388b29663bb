#include "ccrlab/warren_sim.hpp"

#include "ccrlab/csv.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

namespace ccrlab::warren {

namespace {

constexpr double kAlignmentTolerance = 1e-9;

int grid_index(double time, int m, const char* what)
{
    const double scaled = time * m;
    const double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > kAlignmentTolerance * std::max(1.0, std::abs(scaled)) ||
        rounded < 0 || rounded > m)
        throw std::invalid_argument(std::string(what) + " is not a grid point of m = " +
                                    std::to_string(m));
    return static_cast<int>(rounded);
}

double sign_of(double x)
{
    return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
}

} // namespace

std::vector<int> local_minima(std::span<const double> values)
{
    if (values.size() < 3)
        throw std::invalid_argument("local_minima needs at least 3 values");
    std::vector<int> minima;
    for (std::size_t j = 1; j + 1 < values.size(); ++j)
        if (values[j - 1] > values[j] && values[j] < values[j + 1])
            minima.push_back(static_cast<int>(j));
    return minima;
}

std::vector<int> basin_widths(std::span<const double> values, std::span<const int> minima)
{
    const auto size = static_cast<int>(values.size());
    std::vector<int> right(size, kUnboundedBasin);
    std::vector<int> left(size, kUnboundedBasin);
    std::vector<int> stack;
    stack.reserve(size);
    for (int i = 0; i < size; ++i) {
        while (!stack.empty() && values[stack.back()] >= values[i]) {
            right[stack.back()] = i - stack.back();
            stack.pop_back();
        }
        stack.push_back(i);
    }
    stack.clear();
    for (int i = size - 1; i >= 0; --i) {
        while (!stack.empty() && values[stack.back()] >= values[i]) {
            left[stack.back()] = stack.back() - i;
            stack.pop_back();
        }
        stack.push_back(i);
    }
    std::vector<int> out;
    out.reserve(minima.size());
    for (int j : minima)
        out.push_back(std::min(left[j], right[j]));
    return out;
}

ReplicaRng::ReplicaRng(std::uint64_t master_seed, std::uint64_t replica)
    : increments(master_seed, replica, 0), signs(master_seed, replica, 1)
{
}

WarrenPath sample_path(int m, ReplicaRng& rng)
{
    if (m < 4)
        throw std::invalid_argument("sample_path needs m >= 4");
    WarrenPath path;
    path.m = m;
    path.values.resize(m + 1);
    path.values[0] = 0.0;
    const double step = 1.0 / std::sqrt(static_cast<double>(m));
    for (int j = 1; j <= m; ++j)
        path.values[j] = path.values[j - 1] + step * rng.increments.normal();
    path.minima = local_minima(path.values);
    path.signs.resize(path.minima.size());
    for (int& s : path.signs)
        s = rng.signs.sign();
    path.basin = basin_widths(path.values, path.minima);
    return path;
}

WarrenPath make_path(std::vector<double> values, std::vector<int> signs)
{
    if (values.size() < 3 || values.front() != 0.0)
        throw std::invalid_argument("path values need B_0 = 0 and at least 3 points");
    WarrenPath path;
    path.m = static_cast<int>(values.size()) - 1;
    path.values = std::move(values);
    path.minima = local_minima(path.values);
    if (signs.size() != path.minima.size())
        throw std::invalid_argument("one sign per local minimum is required");
    path.signs = std::move(signs);
    path.basin = basin_widths(path.values, path.minima);
    validate(path);
    return path;
}

void validate(const WarrenPath& path)
{
    if (path.m < 2 || path.values.size() != static_cast<std::size_t>(path.m) + 1)
        throw std::logic_error("path has inconsistent grid size");
    if (path.values.front() != 0.0)
        throw std::logic_error("path must start at B_0 = 0");
    if (path.minima != local_minima(path.values))
        throw std::logic_error("minima list is not the set of strict three-point minima");
    if (path.signs.size() != path.minima.size() || path.basin.size() != path.minima.size())
        throw std::logic_error("signs/basins do not match minima");
    for (int s : path.signs)
        if (s != 1 && s != -1)
            throw std::logic_error("signs must be +1 or -1");
}

TimeWeight::TimeWeight(std::vector<double> breakpoints, std::vector<double> values)
{
    if (values.empty() || breakpoints.size() != values.size() + 1)
        throw std::invalid_argument("time weight needs p >= 1 values and p + 1 breakpoints");
    if (breakpoints.front() != 0.0 || breakpoints.back() != 1.0)
        throw std::invalid_argument("time weight breakpoints must run from 0 to 1");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1]))
            throw std::invalid_argument("time weight breakpoints must be strictly increasing");
    for (double v : values)
        if (!std::isfinite(v))
            throw std::invalid_argument("time weight values must be finite");

    breakpoints_.push_back(0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values_.empty() && values_.back() == values[i]) {
            breakpoints_.back() = breakpoints[i + 1];
            continue;
        }
        values_.push_back(values[i]);
        breakpoints_.push_back(breakpoints[i + 1]);
    }
}

TimeWeight TimeWeight::constant(double value)
{
    return TimeWeight({0.0, 1.0}, {value});
}

TimeWeight TimeWeight::indicator(double a, double b)
{
    if (!(a >= 0.0 && a < b && b <= 1.0))
        throw std::invalid_argument("indicator needs 0 <= a < b <= 1");
    std::vector<double> bp{0.0};
    std::vector<double> v;
    if (a > 0.0) {
        bp.push_back(a);
        v.push_back(0.0);
    }
    bp.push_back(b);
    v.push_back(1.0);
    if (b < 1.0) {
        bp.push_back(1.0);
        v.push_back(0.0);
    }
    return TimeWeight(std::move(bp), std::move(v));
}

double TimeWeight::operator()(double t) const
{
    const auto it = std::upper_bound(breakpoints_.begin() + 1, breakpoints_.end(), t);
    const auto piece = std::min<std::size_t>(it - breakpoints_.begin() - 1, values_.size() - 1);
    return values_[piece];
}

bool TimeWeight::vanishes_on(double a, double b) const
{
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (breakpoints_[i] < b && breakpoints_[i + 1] > a && values_[i] != 0.0)
            return false;
    return true;
}

TimeWeight operator*(const TimeWeight& x, const TimeWeight& y)
{
    std::vector<double> bp{0.0};
    std::vector<double> v;
    std::size_t i = 0, j = 0;
    while (i < x.values_.size() && j < y.values_.size()) {
        const double right = std::min(x.breakpoints_[i + 1], y.breakpoints_[j + 1]);
        bp.push_back(right);
        v.push_back(x.values_[i] * y.values_[j]);
        if (x.breakpoints_[i + 1] == right)
            ++i;
        if (y.breakpoints_[j + 1] == right)
            ++j;
    }
    return TimeWeight(std::move(bp), std::move(v));
}

std::string_view to_string(ProfileKind kind)
{
    switch (kind) {
    case ProfileKind::weight:
        return "W";
    case ProfileKind::weight_sign:
        return "WS";
    case ProfileKind::weight_exponential:
        return "WE";
    case ProfileKind::weight_basin:
        return "WB";
    }
    return "?";
}

SuperchaosVector SuperchaosVector::weighted(TimeWeight w)
{
    return SuperchaosVector(ProfileKind::weight, std::move(w));
}

SuperchaosVector SuperchaosVector::sign_probe(TimeWeight w, double a, double b)
{
    if (!(0.0 <= a && a < b && b <= 1.0))
        throw std::invalid_argument("sign probe needs 0 <= a < b <= 1");
    SuperchaosVector f(ProfileKind::weight_sign, std::move(w));
    f.a_ = a;
    f.b_ = b;
    return f;
}

SuperchaosVector SuperchaosVector::exponential_probe(TimeWeight w, double a, double b, double zeta)
{
    if (!(0.0 <= a && a < b && b <= 1.0) || !std::isfinite(zeta))
        throw std::invalid_argument("exponential probe needs 0 <= a < b <= 1 and finite zeta");
    SuperchaosVector f(ProfileKind::weight_exponential, std::move(w));
    f.a_ = a;
    f.b_ = b;
    f.zeta_ = zeta;
    return f;
}

SuperchaosVector SuperchaosVector::basin_resolved(TimeWeight w, double radius)
{
    if (!(radius > 0.0 && radius < 1.0))
        throw std::invalid_argument("basin radius must lie in (0, 1)");
    SuperchaosVector f(ProfileKind::weight_basin, std::move(w));
    f.radius_ = radius;
    return f;
}

SuperchaosVector SuperchaosVector::with_weight(TimeWeight w) const
{
    SuperchaosVector f = *this;
    f.weight_ = std::move(w);
    return f;
}

void SuperchaosVector::check_alignment(int m) const
{
    if (kind_ == ProfileKind::weight_sign || kind_ == ProfileKind::weight_exponential) {
        grid_index(a_, m, "profile probe start");
        grid_index(b_, m, "profile probe end");
    }
}

double SuperchaosVector::coefficient(std::size_t k, const WarrenPath& path) const
{
    const int j = path.minima[k];
    const double w = weight_(path.time(j));
    switch (kind_) {
    case ProfileKind::weight:
        return w;
    case ProfileKind::weight_sign: {
        const double diff = path.values[grid_index(b_, path.m, "profile probe end")] -
                            path.values[grid_index(a_, path.m, "profile probe start")];
        return w * sign_of(diff);
    }
    case ProfileKind::weight_exponential: {
        const double diff = path.values[grid_index(b_, path.m, "profile probe end")] -
                            path.values[grid_index(a_, path.m, "profile probe start")];
        return w * std::exp(zeta_ * diff - 0.5 * zeta_ * zeta_ * (b_ - a_));
    }
    case ProfileKind::weight_basin: {
        const auto required = static_cast<long long>(std::floor(radius_ * path.m + 1e-9));
        return path.basin[k] > required ? w : 0.0;
    }
    }
    return 0.0;
}

double chaos_eval(const SuperchaosVector& f, const WarrenPath& path)
{
    f.check_alignment(path.m);
    double total = 0.0;
    for (std::size_t k = 0; k < path.minima.size(); ++k)
        total += path.signs[k] * f.coefficient(k, path);
    return total;
}

double chaos_eval(const SuperchaosVector& f, const WarrenPath& path,
                  std::span<const std::size_t> enumeration)
{
    f.check_alignment(path.m);
    if (enumeration.size() != path.minima.size())
        throw std::invalid_argument("enumeration must list every minimum once");
    std::vector<bool> seen(path.minima.size(), false);
    double total = 0.0;
    for (std::size_t k : enumeration) {
        if (k >= seen.size() || seen[k])
            throw std::invalid_argument("enumeration is not a permutation of the minima");
        seen[k] = true;
        total += path.signs[k] * f.coefficient(k, path);
    }
    return total;
}

PathFunction constant_psi(double value)
{
    return [value](int, const WarrenPath&) { return value; };
}

PathFunction half_time_sign_probe()
{
    return [](int j, const WarrenPath& path) {
        if (path.m % 2 != 0)
            throw std::invalid_argument("half-time probe needs an even grid size");
        if (2 * j >= path.m)
            return 0.0;
        return sign_of(path.values[path.m] - path.values[path.m / 2]);
    };
}

double chaos_norm_integrand(const SuperchaosVector& f, const WarrenPath& path)
{
    f.check_alignment(path.m);
    double total = 0.0;
    for (std::size_t k = 0; k < path.minima.size(); ++k) {
        const double g = f.coefficient(k, path);
        total += g * g;
    }
    return total;
}

double quad_form_integrand(const PathFunction& psi, const SuperchaosVector& f,
                           const WarrenPath& path)
{
    f.check_alignment(path.m);
    double total = 0.0;
    for (std::size_t k = 0; k < path.minima.size(); ++k) {
        const double g = f.coefficient(k, path);
        total += g * g * psi(path.minima[k], path);
    }
    return total;
}

double apply_C(const PathFunction& psi, const SuperchaosVector& f, const WarrenPath& path)
{
    f.check_alignment(path.m);
    double total = 0.0;
    for (std::size_t k = 0; k < path.minima.size(); ++k)
        total += path.signs[k] * f.coefficient(k, path) * psi(path.minima[k], path);
    return total;
}

void SimConfig::validate() const
{
    if (m < 4)
        throw std::invalid_argument("grid size m must be at least 4");
    if (samples < 1)
        throw std::invalid_argument("samples must be positive");
    if (threads < 1)
        throw std::invalid_argument("threads must be positive");
}

McEstimate summarize(std::span<const double> values, std::uint64_t seed)
{
    if (values.empty())
        throw std::invalid_argument("no samples to summarize");
    const auto n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values)
        sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : values)
        ss += (v - mean) * (v - mean);
    const double stderr_ = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    return {mean, stderr_, static_cast<std::int64_t>(values.size()), seed};
}

RatioEstimate ratio_estimate(std::span<const double> x, std::span<const double> y,
                             std::uint64_t seed)
{
    if (x.size() != y.size() || x.empty())
        throw std::invalid_argument("ratio estimate needs paired, nonempty samples");
    RatioEstimate out;
    out.numerator = summarize(x, seed);
    out.denominator = summarize(y, seed);
    if (out.denominator.mean == 0.0)
        throw std::domain_error("ratio estimate with zero denominator");
    out.ratio = out.numerator.mean / out.denominator.mean;
    const auto n = static_cast<double>(x.size());
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double z = x[i] - out.ratio * y[i];
        ss += z * z;
    }
    out.stderr_ = x.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) / std::abs(out.denominator.mean) : 0.0;
    return out;
}

void for_each_replica(const SimConfig& cfg,
                      const std::function<void(std::int64_t, const WarrenPath&)>& body)
{
    cfg.validate();
    const auto workers = static_cast<std::int64_t>(
        std::min<std::int64_t>(cfg.threads, cfg.samples));
    auto run_block = [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t r = begin; r < end; ++r) {
            ReplicaRng rng(cfg.seed, static_cast<std::uint64_t>(r));
            body(r, sample_path(cfg.m, rng));
        }
    };
    if (workers == 1) {
        run_block(0, cfg.samples);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (std::int64_t w = 0; w < workers; ++w) {
            const std::int64_t begin = cfg.samples * w / workers;
            const std::int64_t end = cfg.samples * (w + 1) / workers;
            pool.emplace_back([&, w, begin, end] {
                try {
                    run_block(begin, end);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

std::vector<double> replicate(const SimConfig& cfg,
                              const std::function<double(const WarrenPath&)>& per_path)
{
    cfg.validate();
    std::vector<double> values(cfg.samples);
    for_each_replica(cfg, [&](std::int64_t r, const WarrenPath& path) { values[r] = per_path(path); });
    return values;
}

McEstimate monte_carlo(const SimConfig& cfg,
                       const std::function<double(const WarrenPath&)>& per_path)
{
    return summarize(replicate(cfg, per_path), cfg.seed);
}

McEstimate quad_form_C(const PathFunction& psi, const SuperchaosVector& f, const SimConfig& cfg)
{
    cfg.validate();
    f.check_alignment(cfg.m);
    return monte_carlo(cfg, [&](const WarrenPath& path) { return quad_form_integrand(psi, f, path); });
}

RatioEstimate normalized_quad_form(const PathFunction& psi, const SuperchaosVector& f,
                                   const SimConfig& cfg)
{
    cfg.validate();
    f.check_alignment(cfg.m);
    std::vector<double> num(cfg.samples), den(cfg.samples);
    for_each_replica(cfg, [&](std::int64_t r, const WarrenPath& path) {
        num[r] = quad_form_integrand(psi, f, path);
        den[r] = chaos_norm_integrand(f, path);
    });
    return ratio_estimate(num, den, cfg.seed);
}

int PsiSpec::delta_steps(int m) const
{
    return grid_index(delta, m, "delta");
}

void PsiSpec::check(int m) const
{
    if (n < 1)
        throw std::invalid_argument("psi needs n >= 1");
    if (!(delta > 0.0 && delta < 0.5))
        throw std::invalid_argument("psi needs delta in (0, 0.5)");
    if (m % (2 * n) != 0)
        throw std::invalid_argument("bucket ends k/2n are not grid points: m = " +
                                    std::to_string(m) + ", n = " + std::to_string(n));
    delta_steps(m);
}

double chi(int n, int k, double t)
{
    const double lo = static_cast<double>(k - 1) / (2.0 * n);
    const double hi = static_cast<double>(k) / (2.0 * n);
    return (t >= lo && t < hi) ? 1.0 : 0.0;
}

double phi(int n, int k, double delta, const WarrenPath& path)
{
    const PsiSpec spec{n, delta};
    spec.check(path.m);
    if (k < 1 || k > n)
        throw std::invalid_argument("bucket index k must lie in 1..n");
    const int end = k * (path.m / (2 * n));
    return sign_of(path.values[end + spec.delta_steps(path.m)] - path.values[end]);
}

double psi_eval(const PsiSpec& spec, double t, const WarrenPath& path)
{
    spec.check(path.m);
    if (!(t >= 0.0) || t >= 0.5)
        return 0.0;
    const int k = std::min(static_cast<int>(std::floor(t * 2.0 * spec.n)) + 1, spec.n);
    return phi(spec.n, k, spec.delta, path);
}

double psi_at_index(const PsiSpec& spec, int j, const WarrenPath& path)
{
    const int m = path.m;
    if (2 * j >= m || j < 0)
        return 0.0;
    const int width = m / (2 * spec.n);
    const int end = (j / width + 1) * width;
    const int d = spec.delta_steps(m);
    return sign_of(path.values[end + d] - path.values[end]);
}

std::vector<Lemma43Row> lemma43_table(const SuperchaosVector& f, std::span<const int> n_list,
                                      std::span<const double> delta_list, const SimConfig& cfg)
{
    cfg.validate();
    if (n_list.empty() || delta_list.empty())
        throw std::invalid_argument("lemma43_table needs nonempty n and delta lists");
    f.check_alignment(cfg.m);
    if (!f.weight().vanishes_on(0.5, 1.0))
        throw std::invalid_argument("lemma43_table needs a profile supported in (0, 0.5)");
    std::vector<PsiSpec> specs;
    for (double delta : delta_list)
        for (int n : n_list) {
            specs.push_back({n, delta});
            specs.back().check(cfg.m);
        }

    const std::size_t rows = specs.size();
    const std::size_t deltas = delta_list.size();
    const auto samples = static_cast<std::size_t>(cfg.samples);
    std::vector<double> est(rows * samples), mass(samples), u(deltas * samples);
    std::vector<int> delta_steps;
    for (double delta : delta_list)
        delta_steps.push_back(PsiSpec{1, delta}.delta_steps(cfg.m));

    for_each_replica(cfg, [&](std::int64_t r, const WarrenPath& path) {
        std::vector<std::pair<int, double>> weighted;
        double total = 0.0;
        for (std::size_t k = 0; k < path.minima.size(); ++k) {
            const double g = f.coefficient(k, path);
            if (g != 0.0) {
                weighted.emplace_back(path.minima[k], g * g);
                total += g * g;
            }
        }
        mass[r] = total;
        for (std::size_t di = 0; di < deltas; ++di) {
            double inside = 0.0;
            for (const auto& [j, w2] : weighted)
                if (path.values[j + delta_steps[di]] > path.values[j])
                    inside += w2;
            u[di * samples + r] = inside;
        }
        for (std::size_t row = 0; row < rows; ++row) {
            double sum = 0.0;
            for (const auto& [j, w2] : weighted)
                sum += w2 * psi_at_index(specs[row], j, path);
            est[row * samples + r] = sum;
        }
    });

    const McEstimate mass_est = summarize(mass, cfg.seed);
    std::vector<Lemma43Row> out;
    for (std::size_t row = 0; row < rows; ++row) {
        const std::span<const double> x(est.data() + row * samples, samples);
        const std::size_t di = row / n_list.size();
        const std::span<const double> ux(u.data() + di * samples, samples);
        const RatioEstimate ratio = ratio_estimate(x, mass, cfg.seed);
        const McEstimate u_est = summarize(ux, cfg.seed);
        Lemma43Row r;
        r.n = specs[row].n;
        r.delta = specs[row].delta;
        r.m = cfg.m;
        r.samples = cfg.samples;
        r.estimate = ratio.numerator.mean;
        r.stderr_ = ratio.numerator.stderr_;
        r.mass = mass_est.mean;
        r.mass_stderr = mass_est.stderr_;
        r.u_delta = u_est.mean;
        r.u_delta_stderr = u_est.stderr_;
        r.normalized = ratio.ratio;
        r.normalized_stderr = ratio.stderr_;
        r.seed = cfg.seed;
        out.push_back(r);
    }
    return out;
}

void write_lemma43_csv(std::ostream& out, std::span<const Lemma43Row> rows)
{
    out << kLemma43Header << '\n';
    for (const Lemma43Row& r : rows) {
        out << r.n << ',' << format_number(r.delta) << ',' << r.m << ',' << r.samples << ','
            << format_number(r.estimate) << ',' << format_number(r.stderr_) << ','
            << format_number(r.mass) << ',' << format_number(r.mass_stderr) << ',' << r.seed
            << '\n';
    }
}

std::vector<Lemma43Row> read_lemma43_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) != split_csv_line(kLemma43Header))
        throw std::invalid_argument("lemma43 CSV: unexpected header");
    std::vector<Lemma43Row> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto f = split_csv_line(line);
        if (f.size() != 9)
            throw std::invalid_argument("lemma43 CSV: expected 9 fields");
        Lemma43Row r;
        r.n = static_cast<int>(parse_integer(f[0]));
        r.delta = parse_double(f[1]);
        r.m = static_cast<int>(parse_integer(f[2]));
        r.samples = parse_integer(f[3]);
        r.estimate = parse_double(f[4]);
        r.stderr_ = parse_double(f[5]);
        r.mass = parse_double(f[6]);
        r.mass_stderr = parse_double(f[7]);
        r.seed = static_cast<std::uint64_t>(parse_integer(f[8]));
        r.normalized = r.mass != 0.0 ? r.estimate / r.mass : 0.0;
        rows.push_back(r);
    }
    return rows;
}

SuperchaosVector op_A(const TimeWeight& chi_weight, const SuperchaosVector& f)
{
    return f.with_weight(f.weight() * chi_weight);
}

SetFunction avoids_interval(double s, double t)
{
    return [s, t](std::span<const double> times) {
        for (double x : times)
            if (x > s && x < t)
                return 0.0;
        return 1.0;
    };
}

TruncatedChaos& TruncatedChaos::add_term(int order, Coefficient coefficient)
{
    if (order < 0)
        throw std::invalid_argument("chaos order must be nonnegative");
    terms_.push_back({order, std::move(coefficient)});
    return *this;
}

TruncatedChaos& TruncatedChaos::add_constant(double c)
{
    return add_term(0, [c](std::span<const std::size_t>, const WarrenPath&) { return c; });
}

TruncatedChaos& TruncatedChaos::add_first(const SuperchaosVector& f)
{
    return add_term(1, [f](std::span<const std::size_t> pos, const WarrenPath& path) {
        return f.coefficient(pos[0], path);
    });
}

TruncatedChaos& TruncatedChaos::add_pair(TimeWeight first, TimeWeight second)
{
    return add_term(2, [a = std::move(first), b = std::move(second)](
                           std::span<const std::size_t> pos, const WarrenPath& path) {
        const double s = path.time(path.minima[pos[0]]);
        const double t = path.time(path.minima[pos[1]]);
        return a(s) * b(t) + a(t) * b(s);
    });
}

int TruncatedChaos::max_order() const
{
    int order = 0;
    for (const Term& term : terms_)
        order = std::max(order, term.order);
    return order;
}

TruncatedChaos apply_E(const SetFunction& phi_set, const TruncatedChaos& chaos)
{
    TruncatedChaos out;
    for (const auto& term : chaos.terms()) {
        out.add_term(term.order, [phi_set, inner = term.coefficient](
                                     std::span<const std::size_t> pos, const WarrenPath& path) {
            std::vector<double> times;
            times.reserve(pos.size());
            for (std::size_t k : pos)
                times.push_back(path.time(path.minima[k]));
            return phi_set(times) * inner(pos, path);
        });
    }
    return out;
}

namespace {

// Sum over all strictly increasing position tuples of length `order` of
// (product of signs) * coefficient.
double sum_over_subsets(const TruncatedChaos::Coefficient& coefficient, int order,
                        const WarrenPath& path)
{
    const std::size_t count = path.minima.size();
    std::vector<std::size_t> pos(order);
    double total = 0.0;
    auto recurse = [&](auto&& self, int depth, std::size_t start, double sign) -> void {
        if (depth == order) {
            total += sign * coefficient(pos, path);
            return;
        }
        for (std::size_t k = start; k < count; ++k) {
            pos[depth] = k;
            self(self, depth + 1, k + 1, sign * path.signs[k]);
        }
    };
    recurse(recurse, 0, 0, 1.0);
    return total;
}

} // namespace

double evaluate(const TruncatedChaos& chaos, const WarrenPath& path, int n_max)
{
    if (chaos.max_order() > n_max)
        throw std::invalid_argument("chaos order " + std::to_string(chaos.max_order()) +
                                    " exceeds truncation n_max = " + std::to_string(n_max));
    double total = 0.0;
    for (const auto& term : chaos.terms())
        total += sum_over_subsets(term.coefficient, term.order, path);
    return total;
}

double op_E(const SetFunction& phi_set, const TruncatedChaos& chaos, const WarrenPath& path,
            int n_max)
{
    return evaluate(apply_E(phi_set, chaos), path, n_max);
}

} // namespace ccrlab::warren
