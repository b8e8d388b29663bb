#pragma once

// Grid model of Warren's noise of splitting on [0, 1]: a Brownian walk with
// step 1/m, its strict local minima, and an independent +/-1 sign attached
// to every minimum. First-superchaos vectors
//
//     f(omega) = sum_k eta(tau_k) g(tau_k, omega)
//
// are described by a coefficient profile g, and the quadratic forms
//
//     <C_psi>_f = E sum_k |g(tau_k)|^2 psi(tau_k, omega)
//
// are estimated by Monte Carlo over path replicas. The signs integrate out
// of every quadratic form exactly, so only the Brownian part is sampled for
// those; the signs matter for chaos_eval and op_E.

#include "ccrlab/rng.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace ccrlab::warren {

inline constexpr int kUnboundedBasin = std::numeric_limits<int>::max();

struct WarrenPath {
    int m = 0;
    std::vector<double> values;  // B_0 .. B_m, B_0 = 0
    std::vector<int> minima;     // ascending j with B_{j-1} > B_j < B_{j+1}
    std::vector<int> signs;      // one +/-1 per minimum
    std::vector<int> basin;      // per minimum: distance to the nearest i with B_i <= B_j

    double time(int j) const { return static_cast<double>(j) / m; }
};

/// Ascending interior indices j with a strict three-point minimum.
std::vector<int> local_minima(std::span<const double> values);

/// For each minimum j, min over both sides of the distance to the nearest
/// index i != j with values[i] <= values[j]; kUnboundedBasin if there is none.
std::vector<int> basin_widths(std::span<const double> values, std::span<const int> minima);

/// Independent substreams of one replica: lane 0 drives the increments,
/// lane 1 the signs.
struct ReplicaRng {
    ReplicaRng(std::uint64_t master_seed, std::uint64_t replica);

    rng::Stream increments;
    rng::Stream signs;
};

WarrenPath sample_path(int m, ReplicaRng& rng);

/// Path from explicit values (values.front() must be 0); minima and basins
/// are derived, signs must match the number of minima.
WarrenPath make_path(std::vector<double> values, std::vector<int> signs);

/// Checks every WarrenPath invariant, including completeness of the minima
/// list by rescanning. Throws std::logic_error on violation.
void validate(const WarrenPath& path);

/// Piecewise-constant real function on [0, 1]; piece i holds on
/// [s_{i-1}, s_i), the last piece is closed at 1.
class TimeWeight {
public:
    TimeWeight(std::vector<double> breakpoints, std::vector<double> values);

    static TimeWeight constant(double value);
    /// 1 on [a, b), 0 elsewhere.
    static TimeWeight indicator(double a, double b);

    double operator()(double t) const;
    std::span<const double> breakpoints() const { return breakpoints_; }
    std::span<const double> values() const { return values_; }

    /// True when the weight is 0 on all of [a, b).
    bool vanishes_on(double a, double b) const;

    friend TimeWeight operator*(const TimeWeight& x, const TimeWeight& y);
    friend bool operator==(const TimeWeight& x, const TimeWeight& y) = default;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

enum class ProfileKind {
    weight,              // W:  g = w(t)
    weight_sign,         // WS: g = w(t) sgn(B_b - B_a)
    weight_exponential,  // WE: g = w(t) exp(zeta (B_b - B_a) - zeta^2 (b - a) / 2)
    weight_basin,        // WB: g = w(t) [B_t < B_s for all 0 < |s - t| <= r]
};

std::string_view to_string(ProfileKind kind);

/// Coefficient profile g of a first-superchaos vector.
class SuperchaosVector {
public:
    static SuperchaosVector weighted(TimeWeight w);
    static SuperchaosVector sign_probe(TimeWeight w, double a, double b);
    static SuperchaosVector exponential_probe(TimeWeight w, double a, double b, double zeta);
    static SuperchaosVector basin_resolved(TimeWeight w, double radius);

    ProfileKind kind() const { return kind_; }
    const TimeWeight& weight() const { return weight_; }
    double probe_start() const { return a_; }
    double probe_end() const { return b_; }
    double zeta() const { return zeta_; }
    double radius() const { return radius_; }

    SuperchaosVector with_weight(TimeWeight w) const;

    /// Throws std::invalid_argument when probe times are not grid points of m.
    void check_alignment(int m) const;

    /// g(tau_k, path) for the k-th minimum of the path.
    double coefficient(std::size_t k, const WarrenPath& path) const;

private:
    SuperchaosVector(ProfileKind kind, TimeWeight w) : kind_(kind), weight_(std::move(w)) {}

    ProfileKind kind_;
    TimeWeight weight_;
    double a_ = 0.0;
    double b_ = 0.0;
    double zeta_ = 0.0;
    double radius_ = 0.0;
};

/// sum_k eta_k g(tau_k, path) in ascending order of minima.
double chaos_eval(const SuperchaosVector& f, const WarrenPath& path);
/// Same sum taken in the given enumeration (a permutation of minima positions).
double chaos_eval(const SuperchaosVector& f, const WarrenPath& path,
                  std::span<const std::size_t> enumeration);

/// psi(t_j, path) at grid index j.
using PathFunction = std::function<double(int j, const WarrenPath& path)>;

PathFunction constant_psi(double value);
/// psi(t) = sgn(B_1 - B_0.5) for t < 0.5, else 0.
PathFunction half_time_sign_probe();

/// sum_k |g(tau_k)|^2: the per-path contribution to ||f||^2.
double chaos_norm_integrand(const SuperchaosVector& f, const WarrenPath& path);
/// sum_k |g(tau_k)|^2 psi(tau_k, path).
double quad_form_integrand(const PathFunction& psi, const SuperchaosVector& f,
                           const WarrenPath& path);

/// (C_psi f)(omega) = sum_k eta_k g(tau_k) psi(tau_k, omega).
double apply_C(const PathFunction& psi, const SuperchaosVector& f, const WarrenPath& path);

struct SimConfig {
    int m = 1 << 14;
    std::int64_t samples = 10000;
    std::uint64_t seed = 1;
    int threads = 1;

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
};

McEstimate summarize(std::span<const double> values, std::uint64_t seed);

struct RatioEstimate {
    double ratio = 0.0;
    double stderr_ = 0.0;
    McEstimate numerator;
    McEstimate denominator;
};

/// mean(x) / mean(y) over paired replicas, delta-method standard error.
RatioEstimate ratio_estimate(std::span<const double> x, std::span<const double> y,
                             std::uint64_t seed);

/// Calls body(r, path) for every replica r; paths come from
/// ReplicaRng(seed, r). Replicas are split into contiguous blocks across
/// threads, so results written to slot r do not depend on the schedule.
void for_each_replica(const SimConfig& cfg,
                      const std::function<void(std::int64_t, const WarrenPath&)>& body);

/// Per-replica values of a path functional, in replica order.
std::vector<double> replicate(const SimConfig& cfg,
                              const std::function<double(const WarrenPath&)>& per_path);

McEstimate monte_carlo(const SimConfig& cfg,
                       const std::function<double(const WarrenPath&)>& per_path);

/// Monte Carlo estimate of <C_psi>_f.
McEstimate quad_form_C(const PathFunction& psi, const SuperchaosVector& f, const SimConfig& cfg);

/// <C_psi>_f / ||f||^2 with both estimated on the same replicas.
RatioEstimate normalized_quad_form(const PathFunction& psi, const SuperchaosVector& f,
                                   const SimConfig& cfg);

/// psi_{n,delta}(t) = sum_k chi_{n,k}(t) phi_{n,k,delta}.
struct PsiSpec {
    int n = 1;
    double delta = 0.25;

    int delta_steps(int m) const;
    /// Throws std::invalid_argument unless every bucket end k/2n and probe
    /// k/2n + delta is a grid point of m.
    void check(int m) const;
};

/// 1 on [(k-1)/2n, k/2n), else 0.
double chi(int n, int k, double t);
/// sgn(B_{k/2n + delta} - B_{k/2n}), 0 on exact ties.
double phi(int n, int k, double delta, const WarrenPath& path);
double psi_eval(const PsiSpec& spec, double t, const WarrenPath& path);
/// psi_eval at t = j/m using integer bucket arithmetic.
double psi_at_index(const PsiSpec& spec, int j, const WarrenPath& path);

struct Lemma43Row {
    int n = 0;
    double delta = 0.0;
    int m = 0;
    std::int64_t samples = 0;
    double estimate = 0.0;
    double stderr_ = 0.0;
    double mass = 0.0;
    double mass_stderr = 0.0;
    double u_delta = 0.0;  // mu_f(U_delta), U_delta = {B_{t+delta} > B_t}
    double u_delta_stderr = 0.0;
    double normalized = 0.0;
    double normalized_stderr = 0.0;
    std::uint64_t seed = 0;

    /// mu_f(U_delta) - mu_f(complement of U_delta), normalized by the mass.
    double normalized_lower_bound() const { return (2.0 * u_delta - mass) / mass; }
};

/// <C_{psi_{n,delta}}>_f for every (n, delta), all rows on the same replicas.
/// Rows are ordered by delta (outer, input order) then n (inner).
std::vector<Lemma43Row> lemma43_table(const SuperchaosVector& f, std::span<const int> n_list,
                                      std::span<const double> delta_list, const SimConfig& cfg);

inline constexpr std::string_view kLemma43Header =
    "n,delta,m,samples,estimate,stderr,mass,mass_stderr,seed";

void write_lemma43_csv(std::ostream& out, std::span<const Lemma43Row> rows);
/// Reads the CSV back; normalized fields are recomputed from estimate/mass
/// (normalized_stderr and u_delta are not stored and come back as 0).
std::vector<Lemma43Row> read_lemma43_csv(std::istream& in);

/// A_chi: g -> g chi in the time argument.
SuperchaosVector op_A(const TimeWeight& chi, const SuperchaosVector& f);

/// Function on finite subsets of (0, 1), given as the sorted minimizer times.
using SetFunction = std::function<double(std::span<const double> times)>;

/// phi(C) = 1 if C does not meet (s, t), else 0.
SetFunction avoids_interval(double s, double t);

/// Chaos expansion truncated at a finite order. A term of order n carries
/// a symmetric coefficient on n-element sets of minima positions.
class TruncatedChaos {
public:
    using Coefficient = std::function<double(std::span<const std::size_t> positions,
                                             const WarrenPath& path)>;
    struct Term {
        int order;
        Coefficient coefficient;
    };

    TruncatedChaos& add_term(int order, Coefficient coefficient);
    TruncatedChaos& add_constant(double c);
    TruncatedChaos& add_first(const SuperchaosVector& f);
    /// Symmetrized w_a(s) w_b(t) + w_a(t) w_b(s) over pairs of minima.
    TruncatedChaos& add_pair(TimeWeight first, TimeWeight second);

    std::span<const Term> terms() const { return terms_; }
    int max_order() const;

private:
    std::vector<Term> terms_;
};

/// E_phi F: every term's coefficient multiplied by phi of its minimizer set.
TruncatedChaos apply_E(const SetFunction& phi, const TruncatedChaos& chaos);

/// F(omega) with sign products; throws std::invalid_argument for orders above n_max.
double evaluate(const TruncatedChaos& chaos, const WarrenPath& path, int n_max = 2);

/// (E_phi F)(omega).
double op_E(const SetFunction& phi, const TruncatedChaos& chaos, const WarrenPath& path,
            int n_max = 2);

} // namespace ccrlab::warren
