#pragma once

// Finite-dimensional models of the canonical pair Q_t, P_t with
// [P_t, Q_t] = -2ti, and of the zero-sum triple P + Q + R = 0 with
// pairwise commutators -i, together with the sign-function calculus used
// to bound <sgn Q_t> sums over rotated vectors.
//
// Two discretizations are provided:
//   oscillator  truncated Fock basis, q = (a + a^H)/sqrt(2), p = -i(a - a^H)/sqrt(2)
//   grid        N uniform points on [-L, L], q diagonal, p = -i D with D the
//               sinc (band-limited) differentiation matrix
// They converge from different directions; their agreement is the
// convergence certificate for the sign-sum norm.

#include "ccrlab/hermitian.hpp"

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ccrlab::ccr {

using Complex = std::complex<double>;

enum class Scheme { oscillator, grid };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view text);

/// Default grid half-width in natural units, sqrt(pi N / 2): the position
/// cut-off L equals the momentum cut-off pi / h.
double default_half_width(int n);

struct CcrTriple {
    Scheme scheme;
    int n;
    double t;
    double half_width;  // grid scheme only, natural units; 0 for the oscillator
    HermitianMatrix q;
    HermitianMatrix p;
    HermitianMatrix r;  // always -(p + q)
};

/// Q_t = sqrt(2t) q, P_t = sqrt(2t) p in the chosen scheme.
CcrTriple build_pair(Scheme scheme, int n, double t, std::optional<double> half_width = {});

/// Position/momentum matrices in natural units ([p, q] = -i up to truncation).
std::pair<HermitianMatrix, HermitianMatrix> canonical_pair(Scheme scheme, int n,
                                                           std::optional<double> half_width = {});

/// The 2pi/3-symmetric triple Q = a q, P = a (q cos 2pi/3 + p sin 2pi/3),
/// R = -(P + Q), with a^2 = 2 / sqrt(3) so that [P, Q] = -i.
CcrTriple symmetric_triple(int n, Scheme scheme = Scheme::oscillator,
                           std::optional<double> half_width = {});

/// V sign(Lambda) V^H with sign(0) := 0.
HermitianMatrix sgn_op(const HermitianMatrix& a);

/// ||sgn P + sgn Q + sgn R|| for symmetric_triple(n, scheme).
double sign_sum_norm(Scheme scheme, int n);

/// ||sgn P + sgn Q + sgn R|| for an arbitrary triple.
double sign_sum_norm(const CcrTriple& triple);

/// ||sgn Q_t + sgn(Q_t cos a + P_t sin a) + sgn(Q_t cos a - P_t sin a)||
/// for a in (pi/2, pi].
double lemma23_value(double alpha, double t, int n, Scheme scheme = Scheme::oscillator);

/// Poisson tail e^{-x} sum_{k >= n} x^k / k!, x = |zeta|^2 t.
double coherent_tail_mass(Complex zeta, double t, int n);

/// Coefficients beta^k / sqrt(k!), k < n, beta = zeta sqrt(t): the image of
/// Exp(zeta chi_(0,t)) in the oscillator basis. Unnormalized, so the squared
/// norm is e^{|zeta|^2 t}. Throws when the truncated tail exceeds 1e-10.
Eigen::VectorXcd coherent_vector(Complex zeta, double t, int n);

/// <sgn(A) v, v>, not normalized by ||v||^2.
double sgn_expectation(const HermitianMatrix& a, const Eigen::VectorXcd& v);

/// <S v, v> for an already computed S.
double quadratic_form(const HermitianMatrix& s, const Eigen::VectorXcd& v);

struct NormStudyRow {
    Scheme scheme;
    int n;
    double alpha;
    double t;
    double value;
    double seconds;
};

/// lemma23_value over the (scheme, N, alpha) grid in input order. Timing is
/// recorded only when record_timing is set; otherwise seconds = 0.
std::vector<NormStudyRow> convergence_study(std::span<const Scheme> schemes,
                                            std::span<const int> dims,
                                            std::span<const double> alphas, double t = 0.5,
                                            bool record_timing = false);

/// |value_k - value_{k-1}| along increasing N for one (scheme, alpha) slice;
/// entry 0 is NaN.
std::vector<double> successive_differences(std::span<const NormStudyRow> rows, Scheme scheme,
                                           double alpha);

inline constexpr std::string_view kNormStudyHeader = "scheme,N,alpha,t,value,seconds";

void write_norm_study_csv(std::ostream& out, std::span<const NormStudyRow> rows);
std::vector<NormStudyRow> read_norm_study_csv(std::istream& in);

} // namespace ccrlab::ccr
