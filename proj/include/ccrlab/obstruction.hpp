#pragma once

// Combines the sign-sum norm (3 - eps) with the normalized quadratic-form estimate m_hat
// into the non-extension margin 3 m_hat - (3 - eps).

#include "ccrlab/ccr_matrix.hpp"
#include "ccrlab/warren_sim.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

namespace ccrlab {

inline constexpr std::string_view kVersion = "0.1.0";

struct NormInput {
    double value = 0.0;
    ccr::Scheme scheme = ccr::Scheme::oscillator;
    int n = 0;
};

/// Rows with alpha within 1e-3 of 2pi/3 at the largest N; the largest value
/// across schemes. Throws std::invalid_argument when no row qualifies.
NormInput select_norm(std::span<const ccr::NormStudyRow> rows);

struct ObstructionReport {
    double norm_value = 0.0;
    ccr::Scheme scheme = ccr::Scheme::oscillator;
    int N = 0;
    double m_hat = 0.0;
    int n = 0;
    double delta = 0.0;
    int grid_m = 0;
    std::int64_t samples = 0;
    double margin = 0.0;
    std::uint64_t master_seed = 0;
};

/// m_hat = estimate / mass at the smallest delta, then the largest n among
/// those rows. f_mass overrides the row mass when positive.
ObstructionReport obstruction_report(const NormInput& norm,
                                     std::span<const warren::Lemma43Row> rows,
                                     double f_mass = 0.0);

/// Stable key order: norm_value, scheme, N, m_hat, n, delta, grid_m,
/// samples, margin, master_seed, versions.
void write_obstruction_json(std::ostream& out, const ObstructionReport& report);

} // namespace ccrlab
