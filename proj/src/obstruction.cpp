#include "ccrlab/obstruction.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ccrlab {

NormInput select_norm(std::span<const ccr::NormStudyRow> rows)
{
    const double target = 2.0 * std::numbers::pi / 3.0;
    int largest = 0;
    for (const auto& row : rows)
        if (std::abs(row.alpha - target) <= 1e-3)
            largest = std::max(largest, row.n);
    if (largest == 0)
        throw std::invalid_argument("norm study has no row with alpha = 2pi/3");
    NormInput best;
    bool found = false;
    for (const auto& row : rows) {
        if (row.n != largest || std::abs(row.alpha - target) > 1e-3)
            continue;
        if (!found || row.value > best.value)
            best = {row.value, row.scheme, row.n};
        found = true;
    }
    return best;
}

ObstructionReport obstruction_report(const NormInput& norm,
                                     std::span<const warren::Lemma43Row> rows, double f_mass)
{
    if (rows.empty())
        throw std::invalid_argument("obstruction report needs lemma43 rows");
    if (!std::isfinite(norm.value) || norm.n <= 0)
        throw std::invalid_argument("obstruction report needs a sign-sum norm");
    const warren::Lemma43Row* pick = &rows.front();
    for (const auto& row : rows)
        if (row.delta < pick->delta || (row.delta == pick->delta && row.n > pick->n))
            pick = &row;
    const double mass = f_mass > 0.0 ? f_mass : pick->mass;
    if (!(mass > 0.0))
        throw std::domain_error("obstruction report needs a positive mass");

    ObstructionReport r;
    r.norm_value = norm.value;
    r.scheme = norm.scheme;
    r.N = norm.n;
    r.m_hat = pick->estimate / mass;
    r.n = pick->n;
    r.delta = pick->delta;
    r.grid_m = pick->m;
    r.samples = pick->samples;
    r.margin = 3.0 * r.m_hat - norm.value;
    r.master_seed = pick->seed;
    return r;
}

void write_obstruction_json(std::ostream& out, const ObstructionReport& report)
{
    nlohmann::ordered_json j;
    j["norm_value"] = report.norm_value;
    j["scheme"] = std::string(ccr::to_string(report.scheme));
    j["N"] = report.N;
    j["m_hat"] = report.m_hat;
    j["n"] = report.n;
    j["delta"] = report.delta;
    j["grid_m"] = report.grid_m;
    j["samples"] = report.samples;
    j["margin"] = report.margin;
    j["master_seed"] = report.master_seed;
    j["versions"] = {{"ccrlab", std::string(kVersion)},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                   std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    out << j.dump(2) << '\n';
}

} // namespace ccrlab
