// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance                 all criteria
//   acceptance --criterion 8   a single criterion
//
// Exit status is 0 only when every selected criterion passes.

#include "ccrlab/ccr_matrix.hpp"
#include "ccrlab/cli.hpp"
#include "ccrlab/csv.hpp"
#include "ccrlab/gaussian_algebra.hpp"
#include "ccrlab/obstruction.hpp"
#include "ccrlab/rng.hpp"
#include "ccrlab/warren_sim.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

namespace {

using namespace ccrlab;
using ccr::Scheme;

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPiOverThree = 2.0 * kPi / 3.0;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string num(double x)
{
    return format_number(x);
}

std::string fixed(double x, int digits = 4)
{
    std::ostringstream ss;
    ss.precision(digits);
    ss << std::fixed << x;
    return ss.str();
}

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Table configuration shared by criteria 8 and 9.
const std::vector<int> kNList{64, 256, 1024, 4096, 8192};
const std::vector<double> kDeltaList{1.0 / 64, 1.0 / 256, 1.0 / 1024, 1.0 / 4096};
const warren::SimConfig kLemmaConfig{1 << 14, 10000, 1, 1};
constexpr double kBasinRadius = 1.0 / 128;

std::vector<warren::Lemma43Row> lemma43_rows()
{
    static const auto rows = [] {
        const auto f = warren::SuperchaosVector::basin_resolved(warren::TimeWeight::indicator(0.0, 0.5),
                                                                kBasinRadius);
        return warren::lemma43_table(f, kNList, kDeltaList, kLemmaConfig);
    }();
    return rows;
}

struct NormPair {
    double oscillator;
    double grid;
    double seconds;
};

NormPair norms_at_1024()
{
    static const NormPair pair = [] {
        const auto start = std::chrono::steady_clock::now();
        const double osc = ccr::sign_sum_norm(Scheme::oscillator, 1024);
        const double grid = ccr::sign_sum_norm(Scheme::grid, 1024);
        return NormPair{osc, grid, seconds_since(start)};
    }();
    return pair;
}

Outcome criterion_1()
{
    const auto n = norms_at_1024();
    const bool osc_in = n.oscillator >= 2.0 && n.oscillator <= 2.2;
    const bool grid_in = n.grid >= 2.0 && n.grid <= 2.2;
    const double gap = std::abs(n.oscillator - n.grid);
    const bool agree = gap <= 0.02;
    const bool fast = n.seconds < 120.0;
    return {osc_in && grid_in && agree && fast,
            "sign_sum_norm N=1024 oscillator " + fixed(n.oscillator, 6) + (osc_in ? " in" : " NOT in") +
                " [2.0, 2.2], grid " + fixed(n.grid, 6) + (grid_in ? " in" : " NOT in") +
                " [2.0, 2.2]; scheme gap " + num(gap) + (agree ? " <= 0.02" : " > 0.02") +
                "; runtime " + fixed(n.seconds, 1) + " s" + (fast ? " < 120 s" : " >= 120 s")};
}

Outcome criterion_2()
{
    const std::vector<double> alphas{0.55 * kPi, kTwoPiOverThree, 0.8 * kPi, 0.95 * kPi, kPi};
    double worst = 0.0;
    std::string where;
    int count = 0;
    auto record = [&](double v, const std::string& label) {
        ++count;
        if (v > worst) {
            worst = v;
            where = label;
        }
    };
    for (Scheme s : {Scheme::oscillator, Scheme::grid}) {
        const std::string name(ccr::to_string(s));
        for (int n : {64, 128, 256, 512, 1024}) {
            record(ccr::sign_sum_norm(s, n), "sign_sum_norm " + name + " N=" + std::to_string(n));
            for (double a : alphas)
                record(ccr::lemma23_value(a, 0.5, n, s),
                       "lemma23 " + name + " N=" + std::to_string(n) + " alpha=" + fixed(a, 4));
        }
        record(ccr::sign_sum_norm(s, 2048), "sign_sum_norm " + name + " N=2048");
    }
    return {worst < 3.0, std::to_string(count) + " values over N in {64..2048}, alpha in {0.55pi, 2pi/3, "
                         "0.8pi, 0.95pi, pi}; max " + fixed(worst, 6) + " (" + where + ")" +
                             (worst < 3.0 ? " < 3" : " >= 3")};
}

Outcome criterion_3()
{
    double worst = 0.0;
    int count = 0;
    for (double t : {0.25, 0.5, 2.0}) {
        for (int n : {64, 256, 1024}) {
            worst = std::max(worst, ccr::lemma23_value(kPi, t, n, Scheme::oscillator));
            ++count;
        }
        worst = std::max(worst, ccr::lemma23_value(kPi, t, 256, Scheme::grid));
        ++count;
    }
    const bool pass = worst <= 1.0 + 1e-8;
    return {pass, "lemma23_value(pi, t, N) over " + std::to_string(count) +
                      " (t, N, scheme) cells: max " + num(worst) + (pass ? " <= " : " > ") + "1 + 1e-8"};
}

Outcome criterion_4()
{
    rng::Stream draws(4, 0);
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const auto v = gaussian::random_span(4, i, 1.0, 8, true);
        const double lambda = -3.0 + 6.0 * draws.uniform();
        const double mu = -3.0 + 6.0 * draws.uniform();
        worst = std::max(worst, gaussian::ccr_phase_residual(lambda, mu, v));
    }
    const bool pass = worst <= 1e-9;
    return {pass, "ccr_phase_residual over 100 spans of <= 8 units, lambda, mu in [-3, 3]: max " +
                      num(worst) + (pass ? " <= 1e-9" : " > 1e-9")};
}

Outcome criterion_5()
{
    const auto r = gaussian::relation_suite(5, 100);
    const std::vector<std::pair<std::string, double>> parts{
        {"rotation composition", r.rotation_composition},
        {"rotation conjugation", r.rotation_conjugation},
        {"imaginary shift composition", r.imaginary_shift_composition},
        {"gram preservation", r.gram_preservation},
        {"composition unitarity", r.composition_unitarity},
        {"closed vs piecewise", r.closed_vs_piecewise},
    };
    bool pass = true;
    std::string detail = "relation_suite 100 trials:";
    for (const auto& [name, value] : parts) {
        pass = pass && value <= 1e-9;
        detail += " " + name + " " + num(value) + ";";
    }
    detail += pass ? " all <= 1e-9" : " some > 1e-9";
    return {pass, detail};
}

Outcome criterion_6()
{
    const double t = 0.5;
    const int n = 512;
    const auto pair = ccr::build_pair(Scheme::oscillator, n, t);
    const auto s = ccr::sgn_op(pair.q);
    const warren::SimConfig cfg{256, 100000, 6, 1};
    bool pass = true;
    std::string detail;
    for (double zeta : {0.0, 0.5, 1.0}) {
        const double oracle = 2.0 * normal_cdf(2.0 * zeta * std::sqrt(t)) - 1.0;
        auto v = ccr::coherent_vector(zeta, t, n);
        v.normalize();
        const double matrix = ccr::quadratic_form(s, v);
        const auto f = warren::SuperchaosVector::exponential_probe(warren::TimeWeight::indicator(0.0, 0.5),
                                                                   0.5, 1.0, zeta);
        const auto mc = warren::normalized_quad_form(warren::half_time_sign_probe(), f, cfg);
        const bool matrix_ok = std::abs(matrix - oracle) <= 1e-3;
        const double z = mc.stderr_ > 0.0 ? std::abs(mc.ratio - matrix) / mc.stderr_ : 0.0;
        const bool mc_ok = std::abs(mc.ratio - matrix) <= 4.0 * mc.stderr_;
        pass = pass && matrix_ok && mc_ok;
        detail += " zeta=" + fixed(zeta, 1) + ": oracle " + fixed(oracle, 6) + ", matrix " + fixed(matrix, 6) +
                  " (|diff| " + num(std::abs(matrix - oracle)) + (matrix_ok ? " <= 1e-3" : " > 1e-3") +
                  "), MC " + fixed(mc.ratio, 6) + " +- " + num(mc.stderr_) + " (" + fixed(z, 2) +
                  (mc_ok ? " stderr <= 4" : " stderr > 4") + ");";
    }
    return {pass, "coherent <sgn Q_0.5>, N=512, MC 10^5 paths:" + detail};
}

Outcome criterion_7()
{
    const warren::SimConfig cfg{1 << 14, 10000, 7, 1};
    const auto one = warren::constant_psi(1.0);
    const auto w = warren::TimeWeight::indicator(0.0, 0.5);
    bool pass = true;
    std::string detail;
    for (const auto& f : {warren::SuperchaosVector::weighted(w),
                          warren::SuperchaosVector::basin_resolved(w, kBasinRadius)}) {
        std::int64_t mismatches = 0;
        std::vector<double> mass(cfg.samples);
        warren::for_each_replica(cfg, [&](std::int64_t r, const warren::WarrenPath& path) {
            const double integrand = warren::quad_form_integrand(one, f, path);
            const double norm = warren::chaos_norm_integrand(f, path);
            if (integrand != norm)
                ++mismatches;
            mass[r] = integrand;
        });
        const auto est = warren::summarize(mass, cfg.seed);
        const double rel = est.stderr_ / est.mean;
        const bool ok = mismatches == 0 && rel <= 0.02;
        pass = pass && ok;
        detail += " " + std::string(warren::to_string(f.kind())) + ": " + std::to_string(mismatches) +
                  " bitwise mismatches, mass " + num(est.mean) + " stderr/mean " + num(rel) +
                  (rel <= 0.02 ? " <= 2%;" : " > 2%;");
    }
    return {pass, "psi = 1, m=2^14, 10^4 paths:" + detail};
}

Outcome criterion_8()
{
    const auto rows = lemma43_rows();
    bool bounded = true;
    double worst_excess = -1e300;
    for (const auto& r : rows) {
        const double excess = (r.normalized - 1.0) / r.normalized_stderr;
        worst_excess = std::max(worst_excess, excess);
        bounded = bounded && r.normalized <= 1.0 + 3.0 * r.normalized_stderr;
    }
    bool monotone = true;
    double worst_drop = -1e300;
    for (std::size_t d = 0; d < kDeltaList.size(); ++d) {
        for (std::size_t i = 0; i + 1 < kNList.size(); ++i) {
            const auto& a = rows[d * kNList.size() + i];
            const auto& b = rows[d * kNList.size() + i + 1];
            const double se = std::hypot(a.normalized_stderr, b.normalized_stderr);
            worst_drop = std::max(worst_drop, (a.normalized - b.normalized) / se);
            monotone = monotone && b.normalized >= a.normalized - 3.0 * se;
        }
    }
    const warren::Lemma43Row* corner = nullptr;
    const warren::Lemma43Row* fine = nullptr;
    for (const auto& r : rows) {
        if (r.n == 64 && r.delta == 1.0 / 4096)
            corner = &r;
        if (r.n == 8192 && r.delta == 1.0 / 4096)
            fine = &r;
    }
    const bool threshold = corner->normalized >= 0.8;
    return {bounded && monotone && threshold,
            "WB profile r=2^-7, w=chi_(0,0.5), m=2^14, 10^4 paths, 20 (n, delta) cells: "
            "normalized <= 1 + 3 stderr " + std::string(bounded ? "holds" : "VIOLATED") +
                " (max (x-1)/stderr " + fixed(worst_excess, 2) + "); non-decreasing in n within 3 stderr " +
                (monotone ? "holds" : "VIOLATED") + " (max drop " + fixed(worst_drop, 2) +
                " stderr); n=64 delta=2^-12 normalized " + fixed(corner->normalized, 4) + " +- " +
                fixed(corner->normalized_stderr, 4) + (threshold ? " >= 0.8" : " < 0.8") +
                " (n=8192 delta=2^-12: " + fixed(fine->normalized, 4) + ")"};
}

Outcome criterion_9()
{
    const auto n = norms_at_1024();
    const std::vector<ccr::NormStudyRow> norm_rows{
        {Scheme::oscillator, 1024, kTwoPiOverThree, 0.5, n.oscillator, 0.0},
        {Scheme::grid, 1024, kTwoPiOverThree, 0.5, n.grid, 0.0},
    };
    const auto rows = lemma43_rows();
    const auto report = obstruction_report(select_norm(norm_rows), rows);
    const bool pass = report.margin >= 0.3;
    return {pass, "norm " + fixed(report.norm_value, 6) + " (" + std::string(ccr::to_string(report.scheme)) +
                      ", N=1024), m_hat " + fixed(report.m_hat, 4) + " (n=" + std::to_string(report.n) +
                      ", delta=" + num(report.delta) + "), margin 3 m_hat - norm = " +
                      fixed(report.margin, 4) + (pass ? " >= 0.3" : " < 0.3")};
}

Outcome criterion_10()
{
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "ccrlab_acceptance_repro";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto p = [&](const std::string& name) { return (dir / name).string(); };
    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    const std::vector<std::pair<std::string, std::vector<std::string>>> runs{
        {"norm_study.csv", {"norm-study", "--scheme", "oscillator,grid", "--dims", "64,128",
                            "--alpha", "2.0944,2.8", "--seed", "7", "--out", p("norm_study.csv")}},
        {"norm_study.json", {"norm-study", "--dims", "64", "--format", "json", "--out", p("norm_study.json")}},
        {"weyl_suite.json", {"weyl-suite", "--seed", "1", "--out", p("weyl_suite.json")}},
        {"weyl_suite.csv", {"weyl-suite", "--seed", "2", "--format", "csv", "--out", p("weyl_suite.csv")}},
        {"warren_mass.csv", {"warren-mass", "--m", "4096", "--samples", "2000", "--seed", "3",
                             "--threads", "2", "--out", p("warren_mass.csv")}},
        {"lemma43.csv", {"lemma43", "--m", "4096", "--samples", "1000", "--n-list", "64,256,1024",
                         "--delta-list", "0.015625,0.00390625", "--seed", "4", "--threads", "2",
                         "--out", p("lemma43.csv")}},
        {"lemma43.json", {"lemma43", "--m", "4096", "--samples", "500", "--n-list", "64",
                          "--delta-list", "0.00390625", "--format", "json", "--out", p("lemma43.json")}},
        {"obstruction.json", {"obstruction", "--norm-from", p("norm_study.csv"), "--lemma43-from",
                              p("lemma43.csv"), "--out", p("obstruction.json")}},
    };

    bool pass = true;
    int identical = 0;
    std::string failures;
    for (const auto& [file, args] : runs) {
        std::ostringstream out, err;
        std::string first;
        for (int pass_index = 0; pass_index < 2; ++pass_index) {
            const int code = cli::run(args, out, err);
            if (code != 0) {
                pass = false;
                failures += " " + file + " exit " + std::to_string(code) + ";";
                break;
            }
            const std::string bytes = slurp(p(file));
            if (pass_index == 0) {
                first = bytes;
            } else if (bytes == first && !bytes.empty()) {
                ++identical;
            } else {
                pass = false;
                failures += " " + file + " differs;";
            }
        }
    }
    fs::remove_all(dir);
    return {pass, std::to_string(identical) + "/" + std::to_string(runs.size()) +
                      " artifacts byte-identical across two runs of all five subcommands" + failures};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance criteria runner"};
    int only = 0;
    app.add_option("--criterion", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
    CLI11_PARSE(app, argc, argv);

    const std::map<int, Outcome (*)()> criteria{
        {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4}, {5, criterion_5},
        {6, criterion_6}, {7, criterion_7}, {8, criterion_8}, {9, criterion_9}, {10, criterion_10},
    };

    bool all = true;
    for (const auto& [id, fn] : criteria) {
        if (only != 0 && id != only)
            continue;
        Outcome outcome{false, ""};
        try {
            outcome = fn();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        all = all && outcome.pass;
        std::cout << "criterion " << id << ": " << (outcome.pass ? "PASS" : "FAIL") << "  "
                  << outcome.detail << std::endl;
    }
    return all ? 0 : 1;
}
