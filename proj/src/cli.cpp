#include "ccrlab/cli.hpp"

#include "ccrlab/csv.hpp"
#include "ccrlab/gaussian_algebra.hpp"
#include "ccrlab/obstruction.hpp"
#include "ccrlab/warren_sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ccrlab::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr double kWeylTolerance = 1e-9;

std::vector<double> alphas_of(const RunConfig& cfg)
{
    if (cfg.alphas.empty())
        return {2.0 * std::numbers::pi / 3.0};
    return cfg.alphas;
}

std::string default_format(const std::string& subcommand)
{
    return subcommand == "obstruction" || subcommand == "weyl-suite" ? "json" : "csv";
}

std::string format_of(const RunConfig& cfg)
{
    return cfg.format.empty() ? default_format(cfg.subcommand) : cfg.format;
}

std::string default_file(const RunConfig& cfg)
{
    std::string stem = cfg.subcommand;
    std::replace(stem.begin(), stem.end(), '-', '_');
    return stem + "." + format_of(cfg);
}

warren::SuperchaosVector make_profile(const RunConfig& cfg)
{
    const auto w = warren::TimeWeight::indicator(0.0, 0.5);
    if (cfg.profile == "W")
        return warren::SuperchaosVector::weighted(w);
    if (cfg.profile == "WB")
        return warren::SuperchaosVector::basin_resolved(w, cfg.basin);
    if (cfg.profile == "WS")
        return warren::SuperchaosVector::sign_probe(w, 0.5, 1.0);
    if (cfg.profile == "WE")
        return warren::SuperchaosVector::exponential_probe(w, 0.5, 1.0, cfg.zeta);
    throw std::invalid_argument("unknown profile '" + cfg.profile + "'");
}

warren::SimConfig sim_config(const RunConfig& cfg)
{
    return {cfg.m, cfg.samples, cfg.seed, cfg.threads};
}

json config_json(const RunConfig& cfg)
{
    json j;
    j["subcommand"] = cfg.subcommand;
    j["seed"] = cfg.seed;
    if (cfg.subcommand == "norm-study") {
        std::vector<std::string> schemes;
        for (auto s : cfg.schemes)
            schemes.emplace_back(ccr::to_string(s));
        j["schemes"] = schemes;
        j["dims"] = cfg.dims;
        j["alphas"] = alphas_of(cfg);
        j["t"] = cfg.t;
    } else if (cfg.subcommand == "weyl-suite") {
        j["trials"] = cfg.trials;
    } else {
        j["m"] = cfg.m;
        j["samples"] = cfg.samples;
        j["profile"] = cfg.profile;
        if (cfg.profile == "WB")
            j["basin"] = cfg.basin;
        if (cfg.profile == "WE")
            j["zeta"] = cfg.zeta;
        if (cfg.subcommand == "lemma43") {
            j["n_list"] = cfg.n_list;
            j["delta_list"] = cfg.delta_list;
        }
    }
    j["version"] = std::string(kVersion);
    return j;
}

template <class T>
std::vector<T> read_file(const std::string& path, std::vector<T> (*reader)(std::istream&))
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot read input '" + path + "'");
    return reader(in);
}

std::string run_norm_study(const RunConfig& cfg, std::ostream& out)
{
    const auto alphas = alphas_of(cfg);
    const auto rows = ccr::convergence_study(cfg.schemes, cfg.dims, alphas, cfg.t, cfg.record_timing);
    if (format_of(cfg) == "csv") {
        ccr::write_norm_study_csv(out, rows);
    } else {
        json j;
        j["config"] = config_json(cfg);
        j["rows"] = json::array();
        for (const auto& r : rows)
            j["rows"].push_back({{"scheme", std::string(ccr::to_string(r.scheme))},
                                 {"N", r.n},
                                 {"alpha", r.alpha},
                                 {"t", r.t},
                                 {"value", r.value},
                                 {"seconds", r.seconds}});
        out << j.dump(2) << '\n';
    }
    const auto& last = rows.back();
    return "norm-study: " + std::to_string(rows.size()) + " rows, max value " +
           format_number(std::max_element(rows.begin(), rows.end(),
                                          [](const auto& a, const auto& b) {
                                              return a.value < b.value;
                                          })->value) +
           ", last " + std::string(ccr::to_string(last.scheme)) + " N=" + std::to_string(last.n) +
           " value " + format_number(last.value);
}

std::string run_weyl_suite(const RunConfig& cfg, std::ostream& out, bool& ok)
{
    const auto report = gaussian::relation_suite(cfg.seed, cfg.trials);
    const std::vector<std::pair<std::string, double>> rows{
        {"rotation_composition", report.rotation_composition},
        {"rotation_conjugation", report.rotation_conjugation},
        {"imaginary_shift_composition", report.imaginary_shift_composition},
        {"real_shift_composition", report.real_shift_composition},
        {"ccr_phase", report.ccr_phase},
        {"gram_preservation", report.gram_preservation},
        {"composition_unitarity", report.composition_unitarity},
        {"closed_vs_piecewise", report.closed_vs_piecewise},
    };
    if (format_of(cfg) == "csv") {
        out << "relation,residual\n";
        for (const auto& [name, value] : rows)
            out << name << ',' << format_number(value) << '\n';
    } else {
        json j;
        j["config"] = config_json(cfg);
        json residuals;
        for (const auto& [name, value] : rows)
            residuals[name] = value;
        j["residuals"] = residuals;
        j["max_residual"] = report.max_residual();
        out << j.dump(2) << '\n';
    }
    ok = report.max_residual() <= kWeylTolerance;
    return "weyl-suite: max residual " + format_number(report.max_residual()) +
           (ok ? " <= 1e-9" : " > 1e-9");
}

std::string run_warren_mass(const RunConfig& cfg, std::ostream& out)
{
    const auto f = make_profile(cfg);
    const auto est = warren::quad_form_C(warren::constant_psi(1.0), f, sim_config(cfg));
    if (format_of(cfg) == "csv") {
        out << "profile,m,samples,mean,stderr,seed\n";
        out << cfg.profile << ',' << cfg.m << ',' << est.samples << ',' << format_number(est.mean)
            << ',' << format_number(est.stderr_) << ',' << est.seed << '\n';
    } else {
        json j;
        j["config"] = config_json(cfg);
        j["mean"] = est.mean;
        j["stderr"] = est.stderr_;
        out << j.dump(2) << '\n';
    }
    return "warren-mass: " + cfg.profile + " mass " + format_number(est.mean) + " +- " +
           format_number(est.stderr_);
}

std::string run_lemma43(const RunConfig& cfg, std::ostream& out)
{
    const auto f = make_profile(cfg);
    const auto rows = warren::lemma43_table(f, cfg.n_list, cfg.delta_list, sim_config(cfg));
    if (format_of(cfg) == "csv") {
        warren::write_lemma43_csv(out, rows);
    } else {
        json j;
        j["config"] = config_json(cfg);
        j["rows"] = json::array();
        for (const auto& r : rows)
            j["rows"].push_back({{"n", r.n},
                                 {"delta", r.delta},
                                 {"estimate", r.estimate},
                                 {"stderr", r.stderr_},
                                 {"mass", r.mass},
                                 {"mass_stderr", r.mass_stderr},
                                 {"u_delta", r.u_delta},
                                 {"u_delta_stderr", r.u_delta_stderr},
                                 {"normalized", r.normalized},
                                 {"normalized_stderr", r.normalized_stderr}});
        out << j.dump(2) << '\n';
    }
    const auto corner = obstruction_report({0.0, ccr::Scheme::oscillator, 1}, rows);
    return "lemma43: " + std::to_string(rows.size()) + " rows, normalized " +
           format_number(corner.m_hat) + " at n=" + std::to_string(corner.n) +
           " delta=" + format_number(corner.delta);
}

std::string run_obstruction(const RunConfig& cfg, std::ostream& out)
{
    const auto norm_rows = read_file(cfg.norm_from, &ccr::read_norm_study_csv);
    const auto lemma_rows = read_file(cfg.lemma43_from, &warren::read_lemma43_csv);
    const auto report = obstruction_report(select_norm(norm_rows), lemma_rows);
    write_obstruction_json(out, report);
    return "obstruction: margin " + format_number(report.margin) + " (norm " +
           format_number(report.norm_value) + ", m_hat " + format_number(report.m_hat) + ")";
}

void require(bool condition, const std::string& message)
{
    if (!condition)
        throw std::invalid_argument(message);
}

} // namespace

void validate(const RunConfig& cfg)
{
    static const std::vector<std::string> known{"norm-study", "weyl-suite", "warren-mass",
                                                "lemma43", "obstruction"};
    require(std::find(known.begin(), known.end(), cfg.subcommand) != known.end(),
            "unknown subcommand '" + cfg.subcommand + "'");
    const std::string fmt = format_of(cfg);
    require(fmt == "csv" || fmt == "json", "format must be csv or json");
    require(cfg.threads >= 1, "threads must be positive");

    if (cfg.subcommand == "norm-study") {
        require(!cfg.schemes.empty(), "scheme list must be nonempty");
        require(!cfg.dims.empty(), "dims must be nonempty");
        for (int n : cfg.dims)
            require(n >= 2, "every dimension must be at least 2");
        require(std::is_sorted(cfg.dims.begin(), cfg.dims.end()), "dims must be ascending");
        for (double a : alphas_of(cfg))
            require(a > std::numbers::pi / 2.0 && a <= std::numbers::pi,
                    "alpha must lie in (pi/2, pi]");
        require(cfg.t > 0.0, "t must be positive");
    } else if (cfg.subcommand == "weyl-suite") {
        require(cfg.trials >= 1, "trials must be positive");
    } else if (cfg.subcommand == "warren-mass" || cfg.subcommand == "lemma43") {
        warren::SimConfig sim = sim_config(cfg);
        sim.validate();
        const auto f = make_profile(cfg);
        f.check_alignment(cfg.m);
        if (cfg.subcommand == "lemma43") {
            require(!cfg.n_list.empty() && !cfg.delta_list.empty(),
                    "n and delta lists must be nonempty");
            for (int n : cfg.n_list)
                for (double d : cfg.delta_list)
                    warren::PsiSpec{n, d}.check(cfg.m);
        }
    } else {
        require(fmt == "json", "obstruction writes JSON only");
        require(!cfg.norm_from.empty(), "obstruction needs --norm-from");
        require(!cfg.lemma43_from.empty(), "obstruction needs --lemma43-from");
    }
}

std::string output_path(const RunConfig& cfg)
{
    if (!cfg.out.empty())
        return cfg.out;
    const char* dir = std::getenv("CCRLAB_OUT_DIR");
    const std::filesystem::path base = dir && *dir ? std::filesystem::path(dir) : ".";
    return (base / default_file(cfg)).string();
}

int dispatch(const RunConfig& cfg, std::ostream& summary, std::ostream& errors)
{
    std::ostringstream buffer;
    std::string line;
    bool ok = true;
    try {
        if (cfg.subcommand == "norm-study")
            line = run_norm_study(cfg, buffer);
        else if (cfg.subcommand == "weyl-suite")
            line = run_weyl_suite(cfg, buffer, ok);
        else if (cfg.subcommand == "warren-mass")
            line = run_warren_mass(cfg, buffer);
        else if (cfg.subcommand == "lemma43")
            line = run_lemma43(cfg, buffer);
        else if (cfg.subcommand == "obstruction")
            line = run_obstruction(cfg, buffer);
        else
            throw std::invalid_argument("unknown subcommand '" + cfg.subcommand + "'");
    } catch (const std::invalid_argument& e) {
        errors << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const std::exception& e) {
        errors << "error: " << e.what() << '\n';
        return kRuntimeFailure;
    }

    const std::string path = output_path(cfg);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    file << buffer.str();
    file.close();
    if (!file) {
        errors << "error: cannot write '" << path << "'\n";
        return kRuntimeFailure;
    }
    summary << line << " -> " << path << '\n';
    return ok ? kSuccess : kRuntimeFailure;
}

int run(const std::vector<std::string>& args, std::ostream& summary, std::ostream& errors)
{
    RunConfig cfg;
    std::vector<std::string> schemes{"oscillator"};

    CLI::App app{"Numerical laboratory for CCR sign operators and Warren's noise of splitting",
                 "ccrlab"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Flat key = value configuration file");
    app.add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    app.add_option("--scheme", schemes, "Discretization scheme(s)")
        ->delimiter(',')
        ->check(CLI::IsMember({"oscillator", "grid"}));
    app.add_option("--dims", cfg.dims, "Truncation dimensions N")->delimiter(',');
    app.add_option("--alpha", cfg.alphas, "Rotation angles in (pi/2, pi]")->delimiter(',');
    app.add_option("--t", cfg.t, "Time scale t")->capture_default_str();
    app.add_option("--m", cfg.m, "Grid size m")->capture_default_str();
    app.add_option("--samples", cfg.samples, "Monte Carlo replicas")->capture_default_str();
    app.add_option("--n-list", cfg.n_list, "Bucket counts n")->delimiter(',');
    app.add_option("--delta-list", cfg.delta_list, "Probe offsets delta")->delimiter(',');
    app.add_option("--profile", cfg.profile, "Coefficient profile")
        ->check(CLI::IsMember({"W", "WS", "WE", "WB"}))
        ->capture_default_str();
    app.add_option("--basin", cfg.basin, "Basin radius of the WB profile")->capture_default_str();
    app.add_option("--zeta", cfg.zeta, "Exponent of the WE profile")->capture_default_str();
    app.add_option("--trials", cfg.trials, "Relation-suite trials")->capture_default_str();
    app.add_option("--threads", cfg.threads, "Worker thread cap")->capture_default_str();
    app.add_flag("--record-timing", cfg.record_timing, "Write wall time into norm-study rows");
    app.add_option("--out", cfg.out, "Output path");
    app.add_option("--format", cfg.format, "Artifact format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--norm-from", cfg.norm_from, "norm-study CSV for obstruction");
    app.add_option("--lemma43-from", cfg.lemma43_from, "lemma43 CSV for obstruction");

    for (const char* name : {"norm-study", "weyl-suite", "warren-mass", "lemma43", "obstruction"})
        app.add_subcommand(name)->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostringstream out, err;
        const int code = app.exit(e, out, err);
        summary << out.str();
        errors << err.str();
        return code == 0 ? kSuccess : kValidationError;
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.schemes.clear();
    for (const auto& s : schemes)
        cfg.schemes.push_back(ccr::parse_scheme(s));

    try {
        validate(cfg);
    } catch (const std::exception& e) {
        errors << "error: " << e.what() << '\n';
        return kValidationError;
    }
    return dispatch(cfg, summary, errors);
}

} // namespace ccrlab::cli
