// mudr: command-line front end for the joint radar-communications rate bounds.
//
//   mudr region   --scenario table2.json [--alpha-points 400] [--out DIR]
//   mudr pentagon --snr1-db 0 --snr2-db 0 [--out DIR]
//   mudr validate --experiment crb|residual|gamma [--scenario F] [--trials N] [--seed N] [--out DIR]
//   mudr sweep    --scenario F --vary FIELD --values 1e2,1e3 [--alpha-points N] [--out DIR]
//
// Exit codes: 0 ok, 1 validation check failed, 2 usage/input error, 3 I/O error.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mudr/emit.hpp"
#include "mudr/mudr.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* tool_version = "0.1.0";

enum ExitCode : int { ok = 0, check_failed = 1, usage_error = 2, io_error = 3 };

struct Outputs {
    fs::path dir;
    std::vector<std::string> files;

    void write(const std::string& name, std::string_view content) {
        mudr::emit::atomic_write(dir / name, content);
        files.push_back(name);
    }
};

void write_manifest(Outputs& out, const std::string& command, const std::string& scenario_path,
                    const ordered_json& parameters, std::optional<std::uint64_t> seed) {
    ordered_json m;
    m["command"] = command;
    m["scenario_path"] = scenario_path;
    m["parameters"] = parameters;
    m["outputs"] = out.files;
    m["tool_version"] = tool_version;
    m["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
    mudr::emit::atomic_write(out.dir / "manifest.json", m.dump(2) + "\n");
}

const mudr::emit::PlotStyle region_style{"Estimation rate vs communications rate",
                                         "Estimation rate R_est (bits/s)",
                                         "Communications rate R_com (bits/s)"};

int cmd_region(const std::string& scenario_path, std::size_t alpha_points, const fs::path& out_dir) {
    const auto lb = mudr::derive_link_budget(mudr::load_scenario(scenario_path));
    const auto grid = mudr::default_alpha_grid(alpha_points);
    const auto region = mudr::compute_region(lb, grid);

    mudr::emit::ensure_directory(out_dir);
    Outputs out{out_dir, {}};
    out.write("region.csv", mudr::emit::region_csv(region));
    out.write("region.svg", mudr::emit::svg_plot(region.curves, region_style));
    ordered_json params;
    params["alpha_points"] = alpha_points;
    write_manifest(out, "region", scenario_path, params, std::nullopt);

    std::cout << "outer comms rate  " << mudr::emit::format_double(mudr::comms_outer_rate(lb)) << " bits/s\n"
              << "sic comms rate    " << mudr::emit::format_double(mudr::sic_comms_rate(lb)) << " bits/s\n"
              << "outer est rate    " << mudr::emit::format_double(mudr::est_outer_rate(lb)) << " bits/s\n"
              << "wrote " << (out_dir / "region.csv").string() << "\n";
    return ok;
}

int cmd_pentagon(double snr1_db, double snr2_db, const fs::path& out_dir) {
    const double snr1 = mudr::db_to_linear(snr1_db);
    const double snr2 = mudr::db_to_linear(snr2_db);
    const auto p = mudr::ma_pentagon(snr1, snr2);

    // Constraint lines drawn across the plotted extent.
    const double r1_ext = p.sum_max;
    const double r2_ext = p.sum_max;
    std::vector<mudr::RateCurve> curves{
        {"r1_bound", {{p.r1_max, 0.0}, {p.r1_max, r2_ext}}},
        {"r2_bound", {{0.0, p.r2_max}, {r1_ext, p.r2_max}}},
        {"sum_bound", {{0.0, p.sum_max}, {p.sum_max, 0.0}}},
        {"region",
         {{0.0, 0.0}, {0.0, p.r2_max}, {p.vertex_a.r1, p.vertex_a.r2}, {p.vertex_b.r1, p.vertex_b.r2},
          {p.r1_max, 0.0}, {0.0, 0.0}}},
    };

    using mudr::emit::format_double;
    std::ostringstream csv;
    csv << "label,r1,r2\n";
    csv << "vertex_a," << format_double(p.vertex_a.r1) << ',' << format_double(p.vertex_a.r2) << '\n';
    csv << "vertex_b," << format_double(p.vertex_b.r1) << ',' << format_double(p.vertex_b.r2) << '\n';
    for (const auto& c : curves) {
        for (const auto& pt : c.points) {
            csv << c.label << ',' << format_double(pt.r_est) << ',' << format_double(pt.r_com) << '\n';
        }
    }

    mudr::emit::ensure_directory(out_dir);
    Outputs out{out_dir, {}};
    out.write("pentagon.csv", csv.str());
    out.write("pentagon.svg",
              mudr::emit::svg_plot(curves, {"Multiple-access rate region", "R1 (bits/use)", "R2 (bits/use)"}));
    ordered_json params;
    params["snr1_db"] = snr1_db;
    params["snr2_db"] = snr2_db;
    write_manifest(out, "pentagon", "", params, std::nullopt);

    std::cout << "vertex_a (" << format_double(p.vertex_a.r1) << ", " << format_double(p.vertex_a.r2) << ")\n"
              << "vertex_b (" << format_double(p.vertex_b.r1) << ", " << format_double(p.vertex_b.r2) << ")\n";
    return ok;
}

int cmd_validate(const std::string& scenario_path, const std::string& experiment, std::uint64_t trials,
                 std::uint64_t seed, const fs::path& out_dir) {
    const mudr::mc::WaveformSpec spec;
    mudr::mc::McReport report;
    if (experiment == "gamma") {
        report = mudr::mc::gamma_experiment(spec, trials, seed);
    } else {
        if (scenario_path.empty()) {
            throw mudr::PreconditionError("--scenario is required for the " + experiment + " experiment");
        }
        const auto lb = mudr::derive_link_budget(mudr::load_scenario(scenario_path));
        report = experiment == "crb" ? mudr::mc::crb_experiment(lb, spec, trials, seed)
                                     : mudr::mc::residual_experiment(lb, spec, trials, seed);
    }

    mudr::emit::ensure_directory(out_dir);
    Outputs out{out_dir, {}};
    const std::string name = "validate_" + experiment + ".json";
    out.write(name, mudr::mc::to_json(report).dump(2) + "\n");
    ordered_json params;
    params["experiment"] = experiment;
    params["trials"] = trials;
    params["oversample"] = spec.oversample;
    params["n_samples"] = spec.n_samples;
    write_manifest(out, "validate", scenario_path, params, seed);

    using mudr::emit::format_double;
    std::cout << experiment << ": empirical " << format_double(report.empirical) << ", analytic "
              << format_double(report.analytic) << ", rel_error " << format_double(report.rel_error)
              << " (tolerance " << format_double(report.tolerance) << ") -> " << (report.pass ? "PASS" : "FAIL")
              << "\n";
    return report.pass ? ok : check_failed;
}

using ScenarioSetter = std::function<void(mudr::Scenario&, double)>;

const std::map<std::string, ScenarioSetter>& sweep_fields() {
    static const std::map<std::string, ScenarioSetter> fields = {
        {"bandwidth_hz", [](mudr::Scenario& s, double v) { s.bandwidth_hz = v; }},
        {"center_freq_hz", [](mudr::Scenario& s, double v) { s.center_freq_hz = v; }},
        {"temperature_k", [](mudr::Scenario& s, double v) { s.temperature_k = v; }},
        {"comms_range_m", [](mudr::Scenario& s, double v) { s.comms_range_m = v; }},
        {"comms_power_w", [](mudr::Scenario& s, double v) { s.comms_power_w = v; }},
        {"comms_antenna_gain_lin", [](mudr::Scenario& s, double v) { s.comms_antenna_gain_lin = v; }},
        {"radar_power_w", [](mudr::Scenario& s, double v) { s.radar_power_w = v; }},
        {"radar_antenna_gain_lin", [](mudr::Scenario& s, double v) { s.radar_antenna_gain_lin = v; }},
        {"time_bandwidth", [](mudr::Scenario& s, double v) { s.time_bandwidth = v; }},
        {"duty_factor", [](mudr::Scenario& s, double v) { s.duty_factor = v; }},
        {"range_m", [](mudr::Scenario& s, double v) { for (auto& t : s.targets) t.range_m = v; }},
        {"cross_section_m2", [](mudr::Scenario& s, double v) { for (auto& t : s.targets) t.cross_section_m2 = v; }},
        {"process_range_std_m",
         [](mudr::Scenario& s, double v) { for (auto& t : s.targets) t.process_range_std_m = v; }},
    };
    return fields;
}

std::vector<double> parse_values(const std::string& list) {
    std::vector<double> values;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw mudr::PreconditionError("--values: cannot parse '" + item + "' as a number");
        }
        while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) {
            ++used;
        }
        if (used != item.size()) {
            throw mudr::PreconditionError("--values: cannot parse '" + item + "' as a number");
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw mudr::PreconditionError("--values: empty list");
    }
    return values;
}

int cmd_sweep(const std::string& scenario_path, const std::string& field, const std::string& values_list,
              std::size_t alpha_points, const fs::path& out_dir) {
    const auto& fields = sweep_fields();
    const auto setter = fields.find(field);
    if (setter == fields.end()) {
        std::ostringstream msg;
        msg << "unknown sweep field '" << field << "'; valid fields:";
        for (const auto& [name, _] : fields) {
            msg << ' ' << name;
        }
        throw mudr::PreconditionError(msg.str());
    }
    const auto values = parse_values(values_list);
    const auto base = mudr::load_scenario(scenario_path);
    const auto grid = mudr::default_alpha_grid(alpha_points);

    // Validate every value before writing anything.
    std::vector<mudr::LinkBudget> budgets;
    for (double v : values) {
        auto s = base;
        setter->second(s, v);
        budgets.push_back(mudr::derive_link_budget(s));
    }

    mudr::emit::ensure_directory(out_dir);
    Outputs out{out_dir, {}};
    using mudr::emit::format_double;
    std::ostringstream summary;
    summary << "value,est_outer_rate_bps,comms_outer_rate_bps,sic_comms_rate_bps\n";
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& lb = budgets[i];
        const auto region = mudr::compute_region(lb, grid);
        out.write("region_" + field + "_" + std::to_string(i) + ".csv", mudr::emit::region_csv(region));
        summary << format_double(values[i]) << ',' << format_double(mudr::est_outer_rate(lb)) << ','
                << format_double(mudr::comms_outer_rate(lb)) << ',' << format_double(mudr::sic_comms_rate(lb))
                << '\n';
    }
    out.write("sweep_summary.csv", summary.str());
    ordered_json params;
    params["vary"] = field;
    params["values"] = values;
    params["alpha_points"] = alpha_points;
    write_manifest(out, "sweep", scenario_path, params, std::nullopt);
    std::cout << summary.str();
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint radar-communications rate bounds and Monte Carlo checks", "mudr"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    const char* env_out = std::getenv("MUDR_OUT");
    std::string out_dir = env_out != nullptr && *env_out != '\0' ? env_out : ".";
    std::string scenario;
    std::size_t alpha_points = 400;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 0;
    double snr1_db = 0.0;
    double snr2_db = 0.0;
    std::string experiment;
    std::string vary;
    std::string values;

    auto* region = app.add_subcommand("region", "Rate-region curves (CSV + SVG)");
    region->add_option("--scenario", scenario, "Scenario JSON file")->required();
    region->add_option("--alpha-points", alpha_points, "Water-filling alpha grid size")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
    region->add_option("--out", out_dir, "Output directory (default $MUDR_OUT or .)");

    auto* pentagon = app.add_subcommand("pentagon", "Two-user multiple-access pentagon");
    pentagon->add_option("--snr1-db", snr1_db, "User 1 SNR (dB)")->required();
    pentagon->add_option("--snr2-db", snr2_db, "User 2 SNR (dB)")->required();
    pentagon->add_option("--out", out_dir, "Output directory (default $MUDR_OUT or .)");

    auto* validate = app.add_subcommand("validate", "Monte Carlo check of an analytic variance");
    validate->add_option("--scenario", scenario, "Scenario JSON file (not needed for gamma)");
    validate->add_option("--experiment", experiment, "crb, residual or gamma")
        ->required()
        ->check(CLI::IsMember({"crb", "residual", "gamma"}));
    validate->add_option("--trials", trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    auto* seed_opt = validate->add_option("--seed", seed, "RNG seed (default 0)");
    validate->add_option("--out", out_dir, "Output directory (default $MUDR_OUT or .)");

    auto* sweep = app.add_subcommand("sweep", "Parameter sweep of the rate region");
    sweep->add_option("--scenario", scenario, "Scenario JSON file")->required();
    sweep->add_option("--vary", vary, "Scenario field to vary")->required();
    sweep->add_option("--values", values, "Comma-separated values")->required();
    sweep->add_option("--alpha-points", alpha_points, "Water-filling alpha grid size")
        ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
    sweep->add_option("--out", out_dir, "Output directory (default $MUDR_OUT or .)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage_error;
    }

    try {
        if (region->parsed()) {
            return cmd_region(scenario, alpha_points, out_dir);
        }
        if (pentagon->parsed()) {
            if (!std::isfinite(snr1_db) || !std::isfinite(snr2_db)) {
                throw mudr::PreconditionError("SNR values must be finite");
            }
            return cmd_pentagon(snr1_db, snr2_db, out_dir);
        }
        if (validate->parsed()) {
            if (seed_opt->count() == 0) {
                std::cerr << "no --seed given, using seed 0\n";
            }
            return cmd_validate(scenario, experiment, trials, seed, out_dir);
        }
        if (sweep->parsed()) {
            return cmd_sweep(scenario, vary, values, alpha_points, out_dir);
        }
    } catch (const mudr::emit::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return io_error;
    } catch (const mudr::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage_error;
    }
    return usage_error;
}
