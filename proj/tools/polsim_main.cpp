// Scenario runner and data emitter for the polarization-squeezing simulator.
//
// Verbs:
//   polsim run <scenario>                 run a scenario file or bundled name
//   polsim poincare <scenario> --samples N --seed S [-o file]
//   polsim calibrate <csv>                shot-noise calibration fit
//   polsim examples --list | --show NAME
//
// Exit codes: 0 success, 1 validation failure, 2 runtime failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "polsim/calib.hpp"
#include "polsim/scenario.hpp"

namespace {

std::string load_scenario_text(const std::string& ref) {
    if (const std::string* builtin = polsim::scenario::builtin_scenario(ref))
        return *builtin;
    std::ifstream in(ref);
    if (!in)
        throw polsim::scenario::ValidationError(
            "no bundled scenario or readable file named '" + ref + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write: " + path);
    out << content;
}

int run_scenario(const std::string& ref, const std::string& out_prefix) {
    const polsim::scenario::Scenario sc =
        polsim::scenario::parse(load_scenario_text(ref));
    const polsim::scenario::RunResult res = polsim::scenario::run(sc);

    const std::string prefix = out_prefix.empty() ? sc.name : out_prefix;
    write_file(prefix + "_results.csv", res.results_csv);
    if (res.breakdown_csv)
        write_file(prefix + "_breakdown.csv", *res.breakdown_csv);
    if (res.phase_sweep_csv)
        write_file(prefix + "_phase_sweep.csv", *res.phase_sweep_csv);
    if (res.mixing_sweep_csv)
        write_file(prefix + "_mixing_sensitivity.csv", *res.mixing_sweep_csv);

    std::cout << res.summary;
    std::cout << "wrote " << prefix << "_results.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polarization-squeezing simulator"};
    app.require_subcommand(1);

    std::string scenario_ref, out_prefix, record_path, cloud_path = "poincare.csv";
    int samples = 10000;
    std::uint64_t seed = 0;
    bool list = false;
    std::string show_name;

    auto* run = app.add_subcommand("run", "run a scenario");
    run->add_option("scenario", scenario_ref, "scenario file or bundled name")
        ->required();
    run->add_option("-o,--output-prefix", out_prefix,
                    "prefix for output files (default: scenario name)");

    auto* poincare =
        app.add_subcommand("poincare", "export an uncertainty point cloud");
    poincare->add_option("scenario", scenario_ref, "scenario file or bundled name")
        ->required();
    poincare->add_option("--samples", samples, "number of points");
    poincare->add_option("--seed", seed, "random seed");
    poincare->add_option("-o,--output", cloud_path, "output file");

    auto* calibrate =
        app.add_subcommand("calibrate", "fit shot noise from a detector record");
    calibrate->add_option("csv", record_path, "calibration csv (dc,ac_power)")
        ->required();

    auto* examples = app.add_subcommand("examples", "bundled scenarios");
    examples->add_flag("--list", list, "list bundled scenario names");
    examples->add_option("--show", show_name, "print a bundled scenario");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return run_scenario(scenario_ref, out_prefix);
        if (poincare->parsed()) {
            const polsim::scenario::Scenario sc =
                polsim::scenario::parse(load_scenario_text(scenario_ref));
            write_file(cloud_path, polsim::scenario::poincare_export(
                                       sc.state, samples, seed));
            std::cout << "wrote " << cloud_path << "\n";
            return 0;
        }
        if (calibrate->parsed()) {
            const auto rec = polsim::calib::read_record_file(record_path);
            const auto fit = polsim::calib::fit_shot_noise(rec);
            std::cout << polsim::calib::format_report(rec, fit);
            return 0;
        }
        if (examples->parsed()) {
            if (!show_name.empty()) {
                const std::string* text =
                    polsim::scenario::builtin_scenario(show_name);
                if (!text) {
                    std::cerr << "unknown scenario: " << show_name << "\n";
                    return 1;
                }
                std::cout << *text << "\n";
                return 0;
            }
            for (const std::string& n : polsim::scenario::builtin_names())
                std::cout << n << "\n";
            return 0;
        }
    } catch (const polsim::scenario::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 0;
}
