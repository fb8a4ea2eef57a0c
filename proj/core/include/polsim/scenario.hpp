#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polsim/imperfect.hpp"
#include "polsim/uncertainty.hpp"

namespace polsim::scenario {

/// Raised for unparsable or invalid scenario files. Messages carry the
/// offending field path (and the parser's byte offset for syntax errors).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MeasurementSpec {
    StokesIndex target = StokesIndex::S1;
    bool monte_carlo = false;
    std::int64_t shots = 100000;
    std::uint64_t seed = 0;
};

struct PhaseSweepSpec {
    double from = 0.0;  // radians
    double to = 0.0;
    int points = 0;
};

struct MixingSweepSpec {
    StokesIndex target = StokesIndex::S1;
    SweptParameter parameter = SweptParameter::HwpOffset;
    double from = 0.0;
    double to = 0.0;
    int points = 0;
};

struct Scenario {
    std::string name;
    TwoModeGaussianState state;
    std::vector<OpticalElement> elements;  // optional pre-chain optics
    DetectorPairModel detector = DetectorPairModel::ideal();
    EnvironmentModel environment = EnvironmentModel::ideal();
    std::vector<MeasurementSpec> measurements;
    std::optional<PhaseSweepSpec> phase_sweep;
    std::optional<MixingSweepSpec> mixing_sweep;
    bool breakdown = false;
};

/// Parses and validates a scenario document (JSON; angles in degrees,
/// variances given either linear or in dB). Throws ValidationError.
Scenario parse(const std::string& json_text);

struct MeasurementRow {
    MeasurementSpec spec;
    ImperfectRecord result;
    SqueezingClass classification;
    std::optional<int> conjugate_partner;
};

struct RunResult {
    std::vector<MeasurementRow> rows;
    std::string results_csv;             // schema-versioned table
    std::string summary;                 // human-readable
    std::optional<std::string> breakdown_csv;
    std::optional<std::string> phase_sweep_csv;
    std::optional<std::string> mixing_sweep_csv;
};

/// Runs every measurement (and any sweeps) of a scenario. Deterministic for
/// fixed seeds.
RunResult run(const Scenario& sc);

/// Samples linearized Stokes fluctuations and renders an (S1,S2,S3) point
/// cloud about the mean, with the mean vector and shot-noise radius in the
/// header. Returns the file content.
std::string poincare_export(const TwoModeGaussianState& state, int n_samples,
                            std::uint64_t seed);

/// Bundled scenarios, addressable by name from the CLI.
std::vector<std::string> builtin_names();
/// Returns the scenario document, or nullptr for unknown names.
const std::string* builtin_scenario(const std::string& name);

}  // namespace polsim::scenario
