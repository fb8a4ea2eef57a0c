#include "polsim/scenario.hpp"

#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include <json.hpp>

#include "polsim/examples.hpp"
#include "polsim/stokes.hpp"
#include "polsim/units.hpp"

namespace polsim::scenario {

using nlohmann::json;

namespace {

constexpr const char* kResultsSchema = "polsim-results-1";
constexpr const char* kPoincareSchema = "polsim-poincare-1";

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ValidationError("scenario: " + where + ": " + what);
}

double num(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

StokesIndex parse_target(const json& j, const std::string& where) {
    const std::string s = j.is_string() ? j.get<std::string>() : "";
    if (s == "S0") return StokesIndex::S0;
    if (s == "S1") return StokesIndex::S1;
    if (s == "S2") return StokesIndex::S2;
    if (s == "S3") return StokesIndex::S3;
    fail(where, "target must be one of S0, S1, S2, S3");
}

double variance_field(const json& j, const std::string& base,
                      const std::string& db_name, const std::string& lin_name,
                      double fallback) {
    if (j.contains(db_name)) return from_db(num(j[db_name], base + db_name));
    if (j.contains(lin_name)) return num(j[lin_name], base + lin_name);
    return fallback;
}

TwoModeGaussianState parse_state(const json& j) {
    if (!j.is_object()) fail("state", "expected an object");
    if (j.contains("example")) {
        const int id = j["example"].get<int>();
        const double alpha = num(j.value("alpha", json(100.0)), "state.alpha");
        const double v_plus =
            variance_field(j, "state.", "squeezing_db", "v_plus", 1.0);
        const double v_minus = variance_field(
            j, "state.", "antisqueezing_db", "v_minus",
            v_plus > 0.0 ? 1.0 / v_plus : 1.0);
        const double phi = deg_to_rad(j.value("phase_deg", 0.0));
        try {
            if (id == 3 && phi != 0.0)
                return build_example3_with_phase(v_plus, v_minus, alpha, phi);
            return build_example(id, v_plus, v_minus, alpha);
        } catch (const std::invalid_argument& e) {
            fail("state", e.what());
        }
    }
    if (j.contains("alpha_x")) {
        TwoModeGaussianState s;
        const auto cplx = [&](const json& v, const std::string& where) {
            if (!v.is_array() || v.size() != 2) fail(where, "expected [re, im]");
            return std::complex<double>(num(v[0], where), num(v[1], where));
        };
        s.alpha_x = cplx(j["alpha_x"], "state.alpha_x");
        s.alpha_y = cplx(j.value("alpha_y", json::array({0.0, 0.0})),
                         "state.alpha_y");
        if (j.contains("cov")) {
            const json& c = j["cov"];
            if (!c.is_array() || c.size() != 4) fail("state.cov", "expected 4x4");
            for (int r = 0; r < 4; ++r) {
                if (!c[r].is_array() || c[r].size() != 4)
                    fail("state.cov", "expected 4x4");
                for (int k = 0; k < 4; ++k)
                    s.cov(r, k) = num(c[r][k], "state.cov");
            }
        }
        try {
            validate(s);
        } catch (const std::invalid_argument& e) {
            fail("state.cov", e.what());
        }
        return s;
    }
    fail("state", "need either 'example' or 'alpha_x'");
}

OpticalElement parse_element(const json& j, const std::string& where) {
    const std::string type = j.value("type", "");
    if (type == "hwp") return HalfWavePlate{deg_to_rad(num(j.at("angle_deg"), where))};
    if (type == "qwp") return QuarterWavePlate{deg_to_rad(num(j.at("angle_deg"), where))};
    if (type == "phase") return PhaseShifter{deg_to_rad(num(j.at("phi_deg"), where))};
    if (type == "rotation") return Rotation{deg_to_rad(num(j.at("angle_deg"), where))};
    if (type == "loss")
        return Loss{j.value("eta_x", 1.0), j.value("eta_y", 1.0)};
    fail(where, "unknown element type '" + type + "'");
}

DetectorPairModel parse_detector(const json& j) {
    DetectorPairModel d = DetectorPairModel::ideal();
    if (j.is_null()) return d;
    if (!j.is_object()) fail("detector", "expected an object");
    d.dc_gain_ratio = j.value("dc_gain_ratio", d.dc_gain_ratio);
    d.ac_gain_ratio = j.value("ac_gain_ratio", d.ac_gain_ratio);
    d.dark_noise_db = j.value("dark_noise_db", d.dark_noise_db);
    d.saturation_dc = j.value("saturation_dc", d.saturation_dc);
    d.knee_sharpness = j.value("knee_sharpness", d.knee_sharpness);
    d.extinction_db = j.value("extinction_db", d.extinction_db);
    try {
        validate(d);
    } catch (const std::invalid_argument& e) {
        fail("detector", e.what());
    }
    return d;
}

EnvironmentModel parse_environment(const json& j) {
    EnvironmentModel e = EnvironmentModel::ideal();
    if (j.is_null()) return e;
    if (!j.is_object()) fail("environment", "expected an object");
    e.phase_jitter_std = deg_to_rad(j.value("phase_jitter_std_deg", 0.0));
    e.hwp_misalignment = deg_to_rad(j.value("hwp_misalignment_deg", 0.0));
    e.qwp_misalignment = deg_to_rad(j.value("qwp_misalignment_deg", 0.0));
    e.power_fluctuation_rel = j.value("power_fluctuation_rel", 0.0);
    try {
        validate(e);
    } catch (const std::invalid_argument& e2) {
        fail("environment", e2.what());
    }
    return e;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

}  // namespace

Scenario parse(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("scenario: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("scenario: expected an object");

    Scenario sc;
    sc.name = j.value("name", "unnamed");
    if (!j.contains("state")) fail("state", "missing");
    sc.state = parse_state(j["state"]);
    if (j.contains("elements")) {
        const json& els = j["elements"];
        if (!els.is_array()) fail("elements", "expected an array");
        for (std::size_t i = 0; i < els.size(); ++i)
            sc.elements.push_back(parse_element(
                els[i], "elements[" + std::to_string(i) + "]"));
    }
    sc.detector = parse_detector(j.value("detector", json()));
    sc.environment = parse_environment(j.value("environment", json()));

    if (!j.contains("measurements") || !j["measurements"].is_array() ||
        j["measurements"].empty())
        fail("measurements", "at least one measurement is required");
    for (std::size_t i = 0; i < j["measurements"].size(); ++i) {
        const json& m = j["measurements"][i];
        const std::string where = "measurements[" + std::to_string(i) + "]";
        MeasurementSpec spec;
        if (!m.contains("target")) fail(where, "missing target");
        spec.target = parse_target(m["target"], where);
        const std::string mode = m.value("mode", "analytic");
        if (mode == "monte_carlo") {
            spec.monte_carlo = true;
            spec.shots = m.value("shots", std::int64_t(100000));
            if (!m.contains("seed"))
                fail(where, "monte_carlo measurements require a seed");
            spec.seed = m["seed"].get<std::uint64_t>();
        } else if (mode != "analytic") {
            fail(where, "mode must be 'analytic' or 'monte_carlo'");
        }
        sc.measurements.push_back(spec);
    }

    if (j.contains("phase_sweep")) {
        const json& p = j["phase_sweep"];
        PhaseSweepSpec spec;
        spec.from = deg_to_rad(num(p.at("from_deg"), "phase_sweep.from_deg"));
        spec.to = deg_to_rad(num(p.at("to_deg"), "phase_sweep.to_deg"));
        spec.points = p.value("points", 19);
        if (spec.points < 1) fail("phase_sweep.points", "must be >= 1");
        sc.phase_sweep = spec;
    }
    if (j.contains("mixing_sensitivity")) {
        const json& p = j["mixing_sensitivity"];
        MixingSweepSpec spec;
        spec.target = parse_target(p.at("target"), "mixing_sensitivity");
        const std::string param = p.value("parameter", "hwp");
        if (param == "hwp") spec.parameter = SweptParameter::HwpOffset;
        else if (param == "qwp") spec.parameter = SweptParameter::QwpOffset;
        else if (param == "ac_gain") spec.parameter = SweptParameter::AcGainRatio;
        else fail("mixing_sensitivity.parameter", "must be hwp, qwp or ac_gain");
        const bool angular = spec.parameter != SweptParameter::AcGainRatio;
        spec.from = num(p.at("from"), "mixing_sensitivity.from");
        spec.to = num(p.at("to"), "mixing_sensitivity.to");
        if (angular) {
            spec.from = deg_to_rad(spec.from);
            spec.to = deg_to_rad(spec.to);
        }
        spec.points = p.value("points", 11);
        if (spec.points < 1) fail("mixing_sensitivity.points", "must be >= 1");
        sc.mixing_sweep = spec;
    }
    sc.breakdown = j.value("breakdown", false);
    return sc;
}

RunResult run(const Scenario& sc) {
    TwoModeGaussianState state = sc.state;
    for (const OpticalElement& e : sc.elements) state = apply_element(state, e);

    // Classification of the input (pre-chain) state.
    const StokesEstimate est = stokes_linearized(state);
    std::optional<UncertaintyReport> rep;
    if (est.shot_noise > 0.0) rep = uncertainty_report(est);

    RunResult out;
    std::ostringstream csv, summary, breakdown;
    csv << "# schema=" << kResultsSchema << "\n"
        << "# scenario=" << sc.name << "\n"
        << "target,mode,mean,variance,shot_noise,normalized,db,"
           "classification,conjugate_partner,std_error,saturation_flag\n";
    breakdown << "# schema=" << kResultsSchema << "\n"
              << "target,mechanism,delta_normalized\n";
    summary << "scenario " << sc.name << "\n";

    for (const MeasurementSpec& spec : sc.measurements) {
        const MeasurementConfig cfg = MeasurementConfig::ideal(spec.target);
        ImperfectRecord r =
            spec.monte_carlo
                ? measure_imperfect(state, cfg, sc.detector, sc.environment,
                                    MonteCarlo{spec.shots, spec.seed})
                : measure_imperfect(state, cfg, sc.detector, sc.environment);

        MeasurementRow row;
        row.spec = spec;
        row.result = r;
        const int t = int(spec.target);
        row.classification =
            rep ? rep->classification[t] : SqueezingClass::NotSqueezed;
        row.conjugate_partner = rep ? rep->conjugate_partner[t] : std::nullopt;

        const char* tname[] = {"S0", "S1", "S2", "S3"};
        csv << tname[t] << ','
            << (spec.monte_carlo ? "monte_carlo" : "analytic") << ','
            << fmt(r.record.channel_mean) << ','
            << fmt(r.record.channel_variance) << ','
            << fmt(r.record.shot_noise) << ',' << fmt(r.record.normalized)
            << ',' << fmt(r.record.db) << ','
            << to_string(row.classification) << ','
            << (row.conjugate_partner
                    ? "S" + std::to_string(*row.conjugate_partner)
                    : "")
            << ','
            << (spec.monte_carlo ? fmt(r.variance_standard_error) : "")
            << ',' << (r.saturation_flagged ? "1" : "0") << "\n";

        summary << "  " << tname[t] << ": normalized variance "
                << fmt(r.record.normalized) << " (" << fmt(r.record.db)
                << " dB), " << to_string(row.classification);
        if (row.conjugate_partner)
            summary << " (conjugate S" << *row.conjugate_partner << ")";
        if (r.saturation_flagged) summary << " [saturation flagged]";
        summary << "\n";

        for (const NoiseContribution& c : r.breakdown)
            breakdown << tname[t] << ',' << c.mechanism << ','
                      << fmt(c.delta_normalized) << "\n";
        out.rows.push_back(std::move(row));
    }

    if (sc.phase_sweep) {
        std::vector<double> grid;
        const auto& p = *sc.phase_sweep;
        for (int i = 0; i < p.points; ++i)
            grid.push_back(p.points == 1
                               ? p.from
                               : p.from + (p.to - p.from) * i / (p.points - 1));
        std::ostringstream ps;
        ps << "# schema=" << kResultsSchema << "\n"
           << "phi_deg,mean_s0,mean_s1,mean_s2,mean_s3,"
              "norm_v0,norm_v1,norm_v2,norm_v3,db_v0,db_v1,db_v2,db_v3\n";
        for (const PhaseSweepRow& row :
             phase_sweep(state, sc.detector, sc.environment, grid)) {
            ps << fmt(rad_to_deg(row.phi));
            for (int j = 0; j < 4; ++j) ps << ',' << fmt(row.mean[j]);
            for (int j = 0; j < 4; ++j) ps << ',' << fmt(row.normalized[j]);
            for (int j = 0; j < 4; ++j) ps << ',' << fmt(row.db[j]);
            ps << "\n";
        }
        out.phase_sweep_csv = ps.str();
    }
    if (sc.mixing_sweep) {
        const auto& p = *sc.mixing_sweep;
        std::vector<double> grid;
        for (int i = 0; i < p.points; ++i)
            grid.push_back(p.points == 1
                               ? p.from
                               : p.from + (p.to - p.from) * i / (p.points - 1));
        std::ostringstream ms;
        const bool angular = p.parameter != SweptParameter::AcGainRatio;
        ms << "# schema=" << kResultsSchema << "\n"
           << (angular ? "offset_deg" : "ac_gain_ratio")
           << ",normalized,db\n";
        for (const SensitivityRow& row : mixing_sensitivity(
                 state, MeasurementConfig::ideal(p.target), sc.detector,
                 sc.environment, p.parameter, grid))
            ms << fmt(angular ? rad_to_deg(row.value) : row.value) << ','
               << fmt(row.normalized) << ',' << fmt(row.db) << "\n";
        out.mixing_sweep_csv = ms.str();
    }

    if (sc.breakdown) out.breakdown_csv = breakdown.str();
    out.results_csv = csv.str();
    out.summary = summary.str();
    return out;
}

std::string poincare_export(const TwoModeGaussianState& state, int n_samples,
                            std::uint64_t seed) {
    if (n_samples < 1)
        throw ValidationError("poincare_export: n_samples must be >= 1");
    const StokesEstimate est = stokes_linearized(state);
    const Eigen::Matrix4d c =
        stokes_noise_coefficients(state.alpha_x, state.alpha_y);
    const Eigen::Matrix3d sigma =
        c.bottomRows<3>() * state.cov * c.bottomRows<3>().transpose();
    Eigen::LLT<Eigen::Matrix3d> llt(sigma +
                                    1e-15 * Eigen::Matrix3d::Identity());

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::ostringstream os;
    os << "# schema=" << kPoincareSchema << "\n"
       << "# mean_s1=" << fmt(est.mean[1]) << " mean_s2=" << fmt(est.mean[2])
       << " mean_s3=" << fmt(est.mean[3]) << "\n"
       << "# shot_noise=" << fmt(est.shot_noise)
       << " coherent_radius=" << fmt(std::sqrt(3.0 * est.shot_noise)) << "\n"
       << "s1,s2,s3\n";
    for (int i = 0; i < n_samples; ++i) {
        const Eigen::Vector3d z(gauss(rng), gauss(rng), gauss(rng));
        const Eigen::Vector3d p =
            est.mean.tail<3>() + llt.matrixL() * z;
        os << fmt(p[0]) << ',' << fmt(p[1]) << ',' << fmt(p[2]) << "\n";
    }
    return os.str();
}

}  // namespace polsim::scenario
