#include "polsim/imperfect.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "polsim/stokes.hpp"
#include "polsim/units.hpp"

namespace polsim {

double DetectorPairModel::compression(double dc_level) const {
    return 1.0 / (1.0 + std::pow(dc_level / saturation_dc, knee_sharpness));
}

void validate(const DetectorPairModel& det) {
    if (!(det.dc_gain_ratio > 0.0) || !(det.ac_gain_ratio > 0.0))
        throw std::invalid_argument("DetectorPairModel: gains must be > 0");
    if (!(det.saturation_dc > 0.0))
        throw std::invalid_argument(
            "DetectorPairModel: saturation_dc must be > 0");
    if (!(det.knee_sharpness > 0.0))
        throw std::invalid_argument(
            "DetectorPairModel: knee_sharpness must be > 0");
}

void validate(const EnvironmentModel& env) {
    if (env.phase_jitter_std < 0.0 || env.power_fluctuation_rel < 0.0)
        throw std::invalid_argument(
            "EnvironmentModel: jitter and power fluctuation must be >= 0");
}

namespace {

struct Flags {
    bool misalign = false;
    bool extinction = false;
    bool jitter = false;
    bool gains = false;  // AC gain imbalance plus saturation compression
    bool power = false;
    bool dark = false;
    static Flags all() { return {true, true, true, true, true, true}; }
};

struct NodeStats {
    double mean = 0.0;       // channel mean (sign-corrected for S3)
    double var = 0.0;        // channel variance before power/dark terms
    double m1 = 0.0, m2 = 0.0;
    double shot_ref = 0.0;   // coherent-equivalent channel variance
    double s1 = 1.0, s2 = 1.0;  // effective AC gains
    bool sat_flag = false;
};

double extinction_epsilon(const DetectorPairModel& det) {
    return det.extinction_db >= 1e8 ? 0.0 : from_db(-det.extinction_db);
}

/// Channel statistics for one frozen phase offset.
NodeStats eval_node(const TwoModeGaussianState& state,
                    const MeasurementConfig& config,
                    const DetectorPairModel& det, const EnvironmentModel& env,
                    const Flags& f, double phi) {
    TwoModeGaussianState s = state;
    if (phi != 0.0) s = apply_element(s, PhaseShifter{phi});

    MeasurementConfig c = config;
    if (f.misalign) {
        c.hwp_angle += env.hwp_misalignment;
        if (c.has_qwp) c.qwp_angle += env.qwp_misalignment;
    }
    if (c.has_qwp) s = apply_element(s, QuarterWavePlate{c.qwp_angle});
    s = apply_element(s, HalfWavePlate{c.hwp_angle});
    if (f.extinction) {
        const double eps = extinction_epsilon(det);
        if (eps > 0.0)
            s = apply_element(s, Rotation{std::asin(std::sqrt(eps))});
    }

    const PhotocurrentPair p = photocurrents(s);
    NodeStats ns;
    ns.m1 = p.mean[0];
    ns.m2 = p.mean[1];
    if (f.gains) {
        const double f1 = det.compression(ns.m1);
        const double f2 = det.compression(ns.m2);
        ns.s1 = 1.0 * f1;
        ns.s2 = det.ac_gain_ratio * f2;
        ns.sat_flag = f1 < 0.1 || f2 < 0.1;
    }
    const double sign = config.channel == Channel::Sum ? 1.0 : -1.0;
    const Eigen::Vector2d w(ns.s1, sign * ns.s2);
    ns.mean = w.dot(p.mean);
    if (config.target == StokesIndex::S3 &&
        config.channel == Channel::Difference)
        ns.mean = -ns.mean;  // chain sign convention, see measure()
    ns.var = w.transpose() * p.cov * w;
    ns.shot_ref = ns.s1 * ns.s1 * ns.m1 + ns.s2 * ns.s2 * ns.m2;
    return ns;
}

/// Gauss-Hermite nodes/weights for averaging over N(0, sigma^2)
/// (Golub-Welsch on the Jacobi matrix).
void gauss_hermite(int n, double sigma, std::vector<double>& nodes,
                   std::vector<double>& weights) {
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = std::sqrt(k / 2.0);
        j(k - 1, k) = b;
        j(k, k - 1) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(j);
    nodes.resize(n);
    weights.resize(n);
    for (int k = 0; k < n; ++k) {
        nodes[k] = std::sqrt(2.0) * sigma * es.eigenvalues()[k];
        const double v0 = es.eigenvectors()(0, k);
        weights[k] = v0 * v0;  // already sums to 1
    }
}

constexpr int kJitterNodes = 33;

struct AnalyticResult {
    NodeStats stats;        // phase-averaged
    double mean_sq = 0.0;   // E[m^2] over the jitter, for the power term
};

AnalyticResult eval_analytic(const TwoModeGaussianState& state,
                             const MeasurementConfig& config,
                             const DetectorPairModel& det,
                             const EnvironmentModel& env, const Flags& f) {
    AnalyticResult r;
    if (f.jitter && env.phase_jitter_std > 0.0) {
        std::vector<double> nodes, weights;
        gauss_hermite(kJitterNodes, env.phase_jitter_std, nodes, weights);
        double ev = 0.0, em = 0.0, em2 = 0.0;
        for (int k = 0; k < kJitterNodes; ++k) {
            const NodeStats ns =
                eval_node(state, config, det, env, f, nodes[k]);
            ev += weights[k] * ns.var;
            em += weights[k] * ns.mean;
            em2 += weights[k] * ns.mean * ns.mean;
            r.stats.m1 += weights[k] * ns.m1;
            r.stats.m2 += weights[k] * ns.m2;
            r.stats.shot_ref += weights[k] * ns.shot_ref;
            r.stats.sat_flag = r.stats.sat_flag || ns.sat_flag;
            r.stats.s1 = ns.s1;
            r.stats.s2 = ns.s2;
        }
        // Law of total variance for quasi-static jitter.
        r.stats.var = ev + (em2 - em * em);
        r.stats.mean = em;
        r.mean_sq = em2;
    } else {
        r.stats = eval_node(state, config, det, env, f, 0.0);
        r.mean_sq = r.stats.mean * r.stats.mean;
    }
    if (f.power && env.power_fluctuation_rel > 0.0) {
        const double p = env.power_fluctuation_rel;
        r.stats.var += 4.0 * p * p * r.mean_sq;
    }
    if (f.dark && det.dark_noise_db < 1e8) {
        // Per-detector electronic noise, uncorrelated; referenced to the
        // nominal beam power so the floor does not move with the gains.
        const double v_det =
            0.5 * from_db(-det.dark_noise_db) * state.mean_photons();
        r.stats.var +=
            (r.stats.s1 * r.stats.s1 + r.stats.s2 * r.stats.s2) * v_det;
    }
    return r;
}

MeasurementRecord to_record(const MeasurementConfig& config,
                            const NodeStats& ns) {
    MeasurementRecord rec;
    rec.target = config.target;
    rec.mean_detector1 = ns.m1;
    rec.mean_detector2 = ns.m2;
    rec.channel_mean = ns.mean;
    rec.channel_variance = ns.var;
    rec.shot_noise = ns.shot_ref;
    if (ns.shot_ref > 0.0) {
        rec.normalized = ns.var / ns.shot_ref;
        rec.db = to_db(rec.normalized);
    }
    return rec;
}

std::vector<NoiseContribution> breakdown_stack(
    const TwoModeGaussianState& state, const MeasurementConfig& config,
    const DetectorPairModel& det, const EnvironmentModel& env) {
    struct Stage {
        const char* name;
        Flags flags;
    };
    Flags f;
    std::vector<Stage> stages;
    stages.push_back({"ideal", f});
    f.misalign = true;
    stages.push_back({"misalignment", f});
    f.extinction = true;
    stages.push_back({"extinction", f});
    f.jitter = true;
    stages.push_back({"phase_jitter", f});
    f.gains = true;
    stages.push_back({"gain_saturation", f});
    f.power = true;
    stages.push_back({"power_fluctuation", f});
    f.dark = true;
    stages.push_back({"dark_noise", f});

    std::vector<NoiseContribution> out;
    double prev = 0.0;
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const AnalyticResult r =
            eval_analytic(state, config, det, env, stages[i].flags);
        const double norm =
            r.stats.shot_ref > 0.0 ? r.stats.var / r.stats.shot_ref : 0.0;
        out.push_back({stages[i].name, i == 0 ? norm : norm - prev});
        prev = norm;
    }
    return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

ImperfectRecord measure_imperfect(const TwoModeGaussianState& state,
                                  const MeasurementConfig& config,
                                  const DetectorPairModel& det,
                                  const EnvironmentModel& env) {
    validate(det);
    validate(env);
    const AnalyticResult r =
        eval_analytic(state, config, det, env, Flags::all());
    ImperfectRecord rec;
    rec.record = to_record(config, r.stats);
    rec.saturation_flagged = r.stats.sat_flag;
    rec.breakdown = breakdown_stack(state, config, det, env);
    return rec;
}

ImperfectRecord measure_imperfect(const TwoModeGaussianState& state,
                                  const MeasurementConfig& config,
                                  const DetectorPairModel& det,
                                  const EnvironmentModel& env,
                                  const MonteCarlo& mc) {
    validate(det);
    validate(env);
    if (mc.shots < 10000)
        throw std::invalid_argument(
            "measure_imperfect: monte_carlo needs at least 1e4 shots");

    const Flags f = Flags::all();
    const double sigma = env.phase_jitter_std;
    const double p_rel = env.power_fluctuation_rel;
    const double v_det = det.dark_noise_db < 1e8
                             ? 0.5 * from_db(-det.dark_noise_db) *
                                   state.mean_photons()
                             : 0.0;
    const double sign = config.channel == Channel::Sum ? 1.0 : -1.0;
    const bool flip_mean = config.target == StokesIndex::S3 &&
                           config.channel == Channel::Difference;

    // Chain without the jitter offset, reused when sigma == 0.
    const NodeStats frozen = eval_node(state, config, det, env, f, 0.0);

    double sum = 0.0, sum_sq = 0.0;
    bool sat_flag = frozen.sat_flag;
    for (std::int64_t t = 0; t < mc.shots; ++t) {
        // Counter-derived stream: reproducible independent of shot order.
        std::mt19937_64 rng(splitmix64(mc.seed ^ splitmix64(std::uint64_t(t))));
        std::normal_distribution<double> gauss(0.0, 1.0);

        double phi = 0.0;
        if (sigma > 0.0) phi = sigma * gauss(rng);
        const double eps = p_rel > 0.0 ? p_rel * gauss(rng) : 0.0;

        NodeStats ns = frozen;
        TwoModeGaussianState s = state;
        if (phi != 0.0) {
            ns = eval_node(state, config, det, env, f, phi);
            sat_flag = sat_flag || ns.sat_flag;
        }
        // Rebuild the photocurrent covariance for this node to sample the
        // quadrature fluctuations.
        TwoModeGaussianState chain = state;
        if (phi != 0.0) chain = apply_element(chain, PhaseShifter{phi});
        MeasurementConfig c = config;
        c.hwp_angle += env.hwp_misalignment;
        if (c.has_qwp) c.qwp_angle += env.qwp_misalignment;
        if (c.has_qwp) chain = apply_element(chain, QuarterWavePlate{c.qwp_angle});
        chain = apply_element(chain, HalfWavePlate{c.hwp_angle});
        const double ext = extinction_epsilon(det);
        if (ext > 0.0)
            chain = apply_element(chain, Rotation{std::asin(std::sqrt(ext))});
        const PhotocurrentPair pc = photocurrents(chain);

        Eigen::LLT<Eigen::Matrix2d> llt(
            pc.cov + 1e-18 * Eigen::Matrix2d::Identity());
        const Eigen::Vector2d z(gauss(rng), gauss(rng));
        const Eigen::Vector2d dn = llt.matrixL() * z;

        const double scale = 1.0 + eps;
        double n1 = pc.mean[0] * scale * scale + dn[0] * scale;
        double n2 = pc.mean[1] * scale * scale + dn[1] * scale;
        if (v_det > 0.0) {
            n1 += std::sqrt(v_det) * gauss(rng);
            n2 += std::sqrt(v_det) * gauss(rng);
        }
        double y = ns.s1 * n1 + sign * ns.s2 * n2;
        if (flip_mean) y = -y;
        sum += y;
        sum_sq += y * y;
    }
    const double n = double(mc.shots);
    const double mean = sum / n;
    const double var = (sum_sq - n * mean * mean) / (n - 1.0);

    // Normalize against the analytic coherent-equivalent reference.
    const AnalyticResult ref =
        eval_analytic(state, config, det, env, Flags::all());

    NodeStats ns = ref.stats;
    ns.mean = mean;
    ns.var = var;
    ImperfectRecord rec;
    rec.record = to_record(config, ns);
    rec.saturation_flagged = sat_flag;
    rec.monte_carlo = true;
    rec.variance_standard_error = var * std::sqrt(2.0 / (n - 1.0));
    rec.breakdown = breakdown_stack(state, config, det, env);
    return rec;
}

std::vector<PhaseSweepRow> phase_sweep(const TwoModeGaussianState& state,
                                       const DetectorPairModel& det,
                                       const EnvironmentModel& env,
                                       const std::vector<double>& phi_grid) {
    std::vector<PhaseSweepRow> rows;
    rows.reserve(phi_grid.size());
    for (double phi : phi_grid) {
        const TwoModeGaussianState s =
            apply_element(state, PhaseShifter{phi});
        PhaseSweepRow row;
        row.phi = phi;
        row.mean = stokes_classical_mean(s.alpha_x, s.alpha_y);
        for (int j = 0; j < 4; ++j) {
            const ImperfectRecord r = measure_imperfect(
                s, MeasurementConfig::ideal(StokesIndex(j)), det, env);
            row.normalized[j] = r.record.normalized;
            row.db[j] = r.record.db;
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<SensitivityRow> mixing_sensitivity(
    const TwoModeGaussianState& state, const MeasurementConfig& config,
    const DetectorPairModel& det, const EnvironmentModel& env,
    SweptParameter parameter, const std::vector<double>& grid) {
    std::vector<SensitivityRow> rows;
    rows.reserve(grid.size());
    for (double v : grid) {
        DetectorPairModel d = det;
        EnvironmentModel e = env;
        switch (parameter) {
            case SweptParameter::HwpOffset: e.hwp_misalignment = v; break;
            case SweptParameter::QwpOffset: e.qwp_misalignment = v; break;
            case SweptParameter::AcGainRatio: d.ac_gain_ratio = v; break;
        }
        const ImperfectRecord r = measure_imperfect(state, config, d, e);
        rows.push_back({v, r.record.normalized, r.record.db});
    }
    return rows;
}

}  // namespace polsim
