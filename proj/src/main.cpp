#include "qsim/circuit.hpp"
#include "qsim/collision.hpp"
#include "qsim/config.hpp"
#include "qsim/lindblad.hpp"
#include "qsim/model.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace qsim;

constexpr int kExitConfig = 2;
constexpr int kExitPhysics = 3;
constexpr int kExitVerify = 4;

struct PhysicsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VerifyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ChainSpec chain_from(const Config& cfg) {
    ChainSpec spec;
    spec.L = int(cfg.get_int("model", "L"));
    spec.J = cfg.get_double("model", "J");
    spec.Delta = cfg.get_double("model", "Delta");
    spec.h = cfg.get_double_list("model", "h");
    spec.validate();
    return spec;
}

BathSpec bath_from(const Config& cfg) {
    return BathSpec(cfg.get_double("bath", "gamma"),
                    cfg.get_double("bath", "lambda_1"),
                    cfg.get_double("bath", "lambda_L"));
}

CollisionParams collision_from(const Config& cfg) {
    CollisionParams p;
    p.tau = cfg.get_double("collision", "tau");
    p.dt = cfg.get_double("collision", "dt");
    p.n_collisions = int(cfg.get_int("collision", "n_collisions"));
    if (cfg.has("collision", "theta"))
        p.theta = cfg.get_double("collision", "theta");
    p.validate();
    return p;
}

Mat initial_state_from(const Config& cfg, int L) {
    if (!cfg.has("model", "initial")) return default_initial_state(L);
    std::string s = cfg.get_string("model", "initial");
    if (int(s.size()) != L)
        throw ConfigError("[model] initial must have exactly L characters");
    std::vector<int> bits;
    for (char c : s) {
        if (c == 'u') bits.push_back(0);
        else if (c == 'd') bits.push_back(1);
        else throw ConfigError("[model] initial must use only 'u' and 'd'");
    }
    return basis_state(bits);
}

struct OutputPaths {
    std::filesystem::path dir;
    std::string prefix;

    std::filesystem::path file(const std::string& suffix) const {
        return dir / (prefix + "_" + suffix);
    }
};

OutputPaths outputs_from(const Config& cfg, const std::string& out_dir,
                         const std::string& fallback_prefix) {
    OutputPaths p;
    p.dir = out_dir;
    p.prefix = cfg.get_or<std::string>("output", "prefix", fallback_prefix);
    std::filesystem::create_directories(p.dir);
    return p;
}

void write_trajectory(const std::filesystem::path& path, const TrajectoryRecord& rec,
                      int L) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "collision_index,time";
    for (int s = 1; s <= L; ++s) out << ",m_" << s;
    for (int l = 1; l <= L - 1; ++l) out << ",j_" << l;
    out << "\n";
    for (size_t m = 0; m < rec.times.size(); ++m) {
        out << (m + 1) << "," << fmt(rec.times[m]);
        for (double v : rec.mags[m]) out << "," << fmt(v);
        for (double v : rec.currents[m]) out << "," << fmt(v);
        out << "\n";
    }
}

std::vector<double> first_bond_series(const TrajectoryRecord& rec) {
    std::vector<double> js;
    js.reserve(rec.currents.size());
    for (const auto& c : rec.currents) js.push_back(c[0]);
    return js;
}

std::vector<double> cumulative_currents(const TrajectoryRecord& rec) {
    size_t nb = rec.currents.empty() ? 0 : rec.currents[0].size();
    std::vector<double> cum(nb, 0.0);
    for (const auto& c : rec.currents)
        for (size_t l = 0; l < nb; ++l) cum[l] += c[l];
    for (double& v : cum) v /= double(rec.currents.size());
    return cum;
}

void check_state(const Mat& rho) {
    if (!is_density_matrix(rho, 1e-9, 1e-9, 1e-9))
        throw PhysicsError("final state violates density-matrix invariants");
}

int detect_window(const Config& cfg) {
    return cfg.get_or<int>("detect", "window", 20);
}

double detect_tol(const Config& cfg) {
    return cfg.get_or<double>("detect", "tol", 1e-4);
}

int cmd_collide(const Config& cfg, const std::string& out_dir,
                std::optional<long> seed) {
    ChainSpec spec = chain_from(cfg);
    BathSpec baths = bath_from(cfg);
    CollisionParams params = collision_from(cfg);
    NoiseSpec noise;
    noise.sigma = cfg.get_or<double>("noise", "sigma", 0.0);
    noise.seed = std::uint64_t(seed ? *seed : cfg.get_or<long>("noise", "seed", 0));
    Mat rho0 = initial_state_from(cfg, spec.L);

    TrajectoryRecord rec =
        run_collisional(spec, baths, params, rho0, noise.sigma > 0 ? &noise : nullptr);
    check_state(rec.final_rho);

    auto paths = outputs_from(cfg, out_dir, "collide");
    write_trajectory(paths.file("trajectory.csv"), rec, spec.L);

    auto steady = detect_steady(first_bond_series(rec), detect_window(cfg),
                                detect_tol(cfg));
    std::ofstream sum(paths.file("summary.txt"));
    sum << "steady_index="
        << (steady ? std::to_string(*steady) : std::string("none")) << "\n";
    for (int s = 1; s <= spec.L; ++s)
        sum << "final_m_" << s << "=" << fmt(rec.mags.back()[s - 1]) << "\n";
    for (int l = 1; l <= spec.L - 1; ++l)
        sum << "final_j_" << l << "=" << fmt(rec.currents.back()[l - 1]) << "\n";
    std::cout << "wrote " << paths.file("trajectory.csv").string() << "\n";
    return 0;
}

int cmd_lindblad(const Config& cfg, const std::string& out_dir) {
    ChainSpec spec = chain_from(cfg);
    BathSpec baths = bath_from(cfg);
    Mat ness;
    try {
        ness = ness_direct(spec, baths);
    } catch (const std::runtime_error& e) {
        throw PhysicsError(e.what());
    }
    auto layout = QubitLayout::plain(spec.L);
    auto paths = outputs_from(cfg, out_dir, "lindblad");
    std::ofstream sum(paths.file("ness.txt"));
    for (int s = 1; s <= spec.L; ++s)
        sum << "ness_m_" << s << "=" << fmt(magnetization(ness, s, layout)) << "\n";
    for (int l = 1; l <= spec.L - 1; ++l) {
        double j = (current_operator(spec, l) * ness).trace().real();
        sum << "ness_j_" << l << "=" << fmt(j) << "\n";
    }
    if (spec.L <= 4)
        sum << "gap=" << fmt(gap_estimate(spec, baths)) << "\n";
    std::cout << "wrote " << paths.file("ness.txt").string() << "\n";
    return 0;
}

int cmd_rectify(const Config& cfg, const std::string& out_dir) {
    ChainSpec spec;
    spec.L = int(cfg.get_int("model", "L"));
    spec.J = cfg.get_double("model", "J");
    spec.Delta = cfg.get_double("model", "Delta");
    double rect_h = cfg.get_double("model", "rect_h");
    double gamma = cfg.get_double("bath", "gamma");
    CollisionParams params = collision_from(cfg);
    Mat rho0 = initial_state_from(cfg, spec.L);

    auto paths = outputs_from(cfg, out_dir, "rectify");
    std::ofstream sum(paths.file("summary.txt"));

    double I_f = 0, I_r = 0;
    std::optional<int> det_f, det_r;
    for (BiasDirection bias : {BiasDirection::Forward, BiasDirection::Reverse}) {
        bool fwd = bias == BiasDirection::Forward;
        spec.h = rectifier_field(rect_h, spec.L, bias);
        auto [l1, lL] = bias_lambdas(bias);
        BathSpec baths(gamma, l1, lL);
        TrajectoryRecord rec = run_collisional(spec, baths, params, rho0);
        check_state(rec.final_rho);
        write_trajectory(paths.file(fwd ? "forward.csv" : "reverse.csv"), rec,
                         spec.L);
        auto cum = cumulative_currents(rec);
        auto det = detect_steady(first_bond_series(rec), detect_window(cfg),
                                 detect_tol(cfg));
        const char* tag = fwd ? "forward" : "reverse";
        for (size_t l = 0; l < cum.size(); ++l)
            sum << "cum_j_" << tag << "_" << (l + 1) << "=" << fmt(cum[l]) << "\n";
        sum << "detect_" << tag << "="
            << (det ? std::to_string(*det) : std::string("none")) << "\n";
        if (fwd) {
            I_f = *std::min_element(cum.begin(), cum.end());
            det_f = det;
        } else {
            I_r = *std::max_element(cum.begin(), cum.end());
            det_r = det;
        }
    }
    sum << "I_f=" << fmt(I_f) << "\n";
    sum << "I_r=" << fmt(I_r) << "\n";
    sum << "R=" << fmt(-I_f / I_r) << "\n";
    std::cout << "R=" << fmt(-I_f / I_r) << "\n";
    return 0;
}

int cmd_noise_sweep(const Config& cfg, const std::string& out_dir,
                    std::optional<long> seed) {
    ChainSpec spec = chain_from(cfg);
    BathSpec baths = bath_from(cfg);
    CollisionParams params = collision_from(cfg);
    Mat rho0 = initial_state_from(cfg, spec.L);
    std::vector<double> sigmas = cfg.get_double_list("noise", "sigmas");
    std::uint64_t base_seed =
        std::uint64_t(seed ? *seed : cfg.get_or<long>("noise", "seed", 0));

    auto paths = outputs_from(cfg, out_dir, "noise");
    TrajectoryRecord base = run_collisional(spec, baths, params, rho0);
    std::vector<double> j0 = first_bond_series(base);
    double j0_norm = 0;
    for (double v : j0) j0_norm += v * v;
    j0_norm = std::sqrt(j0_norm);

    std::ofstream sum(paths.file("summary.txt"));
    for (size_t i = 0; i < sigmas.size(); ++i) {
        NoiseSpec noise{sigmas[i], base_seed};
        TrajectoryRecord rec = run_collisional(spec, baths, params, rho0,
                                               sigmas[i] > 0 ? &noise : nullptr);
        check_state(rec.final_rho);
        write_trajectory(paths.file("sigma_" + std::to_string(i) + ".csv"), rec,
                         spec.L);
        std::vector<double> js = first_bond_series(rec);
        double dev = 0;
        for (size_t m = 0; m < js.size(); ++m)
            dev += (js[m] - j0[m]) * (js[m] - j0[m]);
        double overlap = 1.0 / (1.0 + std::sqrt(dev) / j0_norm);
        auto det = detect_steady(js, detect_window(cfg), detect_tol(cfg));
        sum << "sigma_" << i << "=" << fmt(sigmas[i]) << "\n";
        sum << "overlap_" << i << "=" << fmt(overlap) << "\n";
        sum << "detect_" << i << "="
            << (det ? std::to_string(*det) : std::string("none")) << "\n";
    }
    std::cout << "wrote " << paths.file("summary.txt").string() << "\n";
    return 0;
}

TimingModel profile_from(const Config& cfg, const std::string& name) {
    if (name == "manila") return TimingModel::manila();
    if (name == "ionq-harmony") return TimingModel::ionq_harmony();
    std::string section = "profile " + name;
    if (!cfg.has(section, "t_1q_ns"))
        throw ConfigError("unknown timing profile '" + name +
                          "' (no builtin and no [" + section + "] section)");
    TimingModel t;
    t.name = name;
    t.t_1q_ns = cfg.get_double(section, "t_1q_ns");
    t.t_2q_ns = cfg.get_double(section, "t_2q_ns");
    t.t_meas_ns = cfg.get_double(section, "t_meas_ns");
    t.t_reset_ns = cfg.get_double(section, "t_reset_ns");
    t.rz_free = cfg.get_bool(section, "rz_free");
    t.T1_us = cfg.get_double(section, "T1_us");
    t.T2_us = cfg.get_double(section, "T2_us");
    t.validate();
    return t;
}

int cmd_emit(const Config& cfg, const std::string& out_dir,
             const std::string& profile_flag) {
    ChainSpec spec = chain_from(cfg);
    BathSpec baths = bath_from(cfg);
    CollisionParams params = collision_from(cfg);
    bool native = cfg.get_or<bool>("emit", "native", true);
    int n_coll = cfg.get_or<int>("emit", "n_collisions", 1);
    std::string profile_name =
        !profile_flag.empty() ? profile_flag
                              : cfg.get_or<std::string>("emit", "profile", "manila");
    TimingModel timing = profile_from(cfg, profile_name);

    GateIR ir = emit_collisions(spec, baths, params, n_coll, native);
    auto paths = outputs_from(cfg, out_dir, "emit");
    {
        std::ofstream out(paths.file("circuit.txt"));
        out << "profile " << timing.name << "\n" << serialize(ir);
    }
    DurationReport rep = estimate_duration(ir, timing);
    std::ofstream sum(paths.file("timing.txt"));
    sum << "profile=" << timing.name << "\n";
    sum << "total_ns=" << fmt(rep.total_ns) << "\n";
    sum << "per_collision_ns=" << fmt(rep.per_collision_ns) << "\n";
    sum << "unitary_block_ns=" << fmt(rep.unitary_block_ns) << "\n";
    sum << "meas_reset_ns=" << fmt(rep.meas_reset_ns) << "\n";
    sum << "reset_ns=" << fmt(timing.t_reset_ns) << "\n";
    sum << "coherence_ratio=" << fmt(rep.coherence_ratio) << "\n";
    sum << "layers_2q=" << rep.n_2q_layers << "\n";
    sum << "layers_1q=" << rep.n_1q_layers << "\n";
    sum << "layers_rz=" << rep.n_rz_layers << "\n";
    sum << "layers_measure=" << rep.n_meas_layers << "\n";
    sum << "layers_reset=" << rep.n_reset_layers << "\n";
    if (native) {
        double err = verify_lowering(ir);
        sum << "verify_max_error=" << fmt(err) << "\n";
        if (err >= 1e-9)
            throw VerifyError("lowering verification failed, max error " +
                              fmt(err));
    } else {
        sum << "verify=skipped\n";
    }
    std::cout << "wrote " << paths.file("circuit.txt").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collisional-model simulator for a boundary-driven XXZ chain"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", profile;
    std::optional<long> seed;

    auto* collide = app.add_subcommand("collide", "run the collisional model");
    auto* lindblad = app.add_subcommand("lindblad", "master-equation steady state");
    auto* rectify = app.add_subcommand("rectify", "forward/reverse bias sweep");
    auto* sweep = app.add_subcommand("noise-sweep", "Gaussian noise sweep");
    auto* emit = app.add_subcommand("emit", "emit gate-level circuit");
    emit->add_option("--profile", profile, "timing profile name");

    for (auto* sub : {collide, lindblad, rectify, sweep, emit}) {
        sub->add_option("--config", config_path, "run configuration file")
            ->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "override the config RNG seed");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (config_path.empty())
            throw qsim::ConfigError("--config is required");
        qsim::Config cfg = qsim::Config::parse_file(config_path);
        if (collide->parsed()) return cmd_collide(cfg, out_dir, seed);
        if (lindblad->parsed()) return cmd_lindblad(cfg, out_dir);
        if (rectify->parsed()) return cmd_rectify(cfg, out_dir);
        if (sweep->parsed()) return cmd_noise_sweep(cfg, out_dir, seed);
        if (emit->parsed()) return cmd_emit(cfg, out_dir, profile);
    } catch (const qsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const VerifyError& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return kExitVerify;
    } catch (const PhysicsError& e) {
        std::cerr << "physics invariant violation: " << e.what() << "\n";
        return kExitPhysics;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "physics invariant violation: " << e.what() << "\n";
        return kExitPhysics;
    }
    return 0;
}
