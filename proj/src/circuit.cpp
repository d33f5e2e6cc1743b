#include "qsim/circuit.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace qsim {

namespace {

constexpr double kPi = std::numbers::pi;

Mat rz(double a) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = std::exp(cplx(0, -a / 2));
    m(1, 1) = std::exp(cplx(0, a / 2));
    return m;
}

Mat sx() {
    Mat m(2, 2);
    m << cplx(0.5, 0.5), cplx(0.5, -0.5), cplx(0.5, -0.5), cplx(0.5, 0.5);
    return m;
}

// control = qubit 0 (msb), target = qubit 1
Mat cnot() {
    Mat m = Mat::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return m;
}

Mat xy(double eta, double mu) {
    Mat X = pauli_x(), Y = pauli_y(), Z = pauli_z();
    Mat gen = 0.5 * eta * (kron(X, X) + kron(Y, Y)) + mu * kron(Z, Z);
    return herm_expm(gen, 1.0);
}

struct SectorDecomposition {
    double g0, g1, b0, b1, eta, mu;
};

SectorDecomposition sector_decompose(const Mat& u) {
    if (u.rows() != 4 || !is_unitary(u, 1e-9))
        throw std::invalid_argument("sector_decompose: need a 4x4 unitary");
    double offblock = std::abs(u(0, 1)) + std::abs(u(0, 2)) + std::abs(u(0, 3)) +
                      std::abs(u(1, 0)) + std::abs(u(2, 0)) + std::abs(u(3, 0)) +
                      std::abs(u(1, 3)) + std::abs(u(2, 3)) +
                      std::abs(u(3, 1)) + std::abs(u(3, 2));
    if (offblock > 1e-10)
        throw std::invalid_argument(
            "sector_decompose: unitary does not preserve magnetization");

    cplx u00 = u(0, 0), u11 = u(3, 3);
    cplx c00 = u(1, 1), c01 = u(1, 2), c10 = u(2, 1), c11 = u(2, 2);
    cplx det_c = c00 * c11 - c01 * c10;
    double eta = std::atan2(std::abs(c01), std::abs(c00));

    SectorDecomposition best{};
    double best_err = 1e300;
    for (int k = 0; k < 4; ++k) {
        double phi = std::arg(u00 * u11 * det_c) / 4 + k * kPi / 2;
        for (int j = 0; j < 2; ++j) {
            double mu = std::arg(det_c) / 2 - phi + j * kPi;
            double G = std::arg(u11) - phi + mu;
            double ce = std::cos(eta), se = std::sin(eta);
            cplx strip = std::exp(cplx(0, -(phi + mu)));
            double dpb, dmb;
            if (se < 1e-9) {
                dpb = std::arg(c00 * strip / ce);
                dmb = dpb;
            } else if (ce < 1e-9) {
                dmb = std::arg(c01 * strip / (cplx(0, -1) * se));
                dpb = dmb;
            } else {
                dpb = std::arg(c00 * strip / ce);
                dmb = std::arg(c01 * strip / (cplx(0, -1) * se));
            }
            double dg = (dpb + dmb) / 2, db = (dpb - dmb) / 2;
            SectorDecomposition cand{G - dg, G + dg, -db, db, eta, mu};
            Mat rebuilt = std::exp(cplx(0, phi)) *
                          kron(rz(cand.g0), rz(cand.g1)) * xy(eta, mu) *
                          kron(rz(cand.b0), rz(cand.b1));
            double err = (rebuilt - u).norm();
            if (err < best_err) {
                best_err = err;
                best = cand;
            }
        }
    }
    if (best_err > 1e-10)
        throw std::runtime_error("sector_decompose: residual " +
                                 std::to_string(best_err));
    return best;
}

}  // namespace

TwoQubitLowering lower_two_qubit(const Mat& u) {
    auto d = sector_decompose(u);
    double t1 = 2 * d.mu + kPi / 2;
    double t2 = d.eta - kPi / 2;
    double t3 = kPi / 2 - d.eta;
    TwoQubitLowering low{};
    low.l1_q0 = d.b0;
    low.l1_q1 = d.b1 - kPi / 2;
    low.l4 = t3 + kPi;
    low.l6_q0 = t1;
    low.l6_q1 = kPi;
    low.l9 = t2 + kPi;
    low.l12_q0 = d.g0 - kPi / 2;
    low.l12_q1 = d.g1;
    return low;
}

Mat gate_matrix(const Gate& g, const ChainSpec& spec) {
    switch (g.kind) {
        case GateKind::RZ:
            return rz(g.params.at(0));
        case GateKind::SX:
            return sx();
        case GateKind::X:
            return pauli_x();
        case GateKind::CNOT:
            return cnot();
        case GateKind::ISWAP_POW:
            return partial_iswap(g.params.at(0));
        case GateKind::BOND_EVOLVE: {
            int l = int(std::lround(g.params.at(0)));
            return herm_expm(bond_hamiltonian(spec, l), g.params.at(1));
        }
        case GateKind::MEASURE:
        case GateKind::RESET:
            throw std::invalid_argument("gate_matrix: non-unitary gate");
    }
    throw std::logic_error("gate_matrix: unknown gate kind");
}

void TimingModel::validate() const {
    if (t_1q_ns < 0 || t_2q_ns < 0 || t_meas_ns < 0 || t_reset_ns < 0)
        throw std::invalid_argument("TimingModel: durations must be >= 0");
    if (T2_us > 2 * T1_us)
        throw std::invalid_argument("TimingModel: T2 must be <= 2 T1");
}

TimingModel TimingModel::manila() {
    TimingModel t;
    t.name = "manila";
    t.t_1q_ns = 35.5;
    t.t_2q_ns = 576;
    t.t_meas_ns = 5300;  // measurement and reset combined
    t.t_reset_ns = 0;
    t.rz_free = true;
    t.T1_us = 188.77;
    t.T2_us = 67.3;
    return t;
}

TimingModel TimingModel::ionq_harmony() {
    TimingModel t;
    t.name = "ionq-harmony";
    t.t_1q_ns = 10000;
    t.t_2q_ns = 210000;
    t.t_meas_ns = 100000;
    t.t_reset_ns = 25000;
    t.rz_free = false;
    t.T1_us = 1e7;
    t.T2_us = 2e5;
    return t;
}

namespace {

// Append the 12-layer template for a list of parallel two-qubit blocks.
// Each block is (q0, q1, lowering).
void append_lowered(std::vector<Layer>& layers,
                    const std::vector<std::tuple<int, int, TwoQubitLowering>>& blocks) {
    auto rzg = [](int q, double a) {
        return Gate{GateKind::RZ, {q}, {a}};
    };
    auto sxg = [](int q) { return Gate{GateKind::SX, {q}, {}}; };
    auto cxg = [](int c, int t) { return Gate{GateKind::CNOT, {c, t}, {}}; };
    Layer L1, L2, L3, L4, L5, L6, L7, L8, L9, L10, L11, L12;
    for (const auto& [q0, q1, low] : blocks) {
        L1.push_back(rzg(q0, low.l1_q0));
        L1.push_back(rzg(q1, low.l1_q1));
        L2.push_back(cxg(q1, q0));
        L3.push_back(sxg(q1));
        L4.push_back(rzg(q1, low.l4));
        L5.push_back(sxg(q1));
        L6.push_back(rzg(q0, low.l6_q0));
        L6.push_back(rzg(q1, low.l6_q1));
        L7.push_back(cxg(q0, q1));
        L8.push_back(sxg(q1));
        L9.push_back(rzg(q1, low.l9));
        L10.push_back(sxg(q1));
        L11.push_back(cxg(q1, q0));
        L12.push_back(rzg(q0, low.l12_q0));
        L12.push_back(rzg(q1, low.l12_q1));
    }
    for (auto* l : {&L1, &L2, &L3, &L4, &L5, &L6, &L7, &L8, &L9, &L10, &L11, &L12})
        layers.push_back(std::move(*l));
}

}  // namespace

GateIR emit_collisions(const ChainSpec& spec, const BathSpec& baths,
                       const CollisionParams& params, int n_collisions,
                       bool native) {
    spec.validate();
    params.validate();
    int L = spec.L;
    auto layout = QubitLayout::chain(L);
    int n = layout.n_total;
    double theta = params.theta ? *params.theta
                                : theta_from_gamma_tau(baths.gamma, params.tau);
    int nsteps = params.steps_per_collision();

    for (double lam : {baths.lambda_1, baths.lambda_L})
        if (lam != 0.0 && lam != 1.0)
            throw std::invalid_argument(
                "emit_collisions: circuit reset needs lambda in {0, 1}");

    GateIR ir;
    ir.n_qubits = n;
    ir.spec = spec;

    std::vector<int> even, odd;  // 1-based bonds
    for (int l = 1; l <= L - 1; ++l) (l % 2 == 0 ? even : odd).push_back(l);

    // system site s (1-based) lives on register qubit s
    auto bond_qubits = [&](int l) { return std::pair{l, l + 1}; };

    auto emit_group = [&](const std::vector<int>& bonds, double t) {
        if (bonds.empty()) return;
        if (!native) {
            Layer lay;
            for (int l : bonds)
                lay.push_back(Gate{GateKind::BOND_EVOLVE,
                                   {bond_qubits(l).first, bond_qubits(l).second},
                                   {double(l), t}});
            ir.layers.push_back(std::move(lay));
        } else {
            std::vector<std::tuple<int, int, TwoQubitLowering>> blocks;
            for (int l : bonds) {
                Mat u = herm_expm(bond_hamiltonian(spec, l), t);
                auto [q0, q1] = bond_qubits(l);
                blocks.emplace_back(q0, q1, lower_two_qubit(u));
            }
            append_lowered(ir.layers, blocks);
        }
    };

    Mat trotter_exact = embed(trotter_unitary(spec, params.dt, nsteps),
                              layout.system, n);
    Mat sw = partial_iswap(theta);
    Mat swap_exact =
        embed(sw, {layout.system.back(), layout.ancilla_right}, n) *
        embed(sw, {layout.ancilla_left, layout.system.front()}, n);

    for (int m = 0; m < n_collisions; ++m) {
        ir.layers.push_back({Gate{GateKind::MEASURE, {layout.ancilla_left}, {}},
                             Gate{GateKind::MEASURE, {layout.ancilla_right}, {}}});
        ir.layers.push_back({Gate{GateKind::RESET, {layout.ancilla_left}, {}},
                             Gate{GateKind::RESET, {layout.ancilla_right}, {}}});
        Layer flips;
        if (baths.lambda_1 == 1.0)
            flips.push_back(Gate{GateKind::X, {layout.ancilla_left}, {}});
        if (baths.lambda_L == 1.0)
            flips.push_back(Gate{GateKind::X, {layout.ancilla_right}, {}});
        if (!flips.empty()) ir.layers.push_back(std::move(flips));

        GateIR::Segment trotter_seg;
        trotter_seg.first_layer = int(ir.layers.size());
        trotter_seg.trotter_only = true;
        trotter_seg.exact = trotter_exact;
        emit_group(even, params.dt / 2);
        for (int k = 1; k < nsteps; ++k) {
            emit_group(odd, params.dt);
            emit_group(even, params.dt);
        }
        emit_group(odd, params.dt);
        emit_group(even, params.dt / 2);
        trotter_seg.last_layer = int(ir.layers.size()) - 1;
        ir.segments.push_back(std::move(trotter_seg));

        GateIR::Segment swap_seg;
        swap_seg.first_layer = int(ir.layers.size());
        swap_seg.exact = swap_exact;
        if (theta != 0.0) {
            if (!native) {
                ir.layers.push_back(
                    {Gate{GateKind::ISWAP_POW,
                          {layout.ancilla_left, layout.system.front()},
                          {theta}},
                     Gate{GateKind::ISWAP_POW,
                          {layout.system.back(), layout.ancilla_right},
                          {theta}}});
            } else {
                auto low = lower_two_qubit(sw);
                append_lowered(ir.layers,
                               {{layout.ancilla_left, layout.system.front(), low},
                                {layout.system.back(), layout.ancilla_right, low}});
            }
        }
        swap_seg.last_layer = int(ir.layers.size()) - 1;
        if (swap_seg.last_layer >= swap_seg.first_layer)
            ir.segments.push_back(std::move(swap_seg));
    }
    return ir;
}

double verify_lowering(const GateIR& ir) {
    double worst = 0;
    Eigen::Index d = Eigen::Index(1) << ir.n_qubits;
    for (const auto& seg : ir.segments) {
        Mat prod = Mat::Identity(d, d);
        for (int k = seg.first_layer; k <= seg.last_layer; ++k) {
            for (const Gate& g : ir.layers[k]) {
                if (g.kind == GateKind::MEASURE || g.kind == GateKind::RESET)
                    throw std::invalid_argument(
                        "verify_lowering: non-unitary gate inside a segment");
                prod = embed(gate_matrix(g, ir.spec), g.qubits, ir.n_qubits) * prod;
            }
        }
        cplx overlap = (seg.exact.adjoint() * prod).trace();
        cplx phase = overlap / std::abs(overlap);
        worst = std::max(worst, (prod - phase * seg.exact).norm());
    }
    return worst;
}

namespace {

enum class LayerKind { TwoQ, OneQ, RzOnly, Meas, Reset };

LayerKind classify(const Layer& lay) {
    bool has_rz_only = true;
    for (const Gate& g : lay) {
        switch (g.kind) {
            case GateKind::CNOT:
            case GateKind::ISWAP_POW:
            case GateKind::BOND_EVOLVE:
                return LayerKind::TwoQ;
            case GateKind::MEASURE:
                return LayerKind::Meas;
            case GateKind::RESET:
                return LayerKind::Reset;
            case GateKind::SX:
            case GateKind::X:
                has_rz_only = false;
                break;
            case GateKind::RZ:
                break;
        }
    }
    return has_rz_only ? LayerKind::RzOnly : LayerKind::OneQ;
}

}  // namespace

DurationReport estimate_duration(const GateIR& ir, const TimingModel& timing) {
    timing.validate();
    DurationReport rep;
    auto layer_cost = [&](const Layer& lay) {
        switch (classify(lay)) {
            case LayerKind::TwoQ:
                return timing.t_2q_ns;
            case LayerKind::Meas:
                return timing.t_meas_ns;
            case LayerKind::Reset:
                return timing.t_reset_ns;
            case LayerKind::OneQ:
                return timing.t_1q_ns;
            case LayerKind::RzOnly:
                return timing.rz_free ? 0.0 : timing.t_1q_ns;
        }
        return 0.0;
    };
    for (const auto& lay : ir.layers) {
        rep.total_ns += layer_cost(lay);
        switch (classify(lay)) {
            case LayerKind::TwoQ: ++rep.n_2q_layers; break;
            case LayerKind::OneQ: ++rep.n_1q_layers; break;
            case LayerKind::RzOnly: ++rep.n_rz_layers; break;
            case LayerKind::Meas: ++rep.n_meas_layers; break;
            case LayerKind::Reset: ++rep.n_reset_layers; break;
        }
    }
    rep.meas_reset_ns = timing.t_meas_ns + timing.t_reset_ns;
    for (const auto& seg : ir.segments) {
        if (!seg.trotter_only) continue;
        for (int k = seg.first_layer; k <= seg.last_layer; ++k)
            rep.unitary_block_ns += layer_cost(ir.layers[k]);
        break;  // first collision's Trotter block
    }
    int n_coll = 0;
    for (const auto& seg : ir.segments) n_coll += seg.trotter_only ? 1 : 0;
    rep.per_collision_ns = n_coll ? rep.total_ns / n_coll : 0;
    rep.coherence_ratio = rep.total_ns / (timing.T2_us * 1000.0);
    return rep;
}

std::string serialize(const GateIR& ir) {
    std::string out = "qubits " + std::to_string(ir.n_qubits) + "\n" +
                      "layers " + std::to_string(ir.layers.size()) + "\n";
    char buf[64];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    auto name = [](GateKind k) {
        switch (k) {
            case GateKind::RZ: return "RZ";
            case GateKind::SX: return "SX";
            case GateKind::CNOT: return "CNOT";
            case GateKind::ISWAP_POW: return "ISWAP_POW";
            case GateKind::BOND_EVOLVE: return "BOND_EVOLVE";
            case GateKind::MEASURE: return "MEASURE";
            case GateKind::RESET: return "RESET";
            case GateKind::X: return "X";
        }
        return "?";
    };
    for (size_t k = 0; k < ir.layers.size(); ++k) {
        for (const Gate& g : ir.layers[k]) {
            out += "LAYER " + std::to_string(k) + ": " + name(g.kind);
            if (!g.params.empty()) {
                out += "(";
                for (size_t i = 0; i < g.params.size(); ++i)
                    out += (i ? "," : "") + fmt(g.params[i]);
                out += ")";
            }
            out += " ";
            for (size_t i = 0; i < g.qubits.size(); ++i)
                out += (i ? ",q" : "q") + std::to_string(g.qubits[i]);
            out += "\n";
        }
    }
    return out;
}

}  // namespace qsim
