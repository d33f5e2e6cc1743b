#pragma once

#include "qsim/collision.hpp"
#include "qsim/model.hpp"

#include <string>
#include <vector>

namespace qsim {

enum class GateKind { RZ, SX, CNOT, ISWAP_POW, BOND_EVOLVE, MEASURE, RESET, X };

struct Gate {
    GateKind kind;
    std::vector<int> qubits;   // CNOT: {control, target}
    std::vector<double> params;  // RZ: {angle}; ISWAP_POW: {theta};
                                 // BOND_EVOLVE: {bond index, dt}
};

using Layer = std::vector<Gate>;

struct GateIR {
    int n_qubits = 0;
    std::vector<Layer> layers;
    ChainSpec spec;  // needed to give BOND_EVOLVE gates a matrix

    // Unitary stretches between reset blocks, with the exact unitary each
    // one must reproduce. trotter_only marks the Trotter part of a
    // collision (the unitary building block for timing).
    struct Segment {
        int first_layer = 0;
        int last_layer = 0;  // inclusive
        Mat exact;
        bool trotter_only = false;
    };
    std::vector<Segment> segments;
};

struct TimingModel {
    std::string name;
    double t_1q_ns = 0;
    double t_2q_ns = 0;
    double t_meas_ns = 0;
    double t_reset_ns = 0;
    bool rz_free = false;
    double T1_us = 0;
    double T2_us = 0;

    void validate() const;
    static TimingModel manila();
    static TimingModel ionq_harmony();
};

struct DurationReport {
    double total_ns = 0;
    double per_collision_ns = 0;
    double unitary_block_ns = 0;  // Trotter segment of one collision
    double meas_reset_ns = 0;     // reset block of one collision
    double coherence_ratio = 0;   // total / T2
    int n_2q_layers = 0;
    int n_1q_layers = 0;  // layers containing SX or X
    int n_rz_layers = 0;
    int n_meas_layers = 0;
    int n_reset_layers = 0;
};

// Angles for the fixed 12-layer {RZ, SX, CNOT} template realizing any
// magnetization-preserving two-qubit unitary up to global phase.
struct TwoQubitLowering {
    double l1_q0, l1_q1;  // leading RZ layer
    double l4;            // RZ between the first SX pair
    double l6_q0, l6_q1;  // RZ layer before the middle CNOT
    double l9;            // RZ between the second SX pair
    double l12_q0, l12_q1;  // trailing RZ layer
};

// Decompose U = phase * (RZ(g0) x RZ(g1)) XY(eta, mu) (RZ(b0) x RZ(b1))
// with XY(eta, mu) = exp(-i (eta (XX+YY)/2 + mu ZZ)), then fold into the
// template. Throws if U does not preserve magnetization.
TwoQubitLowering lower_two_qubit(const Mat& u);

// Gate matrix on the gate's own qubits (2x2 or 4x4); spec supplies the
// bond Hamiltonians.
Mat gate_matrix(const Gate& g, const ChainSpec& spec);

GateIR emit_collisions(const ChainSpec& spec, const BathSpec& baths,
                       const CollisionParams& params, int n_collisions,
                       bool native);

// Max phase-invariant Frobenius error over all recorded segments.
double verify_lowering(const GateIR& ir);

DurationReport estimate_duration(const GateIR& ir, const TimingModel& timing);

std::string serialize(const GateIR& ir);

}  // namespace qsim
