#pragma once

#include "qsim/model.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace qsim {

struct CollisionParams {
    double tau = 0.0;
    double dt = 0.0;
    int n_collisions = 0;
    std::optional<double> theta;  // default derived from (gamma, tau)

    void validate() const;
    int steps_per_collision() const;  // tau / dt, checked integer
};

struct NoiseSpec {
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

struct TrajectoryRecord {
    std::vector<double> times;                   // m * tau
    std::vector<std::vector<double>> mags;       // per collision, L entries
    std::vector<std::vector<double>> currents;   // per collision, L-1 entries
    Mat final_rho;                               // system marginal
};

// Deterministic Gaussian stream: Box-Muller over mt19937_64, one value per
// call, no caching, so the draw count is explicit and platform-stable.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : eng_(seed) {}
    double normal(double mean, double stddev);

private:
    std::mt19937_64 eng_;
};

double theta_from_gamma_tau(double gamma, double tau);

// exp(-i theta (XX + YY) / 2): identity on the aligned corner states, an
// X rotation on the single-excitation block.
Mat partial_iswap(double theta);

// One symmetric step: even bonds half, odd bonds full, even bonds half.
Mat trotter_step(const ChainSpec& spec, double dt);

// [U(dt)]^n_steps with adjacent even half-steps merged.
Mat trotter_unitary(const ChainSpec& spec, double dt, int n_steps);

// Per collision: reset ancillae, evolve the system by trotter_unitary,
// apply partial iSWAPs on both boundary pairs, record observables on the
// system marginal. rho0 is an L-qubit density matrix.
TrajectoryRecord run_collisional(const ChainSpec& spec, const BathSpec& baths,
                                 const CollisionParams& params, const Mat& rho0,
                                 const NoiseSpec* noise = nullptr);

// Smallest 1-based m >= window with |j(m) - mean(window)| < tol and window
// scatter below 100 tol; nullopt if never reached.
std::optional<int> detect_steady(const std::vector<double>& j1, int window,
                                 double tol);

// Default initial state: first half up, second half down.
Mat default_initial_state(int L);

}  // namespace qsim
