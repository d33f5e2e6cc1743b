#include "qsim/collision.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsim {

void CollisionParams::validate() const {
    if (tau <= 0) throw std::invalid_argument("CollisionParams: tau must be > 0");
    if (dt <= 0) throw std::invalid_argument("CollisionParams: dt must be > 0");
    if (n_collisions < 0)
        throw std::invalid_argument("CollisionParams: n_collisions must be >= 0");
    double ratio = tau / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw std::invalid_argument("CollisionParams: tau/dt must be an integer");
    if (theta && (*theta < 0 || *theta > std::numbers::pi / 2))
        throw std::invalid_argument("CollisionParams: theta must be in [0, pi/2]");
}

int CollisionParams::steps_per_collision() const {
    return int(std::lround(tau / dt));
}

double GaussianRng::normal(double mean, double stddev) {
    auto uniform = [this] {
        // 53-bit mantissa in (0, 1]
        return (double(eng_() >> 11) + 1.0) * 0x1p-53;
    };
    double u1 = uniform();
    double u2 = uniform();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) *
                      std::cos(2.0 * std::numbers::pi * u2);
}

double theta_from_gamma_tau(double gamma, double tau) {
    if (gamma < 0 || tau < 0)
        throw std::invalid_argument("theta_from_gamma_tau: gamma, tau must be >= 0");
    return std::asin(std::sqrt(1.0 - std::exp(-gamma * tau)));
}

Mat partial_iswap(double theta) {
    Mat X = pauli_x(), Y = pauli_y();
    Mat gen = 0.5 * (kron(X, X) + kron(Y, Y));
    return herm_expm(gen, theta);
}

namespace {

struct BondGroups {
    std::vector<int> even;  // 1-based bond indices, applied first as half-steps
    std::vector<int> odd;
};

BondGroups bond_groups(int L) {
    BondGroups g;
    for (int l = 1; l <= L - 1; ++l)
        (l % 2 == 0 ? g.even : g.odd).push_back(l);
    return g;
}

Mat group_unitary(const ChainSpec& spec, const std::vector<int>& bonds, double t) {
    Eigen::Index d = Eigen::Index(1) << spec.L;
    Mat U = Mat::Identity(d, d);
    for (int l : bonds)
        U = embed(herm_expm(bond_hamiltonian(spec, l), t), {l - 1, l}, spec.L) * U;
    return U;
}

}  // namespace

Mat trotter_step(const ChainSpec& spec, double dt) {
    auto g = bond_groups(spec.L);
    Mat Eh = group_unitary(spec, g.even, dt / 2);
    Mat O = group_unitary(spec, g.odd, dt);
    return Eh * O * Eh;
}

Mat trotter_unitary(const ChainSpec& spec, double dt, int n_steps) {
    if (n_steps < 1)
        throw std::invalid_argument("trotter_unitary: n_steps must be >= 1");
    auto g = bond_groups(spec.L);
    Mat Eh = group_unitary(spec, g.even, dt / 2);
    Mat Ef = group_unitary(spec, g.even, dt);
    Mat O = group_unitary(spec, g.odd, dt);
    // Eh O (Ef O)^{n-1} Eh: interior half-steps merged
    Mat U = O * Eh;
    for (int k = 1; k < n_steps; ++k) U = O * Ef * U;
    return Eh * U;
}

Mat default_initial_state(int L) {
    std::vector<int> bits(L, 1);
    for (int i = 0; i < (L + 1) / 2; ++i) bits[i] = 0;
    return basis_state(bits);
}

TrajectoryRecord run_collisional(const ChainSpec& spec, const BathSpec& baths,
                                 const CollisionParams& params, const Mat& rho0,
                                 const NoiseSpec* noise) {
    spec.validate();
    params.validate();
    int L = spec.L;
    Eigen::Index dsys = Eigen::Index(1) << L;
    if (rho0.rows() != dsys || rho0.cols() != dsys)
        throw std::invalid_argument("run_collisional: rho0 dimension mismatch");

    auto layout = QubitLayout::chain(L);
    int n = layout.n_total;
    int nsteps = params.steps_per_collision();
    double theta0 = params.theta ? *params.theta
                                 : theta_from_gamma_tau(baths.gamma, params.tau);

    bool noisy = noise && noise->sigma > 0;
    GaussianRng rng(noise ? noise->seed : 0);
    double sigma = noise ? noise->sigma : 0.0;

    std::vector<int> sys_slots(layout.system);
    Mat Usys_clean;
    if (!noisy) {
        Mat Utau = trotter_unitary(spec, params.dt, nsteps);
        Usys_clean = embed(Utau, sys_slots, n);
    }
    Mat Usw_clean;
    if (!noisy) {
        Mat sw = partial_iswap(theta0);
        Usw_clean = embed(sw, {layout.system.back(), layout.ancilla_right}, n) *
                    embed(sw, {layout.ancilla_left, layout.system.front()}, n);
    }

    std::vector<Mat> jops, mops;
    for (int l = 1; l <= L - 1; ++l)
        jops.push_back(embed(current_operator(spec, l), sys_slots, n));
    for (int s = 1; s <= L; ++s)
        mops.push_back(embed(pauli_z(), {layout.system[s - 1]}, n));

    TrajectoryRecord rec;
    Mat rho = kron(kron(baths.reset_left, rho0), baths.reset_right);
    for (int m = 1; m <= params.n_collisions; ++m) {
        Mat reset_l = baths.reset_left;
        Mat reset_r = baths.reset_right;
        Mat Usys, Usw;
        if (noisy) {
            // draw order: (J', Delta') per Trotter step, then lambda_1,
            // lambda_L, one shared theta per collision
            Mat U = Mat::Identity(dsys, dsys);
            for (int k = 0; k < nsteps; ++k) {
                ChainSpec pert = spec;
                pert.J = spec.J + rng.normal(0, sigma);
                pert.Delta = spec.Delta + rng.normal(0, sigma);
                U = trotter_step(pert, params.dt) * U;
            }
            Usys = embed(U, sys_slots, n);
            double l1 = std::clamp(
                baths.lambda_1 - std::abs(rng.normal(0, sigma)), 0.0, 1.0);
            double lL = std::clamp(
                baths.lambda_L + std::abs(rng.normal(0, sigma)), 0.0, 1.0);
            reset_l = Mat::Zero(2, 2);
            reset_l(0, 0) = l1;
            reset_l(1, 1) = 1 - l1;
            reset_r = Mat::Zero(2, 2);
            reset_r(0, 0) = lL;
            reset_r(1, 1) = 1 - lL;
            double th = theta0 + rng.normal(0, sigma);
            Mat sw = partial_iswap(th);
            Usw = embed(sw, {layout.system.back(), layout.ancilla_right}, n) *
                  embed(sw, {layout.ancilla_left, layout.system.front()}, n);
        }
        const Mat& Us = noisy ? Usys : Usys_clean;
        const Mat& Uw = noisy ? Usw : Usw_clean;

        Mat rho_s = partial_trace(rho, {layout.ancilla_left, layout.ancilla_right}, n);
        rho = kron(kron(reset_l, rho_s), reset_r);
        rho = Us * rho * Us.adjoint();
        rho = Uw * rho * Uw.adjoint();

        std::vector<double> mg(L), cu(L - 1);
        for (int s = 0; s < L; ++s) mg[s] = (mops[s] * rho).trace().real();
        for (int l = 0; l < L - 1; ++l) cu[l] = (jops[l] * rho).trace().real();
        rec.times.push_back(m * params.tau);
        rec.mags.push_back(std::move(mg));
        rec.currents.push_back(std::move(cu));
    }
    rec.final_rho =
        partial_trace(rho, {layout.ancilla_left, layout.ancilla_right}, n);
    return rec;
}

std::optional<int> detect_steady(const std::vector<double>& j1, int window,
                                 double tol) {
    if (window < 2) throw std::invalid_argument("detect_steady: window must be >= 2");
    for (int m = window; m <= int(j1.size()); ++m) {
        double mean = 0;
        for (int i = m - window; i < m; ++i) mean += j1[i];
        mean /= window;
        double scatter = 0;
        for (int i = m - window; i < m; ++i)
            scatter = std::max(scatter, std::abs(j1[i] - mean));
        if (std::abs(j1[m - 1] - mean) < tol && scatter < 100 * tol) return m;
    }
    return std::nullopt;
}

}  // namespace qsim
