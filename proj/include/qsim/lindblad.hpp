#pragma once

#include "qsim/model.hpp"

#include <vector>

namespace qsim {

struct MESolution {
    std::vector<double> times;
    std::vector<Mat> states;
    Mat ness;
    double gap = 0.0;  // 0 when not estimated
};

// -i[H, rho] + D_1(rho) + D_L(rho) on the system qubits.
Mat me_rhs(const ChainSpec& spec, const BathSpec& baths, const Mat& rho);

// Vectorized Liouvillian, column-stacking convention:
// vec(A rho B) = (B^T kron A) vec(rho).
Mat liouvillian(const ChainSpec& spec, const BathSpec& baths);

// Classical RK4 with fixed step; snapshots at every record_every-th step.
MESolution evolve(const ChainSpec& spec, const BathSpec& baths, const Mat& rho0,
                  double t_end, double step, int record_every = 1);

// Steady state from the SVD null vector of the Liouvillian; errors out on a
// degenerate null space.
Mat ness_direct(const ChainSpec& spec, const BathSpec& baths);

// Negated largest real part among nonzero Liouvillian eigenvalues.
double gap_estimate(const ChainSpec& spec, const BathSpec& baths);

}  // namespace qsim
