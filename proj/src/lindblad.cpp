#include "qsim/lindblad.hpp"

#include <cmath>
#include <stdexcept>

namespace qsim {

Mat me_rhs(const ChainSpec& spec, const BathSpec& baths, const Mat& rho) {
    spec.validate();
    Mat H = full_hamiltonian(spec);
    auto layout = QubitLayout::plain(spec.L);
    Mat out = cplx(0, -1) * (H * rho - rho * H);
    out += dissipator_apply(baths, rho, Side::Left, layout);
    out += dissipator_apply(baths, rho, Side::Right, layout);
    return out;
}

Mat liouvillian(const ChainSpec& spec, const BathSpec& baths) {
    spec.validate();
    int L = spec.L;
    Eigen::Index d = Eigen::Index(1) << L;
    Mat I = Mat::Identity(d, d);
    Mat H = full_hamiltonian(spec);
    Mat Lsup = cplx(0, -1) * (kron(I, H) - kron(H.transpose(), I));
    const std::pair<int, double> sites[] = {{0, baths.lambda_1},
                                            {L - 1, baths.lambda_L}};
    for (auto [site, lam] : sites) {
        Mat sp = embed(sigma_plus(), {site}, L);
        Mat sm = embed(sigma_minus(), {site}, L);
        const std::pair<const Mat*, double> jumps[] = {{&sp, lam}, {&sm, 1 - lam}};
        for (auto [A, w] : jumps) {
            Mat Ad = A->adjoint();
            Mat AdA = Ad * (*A);
            Lsup += baths.gamma * w *
                    (kron(A->conjugate(), *A) -
                     0.5 * (kron(I, AdA) + kron(AdA.transpose(), I)));
        }
    }
    return Lsup;
}

MESolution evolve(const ChainSpec& spec, const BathSpec& baths, const Mat& rho0,
                  double t_end, double step, int record_every) {
    if (step <= 0) throw std::invalid_argument("evolve: step must be > 0");
    if (record_every < 1)
        throw std::invalid_argument("evolve: record_every must be >= 1");
    MESolution sol;
    Mat rho = rho0;
    int n_steps = int(std::lround(t_end / step));
    sol.times.push_back(0);
    sol.states.push_back(rho);
    for (int k = 1; k <= n_steps; ++k) {
        Mat k1 = me_rhs(spec, baths, rho);
        Mat k2 = me_rhs(spec, baths, rho + 0.5 * step * k1);
        Mat k3 = me_rhs(spec, baths, rho + 0.5 * step * k2);
        Mat k4 = me_rhs(spec, baths, rho + step * k3);
        rho += (step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
        double drift = std::abs(rho.trace() - cplx(1, 0));
        if (drift > 1e-9)
            throw std::runtime_error("evolve: trace drift " + std::to_string(drift) +
                                     " exceeds 1e-9 at step size " +
                                     std::to_string(step));
        rho /= rho.trace();
        if (k % record_every == 0 || k == n_steps) {
            sol.times.push_back(k * step);
            sol.states.push_back(rho);
        }
    }
    sol.ness = rho;
    return sol;
}

Mat ness_direct(const ChainSpec& spec, const BathSpec& baths) {
    Mat Lsup = liouvillian(spec, baths);
    Eigen::BDCSVD<Mat> svd(Lsup, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index last = sv.size() - 1;
    if (last >= 1 && sv(last - 1) < 1e-8)
        throw std::runtime_error(
            "ness_direct: degenerate null space (second singular value " +
            std::to_string(sv(last - 1)) + ")");
    Vec v = svd.matrixV().col(last);
    Eigen::Index d = Eigen::Index(1) << spec.L;
    Mat rho = Eigen::Map<const Mat>(v.data(), d, d);  // column unstacking
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace();
    return rho;
}

double gap_estimate(const ChainSpec& spec, const BathSpec& baths) {
    Mat Lsup = liouvillian(spec, baths);
    Eigen::ComplexEigenSolver<Mat> es(Lsup, false);
    double max_re = -1e300;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        cplx ev = es.eigenvalues()(i);
        if (std::abs(ev) < 1e-9) continue;  // stationary mode
        max_re = std::max(max_re, ev.real());
    }
    return -max_re;
}

}  // namespace qsim
