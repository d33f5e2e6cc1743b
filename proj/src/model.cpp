#include "qsim/model.hpp"

#include <stdexcept>

namespace qsim {

void ChainSpec::validate() const {
    if (L < 2) throw std::invalid_argument("ChainSpec: L must be >= 2");
    if (int(h.size()) != L)
        throw std::invalid_argument("ChainSpec: h must have exactly L entries");
}

BathSpec::BathSpec(double gamma_, double lambda_1_, double lambda_L_)
    : gamma(gamma_), lambda_1(lambda_1_), lambda_L(lambda_L_) {
    if (gamma < 0) throw std::invalid_argument("BathSpec: gamma must be >= 0");
    if (lambda_1 < 0 || lambda_1 > 1 || lambda_L < 0 || lambda_L > 1)
        throw std::invalid_argument("BathSpec: lambda must be in [0, 1]");
    reset_left = Mat::Zero(2, 2);
    reset_left(0, 0) = lambda_1;
    reset_left(1, 1) = 1 - lambda_1;
    reset_right = Mat::Zero(2, 2);
    reset_right(0, 0) = lambda_L;
    reset_right(1, 1) = 1 - lambda_L;
}

std::vector<std::pair<double, double>> bond_field_shares(const ChainSpec& spec) {
    spec.validate();
    int nb = spec.L - 1;
    std::vector<std::pair<double, double>> shares(nb, {0.0, 0.0});
    std::vector<int> order;
    for (int l = 1; l <= nb; ++l)
        if (l % 2 == 0) order.push_back(l);
    for (int l = 1; l <= nb; ++l)
        if (l % 2 == 1) order.push_back(l);
    std::vector<bool> assigned(spec.L + 1, false);
    for (int l : order) {
        if (!assigned[l]) {
            shares[l - 1].first = spec.h[l - 1];
            assigned[l] = true;
        }
        if (!assigned[l + 1]) {
            shares[l - 1].second = spec.h[l];
            assigned[l + 1] = true;
        }
    }
    return shares;
}

namespace {

Mat bond_matrix(double J, double Delta, double ha, double hb) {
    Mat X = pauli_x(), Y = pauli_y(), Z = pauli_z(), I = identity2();
    return J * (kron(X, X) + kron(Y, Y)) + Delta * kron(Z, Z) + ha * kron(Z, I) +
           hb * kron(I, Z);
}

}  // namespace

Mat bond_hamiltonian(const ChainSpec& spec, int l) {
    spec.validate();
    if (l < 1 || l > spec.L - 1)
        throw std::out_of_range("bond_hamiltonian: bond index out of range");
    auto shares = bond_field_shares(spec);
    auto [ha, hb] = shares[l - 1];
    return bond_matrix(spec.J, spec.Delta, ha, hb);
}

Mat full_hamiltonian(const ChainSpec& spec) {
    spec.validate();
    Eigen::Index d = Eigen::Index(1) << spec.L;
    Mat H = Mat::Zero(d, d);
    for (int l = 1; l <= spec.L - 1; ++l)
        H += embed(bond_hamiltonian(spec, l), {l - 1, l}, spec.L);
    return H;
}

Mat current_operator(const ChainSpec& spec, int l) {
    spec.validate();
    if (l < 1 || l > spec.L - 1)
        throw std::out_of_range("current_operator: bond index out of range");
    Mat X = pauli_x(), Y = pauli_y();
    Mat op = 2.0 * spec.J * (kron(X, Y) - kron(Y, X));
    return embed(op, {l - 1, l}, spec.L);
}

Mat dissipator_apply(const BathSpec& bath, const Mat& rho, Side side,
                     const QubitLayout& layout) {
    int n = layout.n_total;
    int slot = (side == Side::Left) ? layout.system.front() : layout.system.back();
    double lam = (side == Side::Left) ? bath.lambda_1 : bath.lambda_L;
    Mat sp = embed(sigma_plus(), {slot}, n);
    Mat sm = embed(sigma_minus(), {slot}, n);
    Mat out = Mat::Zero(rho.rows(), rho.cols());
    const std::pair<const Mat*, double> terms[] = {{&sp, lam}, {&sm, 1 - lam}};
    for (auto [A, w] : terms) {
        Mat Ad = A->adjoint();
        Mat AdA = Ad * (*A);
        out += bath.gamma * w *
               ((*A) * rho * Ad - 0.5 * (AdA * rho + rho * AdA));
    }
    return out;
}

double magnetization(const Mat& rho, int site, const QubitLayout& layout) {
    if (site < 1 || site > int(layout.system.size()))
        throw std::out_of_range("magnetization: site out of range");
    Mat z = embed(pauli_z(), {layout.system[site - 1]}, layout.n_total);
    return (z * rho).trace().real();
}

std::vector<double> rectifier_field(double h, int L, BiasDirection) {
    if (L % 2 != 0)
        throw std::invalid_argument("rectifier_field: L must be even");
    std::vector<double> f(L);
    for (int i = 0; i < L; ++i) f[i] = (i < L / 2) ? h : -h;
    return f;
}

std::pair<double, double> bias_lambdas(BiasDirection bias) {
    return bias == BiasDirection::Forward ? std::make_pair(0.0, 1.0)
                                          : std::make_pair(1.0, 0.0);
}

}  // namespace qsim
