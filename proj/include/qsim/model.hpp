#pragma once

#include "qsim/qcore.hpp"

#include <utility>
#include <vector>

namespace qsim {

struct ChainSpec {
    int L = 0;
    double J = 1.0;
    double Delta = 0.0;
    std::vector<double> h;  // one entry per site

    void validate() const;  // throws std::invalid_argument
};

struct BathSpec {
    double gamma = 1.0;
    double lambda_1 = 0.0;
    double lambda_L = 0.0;
    Mat reset_left;   // diag(lambda_1, 1 - lambda_1)
    Mat reset_right;

    BathSpec() = default;
    BathSpec(double gamma, double lambda_1, double lambda_L);
};

enum class BiasDirection { Forward, Reverse };
enum class Side { Left, Right };

// Bond l couples sites l and l+1 (1-based, l = 1..L-1). Site fields are
// apportioned to the first bond containing the site in application order
// (even-index bonds first, then odd), so the bond terms sum to H exactly.
Mat bond_hamiltonian(const ChainSpec& spec, int l);

// The per-bond (h_a, h_b) field shares after apportioning, indexed by bond.
std::vector<std::pair<double, double>> bond_field_shares(const ChainSpec& spec);

Mat full_hamiltonian(const ChainSpec& spec);

// 2J (X_l Y_{l+1} - Y_l X_{l+1}) embedded in the L-qubit space.
Mat current_operator(const ChainSpec& spec, int l);

// D_side(rho) for rho on the system qubits only.
Mat dissipator_apply(const BathSpec& bath, const Mat& rho, Side side,
                     const QubitLayout& layout);

double magnetization(const Mat& rho, int site, const QubitLayout& layout);

// Field profile (+h...+h, -h...-h); the same for both biases, the bias
// instead selects the boundary driving pair.
std::vector<double> rectifier_field(double h, int L, BiasDirection bias);

// (lambda_1, lambda_L): Forward -> (0, 1), Reverse -> (1, 0).
std::pair<double, double> bias_lambdas(BiasDirection bias);

}  // namespace qsim
