#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace qsim {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Tensor-slot convention: slot 0 is the most significant bit of the basis
// index, so kron(a, b) puts a on the lower slot. Basis state 0 of a qubit
// is spin up (+1 eigenvector of sigma_z).

struct QubitLayout {
    int n_total = 0;
    int ancilla_left = -1;
    int ancilla_right = -1;
    std::vector<int> system;

    // L system qubits flanked by two ancillae: slots 0, 1..L, L+1.
    static QubitLayout chain(int L);
    // n qubits, no ancillae.
    static QubitLayout plain(int n);
};

Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
Mat identity2();
Mat sigma_plus();   // |up><down|, raises basis 1 to basis 0
Mat sigma_minus();

Mat kron(const Mat& a, const Mat& b);

// Density matrix of the computational basis state with the given bits
// (bit i = slot i; 0 = up).
Mat basis_state(const std::vector<int>& bits);

// op acts on the named slots (slot order = op's own qubit order, op qubit 0
// on slots[0]), identity elsewhere.
Mat embed(const Mat& op, const std::vector<int>& slots, int n_total);

Mat partial_trace(const Mat& rho, const std::vector<int>& discard, int n_total);

// exp(-i h t) for Hermitian h, via eigendecomposition.
Mat herm_expm(const Mat& h, double t);

double frob_distance(const Mat& a, const Mat& b);

bool is_unitary(const Mat& u, double tol = 1e-12);
bool is_hermitian(const Mat& a, double tol = 1e-12);
bool is_density_matrix(const Mat& rho, double herm_tol = 1e-12,
                       double trace_tol = 1e-10, double psd_tol = 1e-10);

}  // namespace qsim
