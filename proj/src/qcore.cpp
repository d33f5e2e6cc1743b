#include "qsim/qcore.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qsim {

QubitLayout QubitLayout::chain(int L) {
    QubitLayout lay;
    lay.n_total = L + 2;
    lay.ancilla_left = 0;
    lay.ancilla_right = L + 1;
    lay.system.resize(L);
    std::iota(lay.system.begin(), lay.system.end(), 1);
    return lay;
}

QubitLayout QubitLayout::plain(int n) {
    QubitLayout lay;
    lay.n_total = n;
    lay.system.resize(n);
    std::iota(lay.system.begin(), lay.system.end(), 0);
    return lay;
}

Mat pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Mat pauli_y() {
    Mat m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}

Mat pauli_z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Mat identity2() { return Mat::Identity(2, 2); }

Mat sigma_plus() {
    Mat m = Mat::Zero(2, 2);
    m(0, 1) = 1;
    return m;
}

Mat sigma_minus() {
    Mat m = Mat::Zero(2, 2);
    m(1, 0) = 1;
    return m;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Mat basis_state(const std::vector<int>& bits) {
    Eigen::Index idx = 0;
    for (int b : bits) idx = idx * 2 + b;
    Eigen::Index d = Eigen::Index(1) << bits.size();
    Mat rho = Mat::Zero(d, d);
    rho(idx, idx) = 1;
    return rho;
}

namespace {

int qubit_count(const Mat& op) {
    int k = 0;
    while ((Eigen::Index(1) << k) < op.rows()) ++k;
    if ((Eigen::Index(1) << k) != op.rows() || op.rows() != op.cols())
        throw std::invalid_argument("operator dimension is not a power of 2");
    return k;
}

}  // namespace

Mat embed(const Mat& op, const std::vector<int>& slots, int n_total) {
    int k = qubit_count(op);
    if (int(slots.size()) != k)
        throw std::invalid_argument("embed: slot count does not match operator dimension");
    for (int s : slots)
        if (s < 0 || s >= n_total) throw std::out_of_range("embed: slot out of range");

    Eigen::Index d = Eigen::Index(1) << n_total;
    Eigen::Index dk = Eigen::Index(1) << k;
    // bit position of slot s in the full index (slot 0 = msb)
    auto bit = [&](int s) { return n_total - 1 - s; };

    std::vector<Eigen::Index> sel_mask(dk, 0);  // op index -> scattered full bits
    for (Eigen::Index i = 0; i < dk; ++i) {
        Eigen::Index m = 0;
        for (int q = 0; q < k; ++q)
            if (i >> (k - 1 - q) & 1) m |= Eigen::Index(1) << bit(slots[q]);
        sel_mask[i] = m;
    }
    Eigen::Index slot_bits = 0;
    for (int s : slots) slot_bits |= Eigen::Index(1) << bit(s);

    Mat out = Mat::Zero(d, d);
    for (Eigen::Index rest = 0; rest < d; ++rest) {
        if (rest & slot_bits) continue;
        for (Eigen::Index i = 0; i < dk; ++i)
            for (Eigen::Index j = 0; j < dk; ++j)
                out(rest | sel_mask[i], rest | sel_mask[j]) = op(i, j);
    }
    return out;
}

Mat partial_trace(const Mat& rho, const std::vector<int>& discard, int n_total) {
    if (int(discard.size()) >= n_total)
        throw std::invalid_argument("partial_trace: cannot discard all qubits");
    for (int s : discard)
        if (s < 0 || s >= n_total) throw std::out_of_range("partial_trace: slot out of range");

    auto bit = [&](int s) { return n_total - 1 - s; };
    Eigen::Index disc_bits = 0;
    for (int s : discard) disc_bits |= Eigen::Index(1) << bit(s);

    std::vector<int> keep;
    for (int s = 0; s < n_total; ++s)
        if (!(disc_bits >> bit(s) & 1)) keep.push_back(s);

    int nk = int(keep.size());
    Eigen::Index dk = Eigen::Index(1) << nk;
    std::vector<Eigen::Index> keep_mask(dk, 0);
    for (Eigen::Index i = 0; i < dk; ++i) {
        Eigen::Index m = 0;
        for (int q = 0; q < nk; ++q)
            if (i >> (nk - 1 - q) & 1) m |= Eigen::Index(1) << bit(keep[q]);
        keep_mask[i] = m;
    }

    int nd = n_total - nk;
    Eigen::Index dd = Eigen::Index(1) << nd;
    std::vector<int> dslots(discard);
    std::vector<Eigen::Index> disc_mask(dd, 0);
    for (Eigen::Index i = 0; i < dd; ++i) {
        Eigen::Index m = 0;
        for (int q = 0; q < nd; ++q)
            if (i >> (nd - 1 - q) & 1) m |= Eigen::Index(1) << bit(dslots[q]);
        disc_mask[i] = m;
    }

    Mat out = Mat::Zero(dk, dk);
    for (Eigen::Index i = 0; i < dk; ++i)
        for (Eigen::Index j = 0; j < dk; ++j) {
            cplx acc = 0;
            for (Eigen::Index t = 0; t < dd; ++t)
                acc += rho(keep_mask[i] | disc_mask[t], keep_mask[j] | disc_mask[t]);
            out(i, j) = acc;
        }
    return out;
}

Mat herm_expm(const Mat& h, double t) {
    if (!is_hermitian(h, 1e-10))
        throw std::invalid_argument("herm_expm: input is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Vec phases = (cplx(0, -t) * es.eigenvalues().cast<cplx>().array()).exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double frob_distance(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("frob_distance: dimension mismatch");
    return (a - b).norm();
}

bool is_unitary(const Mat& u, double tol) {
    return (u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).norm() < tol;
}

bool is_hermitian(const Mat& a, double tol) {
    return (a - a.adjoint()).norm() < tol;
}

bool is_density_matrix(const Mat& rho, double herm_tol, double trace_tol, double psd_tol) {
    if (!is_hermitian(rho, herm_tol)) return false;
    if (std::abs(rho.trace() - cplx(1, 0)) > trace_tol) return false;
    Eigen::SelfAdjointEigenSolver<Mat> es(rho);
    return es.eigenvalues().minCoeff() > -psd_tol;
}

}  // namespace qsim
