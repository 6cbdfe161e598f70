#include "fvk/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace fvk::fock {

namespace {

Matrix identity(long dim) { return Matrix::Identity(dim, dim); }

// occupation of mode k in basis state `idx`, mode 0 leftmost
int fermi_occupation(long idx, int num_modes, int k) {
    return static_cast<int>((idx >> (num_modes - k - 1)) & 1);
}

}  // namespace

std::vector<Matrix> fermion_annihilation_ops(int num_modes) {
    if (num_modes < 1 || num_modes > 12)
        throw std::invalid_argument("fermion_annihilation_ops: num_modes must be in [1, 12]");
    Matrix sz(2, 2), sm(2, 2), id2 = identity(2);
    sz << 1, 0, 0, -1;
    sm << 0, 1, 0, 0;  // annihilation in the local basis {|0>, |1>}
    std::vector<Matrix> ops;
    ops.reserve(num_modes);
    for (int k = 0; k < num_modes; ++k) {
        Matrix op = Matrix::Identity(1, 1);
        for (int j = 0; j < num_modes; ++j) {
            if (j < k)
                op = kron(op, sz);
            else if (j == k)
                op = kron(op, sm);
            else
                op = kron(op, id2);
        }
        ops.push_back(std::move(op));
    }
    return ops;
}

std::vector<Matrix> boson_annihilation_ops(int num_modes, int n_max) {
    if (num_modes < 1) throw std::invalid_argument("boson_annihilation_ops: need num_modes >= 1");
    if (n_max < 1) throw std::invalid_argument("boson_annihilation_ops: need n_max >= 1");
    long dim = 1;
    for (int k = 0; k < num_modes; ++k) {
        dim *= n_max + 1;
        if (dim > 4096)
            throw std::invalid_argument("boson_annihilation_ops: (n_max+1)^M exceeds 4096");
    }
    const int levels = n_max + 1;
    Matrix a = Matrix::Zero(levels, levels);
    for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    const Matrix idl = identity(levels);
    std::vector<Matrix> ops;
    ops.reserve(num_modes);
    for (int k = 0; k < num_modes; ++k) {
        Matrix op = Matrix::Identity(1, 1);
        for (int j = 0; j < num_modes; ++j) op = kron(op, j == k ? a : idl);
        ops.push_back(std::move(op));
    }
    return ops;
}

std::vector<Matrix> annihilation_ops(const BathSpec& bath) {
    bath.validate();
    if (bath.statistics == Statistics::Fermi) return fermion_annihilation_ops(bath.num_modes);
    return boson_annihilation_ops(bath.num_modes, bath.boson_truncation);
}

Matrix bath_hamiltonian(const BathSpec& bath) {
    bath.validate();
    const long dim = bath.dimension();
    Matrix h = Matrix::Zero(dim, dim);
    if (bath.statistics == Statistics::Fermi) {
        for (long idx = 0; idx < dim; ++idx) {
            double e = 0.0;
            for (int k = 0; k < bath.num_modes; ++k)
                e += bath.energies[k] * fermi_occupation(idx, bath.num_modes, k);
            h(idx, idx) = e;
        }
    } else {
        const int levels = bath.boson_truncation + 1;
        for (long idx = 0; idx < dim; ++idx) {
            double e = 0.0;
            long rest = idx;
            for (int k = bath.num_modes - 1; k >= 0; --k) {
                e += bath.energies[k] * static_cast<double>(rest % levels);
                rest /= levels;
            }
            h(idx, idx) = e;
        }
    }
    return h;
}

Matrix thermal_state(const BathSpec& bath) {
    const Matrix h = bath_hamiltonian(bath);
    const long dim = h.rows();
    Eigen::VectorXd weights(dim);
    for (long i = 0; i < dim; ++i) weights[i] = std::exp(-bath.beta * h(i, i).real());
    weights /= weights.sum();
    Matrix rho = Matrix::Zero(dim, dim);
    for (long i = 0; i < dim; ++i) rho(i, i) = weights[i];
    return rho;
}

Matrix quadrature(const BathSpec& bath, int mode, double t) {
    bath.validate();
    if (mode < 0 || mode >= bath.num_modes)
        throw std::out_of_range("quadrature: mode index out of range");
    const auto ops = annihilation_ops(bath);
    const double w = bath.energies[mode];
    const Complex phase = std::exp(Complex(0.0, -w * t));
    return phase * ops[mode] + std::conj(phase) * ops[mode].adjoint().eval();
}

Matrix interaction_operator(const BathSpec& bath) {
    bath.validate();
    const auto ops = annihilation_ops(bath);
    const long dim = bath.dimension();
    std::vector<Matrix> q;
    q.reserve(bath.num_modes);
    for (int k = 0; k < bath.num_modes; ++k)
        q.push_back(ops[k] + ops[k].adjoint().eval());
    Matrix b = Matrix::Zero(dim, dim);
    for (int k = 0; k < bath.num_modes; ++k)
        for (int l = k + 1; l < bath.num_modes; ++l)
            if (bath.coupling(k, l) != 0.0) b += bath.coupling(k, l) * (q[k] * q[l]);
    const Complex scale = bath.statistics == Statistics::Fermi ? 2.0 * kImag : Complex(2.0);
    return scale * b;
}

Matrix propagator(const Matrix& hamiltonian, double dt) {
    const double scale = std::max(1.0, max_abs(hamiltonian));
    if (max_abs(Matrix(hamiltonian - hamiltonian.adjoint())) > 1e-12 * scale)
        throw std::invalid_argument("propagator: Hamiltonian must be Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(hamiltonian);
    const auto& w = es.eigenvalues();
    const Matrix& v = es.eigenvectors();
    Eigen::VectorXcd phases(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) phases[i] = std::exp(Complex(0.0, -w[i] * dt));
    return v * phases.asDiagonal() * v.adjoint();
}

}  // namespace fvk::fock
