// types.hpp — Shared scalar/matrix aliases and small dense-algebra helpers

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace fvk {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Matrix2 = Eigen::Matrix2cd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr Complex kImag{0.0, 1.0};

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

// Deterministic uniform deviates: identical sequences for identical seeds on
// every platform (std::uniform_real_distribution is implementation-defined).
class UniformRng {
public:
    explicit UniformRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

    // uniform in [0, 1)
    double next() {
        state_ ^= state_ << 13;
        state_ ^= state_ >> 7;
        state_ ^= state_ << 17;
        return static_cast<double>(state_ >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }

    int uniform_int(int n) { return static_cast<int>(next() * n) % n; }

private:
    std::uint64_t state_;
};

}  // namespace fvk
