#include "fvk/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "fvk/fock.hpp"

namespace fvk::dynamics {

namespace {

Matrix2 pauli_z() {
    Matrix2 m;
    m << 1, 0, 0, -1;
    return m;
}

Matrix2 pauli_x() {
    Matrix2 m;
    m << 0, 1, 1, 0;
    return m;
}

constexpr double kPathValue[2] = {1.0, -1.0};  // sigma_z eigenvalue of basis state

}  // namespace

Matrix2 SystemSpec::hamiltonian() const {
    return 0.5 * epsilon * pauli_z() + 0.5 * delta * pauli_x();
}

void SystemSpec::validate() const {
    if (max_abs(Matrix(rho0 - rho0.adjoint())) > 1e-12)
        throw std::invalid_argument("system: rho0 must be Hermitian");
    if (std::abs(rho0.trace() - 1.0) > 1e-10)
        throw std::invalid_argument("system: rho0 must have unit trace");
    Eigen::SelfAdjointEigenSolver<Matrix2> es(rho0);
    if (es.eigenvalues().minCoeff() < -1e-12)
        throw std::invalid_argument("system: rho0 must be positive semidefinite");
}

void TimeGrid::validate() const {
    if (!(tf > t0)) throw std::invalid_argument("grid: tf must exceed t0");
    if (slices < 1) throw std::invalid_argument("grid: need at least one slice");
}

std::vector<double> observable_series(const TrajectorySeries& traj, Observable which) {
    std::vector<double> out;
    out.reserve(traj.rho.size());
    for (const auto& r : traj.rho) {
        switch (which) {
            case Observable::Sz: out.push_back((r * pauli_z()).trace().real()); break;
            case Observable::Sx: out.push_back((r * pauli_x()).trace().real()); break;
            case Observable::Purity: out.push_back((r * r).trace().real()); break;
        }
    }
    return out;
}

double trace_distance(const Matrix2& a, const Matrix2& b) {
    Eigen::SelfAdjointEigenSolver<Matrix2> es(a - b);
    return es.eigenvalues().cwiseAbs().sum();
}

TrajectorySeries exact_reduced_dynamics(const SystemSpec& sys, const BathSpec& bath,
                                        const TimeGrid& grid) {
    sys.validate();
    bath.validate();
    grid.validate();
    const long dim_b = bath.dimension();
    if (2 * dim_b > 8192)
        throw std::invalid_argument("exact_reduced_dynamics: total dimension exceeds 8192");

    const Matrix hs = sys.hamiltonian();
    const Matrix ib = Matrix::Identity(dim_b, dim_b);
    const Matrix h = kron(hs, ib) + kron(pauli_z(), fock::interaction_operator(bath)) +
                     kron(Matrix2::Identity(), fock::bath_hamiltonian(bath));

    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const auto& w = es.eigenvalues();
    const Matrix& v = es.eigenvectors();
    const Matrix rho_tot0 = kron(sys.rho0, fock::thermal_state(bath));
    const Matrix rho_eig = v.adjoint() * rho_tot0 * v;

    TrajectorySeries traj;
    const double dt = grid.dt();
    Matrix rotated(w.size(), w.size());
    for (int n = 0; n <= grid.slices; ++n) {
        const double t = n * dt;
        for (Eigen::Index i = 0; i < w.size(); ++i)
            for (Eigen::Index j = 0; j < w.size(); ++j)
                rotated(i, j) = rho_eig(i, j) * std::exp(Complex(0.0, -(w[i] - w[j]) * t));
        const Matrix rho_t = v * rotated * v.adjoint();
        Matrix2 rs = Matrix2::Zero();
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                rs(a, b) = rho_t.block(a * dim_b, b * dim_b, dim_b, dim_b).trace();
        traj.times.push_back(grid.t0 + t);
        traj.rho.push_back(rs);
    }
    return traj;
}

namespace {

// Reduced state read out of the augmented tensor by closing both branches
// with the half-step propagator.
Matrix2 pathsum_readout(const Matrix& amp, const Matrix2& uh) {
    const long m = amp.rows();
    Matrix2 rho = Matrix2::Zero();
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            Complex acc = 0.0;
            for (long r = 0; r < m; ++r) {
                const int xr = static_cast<int>(r & 1);
                Complex row = 0.0;
                for (long c = 0; c < m; ++c) {
                    const int yc = static_cast<int>(c & 1);
                    row += amp(r, c) * std::conj(uh(b, yc));
                }
                acc += uh(a, xr) * row;
            }
            rho(a, b) = acc;
        }
    }
    return rho;
}

}  // namespace

TrajectorySeries pathsum_reduced_dynamics(const SystemSpec& sys,
                                          const kernels::InfluenceTable& table,
                                          const TimeGrid& grid, std::optional<int> memory) {
    sys.validate();
    grid.validate();
    const int n_slices = grid.slices;
    if (table.num_slices != n_slices)
        throw std::invalid_argument("pathsum: influence table does not match the grid");
    if (std::abs(table.dt - grid.dt()) > 1e-12 * std::max(1.0, std::abs(grid.dt())))
        throw std::invalid_argument("pathsum: influence table dt does not match the grid");
    int window = memory.value_or(n_slices);
    if (window < 1) throw std::invalid_argument("pathsum: memory must be >= 1");
    window = std::min(window, n_slices);
    if (window > 12)
        throw std::invalid_argument("pathsum: augmented tensor limited to 12 slices of memory");

    const Matrix2 hs = sys.hamiltonian();
    const Matrix2 u = fock::propagator(hs, grid.dt());
    const Matrix2 uh = fock::propagator(hs, grid.dt() / 2.0);

    TrajectorySeries traj;
    traj.times.push_back(grid.t0);
    traj.rho.push_back(sys.rho0);

    // amplitude tensor over (forward history, backward history); the newest
    // slice is the least significant bit of the flat index
    Matrix amp(2, 2);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            Complex a = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) a += uh(x, i) * sys.rho0(i, j) * std::conj(uh(y, j));
            const double xi = kPathValue[x] - kPathValue[y];
            const Complex e = table.at(0, 0);
            amp(x, y) = a * std::exp(-xi * (e * kPathValue[x] - std::conj(e) * kPathValue[y]));
        }
    int levels = 1;  // slices currently held in the tensor
    traj.times.push_back(grid.t0 + grid.dt());
    traj.rho.push_back(pathsum_readout(amp, uh));

    std::vector<double> xvals;       // decoded sigma_z values of a history index
    for (int n = 1; n < n_slices; ++n) {
        const long m = amp.rows();
        // decoded history: level j (0 = oldest in window) for flat index r
        // slice index of level j is n - levels + j
        xvals.assign(static_cast<std::size_t>(m) * levels, 0.0);
        for (long r = 0; r < m; ++r)
            for (int j = 0; j < levels; ++j)
                xvals[static_cast<std::size_t>(r) * levels + j] =
                    kPathValue[(r >> (levels - 1 - j)) & 1];

        // partial influence sums over the stored window
        Eigen::VectorXcd fpart = Eigen::VectorXcd::Zero(m), gpart = Eigen::VectorXcd::Zero(m);
        for (int j = 0; j < levels; ++j) {
            const int slice = n - levels + j;
            if (n - slice >= window) continue;  // outside the memory window
            const Complex e = table.at(n, slice);
            for (long r = 0; r < m; ++r) {
                const double xv = xvals[static_cast<std::size_t>(r) * levels + j];
                fpart[r] += e * xv;
                gpart[r] += std::conj(e) * xv;
            }
        }

        const Complex enn = table.at(n, n);
        Matrix next(2 * m, 2 * m);
        Eigen::VectorXcd rowfac(m), colfac(m);
        for (int xn = 0; xn < 2; ++xn) {
            const double sx = kPathValue[xn];
            for (int yn = 0; yn < 2; ++yn) {
                const double sy = kPathValue[yn];
                const double xi = sx - sy;
                for (long r = 0; r < m; ++r) {
                    const int xlast = static_cast<int>(r & 1);
                    rowfac[r] = u(xn, xlast) * std::exp(-xi * (fpart[r] + enn * sx));
                }
                for (long c = 0; c < m; ++c) {
                    const int ylast = static_cast<int>(c & 1);
                    colfac[c] = std::conj(u(yn, ylast)) * std::exp(xi * (gpart[c] + std::conj(enn) * sy));
                }
                for (long r = 0; r < m; ++r)
                    for (long c = 0; c < m; ++c)
                        next(2 * r + xn, 2 * c + yn) = amp(r, c) * rowfac[r] * colfac[c];
            }
        }
        amp.swap(next);
        ++levels;
        if (levels > window) {
            // contract out the oldest level (most significant bit)
            const long half = amp.rows() / 2;
            Matrix folded = amp.topLeftCorner(half, half) + amp.topRightCorner(half, half) +
                            amp.bottomLeftCorner(half, half) + amp.bottomRightCorner(half, half);
            amp.swap(folded);
            --levels;
        }
        traj.times.push_back(grid.t0 + (n + 1) * grid.dt());
        traj.rho.push_back(pathsum_readout(amp, uh));
    }
    return traj;
}

ScalingResult error_scaling(const SystemSpec& sys, const BathSpec& bath_template,
                            const TimeGrid& grid, const std::vector<double>& lambdas) {
    sys.validate();
    bath_template.validate();
    grid.validate();
    if (lambdas.size() < 2)
        throw std::invalid_argument("error_scaling: need at least two coupling scales");

    ScalingResult result;
    result.lambdas = lambdas;
    for (const double lam : lambdas) {
        BathSpec bath = bath_template;
        bath.coupling *= lam;
        const TrajectorySeries exact = exact_reduced_dynamics(sys, bath, grid);
        const auto table_c = kernels::eta_coefficients(bath, grid.slices, grid.dt());
        const TrajectorySeries coarse = pathsum_reduced_dynamics(sys, table_c, grid);
        TimeGrid fine_grid{grid.t0, grid.tf, 2 * grid.slices};
        const auto table_f = kernels::eta_coefficients(bath, fine_grid.slices, fine_grid.dt());
        const TrajectorySeries fine = pathsum_reduced_dynamics(sys, table_f, fine_grid);
        double dist = 0.0;
        for (int n = 1; n <= grid.slices; ++n) {
            const Matrix2 extrap = (4.0 * fine.rho[2 * n] - coarse.rho[n]) / 3.0;
            dist = std::max(dist, trace_distance(exact.rho[n], extrap));
        }
        result.distances.push_back(dist);
    }

    const double floor = 1e-12;
    bool all_floor = true;
    for (const double d : result.distances) all_floor = all_floor && d <= floor;
    result.inconclusive = all_floor;
    if (!result.inconclusive) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = static_cast<int>(lambdas.size());
        for (int i = 0; i < n; ++i) {
            const double x = std::log(lambdas[i]);
            const double y = std::log(std::max(result.distances[i], floor));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        result.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return result;
}

}  // namespace fvk::dynamics
