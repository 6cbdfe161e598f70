// dynamics.hpp — Reduced qubit dynamics: exact propagation with partial
// trace, and the quadratic-influence path sum

#pragma once

#include <optional>
#include <vector>

#include "fvk/bath.hpp"
#include "fvk/kernels.hpp"
#include "fvk/types.hpp"

namespace fvk::dynamics {

struct SystemSpec {
    double epsilon = 0.0;  // level splitting, coefficient of sigma_z / 2
    double delta = 0.0;    // tunneling rate, coefficient of sigma_x / 2
    Matrix2 rho0 = Matrix2::Zero();

    Matrix2 hamiltonian() const;
    void validate() const;
};

struct TimeGrid {
    double t0 = 0.0;
    double tf = 0.0;
    int slices = 0;

    double dt() const { return (tf - t0) / slices; }
    void validate() const;
};

struct TrajectorySeries {
    std::vector<double> times;   // slices + 1 points
    std::vector<Matrix2> rho;
};

enum class Observable { Sz, Sx, Purity };

std::vector<double> observable_series(const TrajectorySeries& traj, Observable which);

double trace_distance(const Matrix2& a, const Matrix2& b);

// rho_S(t_n) = Tr_B[ e^{-i H t_n} (rho0 (x) rho_B) e^{+i H t_n} ] with
// H = H_S (x) 1 + sigma_z (x) B + 1 (x) H_B, B the Hermitian interaction
// operator of the bath.
TrajectorySeries exact_reduced_dynamics(const SystemSpec& sys, const BathSpec& bath,
                                        const TimeGrid& grid);

// Discrete forward/backward path sum with the quadratic influence weight
// exp(i fv_action).  System bonds are exact short-time propagators arranged
// symmetrically (midpoint convention); full memory when `memory` is absent
// (augmented tensor, slices <= 12), otherwise a sliding window of `memory`
// slices.
TrajectorySeries pathsum_reduced_dynamics(const SystemSpec& sys,
                                          const kernels::InfluenceTable& table,
                                          const TimeGrid& grid,
                                          std::optional<int> memory = std::nullopt);

struct ScalingResult {
    std::vector<double> lambdas;
    std::vector<double> distances;  // D(lambda), max-over-time trace distance
    double slope = 0.0;             // least-squares slope of log D vs log lambda
    bool inconclusive = false;      // all distances below the noise floor
};

// For coupling matrices lambda * g: trace-norm distance between exact
// dynamics and the dt-Richardson-extrapolated path sum (grids dt and dt/2),
// evaluated on the grid's time points; returns the fitted log-log slope.
ScalingResult error_scaling(const SystemSpec& sys, const BathSpec& bath_template,
                            const TimeGrid& grid, const std::vector<double>& lambdas);

}  // namespace fvk::dynamics
