// kernels.hpp — Closed-form influence kernels, discretized influence
// coefficients, and the quadratic influence action over discrete paths

#pragma once

#include <vector>

#include "fvk/bath.hpp"
#include "fvk/types.hpp"

namespace fvk::kernels {

// Real (noise) and imaginary (dissipation) kernel values at lag tau.
// k_imag carries its factor of i explicitly (purely imaginary value).
struct KernelPair {
    double tau = 0.0;
    Complex k_real;
    Complex k_imag;
};

// Fermionic kernels:
//   k^R(tau) = -2 sum g_kl^2 [cos w_k tau cos w_l tau
//              - sin w_k tau sin w_l tau tanh(bE_k/2) tanh(bE_l/2)]
//   k^I(tau) = 2i sum g_kl^2 [sin w_k tau cos w_l tau tanh(bE_k/2)
//              + cos w_k tau sin w_l tau tanh(bE_l/2)]
// Equivalently k^R = 2 Re C(tau, 0), k^I = 2i Im C(tau, 0).
KernelPair fermi_kernels(const BathSpec& bath, double tau);

// Linearly coupled bosonic bath:
//   k^I(tau) = i sum_k c_k^2/(2 m_k w_k) sin w_k tau
//   k^R(tau) = sum_k c_k^2/(2 m_k w_k) coth(b w_k / 2) cos w_k tau
KernelPair bose_linear_kernels(const LinearBoseBathSpec& bath, double tau);

// Bilinearly coupled bosonic bath, as the Re/Im split of the two-time
// correlation (coth pair expectations, + overall sign):
//   k^R(tau) = 2 sum g_kl^2 [coth coth cos cos - sin sin]   (= 2 Re C)
//   k^I(tau) = 2i Im C(tau, 0)
KernelPair bose_bilinear_kernels(const BathSpec& bath, double tau);

enum class TempRegime { LowT, HighT };

// Closed-form temperature-limit approximations of the fermionic kernels.
// LowT:  k^I -> 2i sum g^2 sin[(w_k+w_l) tau], k^R -> -2 sum g^2 cos[(w_k+w_l) tau]
// HighT: k^I -> 0,                             k^R -> -2 sum g^2 cos w_k tau cos w_l tau
KernelPair kernel_limits(const BathSpec& bath, double tau, TempRegime regime);

// The correlation function that drives the reduced dynamics, as a finite
// exponential sum C_dyn(tau) = sum_m amp_m e^{i freq_m tau}.  This is the
// autocorrelation of the Hermitian interaction operator:
// -2 x two_time_analytic (Fermi), +2 x two_time_analytic (BoseBilinear).
struct ExponentialKernel {
    struct Term {
        double amp = 0.0;
        double freq = 0.0;
    };
    std::vector<Term> terms;

    Complex operator()(double tau) const;
};

ExponentialKernel influence_correlation(const BathSpec& bath);

// Influence coefficients over ordered slice pairs:
//   eta[i][j] = int_{slice i} dt1 int_{slice j} dt2 C_dyn(t1 - t2)   (i > j)
//   eta[i][i] = time-ordered half square t1 > t2 within slice i
struct InfluenceTable {
    int num_slices = 0;
    double dt = 0.0;
    std::vector<Complex> eta;  // row-major lower triangle, i >= j

    Complex& at(int i, int j) { return eta[static_cast<std::size_t>(i) * (i + 1) / 2 + j]; }
    const Complex& at(int i, int j) const {
        return eta[static_cast<std::size_t>(i) * (i + 1) / 2 + j];
    }
};

InfluenceTable eta_coefficients(const BathSpec& bath, int num_slices, double dt);
InfluenceTable eta_coefficients(const ExponentialKernel& kernel, int num_slices, double dt);

// Forward/backward paths, one value in {+1, -1} per slice.
struct PathPair {
    std::vector<int> forward;
    std::vector<int> backward;
};

// Quadratic influence action S over the discrete paths, defined so that
// exp(i S) is the influence weight:
//   i S = -sum_{i>=j} (X_i - Y_i)(eta_ij X_j - conj(eta_ij) Y_j)
// S vanishes identically on X == Y, and Re[i S] <= 0 for every path pair.
Complex fv_action(const PathPair& paths, const InfluenceTable& table);

// Stable (e^z - 1)/z and (e^z - 1 - z)/z^2; series branch near z = 0 covers
// the resonant w_k = w_l slice integrals to machine precision.
Complex phi1(Complex z);
Complex phi2(Complex z);

}  // namespace fvk::kernels
