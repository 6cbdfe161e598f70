// fock.hpp — Finite-dimensional operator representations of discrete baths

#pragma once

#include <vector>

#include "fvk/bath.hpp"
#include "fvk/types.hpp"

namespace fvk::fock {

// Jordan-Wigner annihilation operators; mode 0 is the leftmost tensor factor,
// c_k = sz^{(x)k} (x) sm (x) I^{(x)(M-k-1)}.  Exact CAR in floating point.
std::vector<Matrix> fermion_annihilation_ops(int num_modes);

// Truncated bosonic annihilation operators on ((n_max+1))^M levels.
// CCR holds exactly outside the top occupation level of each mode.
std::vector<Matrix> boson_annihilation_ops(int num_modes, int n_max);

// Annihilation operators for the given bath family.
std::vector<Matrix> annihilation_ops(const BathSpec& bath);

// H_B = sum_k E_k n_k; diagonal in the occupation basis.
Matrix bath_hamiltonian(const BathSpec& bath);

// exp(-beta H_B) / Z; diagonal, positive, unit trace.
Matrix thermal_state(const BathSpec& bath);

// Q_k(t) = c_k e^{-i w_k t} + c^dag_k e^{+i w_k t}; Hermitian.
Matrix quadrature(const BathSpec& bath, int mode, double t);

// Hermitian system-bath insertion 2i sum_{k<l} g_kl Q_k(0) Q_l(0) (Fermi)
// or 2 sum_{k<l} g_kl Q_k(0) Q_l(0) (BoseBilinear).
Matrix interaction_operator(const BathSpec& bath);

// exp(-i H dt) for Hermitian H via spectral decomposition.
Matrix propagator(const Matrix& hamiltonian, double dt);

}  // namespace fvk::fock
