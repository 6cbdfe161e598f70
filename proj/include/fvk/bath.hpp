// bath.hpp — Bath parameter records and validation

#pragma once

#include <Eigen/Dense>

#include "fvk/types.hpp"

namespace fvk {

enum class Statistics { Fermi, BoseBilinear };

// Discrete bath: mode energies E_k (= mode frequencies, hbar = 1), a real
// antisymmetric coupling matrix g, and inverse temperature beta (k_B = 1).
struct BathSpec {
    int num_modes = 0;
    RealVector energies;       // E_k > 0
    RealMatrix coupling;       // g_{kl} = -g_{lk}, g_{kk} = 0
    double beta = 0.0;         // >= 0; beta = 0 is infinite temperature
    Statistics statistics = Statistics::Fermi;
    int boson_truncation = 1;  // n_max, BoseBilinear only

    void validate() const;
    long dimension() const;
};

// Bosonic modes coupled linearly to the system; used in closed form only.
struct LinearBoseBathSpec {
    RealVector omega;  // > 0
    RealVector c;
    RealVector mass;   // > 0
    double beta = 0.0;

    int num_modes() const { return static_cast<int>(omega.size()); }
    void validate() const;
};

// Random bath in the well-conditioned test regime: E_k ~ U[0.5, 2.0],
// g_{k<l} ~ U[-0.3, 0.3] antisymmetrized.
BathSpec sample_bath(int num_modes, double beta, UniformRng& rng,
                     Statistics statistics = Statistics::Fermi,
                     int boson_truncation = 1);

}  // namespace fvk
