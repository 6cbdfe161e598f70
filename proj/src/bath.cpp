#include "fvk/bath.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fvk {

void BathSpec::validate() const {
    if (num_modes < 1) throw std::invalid_argument("bath: num_modes must be >= 1");
    if (energies.size() != num_modes)
        throw std::invalid_argument("bath: energies size does not match num_modes");
    if (coupling.rows() != num_modes || coupling.cols() != num_modes)
        throw std::invalid_argument("bath: coupling matrix must be num_modes x num_modes");
    for (int k = 0; k < num_modes; ++k) {
        if (!(energies[k] > 0.0))
            throw std::invalid_argument("bath: E[" + std::to_string(k) + "] must be > 0");
    }
    for (int k = 0; k < num_modes; ++k) {
        for (int l = 0; l < num_modes; ++l) {
            if (coupling(k, l) != -coupling(l, k))
                throw std::invalid_argument("bath: coupling must be antisymmetric, g[" +
                                            std::to_string(k) + "][" + std::to_string(l) +
                                            "] != -g[" + std::to_string(l) + "][" +
                                            std::to_string(k) + "]");
        }
    }
    if (!(beta >= 0.0)) throw std::invalid_argument("bath: beta must be >= 0");
    if (statistics == Statistics::Fermi) {
        if (num_modes > 12) throw std::invalid_argument("bath: at most 12 fermionic modes");
    } else {
        if (boson_truncation < 1)
            throw std::invalid_argument("bath: boson_truncation must be >= 1");
        if (dimension() > 4096)
            throw std::invalid_argument("bath: boson dimension (n_max+1)^M exceeds 4096");
    }
}

long BathSpec::dimension() const {
    if (statistics == Statistics::Fermi) return 1L << num_modes;
    long dim = 1;
    for (int k = 0; k < num_modes; ++k) {
        dim *= boson_truncation + 1;
        if (dim > (1L << 40)) return dim;  // caller's validate() rejects overflow
    }
    return dim;
}

void LinearBoseBathSpec::validate() const {
    const int m = num_modes();
    if (m < 1) throw std::invalid_argument("linear bath: need at least one mode");
    if (c.size() != m || mass.size() != m)
        throw std::invalid_argument("linear bath: omega/c/m must have equal lengths");
    for (int k = 0; k < m; ++k) {
        if (!(omega[k] > 0.0)) throw std::invalid_argument("linear bath: omega must be > 0");
        if (!(mass[k] > 0.0)) throw std::invalid_argument("linear bath: m must be > 0");
    }
    if (!(beta >= 0.0)) throw std::invalid_argument("linear bath: beta must be >= 0");
}

BathSpec sample_bath(int num_modes, double beta, UniformRng& rng, Statistics statistics,
                     int boson_truncation) {
    BathSpec bath;
    bath.num_modes = num_modes;
    bath.beta = beta;
    bath.statistics = statistics;
    bath.boson_truncation = boson_truncation;
    bath.energies.resize(num_modes);
    for (int k = 0; k < num_modes; ++k) bath.energies[k] = rng.uniform(0.5, 2.0);
    bath.coupling = RealMatrix::Zero(num_modes, num_modes);
    for (int k = 0; k < num_modes; ++k) {
        for (int l = k + 1; l < num_modes; ++l) {
            const double g = rng.uniform(-0.3, 0.3);
            bath.coupling(k, l) = g;
            bath.coupling(l, k) = -g;
        }
    }
    bath.validate();
    return bath;
}

}  // namespace fvk
