#include "fvk/kernels.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "fvk/correlations.hpp"

namespace fvk::kernels {

namespace {

double coth(double x) { return 1.0 / std::tanh(x); }

}  // namespace

KernelPair fermi_kernels(const BathSpec& bath, double tau) {
    bath.validate();
    if (bath.statistics != Statistics::Fermi)
        throw std::invalid_argument("fermi_kernels: bath must be fermionic");
    double kr = 0.0, ki = 0.0;
    for (int k = 0; k < bath.num_modes; ++k) {
        for (int l = 0; l < bath.num_modes; ++l) {
            const double g2 = bath.coupling(k, l) * bath.coupling(k, l);
            if (g2 == 0.0) continue;
            const double ck = std::cos(bath.energies[k] * tau), sk = std::sin(bath.energies[k] * tau);
            const double cl = std::cos(bath.energies[l] * tau), sl = std::sin(bath.energies[l] * tau);
            const double thk = std::tanh(bath.beta * bath.energies[k] / 2.0);
            const double thl = std::tanh(bath.beta * bath.energies[l] / 2.0);
            kr += -2.0 * g2 * (ck * cl - sk * sl * thk * thl);
            ki += 2.0 * g2 * (sk * cl * thk + ck * sl * thl);
        }
    }
    return {tau, kr, kImag * ki};
}

KernelPair bose_linear_kernels(const LinearBoseBathSpec& bath, double tau) {
    bath.validate();
    if (bath.beta == 0.0)
        throw std::domain_error("bose_linear_kernels: coth pole at beta = 0");
    double kr = 0.0, ki = 0.0;
    for (int k = 0; k < bath.num_modes(); ++k) {
        const double w = bath.omega[k];
        const double weight = bath.c[k] * bath.c[k] / (2.0 * bath.mass[k] * w);
        kr += weight * coth(bath.beta * w / 2.0) * std::cos(w * tau);
        ki += weight * std::sin(w * tau);
    }
    return {tau, kr, kImag * ki};
}

KernelPair bose_bilinear_kernels(const BathSpec& bath, double tau) {
    bath.validate();
    if (bath.statistics != Statistics::BoseBilinear)
        throw std::invalid_argument("bose_bilinear_kernels: bath must be bosonic bilinear");
    if (bath.beta == 0.0)
        throw std::domain_error("bose_bilinear_kernels: coth pole at beta = 0");
    double kr = 0.0, ki = 0.0;
    for (int k = 0; k < bath.num_modes; ++k) {
        for (int l = 0; l < bath.num_modes; ++l) {
            const double g2 = bath.coupling(k, l) * bath.coupling(k, l);
            if (g2 == 0.0) continue;
            const double ck = std::cos(bath.energies[k] * tau), sk = std::sin(bath.energies[k] * tau);
            const double cl = std::cos(bath.energies[l] * tau), sl = std::sin(bath.energies[l] * tau);
            const double thk = coth(bath.beta * bath.energies[k] / 2.0);
            const double thl = coth(bath.beta * bath.energies[l] / 2.0);
            kr += 2.0 * g2 * (ck * cl * thk * thl - sk * sl);
            // imaginary part of the coth pair-expectation product; the thermal
            // factor rides the cosine, unlike the fermionic kernel
            ki += -2.0 * g2 * (thk * ck * sl + thl * sk * cl);
        }
    }
    return {tau, kr, kImag * ki};
}

KernelPair kernel_limits(const BathSpec& bath, double tau, TempRegime regime) {
    bath.validate();
    if (bath.statistics != Statistics::Fermi)
        throw std::invalid_argument("kernel_limits: bath must be fermionic");
    double kr = 0.0, ki = 0.0;
    for (int k = 0; k < bath.num_modes; ++k) {
        for (int l = 0; l < bath.num_modes; ++l) {
            const double g2 = bath.coupling(k, l) * bath.coupling(k, l);
            if (g2 == 0.0) continue;
            const double wk = bath.energies[k], wl = bath.energies[l];
            if (regime == TempRegime::LowT) {
                kr += -2.0 * g2 * std::cos((wk + wl) * tau);
                ki += 2.0 * g2 * std::sin((wk + wl) * tau);
            } else {
                kr += -2.0 * g2 * std::cos(wk * tau) * std::cos(wl * tau);
            }
        }
    }
    return {tau, kr, kImag * ki};
}

Complex ExponentialKernel::operator()(double tau) const {
    Complex out = 0.0;
    for (const auto& t : terms) out += t.amp * std::exp(Complex(0.0, t.freq * tau));
    return out;
}

ExponentialKernel influence_correlation(const BathSpec& bath) {
    bath.validate();
    const bool fermi = bath.statistics == Statistics::Fermi;
    if (!fermi && bath.beta == 0.0)
        throw std::domain_error("influence_correlation: coth pole at beta = 0");
    // <Q_k(tau) Q_k(0)> = a- e^{-i w tau} + a+ e^{+i w tau} with
    // a- = (theta+1)/2 and a+ = (1-theta)/2 (fermi, theta = tanh) or
    // (theta-1)/2 (bose, theta = coth).  C_dyn = +2 sum g^2 <Q_k><Q_l>
    // for both families (the Hermitized fermionic insertion flips the sign
    // of the bare two-time correlation).
    std::map<long long, double> acc;  // frequencies keyed on a fixed grid for exact merging
    const double key_scale = 1e12;
    for (int k = 0; k < bath.num_modes; ++k) {
        for (int l = 0; l < bath.num_modes; ++l) {
            const double g = bath.coupling(k, l);
            if (g == 0.0) continue;
            const double thk = fermi ? std::tanh(bath.beta * bath.energies[k] / 2.0)
                                     : coth(bath.beta * bath.energies[k] / 2.0);
            const double thl = fermi ? std::tanh(bath.beta * bath.energies[l] / 2.0)
                                     : coth(bath.beta * bath.energies[l] / 2.0);
            const double a_k[2] = {(thk + 1.0) / 2.0, fermi ? (1.0 - thk) / 2.0 : (thk - 1.0) / 2.0};
            const double a_l[2] = {(thl + 1.0) / 2.0, fermi ? (1.0 - thl) / 2.0 : (thl - 1.0) / 2.0};
            for (int sk = 0; sk < 2; ++sk) {
                for (int sl = 0; sl < 2; ++sl) {
                    const double w = (sk == 0 ? -1.0 : 1.0) * bath.energies[k] +
                                     (sl == 0 ? -1.0 : 1.0) * bath.energies[l];
                    acc[std::llround(w * key_scale)] += 2.0 * g * g * a_k[sk] * a_l[sl];
                }
            }
        }
    }
    ExponentialKernel kernel;
    for (const auto& [key, a] : acc) {
        if (std::abs(a) < 1e-18) continue;
        kernel.terms.push_back({a, static_cast<double>(key) / key_scale});
    }
    return kernel;
}

Complex phi1(Complex z) {
    if (std::abs(z) < 0.5) {
        Complex sum = 1.0, term = 1.0;
        for (int n = 1; n < 26; ++n) {
            term *= z / static_cast<double>(n + 1);
            sum += term;
            if (std::abs(term) < 1e-18) break;
        }
        return sum;
    }
    return (std::exp(z) - 1.0) / z;
}

Complex phi2(Complex z) {
    if (std::abs(z) < 0.5) {
        Complex sum = 0.5, term = 0.5;
        for (int n = 1; n < 30; ++n) {
            term *= z / static_cast<double>(n + 2);
            sum += term;
            if (std::abs(term) < 1e-18) break;
        }
        return sum;
    }
    return (std::exp(z) - 1.0 - z) / (z * z);
}

InfluenceTable eta_coefficients(const ExponentialKernel& kernel, int num_slices, double dt) {
    if (num_slices < 1) throw std::invalid_argument("eta_coefficients: need num_slices >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("eta_coefficients: need dt > 0");
    InfluenceTable table;
    table.num_slices = num_slices;
    table.dt = dt;
    table.eta.assign(static_cast<std::size_t>(num_slices) * (num_slices + 1) / 2, Complex{});
    for (const auto& term : kernel.terms) {
        const Complex z{0.0, term.freq * dt};
        const Complex full = dt * dt * phi1(z) * phi1(-z);   // separated slices
        const Complex diag = dt * dt * phi2(z);              // ordered half square
        const Complex step = std::exp(z);
        for (int i = 0; i < num_slices; ++i) {
            Complex phase = 1.0;
            table.at(i, i) += term.amp * diag;
            for (int j = i - 1; j >= 0; --j) {
                phase *= step;
                table.at(i, j) += term.amp * phase * full;
            }
        }
    }
    return table;
}

InfluenceTable eta_coefficients(const BathSpec& bath, int num_slices, double dt) {
    return eta_coefficients(influence_correlation(bath), num_slices, dt);
}

Complex fv_action(const PathPair& paths, const InfluenceTable& table) {
    const int n = table.num_slices;
    if (static_cast<int>(paths.forward.size()) != n ||
        static_cast<int>(paths.backward.size()) != n)
        throw std::invalid_argument("fv_action: path length must equal the table size");
    for (int i = 0; i < n; ++i) {
        if (std::abs(paths.forward[i]) != 1 || std::abs(paths.backward[i]) != 1)
            throw std::invalid_argument("fv_action: path values must be +1 or -1");
    }
    Complex ln_f = 0.0;
    for (int i = 0; i < n; ++i) {
        const double xi = paths.forward[i] - paths.backward[i];
        if (xi == 0.0) continue;
        for (int j = 0; j <= i; ++j) {
            const Complex e = table.at(i, j);
            ln_f -= xi * (e * static_cast<double>(paths.forward[j]) -
                          std::conj(e) * static_cast<double>(paths.backward[j]));
        }
    }
    return -kImag * ln_f;
}

}  // namespace fvk::kernels
