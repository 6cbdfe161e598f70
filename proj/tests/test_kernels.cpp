#include <doctest.h>

#include <array>
#include <cmath>

#include "fvk/correlations.hpp"
#include "fvk/fock.hpp"
#include "fvk/kernels.hpp"

using namespace fvk;
using namespace fvk::kernels;

namespace {

BathSpec two_mode_bath(double g01, double beta, double e0 = 1.0, double e1 = 2.0,
                       Statistics stat = Statistics::Fermi, int n_max = 1) {
    BathSpec bath;
    bath.num_modes = 2;
    bath.beta = beta;
    bath.statistics = stat;
    bath.boson_truncation = n_max;
    bath.energies.resize(2);
    bath.energies << e0, e1;
    bath.coupling = RealMatrix::Zero(2, 2);
    bath.coupling(0, 1) = g01;
    bath.coupling(1, 0) = -g01;
    return bath;
}

// Gauss-Legendre panels; reference integrator for the slice integrals
Complex quad_full_square(const ExponentialKernel& kernel, int i, int j, double dt) {
    static const auto nodes = [] {
        std::array<double, 24> x{};
        // 12-point Gauss-Legendre abscissae/weights on [-1, 1]
        const double xs[6] = {0.1252334085114689, 0.3678314989981802, 0.5873179542866175,
                              0.7699026741943047, 0.9041172563704749, 0.9815606342467192};
        const double ws[6] = {0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
                              0.1600783285433462, 0.1069393259953184, 0.0471753363865118};
        for (int n = 0; n < 6; ++n) {
            x[2 * n] = -xs[n];
            x[2 * n + 1] = xs[n];
            x[12 + 2 * n] = ws[n];
            x[12 + 2 * n + 1] = ws[n];
        }
        return x;
    }();
    Complex total = 0.0;
    for (int a = 0; a < 12; ++a) {
        const double t1 = (nodes[a] + 1.0) / 2.0 * dt + i * dt;
        for (int b = 0; b < 12; ++b) {
            const double t2 = (nodes[b] + 1.0) / 2.0 * dt + j * dt;
            total += nodes[12 + a] * nodes[12 + b] * (dt / 2.0) * (dt / 2.0) * kernel(t1 - t2);
        }
    }
    return total;
}

Complex quad_half_square(const ExponentialKernel& kernel, int i, double dt) {
    static const double xs[6] = {0.1252334085114689, 0.3678314989981802, 0.5873179542866175,
                                 0.7699026741943047, 0.9041172563704749, 0.9815606342467192};
    static const double ws[6] = {0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
                                 0.1600783285433462, 0.1069393259953184, 0.0471753363865118};
    Complex total = 0.0;
    for (int a = 0; a < 12; ++a) {
        const double na = a < 6 ? -xs[a] : xs[a - 6];
        const double wa = a < 6 ? ws[a] : ws[a - 6];
        const double t1 = (na + 1.0) / 2.0 * dt + i * dt;
        const double inner = t1 - i * dt;
        for (int b = 0; b < 12; ++b) {
            const double nb = b < 6 ? -xs[b] : xs[b - 6];
            const double wb = b < 6 ? ws[b] : ws[b - 6];
            const double t2 = (nb + 1.0) / 2.0 * inner + i * dt;
            total += wa * wb * (dt / 2.0) * (inner / 2.0) * kernel(t1 - t2);
        }
    }
    return total;
}

}  // namespace

TEST_CASE("fermionic kernels") {
    const auto bath = two_mode_bath(0.1, 1.0);
    SUBCASE("zero lag") {
        const auto kp = fermi_kernels(bath, 0.0);
        CHECK(std::abs(kp.k_imag) < 1e-15);
        CHECK(std::abs(kp.k_real - Complex(-2.0 * 2.0 * 0.01)) < 1e-15);
    }
    SUBCASE("decoupled bath") {
        const auto kp = fermi_kernels(two_mode_bath(0.0, 1.0), 0.7);
        CHECK(std::abs(kp.k_real) == 0.0);
        CHECK(std::abs(kp.k_imag) == 0.0);
    }
    SUBCASE("matches the correlation split") {
        UniformRng rng(61);
        for (double beta : {0.1, 1.0, 10.0}) {
            const auto b = sample_bath(3, beta, rng);
            for (double tau = 0.0; tau <= 10.0; tau += 0.5) {
                const auto kp = fermi_kernels(b, tau);
                const Complex c = correlations::two_time_analytic(b, tau, 0.0);
                CHECK(std::abs(kp.k_real - Complex(2.0 * c.real())) < 1e-12);
                CHECK(std::abs(kp.k_imag - 2.0 * kImag * c.imag()) < 1e-12);
            }
        }
    }
    SUBCASE("parity") {
        UniformRng rng(62);
        const auto b = sample_bath(3, 1.0, rng);
        for (double tau = 0.1; tau <= 10.0; tau += 0.37) {
            const auto kp = fermi_kernels(b, tau);
            const auto km = fermi_kernels(b, -tau);
            CHECK(std::abs(km.k_real - kp.k_real) < 1e-12);
            CHECK(std::abs(km.k_imag + kp.k_imag) < 1e-12);
        }
    }
    SUBCASE("rejects bosonic baths") {
        auto b = two_mode_bath(0.1, 1.0, 1.0, 2.0, Statistics::BoseBilinear);
        CHECK_THROWS_AS(fermi_kernels(b, 0.1), std::invalid_argument);
    }
}

TEST_CASE("linear boson kernels") {
    LinearBoseBathSpec bath;
    bath.omega.resize(1);
    bath.c.resize(1);
    bath.mass.resize(1);
    bath.omega << 1.0;
    bath.c << 1.0;
    bath.mass << 1.0;
    SUBCASE("zero lag dissipation vanishes") {
        bath.beta = 2.0;
        CHECK(std::abs(bose_linear_kernels(bath, 0.0).k_imag) < 1e-15);
    }
    SUBCASE("zero temperature limit") {
        bath.beta = 100.0;
        const auto kp = bose_linear_kernels(bath, 0.8);
        CHECK(std::abs(kp.k_real - Complex(0.5 * std::cos(0.8))) < 1e-8);
    }
    SUBCASE("closed form at beta = 2") {
        bath.beta = 2.0;
        const auto kp = bose_linear_kernels(bath, 0.3);
        CHECK(std::abs(kp.k_real - Complex(0.5 / std::tanh(1.0) * std::cos(0.3))) < 1e-15);
        CHECK(std::abs(kp.k_imag - kImag * 0.5 * std::sin(0.3)) < 1e-15);
    }
    SUBCASE("matches a truncated oscillator two-point function") {
        bath.beta = 2.0;
        BathSpec osc;
        osc.num_modes = 1;
        osc.beta = 2.0;
        osc.statistics = Statistics::BoseBilinear;
        osc.boson_truncation = 40;
        osc.energies.resize(1);
        osc.energies << 1.0;
        osc.coupling = RealMatrix::Zero(1, 1);
        const auto rho = fock::thermal_state(osc);
        const double w = 0.5;  // c^2 / (2 m omega)
        for (double tau : {0.3, 1.1}) {
            const Matrix prod = fock::quadrature(osc, 0, tau) * fock::quadrature(osc, 0, 0.0);
            const Complex c = w * (prod * rho).trace();
            const auto kp = bose_linear_kernels(bath, tau);
            CHECK(std::abs(kp.k_real - Complex(c.real())) < 1e-10);
            CHECK(std::abs(kp.k_imag - (-kImag * c.imag())) < 1e-10);
        }
    }
    SUBCASE("infinite temperature diverges") {
        bath.beta = 0.0;
        CHECK_THROWS_AS(bose_linear_kernels(bath, 0.1), std::domain_error);
    }
}

TEST_CASE("bilinear boson kernels") {
    SUBCASE("zero lag") {
        const auto bath = two_mode_bath(0.1, 1.0, 1.0, 2.0, Statistics::BoseBilinear, 8);
        const auto kp = bose_bilinear_kernels(bath, 0.0);
        const double c0 = 1.0 / std::tanh(0.5), c1 = 1.0 / std::tanh(1.0);
        CHECK(std::abs(kp.k_imag) < 1e-15);
        CHECK(std::abs(kp.k_real - Complex(2.0 * 2.0 * 0.01 * c0 * c1)) < 1e-14);
    }
    SUBCASE("matches the correlation split") {
        const auto bath = two_mode_bath(0.07, 0.8, 1.1, 1.7, Statistics::BoseBilinear, 8);
        for (double tau = 0.0; tau <= 6.0; tau += 0.4) {
            const auto kp = bose_bilinear_kernels(bath, tau);
            const Complex c = correlations::two_time_analytic(bath, tau, 0.0);
            CHECK(std::abs(kp.k_real - Complex(2.0 * c.real())) < 1e-12);
            CHECK(std::abs(kp.k_imag - 2.0 * kImag * c.imag()) < 1e-12);
        }
    }
    SUBCASE("low temperature matches the fermionic kernels up to overall sign") {
        const auto bose = two_mode_bath(0.1, 100.0, 1.0, 1.5, Statistics::BoseBilinear, 4);
        const auto fermi = two_mode_bath(0.1, 100.0, 1.0, 1.5);
        for (double tau : {0.2, 0.9, 2.3}) {
            const auto kb = bose_bilinear_kernels(bose, tau);
            const auto kf = fermi_kernels(fermi, tau);
            CHECK(std::abs(kb.k_real + kf.k_real) < 1e-8);
            CHECK(std::abs(kb.k_imag + kf.k_imag) < 1e-8);
        }
    }
    SUBCASE("mode-resolved real-part substitution") {
        UniformRng rng(63);
        for (int trial = 0; trial < 5; ++trial) {
            const double beta = trial % 2 ? 1.0 : 0.6;
            const auto bath = sample_bath(3, beta, rng, Statistics::BoseBilinear, 4);
            for (double tau = 0.0; tau <= 10.0; tau += 1.1) {
                for (int k = 0; k < 3; ++k) {
                    for (int l = 0; l < 3; ++l) {
                        const double g2 = bath.coupling(k, l) * bath.coupling(k, l);
                        if (g2 == 0.0) continue;
                        const double wk = bath.energies[k], wl = bath.energies[l];
                        const double thk = std::tanh(beta * wk / 2.0);
                        const double thl = std::tanh(beta * wl / 2.0);
                        const double krf =
                            -2.0 * g2 * (std::cos(wk * tau) * std::cos(wl * tau) -
                                         std::sin(wk * tau) * std::sin(wl * tau) * thk * thl);
                        const double krb =
                            2.0 * g2 * (std::cos(wk * tau) * std::cos(wl * tau) / (thk * thl) -
                                        std::sin(wk * tau) * std::sin(wl * tau));
                        CHECK(std::abs(krb + krf / (thk * thl)) < 1e-12);
                    }
                }
            }
        }
    }
    SUBCASE("matches truncated-Fock two-point traces") {
        // thermal tail rule: exp(-beta E n_max) < 1e-8
        const double beta = 1.0;
        const int n_max = 22;
        const auto bath = two_mode_bath(0.05, beta, 1.0, 1.5, Statistics::BoseBilinear, n_max);
        const auto rho = fock::thermal_state(bath);
        const double g = bath.coupling(0, 1);
        auto insertion = [&](double t) {
            return Matrix(g * fock::quadrature(bath, 0, t) * fock::quadrature(bath, 1, t));
        };
        const Matrix b0 = insertion(0.0) * rho;
        for (double tau : {0.2, 1.0}) {
            const Complex trace = 2.0 * (insertion(tau) * b0).trace();
            const auto kp = bose_bilinear_kernels(bath, tau);
            CHECK(std::abs(kp.k_real - Complex(2.0 * trace.real())) < 1e-8);
            CHECK(std::abs(kp.k_imag - 2.0 * kImag * trace.imag()) < 1e-8);
        }
    }
    SUBCASE("infinite temperature diverges") {
        const auto bath = two_mode_bath(0.1, 0.0, 1.0, 2.0, Statistics::BoseBilinear, 4);
        CHECK_THROWS_AS(bose_bilinear_kernels(bath, 0.1), std::domain_error);
    }
}

TEST_CASE("temperature limits") {
    UniformRng rng(64);
    const auto bath_template = sample_bath(2, 1.0, rng);
    auto with_beta = [&](double beta) {
        BathSpec b = bath_template;
        b.beta = beta;
        return b;
    };
    SUBCASE("decoupled bath gives zero in both regimes") {
        auto b = two_mode_bath(0.0, 1.0);
        for (auto regime : {TempRegime::LowT, TempRegime::HighT}) {
            const auto kp = kernel_limits(b, 0.7, regime);
            CHECK(std::abs(kp.k_real) == 0.0);
            CHECK(std::abs(kp.k_imag) == 0.0);
        }
    }
    SUBCASE("sup-norm errors shrink monotonically toward each regime") {
        const std::array<double, 4> betas{0.1, 1.0, 10.0, 100.0};
        std::array<double, 4> low_err{}, high_err{};
        for (std::size_t i = 0; i < betas.size(); ++i) {
            const auto b = with_beta(betas[i]);
            double le = 0.0, he = 0.0;
            for (double tau = 0.0; tau <= 10.0; tau += 0.1) {
                const auto exact = fermi_kernels(b, tau);
                const auto low = kernel_limits(b, tau, TempRegime::LowT);
                const auto high = kernel_limits(b, tau, TempRegime::HighT);
                le = std::max({le, std::abs(exact.k_real - low.k_real),
                               std::abs(exact.k_imag - low.k_imag)});
                he = std::max({he, std::abs(exact.k_real - high.k_real),
                               std::abs(exact.k_imag - high.k_imag)});
            }
            low_err[i] = le;
            high_err[i] = he;
        }
        for (int i = 1; i < 4; ++i) {
            CHECK(low_err[i] <= low_err[i - 1] + 1e-12);
            CHECK(high_err[i] >= high_err[i - 1] - 1e-12);
        }
        CHECK(low_err[3] < 1e-8);  // tanh -> 1 at beta = 100 with E >= 0.5
    }
    SUBCASE("high-temperature dissipation bound") {
        for (double beta : {1e-3, 0.1}) {
            const auto b = with_beta(beta);
            const double bound = 2.0 * b.coupling.array().square().sum() * beta *
                                 b.energies.maxCoeff() / 2.0;
            for (double tau = 0.0; tau <= 10.0; tau += 0.1) {
                CHECK(std::abs(fermi_kernels(b, tau).k_imag) <= bound + 1e-15);
            }
        }
    }
}

TEST_CASE("influence coefficients") {
    SUBCASE("decoupled bath gives zeros") {
        const auto table = eta_coefficients(two_mode_bath(0.0, 1.0), 3, 0.2);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j <= i; ++j) CHECK(std::abs(table.at(i, j)) == 0.0);
    }
    SUBCASE("closed form matches quadrature") {
        const auto bath = two_mode_bath(0.35, 1.0, 1.0, 1.6);
        const auto kernel = influence_correlation(bath);
        const double dt = 0.31;
        const auto table = eta_coefficients(bath, 4, dt);
        CHECK(std::abs(table.at(0, 0) - quad_half_square(kernel, 0, dt)) < 1e-10);
        CHECK(std::abs(table.at(2, 0) - quad_full_square(kernel, 2, 0, dt)) < 1e-10);
        CHECK(std::abs(table.at(3, 2) - quad_full_square(kernel, 3, 2, dt)) < 1e-10);
    }
    SUBCASE("degenerate energies hit the resonant branch") {
        const auto bath = two_mode_bath(0.35, 1.0, 1.2, 1.2);
        const auto kernel = influence_correlation(bath);
        const double dt = 0.31;
        const auto table = eta_coefficients(bath, 2, dt);
        CHECK(std::abs(table.at(1, 0) - quad_full_square(kernel, 1, 0, dt)) < 1e-10);
        CHECK(std::abs(table.at(0, 0) - quad_half_square(kernel, 0, dt)) < 1e-10);
    }
    SUBCASE("stable phi functions") {
        CHECK(std::abs(phi1(Complex(0.0, 0.0)) - Complex(1.0)) < 1e-15);
        CHECK(std::abs(phi2(Complex(0.0, 0.0)) - Complex(0.5)) < 1e-15);
        // series and direct branches agree near the crossover
        for (double x : {0.49, 0.51}) {
            const Complex z(0.0, x);
            CHECK(std::abs(phi1(z) - (std::exp(z) - 1.0) / z) < 1e-14);
            CHECK(std::abs(phi2(z) - (std::exp(z) - 1.0 - z) / (z * z)) < 1e-13);
        }
    }
    SUBCASE("input guards") {
        const auto bath = two_mode_bath(0.1, 1.0);
        CHECK_THROWS_AS(eta_coefficients(bath, 0, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(eta_coefficients(bath, 3, 0.0), std::invalid_argument);
    }
}

TEST_CASE("influence action") {
    UniformRng rng(65);
    const auto bath = sample_bath(2, 1.0, rng);
    const int n = 6;
    const auto table = eta_coefficients(bath, n, 0.25);

    SUBCASE("equal paths have zero action") {
        for (int trial = 0; trial < 1000; ++trial) {
            PathPair paths;
            paths.forward.resize(n);
            for (auto& x : paths.forward) x = rng.next() < 0.5 ? 1 : -1;
            paths.backward = paths.forward;
            CHECK(std::abs(fv_action(paths, table)) < 1e-14);
        }
    }
    SUBCASE("influence weight never exceeds one") {
        for (int trial = 0; trial < 1000; ++trial) {
            PathPair paths;
            paths.forward.resize(n);
            paths.backward.resize(n);
            for (auto& x : paths.forward) x = rng.next() < 0.5 ? 1 : -1;
            for (auto& y : paths.backward) y = rng.next() < 0.5 ? 1 : -1;
            const Complex action = fv_action(paths, table);
            CHECK((kImag * action).real() <= 1e-14);
        }
    }
    SUBCASE("decoupled bath gives zero action") {
        const auto empty = eta_coefficients(two_mode_bath(0.0, 1.0), n, 0.25);
        PathPair paths;
        paths.forward.assign(n, 1);
        paths.backward.assign(n, -1);
        CHECK(std::abs(fv_action(paths, empty)) == 0.0);
    }
    SUBCASE("matches quadrature of the exponent functional") {
        // N = 2 paths against the same double integrals evaluated by panels
        const auto b2 = two_mode_bath(0.2, 1.0, 1.0, 1.6);
        const double dt = 0.4;
        const auto tbl = eta_coefficients(b2, 2, dt);
        const auto kernel = influence_correlation(b2);
        PathPair paths;
        paths.forward = {1, 1};
        paths.backward = {1, -1};
        Complex ln_f = 0.0;
        const Complex q00 = quad_half_square(kernel, 0, dt);
        const Complex q11 = quad_half_square(kernel, 1, dt);
        const Complex q10 = quad_full_square(kernel, 1, 0, dt);
        const Complex qs[2][2] = {{q00, 0.0}, {q10, q11}};
        for (int i = 0; i < 2; ++i) {
            const double xi = paths.forward[i] - paths.backward[i];
            for (int j = 0; j <= i; ++j)
                ln_f -= xi * (qs[i][j] * static_cast<double>(paths.forward[j]) -
                              std::conj(qs[i][j]) * static_cast<double>(paths.backward[j]));
        }
        CHECK(std::abs(fv_action(paths, tbl) - (-kImag * ln_f)) < 1e-10);
    }
    SUBCASE("length mismatch is rejected") {
        PathPair paths;
        paths.forward.assign(4, 1);
        paths.backward.assign(4, 1);
        CHECK_THROWS_AS(fv_action(paths, table), std::invalid_argument);
    }
}
