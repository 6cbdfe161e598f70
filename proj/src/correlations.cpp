#include "fvk/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "fvk/fock.hpp"

namespace fvk::correlations {

namespace {

double thermal_weight(const BathSpec& bath, int mode) {
    const double x = bath.beta * bath.energies[mode] / 2.0;
    if (bath.statistics == Statistics::Fermi) return std::tanh(x);
    if (x == 0.0)
        throw std::domain_error("pair_expectation: coth pole at beta = 0 for a bosonic bath");
    return 1.0 / std::tanh(x);
}

// insertion sum_{k<l} g_kl Q_k(t) Q_l(t)
Matrix insertion(const BathSpec& bath, double t) {
    const long dim = bath.dimension();
    Matrix b = Matrix::Zero(dim, dim);
    for (int k = 0; k < bath.num_modes; ++k) {
        for (int l = k + 1; l < bath.num_modes; ++l) {
            if (bath.coupling(k, l) == 0.0) continue;
            b += bath.coupling(k, l) * (fock::quadrature(bath, k, t) * fock::quadrature(bath, l, t));
        }
    }
    return b;
}

// indices of `sides` split into the two time-ordered groups
void ordered_groups(const std::vector<double>& times, const SuperIndexVector& sides,
                    std::vector<int>& left, std::vector<int>& right) {
    left.clear();
    right.clear();
    for (int i = 0; i < static_cast<int>(sides.size()); ++i)
        (sides[i] == Side::Left ? left : right).push_back(i);
    std::stable_sort(left.begin(), left.end(),
                     [&](int a, int b) { return times[a] > times[b]; });
    std::stable_sort(right.begin(), right.end(),
                     [&](int a, int b) { return times[a] < times[b]; });
}

}  // namespace

Complex pair_expectation(const BathSpec& bath, int mode, double t1, double t2) {
    bath.validate();
    if (mode < 0 || mode >= bath.num_modes)
        throw std::out_of_range("pair_expectation: mode index out of range");
    const double w = bath.energies[mode];
    const double tau = t1 - t2;
    const double theta = thermal_weight(bath, mode);
    if (bath.statistics == Statistics::Fermi)
        return {std::cos(w * tau), -std::sin(w * tau) * theta};
    return {theta * std::cos(w * tau), -std::sin(w * tau)};
}

Complex two_time_analytic(const BathSpec& bath, double t1, double t2) {
    bath.validate();
    Complex c = 0.0;
    for (int k = 0; k < bath.num_modes; ++k) {
        for (int l = 0; l < bath.num_modes; ++l) {
            const double g = bath.coupling(k, l);
            if (g == 0.0) continue;
            c += g * g * pair_expectation(bath, k, t1, t2) * pair_expectation(bath, l, t1, t2);
        }
    }
    return bath.statistics == Statistics::Fermi ? -c : c;
}

Complex multitime_trace(const BathSpec& bath, const std::vector<double>& times,
                        const SuperIndexVector& sides) {
    bath.validate();
    const int n = static_cast<int>(times.size());
    if (n < 2 || n > 4)
        throw std::invalid_argument("multitime_trace: need 2, 3 or 4 insertion times");
    if (sides.size() != times.size())
        throw std::invalid_argument("multitime_trace: times/sides length mismatch");

    std::vector<int> left, right;
    ordered_groups(times, sides, left, right);

    Matrix acc = fock::thermal_state(bath);
    // Tr[L rho R] accumulated as rho * R first, then the left factors
    for (int i : right) acc = acc * insertion(bath, times[i]);
    for (auto it = left.rbegin(); it != left.rend(); ++it)
        acc = insertion(bath, times[*it]) * acc;
    return std::pow(2.0, n / 2.0) * acc.trace();
}

Complex cumulant4(const BathSpec& bath, const std::array<double, 4>& times,
                  const SuperIndexVector& sides) {
    if (sides.size() != 4) throw std::invalid_argument("cumulant4: need 4 side indices");
    const std::vector<double> ts(times.begin(), times.end());
    Complex g4 = multitime_trace(bath, ts, sides);
    static constexpr int kPairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
    for (const auto& p : kPairings) {
        const Complex cab = multitime_trace(bath, {times[p[0]], times[p[1]]},
                                            {sides[p[0]], sides[p[1]]});
        const Complex ccd = multitime_trace(bath, {times[p[2]], times[p[3]]},
                                            {sides[p[2]], sides[p[3]]});
        g4 -= cab * ccd;
    }
    return g4;
}

double cumulant4_normalized(const BathSpec& bath, const std::array<double, 4>& times,
                            const SuperIndexVector& sides) {
    const std::vector<double> ts(times.begin(), times.end());
    const Complex c1234 = multitime_trace(bath, ts, sides);
    double scale = std::abs(c1234);
    Complex g4 = c1234;
    static constexpr int kPairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
    for (const auto& p : kPairings) {
        const Complex prod = multitime_trace(bath, {times[p[0]], times[p[1]]},
                                             {sides[p[0]], sides[p[1]]}) *
                             multitime_trace(bath, {times[p[2]], times[p[3]]},
                                             {sides[p[2]], sides[p[3]]});
        g4 -= prod;
        scale += std::abs(prod);
    }
    return scale > 0.0 ? std::abs(g4) / scale : 0.0;
}

double wick_check(const BathSpec& bath, int mode, const std::array<double, 4>& times) {
    bath.validate();
    if (bath.statistics != Statistics::Fermi)
        throw std::invalid_argument("wick_check: fermionic baths only");
    const Matrix rho = fock::thermal_state(bath);
    Matrix prod = fock::quadrature(bath, mode, times[0]);
    for (int i = 1; i < 4; ++i) prod = prod * fock::quadrature(bath, mode, times[i]);
    const Complex lhs = (prod * rho).trace();
    auto pe = [&](int a, int b) { return pair_expectation(bath, mode, times[a], times[b]); };
    const Complex rhs = pe(0, 1) * pe(2, 3) - pe(0, 2) * pe(1, 3) + pe(0, 3) * pe(1, 2);
    return std::abs(lhs - rhs);
}

PairingReport pairing_decomposition(const BathSpec& bath, const std::array<double, 4>& times,
                                    const SuperIndexVector& sides) {
    bath.validate();
    if (bath.statistics != Statistics::Fermi)
        throw std::invalid_argument("pairing_decomposition: fermionic baths only");
    if (sides.size() != 4) throw std::invalid_argument("pairing_decomposition: need 4 sides");

    // operator string inside Tr[. rho]: cyclic form <R L> with R ascending,
    // L descending; insertion j acts at string time ts[j]
    std::vector<int> left, right;
    const std::vector<double> tvec(times.begin(), times.end());
    ordered_groups(tvec, sides, left, right);
    std::vector<double> ts;
    ts.reserve(4);
    for (int i : right) ts.push_back(times[i]);
    for (int i : left) ts.push_back(times[i]);

    const int m = bath.num_modes;
    auto pe = [&](int mode, double ta, double tb) {
        return pair_expectation(bath, mode, ta, tb);
    };

    std::vector<std::pair<int, int>> nonzero;
    for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
            if (bath.coupling(k, l) != 0.0) nonzero.emplace_back(k, l);

    PairingReport report{};
    const int np = static_cast<int>(nonzero.size());
    std::array<int, 4> pick{};
    for (pick[0] = 0; pick[0] < np; ++pick[0])
    for (pick[1] = 0; pick[1] < np; ++pick[1])
    for (pick[2] = 0; pick[2] < np; ++pick[2])
    for (pick[3] = 0; pick[3] < np; ++pick[3]) {
        double gprod = 1.0;
        std::array<int, 8> modes;
        std::array<double, 8> optimes;
        for (int j = 0; j < 4; ++j) {
            const auto [k, l] = nonzero[pick[j]];
            gprod *= bath.coupling(k, l);
            modes[2 * j] = k;
            modes[2 * j + 1] = l;
            optimes[2 * j] = ts[j];
            optimes[2 * j + 1] = ts[j];
        }
        // every mode must appear an even number of times
        std::array<int, 12> count{};
        for (int mm : modes) ++count[mm];
        bool even = true;
        int quartets = 0, pairs = 0;
        for (int mm = 0; mm < m; ++mm) {
            if (count[mm] % 2) { even = false; break; }
            if (count[mm] == 4) ++quartets;
            if (count[mm] == 2) ++pairs;
        }
        if (!even) continue;

        // sign of the stable sort of the operator string by mode
        int inversions = 0;
        for (int a = 0; a < 8; ++a)
            for (int b = a + 1; b < 8; ++b)
                if (modes[a] > modes[b]) ++inversions;
        const double sign = (inversions % 2) ? -1.0 : 1.0;

        // per-mode factors in within-string order
        Complex value = sign * gprod;
        for (int mm = 0; mm < m; ++mm) {
            if (count[mm] == 0) continue;
            std::array<double, 4> tl;
            int c = 0;
            for (int a = 0; a < 8; ++a)
                if (modes[a] == mm) tl[c++] = optimes[a];
            if (count[mm] == 2) {
                value *= pe(mm, tl[0], tl[1]);
            } else {
                value *= pe(mm, tl[0], tl[1]) * pe(mm, tl[2], tl[3]) -
                         pe(mm, tl[0], tl[2]) * pe(mm, tl[1], tl[3]) +
                         pe(mm, tl[0], tl[3]) * pe(mm, tl[1], tl[2]);
            }
        }
        if (quartets == 0)
            report.case_i += value;
        else if (quartets == 1)
            report.case_ii += value;
        else
            report.case_iii += value;
    }
    // enumeration uses the ordered double sum (each unordered pair twice per
    // insertion); rescale to the 2^{n/2} trace normalization
    report.case_i /= 4.0;
    report.case_ii /= 4.0;
    report.case_iii /= 4.0;

    static constexpr int kPairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
    for (const auto& p : kPairings) {
        report.counter_terms += multitime_trace(bath, {times[p[0]], times[p[1]]},
                                                {sides[p[0]], sides[p[1]]}) *
                                multitime_trace(bath, {times[p[2]], times[p[3]]},
                                                {sides[p[2]], sides[p[3]]});
    }
    return report;
}

}  // namespace fvk::correlations
