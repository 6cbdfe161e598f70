// correlations.hpp — Multi-time bath correlation functions, cumulants, and
// the pairing decomposition of the four-time correlation

#pragma once

#include <array>
#include <vector>

#include "fvk/bath.hpp"
#include "fvk/types.hpp"

namespace fvk::correlations {

// Side on which an insertion acts on the bath density matrix.
enum class Side { Left, Right };
using SuperIndexVector = std::vector<Side>;

// <Q_k(t1) Q_k(t2)> for a single mode.
// Fermi: cos w(t1-t2) - i sin w(t1-t2) tanh(beta E/2).
// BoseBilinear: coth(beta E/2) cos w(t1-t2) - i sin w(t1-t2); beta = 0 diverges.
Complex pair_expectation(const BathSpec& bath, int mode, double t1, double t2);

// Closed-form two-time correlation:
//   Fermi:        -sum_{k,l} g_kl^2 <Q_k Q_k><Q_l Q_l>
//   BoseBilinear: +sum_{k,l} g_kl^2 <Q_k Q_k><Q_l Q_l>   (coth expectations)
Complex two_time_analytic(const BathSpec& bath, double t1, double t2);

// Exact super-operator correlation from Fock-space matrices:
//   2^{n/2} Tr[ (Left insertions, descending time)  rho_B
//               (Right insertions, ascending time) ]
// with insertion B(t) = sum_{k<l} g_kl Q_k(t) Q_l(t).  Equal times keep
// argument order (stable).  n in {2, 3, 4}.
Complex multitime_trace(const BathSpec& bath, const std::vector<double>& times,
                        const SuperIndexVector& sides);

// Fourth super-operator cumulant
//   G4 = C(t1..t4) - C(t1,t2)C(t3,t4) - C(t1,t3)C(t2,t4) - C(t1,t4)C(t2,t3)
// with matching side sub-vectors throughout.
Complex cumulant4(const BathSpec& bath, const std::array<double, 4>& times,
                  const SuperIndexVector& sides);

// |G4| / (|C(1234)| + sum_pairs |C C|); the scale-free vanishing measure.
double cumulant4_normalized(const BathSpec& bath, const std::array<double, 4>& times,
                            const SuperIndexVector& sides);

// |exact single-mode four-point - (<12><34> - <13><24> + <14><23>)|
double wick_check(const BathSpec& bath, int mode, const std::array<double, 4>& times);

struct PairingReport {
    Complex case_i;          // all four mode groups of size two
    Complex case_ii;         // one quartet group, two pair groups
    Complex case_iii;        // two quartet groups
    Complex counter_terms;   // C(12)C(34) + C(13)C(24) + C(14)C(23)
    Complex total() const { return case_i + case_ii + case_iii; }
};

// Signed enumeration of all ordered index assignments of the four insertions,
// classified by mode-grouping shape and evaluated through single-mode pair
// expectations (Wick for quartet groups).  total() equals multitime_trace on
// the same arguments.
PairingReport pairing_decomposition(const BathSpec& bath, const std::array<double, 4>& times,
                                    const SuperIndexVector& sides);

}  // namespace fvk::correlations
