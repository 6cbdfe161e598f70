#include "fvk/runner.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fvk/correlations.hpp"
#include "fvk/dynamics.hpp"
#include "fvk/fock.hpp"
#include "fvk/kernels.hpp"

namespace fvk::cli {

namespace {

using json = nlohmann::json;
using correlations::Side;
using correlations::SuperIndexVector;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    void header(const std::vector<std::string>& cols) { line(cols); }
    void row(const std::vector<double>& vals) {
        std::vector<std::string> cells;
        cells.reserve(vals.size());
        for (double v : vals) cells.push_back(fmt(v));
        line(cells);
    }
    void row(const std::vector<std::string>& cells) { line(cells); }

private:
    void line(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }
    std::ofstream out_;
};

BathSpec bath_for_sample(const RunConfig& cfg, UniformRng& rng, int sample) {
    if (!cfg.bath_random) return *cfg.bath;
    static constexpr double kBetaCycle[3] = {0.1, 1.0, 10.0};
    const double beta = cfg.bath_beta.value_or(kBetaCycle[sample % 3]);
    return sample_bath(cfg.bath_modes, beta, rng);
}

SuperIndexVector sides_from_bits(int bits, int n) {
    SuperIndexVector sides(n);
    for (int i = 0; i < n; ++i) sides[i] = (bits >> (n - 1 - i)) & 1 ? Side::Right : Side::Left;
    return sides;
}

std::string sides_label(const SuperIndexVector& sides) {
    std::string s;
    for (auto d : sides) s += d == Side::Left ? 'L' : 'R';
    return s;
}

// ---------------- kernels ----------------

json run_kernels(const RunConfig& cfg, CsvWriter& csv) {
    cfg.grid->validate();
    const int n = cfg.grid->slices;
    const double dtau = (cfg.grid->tf - cfg.grid->t0) / n;
    csv.header({"tau", "kR_re", "kR_im", "kI_re", "kI_im"});

    auto eval = [&](double tau) -> kernels::KernelPair {
        if (cfg.linear_bath) return kernels::bose_linear_kernels(*cfg.linear_bath, tau);
        if (cfg.bath->statistics == Statistics::Fermi)
            return kernels::fermi_kernels(*cfg.bath, tau);
        return kernels::bose_bilinear_kernels(*cfg.bath, tau);
    };

    double parity_resid = 0.0, consistency_resid = 0.0, substitution_resid = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double tau = cfg.grid->t0 + j * dtau;
        const auto kp = eval(tau);
        csv.row({tau, kp.k_real.real(), kp.k_real.imag(), kp.k_imag.real(), kp.k_imag.imag()});
        const auto km = eval(-tau);
        parity_resid = std::max(parity_resid, std::abs(km.k_real - kp.k_real));
        parity_resid = std::max(parity_resid, std::abs(km.k_imag + kp.k_imag));
        if (cfg.bath && cfg.bath->statistics == Statistics::Fermi) {
            const Complex c = correlations::two_time_analytic(*cfg.bath, tau, 0.0);
            consistency_resid = std::max(consistency_resid,
                                         std::abs(kp.k_real - 2.0 * c.real()));
            consistency_resid = std::max(consistency_resid,
                                         std::abs(kp.k_imag - 2.0 * kImag * c.imag()));
        }
        if (cfg.bath && cfg.bath->statistics == Statistics::BoseBilinear) {
            // mode-resolved real-part substitution against the fermionic kernel
            for (int k = 0; k < cfg.bath->num_modes; ++k) {
                for (int l = 0; l < cfg.bath->num_modes; ++l) {
                    const double g2 = cfg.bath->coupling(k, l) * cfg.bath->coupling(k, l);
                    if (g2 == 0.0) continue;
                    const double wk = cfg.bath->energies[k], wl = cfg.bath->energies[l];
                    const double thk = std::tanh(cfg.bath->beta * wk / 2.0);
                    const double thl = std::tanh(cfg.bath->beta * wl / 2.0);
                    const double krf = -2.0 * g2 * (std::cos(wk * tau) * std::cos(wl * tau) -
                                                    std::sin(wk * tau) * std::sin(wl * tau) * thk * thl);
                    const double krb = 2.0 * g2 * (std::cos(wk * tau) * std::cos(wl * tau) / (thk * thl) -
                                                   std::sin(wk * tau) * std::sin(wl * tau));
                    substitution_resid = std::max(substitution_resid,
                                                  std::abs(krb + krf / (thk * thl)));
                }
            }
        }
    }

    json summary;
    const double tol = cfg.tolerance("kernel", 1e-12);
    summary["parity_max_resid"] = parity_resid;
    summary["tol_kernel"] = tol;
    summary["pass_parity"] = parity_resid <= tol;
    if (cfg.bath && cfg.bath->statistics == Statistics::Fermi) {
        summary["consistency_max_resid"] = consistency_resid;
        summary["pass_consistency"] = consistency_resid <= tol;
    }
    if (cfg.bath && cfg.bath->statistics == Statistics::BoseBilinear) {
        summary["substitution_max_resid"] = substitution_resid;
        summary["pass_substitution"] = substitution_resid <= tol;
    }
    return summary;
}

// ---------------- corr ----------------

json run_corr(const RunConfig& cfg, CsvWriter& csv) {
    csv.header({"t1", "t2", "C_re", "C_im", "trace_re", "trace_im", "absdiff"});
    UniformRng rng(cfg.seed);
    double max_diff = 0.0;
    for (int s = 0; s < cfg.samples; ++s) {
        const BathSpec bath = bath_for_sample(cfg, rng, s);
        // the all-Left trace is the descending-time-ordered correlation
        const double ta = rng.uniform(0.0, 3.0), tb = rng.uniform(0.0, 3.0);
        const double t1 = std::max(ta, tb), t2 = std::min(ta, tb);
        const Complex analytic = correlations::two_time_analytic(bath, t1, t2);
        const Complex trace = correlations::multitime_trace(
            bath, {t1, t2}, {Side::Left, Side::Left});
        const double diff = std::abs(analytic - trace);
        max_diff = std::max(max_diff, diff);
        csv.row({t1, t2, analytic.real(), analytic.imag(), trace.real(), trace.imag(), diff});
    }
    json summary;
    const double tol = cfg.tolerance("corr", 1e-11);
    summary["max_absdiff"] = max_diff;
    summary["tol_corr"] = tol;
    summary["pass_corr"] = max_diff <= tol;
    return summary;
}

// ---------------- g4check ----------------

json run_g4check(const RunConfig& cfg, CsvWriter& csv) {
    csv.header({"sample_id", "d_combo", "normalized_abs_G4"});
    UniformRng rng(cfg.seed);
    double worst = 0.0;
    for (int s = 0; s < cfg.samples; ++s) {
        const BathSpec bath = bath_for_sample(cfg, rng, s);
        std::array<double, 4> times;
        for (auto& t : times) t = rng.uniform(0.0, 3.0);
        for (int bits = 0; bits < 16; ++bits) {
            const auto sides = sides_from_bits(bits, 4);
            const double ratio = correlations::cumulant4_normalized(bath, times, sides);
            worst = std::max(worst, ratio);
            csv.row({std::to_string(s), sides_label(sides), fmt(ratio)});
        }
    }
    json summary;
    const double tol = cfg.tolerance("g4", 1e-10);
    summary["max_normalized_g4"] = worst;
    summary["tol_g4"] = tol;
    summary["pass_g4"] = worst <= tol;
    return summary;
}

// ---------------- pairing ----------------

json run_pairing(const RunConfig& cfg, CsvWriter& csv) {
    csv.header({"sample_id", "caseI_re", "caseI_im", "caseII_re", "caseII_im", "caseIII_re",
                "caseIII_im", "counter_re", "counter_im", "resid_trace_rel",
                "resid_counter_rel"});
    UniformRng rng(cfg.seed);
    double worst_trace = 0.0, worst_counter = 0.0;
    for (int s = 0; s < cfg.samples; ++s) {
        const BathSpec bath = bath_for_sample(cfg, rng, s);
        std::array<double, 4> times;
        for (auto& t : times) t = rng.uniform(0.0, 3.0);
        const auto sides = sides_from_bits(rng.uniform_int(16), 4);
        const auto report = correlations::pairing_decomposition(bath, times, sides);
        const Complex trace = correlations::multitime_trace(
            bath, {times[0], times[1], times[2], times[3]}, sides);
        const double scale_t = std::max(std::abs(trace), 1e-300);
        const double scale_c = std::max(std::abs(report.counter_terms), 1e-300);
        const double resid_trace = std::abs(report.total() - trace) / scale_t;
        const double resid_counter = std::abs(report.total() - report.counter_terms) / scale_c;
        worst_trace = std::max(worst_trace, resid_trace);
        worst_counter = std::max(worst_counter, resid_counter);
        csv.row({std::to_string(s), fmt(report.case_i.real()), fmt(report.case_i.imag()),
                 fmt(report.case_ii.real()), fmt(report.case_ii.imag()),
                 fmt(report.case_iii.real()), fmt(report.case_iii.imag()),
                 fmt(report.counter_terms.real()), fmt(report.counter_terms.imag()),
                 fmt(resid_trace), fmt(resid_counter)});
    }
    json summary;
    const double tol = cfg.tolerance("pairing", 1e-10);
    summary["max_resid_trace_rel"] = worst_trace;
    summary["max_resid_counter_rel"] = worst_counter;
    summary["tol_pairing"] = tol;
    summary["pass_decomposition"] = worst_trace <= tol;
    summary["pass_counter_cancellation"] = worst_counter <= tol;
    return summary;
}

// ---------------- dynamics ----------------

json run_dynamics(const RunConfig& cfg, CsvWriter& csv) {
    csv.header({"t", "exact_sz", "exact_sx", "exact_purity", "exact_trace_dev", "pathsum_sz",
                "pathsum_sx", "pathsum_purity", "pathsum_trace_dev"});
    const auto exact = dynamics::exact_reduced_dynamics(*cfg.system, *cfg.bath, *cfg.grid);
    const auto table = kernels::eta_coefficients(*cfg.bath, cfg.grid->slices, cfg.grid->dt());
    const auto path = dynamics::pathsum_reduced_dynamics(*cfg.system, table, *cfg.grid,
                                                         cfg.memory);
    const auto esz = dynamics::observable_series(exact, dynamics::Observable::Sz);
    const auto esx = dynamics::observable_series(exact, dynamics::Observable::Sx);
    const auto epu = dynamics::observable_series(exact, dynamics::Observable::Purity);
    const auto psz = dynamics::observable_series(path, dynamics::Observable::Sz);
    const auto psx = dynamics::observable_series(path, dynamics::Observable::Sx);
    const auto ppu = dynamics::observable_series(path, dynamics::Observable::Purity);

    double herm = 0.0, trace_dev = 0.0, method_dist = 0.0;
    for (std::size_t n = 0; n < exact.rho.size(); ++n) {
        const double etd = std::abs(exact.rho[n].trace() - 1.0);
        const double ptd = std::abs(path.rho[n].trace() - 1.0);
        herm = std::max(herm, max_abs(Matrix(exact.rho[n] - exact.rho[n].adjoint())));
        herm = std::max(herm, max_abs(Matrix(path.rho[n] - path.rho[n].adjoint())));
        trace_dev = std::max(trace_dev, std::max(etd, ptd));
        method_dist = std::max(method_dist, dynamics::trace_distance(exact.rho[n], path.rho[n]));
        csv.row({exact.times[n], esz[n], esx[n], epu[n], etd, psz[n], psx[n], ppu[n], ptd});
    }
    json summary;
    const double tol_trace = cfg.tolerance("trace", 1e-8);
    const double tol_herm = cfg.tolerance("hermiticity", 1e-8);
    summary["max_trace_dev"] = trace_dev;
    summary["max_hermiticity_dev"] = herm;
    summary["max_method_distance"] = method_dist;
    summary["tol_trace"] = tol_trace;
    summary["tol_hermiticity"] = tol_herm;
    summary["pass_trace"] = trace_dev <= tol_trace;
    summary["pass_hermiticity"] = herm <= tol_herm;
    return summary;
}

// ---------------- scaling ----------------

json run_scaling(const RunConfig& cfg, CsvWriter& csv) {
    csv.header({"lambda", "D"});
    const auto result = dynamics::error_scaling(*cfg.system, *cfg.bath, *cfg.grid, cfg.lambdas);
    for (std::size_t i = 0; i < result.lambdas.size(); ++i)
        csv.row({result.lambdas[i], result.distances[i]});
    json summary;
    summary["inconclusive"] = result.inconclusive;
    if (!result.inconclusive) {
        const double lo = cfg.tolerance("slope_min", 5.0);
        const double hi = cfg.tolerance("slope_max", 7.0);
        summary["slope"] = result.slope;
        summary["slope_min"] = lo;
        summary["slope_max"] = hi;
        summary["pass_slope"] = result.slope >= lo && result.slope <= hi;
    }
    return summary;
}

}  // namespace

RunResult run(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);
    RunResult result;
    result.csv_path = (fs::path(cfg.output_dir) / "result.csv").string();
    result.summary_path = (fs::path(cfg.output_dir) / "summary.json").string();

    CsvWriter csv(result.csv_path);
    json summary;
    switch (cfg.command) {
        case Command::Kernels: summary = run_kernels(cfg, csv); break;
        case Command::Corr: summary = run_corr(cfg, csv); break;
        case Command::G4Check: summary = run_g4check(cfg, csv); break;
        case Command::Pairing: summary = run_pairing(cfg, csv); break;
        case Command::Dynamics: summary = run_dynamics(cfg, csv); break;
        case Command::Scaling: summary = run_scaling(cfg, csv); break;
    }
    summary["command"] = command_name(cfg.command);
    summary["seed"] = cfg.seed;
    summary["path_convention"] = "midpoint";

    bool all_pass = true;
    for (const auto& [key, value] : summary.items()) {
        if (key.rfind("pass_", 0) == 0 && value.is_boolean() && !value.get<bool>())
            all_pass = false;
    }
    result.exit_code = all_pass ? 0 : 1;

    std::ofstream out(result.summary_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + result.summary_path + "'");
    out << summary.dump(2) << '\n';
    return result;
}

}  // namespace fvk::cli
