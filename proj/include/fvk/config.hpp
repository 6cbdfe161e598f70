// config.hpp — Flat key-value run configuration

#pragma once

#include <map>
#include <optional>
#include <string>

#include "fvk/bath.hpp"
#include "fvk/dynamics.hpp"
#include "fvk/types.hpp"

namespace fvk::cli {

enum class Command { Kernels, Corr, G4Check, Pairing, Dynamics, Scaling };

Command parse_command(const std::string& name);
std::string command_name(Command cmd);

struct RunConfig {
    Command command = Command::Kernels;

    // [bath]
    bool bath_random = false;
    std::optional<BathSpec> bath;                 // fermi / bose_bilinear
    std::optional<LinearBoseBathSpec> linear_bath;
    int bath_modes = 0;
    std::optional<double> bath_beta;              // fixed beta for random baths

    // [system]
    std::optional<dynamics::SystemSpec> system;

    // [grid]
    std::optional<dynamics::TimeGrid> grid;

    // [run]
    std::uint64_t seed = 42;
    int samples = 20;
    std::vector<double> lambdas;
    std::optional<int> memory;
    std::map<std::string, double> tolerances;     // tol.<name> overrides

    std::string output_dir = ".";

    double tolerance(const std::string& name, double fallback) const {
        auto it = tolerances.find(name);
        return it == tolerances.end() ? fallback : it->second;
    }
};

// Parses the documented flat schema ([bath]/[system]/[grid]/[run] sections,
// key = value lines, '#' comments).  Unknown sections or keys are hard
// errors naming the offender; malformed lines report their line number.
RunConfig parse_config(const std::string& text, Command command);

RunConfig load_config(const std::string& path, Command command);

}  // namespace fvk::cli
