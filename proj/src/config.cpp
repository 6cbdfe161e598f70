#include "fvk/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace fvk::cli {

namespace {

struct RawEntry {
    std::string key;
    std::string value;
    int line = 0;
};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const RawEntry& e) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(e.value, &pos);
    } catch (const std::exception&) {
        fail(e.line, "expected a number for '" + e.key + "', got '" + e.value + "'");
    }
    if (pos != e.value.size())
        fail(e.line, "trailing characters in value for '" + e.key + "'");
    return v;
}

long parse_int(const RawEntry& e) {
    const double v = parse_double(e);
    if (v != std::floor(v)) fail(e.line, "expected an integer for '" + e.key + "'");
    return static_cast<long>(v);
}

bool parse_bool(const RawEntry& e) {
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    fail(e.line, "expected true/false for '" + e.key + "'");
}

std::vector<double> parse_double_list(const RawEntry& e) {
    std::istringstream in(e.value);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            fail(e.line, "expected numbers for '" + e.key + "', got '" + tok + "'");
        }
    }
    if (out.empty()) fail(e.line, "empty list for '" + e.key + "'");
    return out;
}

// key of the form name[i] or name[i][j]
bool indexed_key(const std::string& key, const std::string& name, int& i, int& j, int& rank) {
    if (key.rfind(name + "[", 0) != 0) return false;
    std::size_t p = name.size();
    rank = 0;
    i = j = -1;
    while (p < key.size()) {
        if (key[p] != '[') return false;
        std::size_t close = key.find(']', p);
        if (close == std::string::npos) return false;
        const std::string idx = key.substr(p + 1, close - p - 1);
        if (idx.empty()) return false;
        for (char c : idx)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        const int v = std::stoi(idx);
        if (rank == 0)
            i = v;
        else if (rank == 1)
            j = v;
        else
            return false;
        ++rank;
        p = close + 1;
    }
    return p == key.size() && rank >= 1;
}

}  // namespace

Command parse_command(const std::string& name) {
    if (name == "kernels") return Command::Kernels;
    if (name == "corr") return Command::Corr;
    if (name == "g4check") return Command::G4Check;
    if (name == "pairing") return Command::Pairing;
    if (name == "dynamics") return Command::Dynamics;
    if (name == "scaling") return Command::Scaling;
    throw std::invalid_argument("unknown command '" + name + "'");
}

std::string command_name(Command cmd) {
    switch (cmd) {
        case Command::Kernels: return "kernels";
        case Command::Corr: return "corr";
        case Command::G4Check: return "g4check";
        case Command::Pairing: return "pairing";
        case Command::Dynamics: return "dynamics";
        case Command::Scaling: return "scaling";
    }
    return "?";
}

RunConfig parse_config(const std::string& text, Command command) {
    std::map<std::string, std::vector<RawEntry>> sections;
    {
        std::istringstream in(text);
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') fail(lineno, "unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                if (section != "bath" && section != "system" && section != "grid" &&
                    section != "run")
                    fail(lineno, "unknown section '" + section + "'");
                sections.try_emplace(section);
                continue;
            }
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
            if (section.empty()) fail(lineno, "key outside of any section");
            RawEntry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno};
            if (e.key.empty()) fail(lineno, "empty key");
            if (e.value.empty()) fail(lineno, "empty value for '" + e.key + "'");
            sections[section].push_back(std::move(e));
        }
    }

    RunConfig cfg;
    cfg.command = command;

    // ---- [bath] ----
    std::string statistics = "fermi";
    std::optional<double> beta;
    int modes = 0, n_max = 0;
    std::map<int, double> energies;
    std::map<std::pair<int, int>, double> couplings;
    std::map<int, double> omega, cval, mval;
    if (auto it = sections.find("bath"); it != sections.end()) {
        for (const auto& e : it->second) {
            int i, j, rank;
            if (e.key == "statistics") {
                statistics = e.value;
                if (statistics != "fermi" && statistics != "bose_bilinear" &&
                    statistics != "bose_linear")
                    fail(e.line, "statistics must be fermi, bose_bilinear or bose_linear");
            } else if (e.key == "modes") {
                modes = static_cast<int>(parse_int(e));
            } else if (e.key == "beta") {
                beta = parse_double(e);
            } else if (e.key == "random") {
                cfg.bath_random = parse_bool(e);
            } else if (e.key == "n_max") {
                n_max = static_cast<int>(parse_int(e));
            } else if (indexed_key(e.key, "E", i, j, rank) && rank == 1) {
                energies[i] = parse_double(e);
            } else if (indexed_key(e.key, "g", i, j, rank) && rank == 2) {
                couplings[{i, j}] = parse_double(e);
            } else if (indexed_key(e.key, "omega", i, j, rank) && rank == 1) {
                omega[i] = parse_double(e);
            } else if (indexed_key(e.key, "c", i, j, rank) && rank == 1) {
                cval[i] = parse_double(e);
            } else if (indexed_key(e.key, "m", i, j, rank) && rank == 1) {
                mval[i] = parse_double(e);
            } else {
                fail(e.line, "unknown key '" + e.key + "' in [bath]");
            }
        }
    }
    cfg.bath_modes = modes;
    cfg.bath_beta = beta;
    if (statistics == "bose_linear") {
        if (modes < 1) throw std::invalid_argument("config: [bath] modes required");
        LinearBoseBathSpec lb;
        lb.omega.resize(modes);
        lb.c.resize(modes);
        lb.mass.resize(modes);
        for (int k = 0; k < modes; ++k) {
            if (!omega.count(k))
                throw std::invalid_argument("config: missing omega[" + std::to_string(k) + "]");
            if (!cval.count(k))
                throw std::invalid_argument("config: missing c[" + std::to_string(k) + "]");
            lb.omega[k] = omega[k];
            lb.c[k] = cval[k];
            lb.mass[k] = mval.count(k) ? mval[k] : 1.0;
        }
        lb.beta = beta.value_or(0.0);
        lb.validate();
        cfg.linear_bath = lb;
    } else if (!cfg.bath_random && modes > 0) {
        BathSpec bath;
        bath.num_modes = modes;
        bath.statistics = statistics == "fermi" ? Statistics::Fermi : Statistics::BoseBilinear;
        bath.boson_truncation = n_max > 0 ? n_max : 1;
        bath.beta = beta.value_or(0.0);
        bath.energies.resize(modes);
        for (int k = 0; k < modes; ++k) {
            if (!energies.count(k))
                throw std::invalid_argument("config: missing E[" + std::to_string(k) + "]");
            bath.energies[k] = energies[k];
        }
        bath.coupling = RealMatrix::Zero(modes, modes);
        for (const auto& [kl, v] : couplings) {
            if (kl.first < 0 || kl.first >= modes || kl.second < 0 || kl.second >= modes)
                throw std::invalid_argument("config: coupling index out of range in g[" +
                                            std::to_string(kl.first) + "][" +
                                            std::to_string(kl.second) + "]");
            bath.coupling(kl.first, kl.second) = v;
        }
        bath.validate();  // reports antisymmetry violations
        cfg.bath = bath;
    }

    // ---- [system] ----
    if (auto it = sections.find("system"); it != sections.end()) {
        dynamics::SystemSpec sys;
        double bx = 0.0, by = 0.0, bz = 1.0;
        for (const auto& e : it->second) {
            if (e.key == "epsilon")
                sys.epsilon = parse_double(e);
            else if (e.key == "delta")
                sys.delta = parse_double(e);
            else if (e.key == "bloch_x")
                bx = parse_double(e);
            else if (e.key == "bloch_y")
                by = parse_double(e);
            else if (e.key == "bloch_z")
                bz = parse_double(e);
            else
                fail(e.line, "unknown key '" + e.key + "' in [system]");
        }
        if (bx * bx + by * by + bz * bz > 1.0 + 1e-12)
            throw std::invalid_argument("config: Bloch vector must have norm <= 1");
        sys.rho0 << 0.5 * (1.0 + bz), 0.5 * Complex(bx, -by), 0.5 * Complex(bx, by),
            0.5 * (1.0 - bz);
        sys.validate();
        cfg.system = sys;
    }

    // ---- [grid] ----
    if (auto it = sections.find("grid"); it != sections.end()) {
        dynamics::TimeGrid grid{0.0, 0.0, 0};
        for (const auto& e : it->second) {
            if (e.key == "t0")
                grid.t0 = parse_double(e);
            else if (e.key == "tf")
                grid.tf = parse_double(e);
            else if (e.key == "slices")
                grid.slices = static_cast<int>(parse_int(e));
            else
                fail(e.line, "unknown key '" + e.key + "' in [grid]");
        }
        grid.validate();
        cfg.grid = grid;
    }

    // ---- [run] ----
    if (auto it = sections.find("run"); it != sections.end()) {
        for (const auto& e : it->second) {
            if (e.key == "seed")
                cfg.seed = static_cast<std::uint64_t>(parse_int(e));
            else if (e.key == "samples")
                cfg.samples = static_cast<int>(parse_int(e));
            else if (e.key == "lambdas")
                cfg.lambdas = parse_double_list(e);
            else if (e.key == "memory")
                cfg.memory = static_cast<int>(parse_int(e));
            else if (e.key.rfind("tol.", 0) == 0)
                cfg.tolerances[e.key.substr(4)] = parse_double(e);
            else
                fail(e.line, "unknown key '" + e.key + "' in [run]");
        }
    }

    // ---- per-command requirements ----
    const bool needs_bath = command != Command::Kernels || !cfg.linear_bath;
    if (needs_bath && !cfg.bath && !cfg.bath_random && !cfg.linear_bath)
        throw std::invalid_argument("config: [bath] section required for '" +
                                    command_name(command) + "'");
    if (cfg.bath_random && cfg.bath_modes < 1)
        throw std::invalid_argument("config: random bath requires 'modes'");
    if (command == Command::Dynamics || command == Command::Scaling) {
        if (!cfg.system)
            throw std::invalid_argument("config: [system] section required for '" +
                                        command_name(command) + "'");
        if (!cfg.grid)
            throw std::invalid_argument("config: [grid] section required for '" +
                                        command_name(command) + "'");
        if (cfg.bath_random || !cfg.bath)
            throw std::invalid_argument("config: explicit [bath] required for '" +
                                        command_name(command) + "'");
    }
    if (command == Command::Scaling && cfg.lambdas.size() < 2)
        throw std::invalid_argument("config: scaling requires 'lambdas' with >= 2 entries");
    if (command == Command::Kernels && !cfg.grid)
        throw std::invalid_argument("config: [grid] section required for 'kernels'");
    return cfg;
}

RunConfig load_config(const std::string& path, Command command) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), command);
}

}  // namespace fvk::cli
