#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qcoalg/automata.hpp"
#include "qcoalg/markov.hpp"
#include "qcoalg/quantum.hpp"

namespace qcoalg {

/// Quantum system file contents: the system plus an optional pure initial
/// state (defaults to the first basis vector when absent).
struct QuantumInput {
    QuantumSystem system;
    std::optional<std::vector<Complex>> initial_state;
};

using SystemFile = std::variant<Dfa, MarkovChain, QuantumInput, WalkSpec>;

// Loads a system description: JSON with a "kind" discriminator among
// dfa | markov | quantum | walk. All structural invariants are checked at
// load time; violations raise ValidationError naming the failed check.
SystemFile parse_system_file(const std::string& path);
SystemFile parse_system_text(const std::string& text);

struct RunConfig {
    enum class Command { Behaviour, Simulate, Minimize, DfaMin };
    enum class Format { Csv, Json };

    Command command = Command::Behaviour;
    std::string input_path;
    std::string output_path;  // empty writes to stdout
    std::size_t depth = 0;    // behaviour
    std::size_t steps = 0;    // simulate
    double tol = kRankTol;    // minimize
    std::size_t check_depth = 0;  // minimize; 0 selects the default
    std::optional<Format> format;  // absent selects the command default
};

// Exit codes: 0 success, 2 parse or validation failure, 3 numerical failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

// Executes the command, writing the artifact to the configured output and
// diagnostics to stderr. Returns the exit code.
int run_command(const RunConfig& cfg);

}  // namespace qcoalg
