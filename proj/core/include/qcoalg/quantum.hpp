#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qcoalg/automata.hpp"
#include "qcoalg/linalg.hpp"
#include "qcoalg/markov.hpp"

namespace qcoalg {

/// Quantum system: a Hilbert dimension, one unitary per letter and an ordered
/// family of labeled effects. When the effects sum to the identity the family
/// is a test and observation vectors are probability distributions.
class QuantumSystem {
public:
    QuantumSystem(std::size_t dim, std::map<std::string, UnitaryOp> unitaries,
                  std::vector<std::pair<std::string, Effect>> effects, bool is_test,
                  double tol = kValidationTol);

    std::size_t dim() const { return dim_; }
    const std::map<std::string, UnitaryOp>& unitaries() const { return unitaries_; }
    const std::vector<std::pair<std::string, Effect>>& effects() const { return effects_; }
    bool is_test() const { return is_test_; }

    std::vector<std::string> letters() const;  // sorted
    std::vector<std::string> effect_labels() const;
    const UnitaryOp& unitary(const std::string& letter) const;

private:
    std::size_t dim_;
    std::map<std::string, UnitaryOp> unitaries_;
    std::vector<std::pair<std::string, Effect>> effects_;
    bool is_test_;
};

/// Quantum automaton: a quantum system with exactly one effect; words are
/// accepted with the probability that the effect measures `yes` after the
/// word's unitaries have been applied.
class QuantumAutomaton {
public:
    explicit QuantumAutomaton(QuantumSystem system);

    const QuantumSystem& system() const { return system_; }
    const Effect& effect() const { return system_.effects().front().second; }

private:
    QuantumSystem system_;
};

/// Observation table over all words up to a depth; each row is a vector of
/// effect probabilities in the system's fixed effect order.
struct BehaviourPrefix {
    std::size_t depth = 0;
    std::vector<std::string> effect_labels;
    std::map<Word, std::vector<double>> table;

    bool approx_equal(const BehaviourPrefix& other, double tol) const;
    double max_deviation(const BehaviourPrefix& other) const;
};

/// Walk specification: a spin-1/2 particle on a truncated integer line, or a
/// single-unitary walk on a finite vertex set with vertex observations.
struct WalkSpec {
    enum class Kind { Line, Graph };
    Kind kind = Kind::Line;
    std::size_t n_max = 1;     // line: positions -n_max..n_max
    std::size_t vertices = 0;  // graph
    std::optional<CMatrix> unitary;  // graph
};

struct QStepResult {
    std::vector<double> observations;  // effect order
    std::map<std::string, DensityMatrix> successors;
};

// |psi><psi| for a unit vector psi.
DensityMatrix pure_density(const std::vector<Complex>& psi, double tol = kValidationTol);

// One coalgebra step: effect probabilities of rho plus the conjugated
// successor state per letter.
QStepResult q_step(const QuantumSystem& sys, const DensityMatrix& rho);

// Probability that the word is accepted from the pure state psi.
double accept_probability(const QuantumAutomaton& qa, const std::vector<Complex>& psi,
                          const Word& u, double tol = kValidationTol);

// Complete observation table for all words of length <= depth: the entry at
// word u is the effect-probability vector of the state evolved along u.
BehaviourPrefix behaviour_prefix(const QuantumSystem& sys, const DensityMatrix& rho,
                                 std::size_t depth);

// Spin-1/2 walk on positions -n_max..n_max, letter "U", one position effect
// per site. Basis order is position-major, spin-minor: (up,-n_max),
// (down,-n_max), (up,-n_max+1), ... so serialized matrices are reproducible.
// The shift rule fixes the interior columns; boundary columns are completed
// to a unitary by Gram-Schmidt. Faithful as long as no more than n_max steps
// are taken from the origin.
QuantumSystem build_line_walk(std::size_t n_max);

// Quantum system described by a walk spec, including its conventional start
// state (spin-up at the origin for lines, vertex 0 for graphs).
QuantumSystem walk_system(const WalkSpec& spec);
DensityMatrix walk_initial_state(const WalkSpec& spec);

// Position distributions (phi_0, ..., phi_n) of the walk. For line walks n
// must not exceed n_max, otherwise the truncation boundary would contaminate
// the result.
DistStream walk_distribution(const WalkSpec& spec, std::size_t n);

// Observation distribution of a state under a test system.
Distribution observation_distribution(const QuantumSystem& sys, const DensityMatrix& rho);

}  // namespace qcoalg
