#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcoalg/quantum.hpp"

namespace qcoalg {

/// Stream that is a finite prefix followed by a repeated block, in canonical
/// form: the period is as short as possible and the preperiod as short as
/// possible given that period.
struct EventuallyPeriodicStream {
    std::vector<std::vector<double>> preperiod;
    std::vector<std::vector<double>> period;  // nonempty

    // Entry at position i of the infinite stream.
    const std::vector<double>& at(std::size_t i) const;
    bool approx_equal(const EventuallyPeriodicStream& other, double tol) const;
};

// Shortest-period, shortest-preperiod form; entries within tol are identified.
EventuallyPeriodicStream canonical_stream(std::vector<std::vector<double>> preperiod,
                                          std::vector<std::vector<double>> period, double tol);

/// Affine map x -> matrix * x + offset on real coordinates.
struct AffineMap {
    std::vector<std::vector<double>> matrix;  // row-major
    std::vector<double> offset;

    std::vector<double> apply(const std::vector<double>& x) const;
};

/// Affine-coordinate realization of a behaviour: the smallest convex system
/// with the same word-indexed observations as the source. Coordinates are
/// normalized so the initial point is 0, except in dimension one with a
/// finite reachable set, where the reachable segment is [0,1] with the
/// initial point at 1.
struct MinimalRealization {
    std::size_t dim = 0;
    std::vector<double> initial;
    std::map<std::string, AffineMap> transitions;  // per letter
    AffineMap output;                              // coordinates -> effect probabilities
    std::vector<std::string> effect_labels;
    // Vertices of the convex hull of the reachable coordinates, present only
    // when that set is finite.
    std::optional<std::vector<std::vector<double>>> extreme_points;
};

struct OrbitCycle {
    std::size_t preperiod = 0;  // q: first index of the cycle
    std::size_t period = 1;     // p: states[q + p] revisits states[q]
    std::vector<DensityMatrix> states;  // rho_0 .. rho_{q+p}
};

// Iterates the single unitary of the system from rho0 until a state recurs
// within tol (max-norm on matrix entries). Throws NumericalError with the
// closest recurrence distance if no cycle shows up within max_steps.
OrbitCycle orbit_cycle(const QuantumSystem& sys, const DensityMatrix& rho0, double tol,
                       std::size_t max_steps);

// Distinct tails of the observation stream of a single-unitary system, as
// canonical eventually periodic streams (deterministically ordered).
std::vector<EventuallyPeriodicStream> reachable_suffixes(const QuantumSystem& sys,
                                                         const DensityMatrix& rho0, double tol,
                                                         std::size_t max_steps);

// Minimal affine realization of the behaviour of rho0 under the system.
// The affine dimension equals the rank of the reachable directions projected
// onto the observable functionals; the realization's behaviour prefix is
// checked against the source to check_depth within tol.
MinimalRealization minimal_realization(const QuantumSystem& sys, const DensityMatrix& rho0,
                                       double tol = kRankTol, std::size_t check_depth = 0);

// Re-minimization of an existing realization (used to confirm minimality).
MinimalRealization minimize_realization(const MinimalRealization& m, double tol = kRankTol,
                                        std::size_t check_depth = 0);

// Depth used when the caller requests the default (0): twice the squared
// Hilbert dimension, capped for multi-letter systems so the checked word
// table stays tractable.
std::size_t effective_check_depth(const QuantumSystem& sys, std::size_t requested);

// Observation table of the realization from its initial coordinates.
BehaviourPrefix realization_behaviour(const MinimalRealization& m, std::size_t depth);

}  // namespace qcoalg
