#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qcoalg/errors.hpp"

namespace qcoalg {

// Probabilities below this are pruned from distribution supports.
inline constexpr double kProbPruneTol = 1e-12;
// Total probability mass must be within this of one.
inline constexpr double kProbSumTol = 1e-9;

/// Finite-support probability distribution over string-labeled points.
/// Labels compare by string equality; integer-valued points use the
/// canonical form produced by int_label (e.g. "-3").
class Distribution {
public:
    Distribution() = default;

    // Validates: no negative mass, total within kProbSumTol of one. Entries
    // below kProbPruneTol are pruned; if pruning alone moved the total off by
    // more than kProbSumTol the remainder is renormalized.
    static Distribution from_weights(std::map<std::string, double> weights);

    const std::map<std::string, double>& support() const { return support_; }
    double probability(const std::string& label) const;
    std::size_t support_size() const { return support_.size(); }
    double total_mass() const;

    bool approx_equal(const Distribution& other, double tol) const;
    bool operator==(const Distribution& other) const = default;

private:
    std::map<std::string, double> support_;
};

std::string int_label(long long k);

/// Nonnegative weights summing to one.
class ConvexCombination {
public:
    explicit ConvexCombination(std::vector<double> weights);

    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return weights_.size(); }

private:
    std::vector<double> weights_;
};

/// Distribution over distributions: an element of D(D(X)). Outer weights are
/// kept alongside their inner distributions; equal inner values need not be
/// merged, dist_flatten treats repeats correctly.
struct NestedDistribution {
    std::vector<std::pair<Distribution, double>> support;
};

// Monad unit: point mass at x.
Distribution dist_unit(const std::string& x);

// Pushforward along f; masses of points with a common image are summed.
Distribution dist_map(const std::function<std::string(const std::string&)>& f,
                      const Distribution& phi);

// Monad multiplication: weighted mixture of the inner distributions.
Distribution dist_flatten(const NestedDistribution& nested);

// Pointwise weighted sum of distributions; agrees with dist_flatten applied
// to the corresponding nested distribution.
Distribution convex_sum(const ConvexCombination& weights, const std::vector<Distribution>& points);

}  // namespace qcoalg
