#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcoalg/convdist.hpp"

namespace qcoalg {

/// Markov chain: each state steps to a distribution over states.
class MarkovChain {
public:
    MarkovChain(std::vector<std::string> states, std::map<std::string, Distribution> step,
                std::optional<std::string> initial = std::nullopt);

    const std::vector<std::string>& states() const { return states_; }
    const std::map<std::string, Distribution>& step_map() const { return step_; }
    const Distribution& step_of(const std::string& x) const;
    const std::optional<std::string>& initial() const { return initial_; }

private:
    std::vector<std::string> states_;
    std::map<std::string, Distribution> step_;
    std::optional<std::string> initial_;
};

/// Finite prefix (phi_0, ..., phi_n) of a stream of distributions.
struct DistStream {
    std::vector<Distribution> entries;

    bool approx_equal(const DistStream& other, double tol) const;
};

// One step of the chain lifted affinely to distributions over states:
// flatten of the pushforward along the step map.
Distribution markov_step(const MarkovChain& c, const Distribution& phi);

// Stream prefix (phi_0, markov_step(phi_0), ...) of length n + 1.
DistStream behaviour_stream(const MarkovChain& c, const Distribution& phi0, std::size_t n);

}  // namespace qcoalg
