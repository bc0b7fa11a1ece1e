#include "qcoalg/markov.hpp"

#include <algorithm>
#include <set>

namespace qcoalg {

MarkovChain::MarkovChain(std::vector<std::string> states, std::map<std::string, Distribution> step,
                         std::optional<std::string> initial)
    : states_(std::move(states)), step_(std::move(step)), initial_(std::move(initial)) {
    std::set<std::string> known(states_.begin(), states_.end());
    if (known.size() != states_.size()) throw ValidationError("markov chain: duplicate states");
    for (const auto& x : states_) {
        auto it = step_.find(x);
        if (it == step_.end()) throw ValidationError("markov chain: no step for state '" + x + "'");
        for (const auto& [y, p] : it->second.support()) {
            (void)p;
            if (!known.count(y)) {
                throw ValidationError("markov chain: step of '" + x + "' targets unknown state '" + y + "'");
            }
        }
    }
    for (const auto& [x, d] : step_) {
        (void)d;
        if (!known.count(x)) throw ValidationError("markov chain: step from unknown state '" + x + "'");
    }
    if (initial_ && !known.count(*initial_)) {
        throw ValidationError("markov chain: initial state '" + *initial_ + "' not in states");
    }
}

const Distribution& MarkovChain::step_of(const std::string& x) const {
    auto it = step_.find(x);
    if (it == step_.end()) throw ValidationError("markov chain: unknown state '" + x + "'");
    return it->second;
}

bool DistStream::approx_equal(const DistStream& other, double tol) const {
    if (entries.size() != other.entries.size()) return false;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!entries[i].approx_equal(other.entries[i], tol)) return false;
    }
    return true;
}

Distribution markov_step(const MarkovChain& c, const Distribution& phi) {
    NestedDistribution nested;
    nested.support.reserve(phi.support_size());
    for (const auto& [x, p] : phi.support()) {
        nested.support.emplace_back(c.step_of(x), p);
    }
    return dist_flatten(nested);
}

DistStream behaviour_stream(const MarkovChain& c, const Distribution& phi0, std::size_t n) {
    DistStream out;
    out.entries.reserve(n + 1);
    out.entries.push_back(phi0);
    for (std::size_t k = 0; k < n; ++k) {
        out.entries.push_back(markov_step(c, out.entries.back()));
    }
    return out;
}

}  // namespace qcoalg
