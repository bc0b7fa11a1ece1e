#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qcoalg/automata.hpp"

namespace qcoalg {

/// One observable step of a system: what is seen in the current state and the
/// successor per letter.
template <typename State, typename Obs>
struct StepOutput {
    Obs observation;
    std::map<std::string, State> successors;
};

/// A system presented by its step map alone. Any state-based system whose
/// transitions are indexed by letters fits; the word-indexed behaviour below
/// is what all such systems share.
template <typename State, typename Obs>
struct ObservedSystem {
    std::vector<std::string> alphabet;  // sorted single-character letters
    std::function<StepOutput<State, Obs>(const State&)> step;
};

/// The finite-depth behaviour of a state: for every word up to the depth, the
/// observation of the state reached by applying the word's letters left to
/// right. Words enumerate length-first then lexicographically; states are
/// shared per word prefix.
template <typename State, typename Obs>
std::map<Word, Obs> unfold(const ObservedSystem<State, Obs>& sys, const State& x,
                           std::size_t depth) {
    std::map<Word, Obs> table;
    std::vector<std::pair<Word, State>> level{{Word(), x}};
    for (std::size_t len = 0;; ++len) {
        std::vector<std::pair<Word, State>> next_level;
        for (auto& [w, state] : level) {
            StepOutput<State, Obs> out = sys.step(state);
            table.emplace(w, std::move(out.observation));
            if (len < depth) {
                for (const auto& a : sys.alphabet) {
                    auto it = out.successors.find(a);
                    if (it == out.successors.end()) {
                        throw ValidationError("unfold: step yielded no successor for letter '" + a + "'");
                    }
                    next_level.emplace_back(w.append(a[0]), std::move(it->second));
                }
            }
        }
        if (len == depth) break;
        level = std::move(next_level);
    }
    return table;
}

}  // namespace qcoalg
