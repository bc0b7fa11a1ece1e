#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qcoalg/errors.hpp"

namespace qcoalg {

/// Finite word over single-character letters; the empty word is epsilon.
/// Orders length-first, then lexicographically, so word-keyed maps enumerate
/// in breadth-first order.
class Word {
public:
    Word() = default;
    explicit Word(std::string letters) : letters_(std::move(letters)) {}

    const std::string& str() const { return letters_; }
    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    char letter(std::size_t i) const { return letters_[i]; }

    Word append(char a) const { return Word(letters_ + a); }

    std::strong_ordering operator<=>(const Word& other) const {
        if (auto c = letters_.size() <=> other.letters_.size(); c != 0) return c;
        return letters_.compare(other.letters_) <=> 0;
    }
    bool operator==(const Word& other) const = default;

private:
    std::string letters_;
};

/// Deterministic automaton: total transition map on states x alphabet plus a
/// set of accepting states. Letters are single-character strings.
class Dfa {
public:
    Dfa(std::vector<std::string> states, std::vector<std::string> alphabet,
        std::map<std::string, std::map<std::string, std::string>> delta,
        std::set<std::string> accepting, std::optional<std::string> initial = std::nullopt);

    const std::vector<std::string>& states() const { return states_; }
    const std::vector<std::string>& alphabet() const { return alphabet_; }  // sorted
    const std::map<std::string, std::map<std::string, std::string>>& delta() const { return delta_; }
    const std::set<std::string>& accepting() const { return accepting_; }
    const std::optional<std::string>& initial() const { return initial_; }

    bool has_state(const std::string& x) const;
    bool is_accepting(const std::string& x) const { return accepting_.count(x) > 0; }
    const std::string& next(const std::string& x, const std::string& a) const;

private:
    std::vector<std::string> states_;
    std::vector<std::string> alphabet_;
    std::map<std::string, std::map<std::string, std::string>> delta_;
    std::set<std::string> accepting_;
    std::optional<std::string> initial_;
};

/// All accepted words of length <= depth from some state.
struct LanguagePrefix {
    std::size_t depth = 0;
    std::set<Word> accepted;

    bool operator==(const LanguagePrefix& other) const = default;
};

// Extended transition: run(d, x, epsilon) = x, run(d, x, au) = run(d, delta(x,a), u).
std::string run(const Dfa& d, const std::string& x, const Word& u);

bool accepts(const Dfa& d, const std::string& x, const Word& u);

// Smallest sub-automaton containing the seed states and closed under the
// transitions; observations and transitions are inherited.
Dfa reachable_subcoalgebra(const Dfa& d, const std::set<std::string>& seed);

LanguagePrefix language_prefix(const Dfa& d, const std::string& x, std::size_t depth);

// Language-equivalent automaton with the fewest states: reachable closure
// from init followed by Hopcroft partition refinement. States of the result
// are renamed q0, q1, ... in breadth-first order from the initial state, with
// letters taken in sorted order.
Dfa minimize_dfa(const Dfa& d, const std::string& init);

}  // namespace qcoalg
