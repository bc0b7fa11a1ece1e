#include "qcoalg/automata.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace qcoalg {

Dfa::Dfa(std::vector<std::string> states, std::vector<std::string> alphabet,
         std::map<std::string, std::map<std::string, std::string>> delta,
         std::set<std::string> accepting, std::optional<std::string> initial)
    : states_(std::move(states)),
      alphabet_(std::move(alphabet)),
      delta_(std::move(delta)),
      accepting_(std::move(accepting)),
      initial_(std::move(initial)) {
    std::sort(alphabet_.begin(), alphabet_.end());
    alphabet_.erase(std::unique(alphabet_.begin(), alphabet_.end()), alphabet_.end());
    for (const auto& a : alphabet_) {
        if (a.size() != 1) throw ValidationError("dfa: letter '" + a + "' is not a single character");
    }
    std::set<std::string> seen;
    for (const auto& x : states_) {
        if (!seen.insert(x).second) throw ValidationError("dfa: duplicate state '" + x + "'");
    }
    for (const auto& x : accepting_) {
        if (!seen.count(x)) throw ValidationError("dfa: accepting state '" + x + "' not in states");
    }
    for (const auto& x : states_) {
        auto it = delta_.find(x);
        for (const auto& a : alphabet_) {
            if (it == delta_.end() || !it->second.count(a)) {
                throw ValidationError("dfa: transition missing for state '" + x + "' letter '" + a + "'");
            }
            const std::string& y = it->second.at(a);
            if (!seen.count(y)) {
                throw ValidationError("dfa: transition from '" + x + "' on '" + a +
                                      "' targets unknown state '" + y + "'");
            }
        }
    }
    for (const auto& [x, row] : delta_) {
        if (!seen.count(x)) throw ValidationError("dfa: transition from unknown state '" + x + "'");
        for (const auto& [a, y] : row) {
            (void)y;
            if (!std::binary_search(alphabet_.begin(), alphabet_.end(), a)) {
                throw ValidationError("dfa: transition on unknown letter '" + a + "'");
            }
        }
    }
    if (initial_ && !seen.count(*initial_)) {
        throw ValidationError("dfa: initial state '" + *initial_ + "' not in states");
    }
}

bool Dfa::has_state(const std::string& x) const {
    return delta_.count(x) > 0 || std::find(states_.begin(), states_.end(), x) != states_.end();
}

const std::string& Dfa::next(const std::string& x, const std::string& a) const {
    auto it = delta_.find(x);
    if (it == delta_.end()) throw ValidationError("dfa: unknown state '" + x + "'");
    auto jt = it->second.find(a);
    if (jt == it->second.end()) throw ValidationError("dfa: unknown letter '" + a + "'");
    return jt->second;
}

std::string run(const Dfa& d, const std::string& x, const Word& u) {
    if (!d.has_state(x)) throw ValidationError("run: unknown state '" + x + "'");
    std::string cur = x;
    for (std::size_t i = 0; i < u.size(); ++i) {
        cur = d.next(cur, std::string(1, u.letter(i)));
    }
    return cur;
}

bool accepts(const Dfa& d, const std::string& x, const Word& u) {
    return d.is_accepting(run(d, x, u));
}

Dfa reachable_subcoalgebra(const Dfa& d, const std::set<std::string>& seed) {
    for (const auto& x : seed) {
        if (!d.has_state(x)) throw ValidationError("reachable_subcoalgebra: seed state '" + x + "' not in states");
    }
    std::set<std::string> closed;
    std::deque<std::string> frontier(seed.begin(), seed.end());
    while (!frontier.empty()) {
        std::string x = frontier.front();
        frontier.pop_front();
        if (!closed.insert(x).second) continue;
        for (const auto& a : d.alphabet()) {
            const std::string& y = d.next(x, a);
            if (!closed.count(y)) frontier.push_back(y);
        }
    }
    std::vector<std::string> states;
    std::map<std::string, std::map<std::string, std::string>> delta;
    std::set<std::string> accepting;
    for (const auto& x : d.states()) {
        if (!closed.count(x)) continue;
        states.push_back(x);
        delta[x] = d.delta().at(x);
        if (d.is_accepting(x)) accepting.insert(x);
    }
    std::optional<std::string> initial;
    if (d.initial() && closed.count(*d.initial())) initial = d.initial();
    return Dfa(std::move(states), d.alphabet(), std::move(delta), std::move(accepting), initial);
}

LanguagePrefix language_prefix(const Dfa& d, const std::string& x, std::size_t depth) {
    if (!d.has_state(x)) throw ValidationError("language_prefix: unknown state '" + x + "'");
    LanguagePrefix out;
    out.depth = depth;
    // Breadth-first over the word tree, carrying the reached state.
    std::vector<std::pair<Word, std::string>> level{{Word(), x}};
    for (std::size_t len = 0;; ++len) {
        for (const auto& [w, st] : level) {
            if (d.is_accepting(st)) out.accepted.insert(w);
        }
        if (len == depth) break;
        std::vector<std::pair<Word, std::string>> next_level;
        next_level.reserve(level.size() * d.alphabet().size());
        for (const auto& [w, st] : level) {
            for (const auto& a : d.alphabet()) {
                next_level.emplace_back(w.append(a[0]), d.next(st, a));
            }
        }
        level = std::move(next_level);
    }
    return out;
}

namespace {

// Hopcroft's worklist refinement on the reachable part. States are indexed
// densely; returns the block id of each state.
std::vector<std::size_t> hopcroft_blocks(const std::vector<std::string>& states,
                                         const std::vector<std::string>& alphabet, const Dfa& d,
                                         std::size_t& block_count) {
    const std::size_t n = states.size();
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index.emplace(states[i], i);

    // Predecessor lists per letter.
    std::vector<std::vector<std::vector<std::size_t>>> preds(
        alphabet.size(), std::vector<std::vector<std::size_t>>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < alphabet.size(); ++k) {
            const std::size_t j = index.at(d.next(states[i], alphabet[k]));
            preds[k][j].push_back(i);
        }
    }

    std::vector<std::size_t> block_of(n, 0);
    std::vector<std::vector<std::size_t>> blocks;
    std::vector<std::size_t> acc, rej;
    for (std::size_t i = 0; i < n; ++i) {
        (d.is_accepting(states[i]) ? acc : rej).push_back(i);
    }
    if (!acc.empty()) blocks.push_back(acc);
    if (!rej.empty()) blocks.push_back(rej);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::size_t i : blocks[b]) block_of[i] = b;

    std::deque<std::pair<std::size_t, std::size_t>> worklist;  // (block, letter)
    std::set<std::pair<std::size_t, std::size_t>> pending;
    auto enqueue = [&](std::size_t b, std::size_t k) {
        if (pending.emplace(b, k).second) worklist.emplace_back(b, k);
    };
    const std::size_t smaller = (blocks.size() == 2 && blocks[1].size() < blocks[0].size()) ? 1 : 0;
    for (std::size_t k = 0; k < alphabet.size(); ++k) enqueue(smaller, k);

    while (!worklist.empty()) {
        auto [splitter, k] = worklist.front();
        worklist.pop_front();
        pending.erase({splitter, k});

        // States with an a_k-transition into the splitter block.
        std::unordered_set<std::size_t> incoming;
        for (std::size_t target : blocks[splitter]) {
            for (std::size_t p : preds[k][target]) incoming.insert(p);
        }
        if (incoming.empty()) continue;

        // Split every block crossed by `incoming`.
        std::unordered_map<std::size_t, std::vector<std::size_t>> hit;
        for (std::size_t s : incoming) hit[block_of[s]].push_back(s);
        for (auto& [b, in_part] : hit) {
            if (in_part.size() == blocks[b].size()) continue;
            std::unordered_set<std::size_t> in_set(in_part.begin(), in_part.end());
            std::vector<std::size_t> out_part;
            for (std::size_t s : blocks[b]) {
                if (!in_set.count(s)) out_part.push_back(s);
            }
            const std::size_t nb = blocks.size();
            blocks[b] = std::move(in_part);
            blocks.push_back(std::move(out_part));
            for (std::size_t s : blocks[nb]) block_of[s] = nb;
            // b keeps the in-part; a pending (b, k2) now covers only that half
            // and the out-part must be queued alongside it.
            const std::size_t smaller_b = blocks[b].size() <= blocks[nb].size() ? b : nb;
            for (std::size_t k2 = 0; k2 < alphabet.size(); ++k2) {
                if (pending.count({b, k2})) {
                    enqueue(nb, k2);
                } else {
                    enqueue(smaller_b, k2);
                }
            }
        }
    }
    block_count = blocks.size();
    return block_of;
}

}  // namespace

Dfa minimize_dfa(const Dfa& d, const std::string& init) {
    if (!d.has_state(init)) throw ValidationError("minimize_dfa: unknown state '" + init + "'");
    const Dfa reach = reachable_subcoalgebra(d, {init});
    const std::vector<std::string>& states = reach.states();
    const std::vector<std::string>& alphabet = reach.alphabet();

    std::size_t block_count = 0;
    std::vector<std::size_t> block_of = hopcroft_blocks(states, alphabet, reach, block_count);
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < states.size(); ++i) index.emplace(states[i], i);

    // Canonical names: breadth-first over blocks from the initial block.
    std::vector<std::size_t> bfs_name(block_count, block_count);
    std::deque<std::size_t> frontier{block_of[index.at(init)]};
    std::size_t next_name = 0;
    std::vector<std::size_t> representative(block_count);
    for (std::size_t i = states.size(); i-- > 0;) representative[block_of[i]] = i;
    while (!frontier.empty()) {
        const std::size_t b = frontier.front();
        frontier.pop_front();
        if (bfs_name[b] != block_count) continue;
        bfs_name[b] = next_name++;
        const std::size_t rep = representative[b];
        for (const auto& a : alphabet) {
            const std::size_t tb = block_of[index.at(reach.next(states[rep], a))];
            if (bfs_name[tb] == block_count) frontier.push_back(tb);
        }
    }

    std::vector<std::string> new_states(next_name);
    for (std::size_t b = 0; b < block_count; ++b) {
        if (bfs_name[b] < next_name) new_states[bfs_name[b]] = "q" + std::to_string(bfs_name[b]);
    }
    std::map<std::string, std::map<std::string, std::string>> delta;
    std::set<std::string> accepting;
    for (std::size_t b = 0; b < block_count; ++b) {
        if (bfs_name[b] >= next_name) continue;  // unreachable block (cannot occur after closure)
        const std::string& name = new_states[bfs_name[b]];
        const std::size_t rep = representative[b];
        for (const auto& a : alphabet) {
            const std::size_t tb = block_of[index.at(reach.next(states[rep], a))];
            delta[name][a] = new_states[bfs_name[tb]];
        }
        if (reach.is_accepting(states[rep])) accepting.insert(name);
    }
    return Dfa(std::move(new_states), alphabet, std::move(delta), std::move(accepting),
               "q0");
}

}  // namespace qcoalg
