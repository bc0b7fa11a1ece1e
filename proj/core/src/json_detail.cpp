#include "json_detail.hpp"

#include "qcoalg/io.hpp"

namespace qcoalg::detail {

namespace {

json affine_map_to_json(const AffineMap& m) {
    json rows = json::array();
    for (const auto& row : m.matrix) {
        json r = json::array();
        for (double v : row) r.push_back(io::round12(v));
        rows.push_back(std::move(r));
    }
    json offset = json::array();
    for (double v : m.offset) offset.push_back(io::round12(v));
    return json{{"matrix", std::move(rows)}, {"offset", std::move(offset)}};
}

AffineMap affine_map_from_json(const json& j, const char* what) {
    AffineMap out;
    for (const auto& row : require_field(j, "matrix", what)) {
        std::vector<double> r;
        for (const auto& v : row) r.push_back(v.get<double>());
        out.matrix.push_back(std::move(r));
    }
    for (const auto& v : require_field(j, "offset", what)) out.offset.push_back(v.get<double>());
    if (out.matrix.size() != out.offset.size()) {
        throw ValidationError(std::string(what) + ": matrix rows and offset length differ");
    }
    return out;
}

}  // namespace

const json& require_field(const json& j, const char* field, const char* what) {
    auto it = j.find(field);
    if (it == j.end()) {
        throw ValidationError(std::string(what) + ": missing field '" + field + "'");
    }
    return *it;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("json parse error: ") + e.what());
    }
}

json matrix_to_json(const CMatrix& m) {
    json entries = json::array();
    for (const Complex& z : m.entries()) {
        entries.push_back(json::array({io::round12(z.real()), io::round12(z.imag())}));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

CMatrix matrix_from_json(const json& j) {
    const std::size_t rows = require_field(j, "rows", "matrix").get<std::size_t>();
    const std::size_t cols = require_field(j, "cols", "matrix").get<std::size_t>();
    const json& entries = require_field(j, "entries", "matrix");
    if (!entries.is_array() || entries.size() != rows * cols) {
        throw ValidationError("matrix: entries must hold rows*cols [re, im] pairs");
    }
    CMatrix m(rows, cols);
    std::size_t k = 0;
    for (const auto& e : entries) {
        if (!e.is_array() || e.size() != 2) {
            throw ValidationError("matrix: entry " + std::to_string(k) + " is not an [re, im] pair");
        }
        m.entries()[k++] = Complex(e[0].get<double>(), e[1].get<double>());
    }
    if (!m.has_finite_entries()) throw ValidationError("matrix: non-finite entries");
    return m;
}

json dfa_to_json(const Dfa& d) {
    json j;
    j["states"] = d.states();
    j["alphabet"] = d.alphabet();
    json delta = json::object();
    for (const auto& [x, row] : d.delta()) {
        json r = json::object();
        for (const auto& [a, y] : row) r[a] = y;
        delta[x] = std::move(r);
    }
    j["delta"] = std::move(delta);
    j["accepting"] = d.accepting();
    if (d.initial()) j["initial"] = *d.initial();
    return j;
}

Dfa dfa_from_json(const json& j) {
    std::vector<std::string> states, alphabet;
    for (const auto& s : require_field(j, "states", "dfa")) states.push_back(s.get<std::string>());
    for (const auto& a : require_field(j, "alphabet", "dfa")) alphabet.push_back(a.get<std::string>());
    std::map<std::string, std::map<std::string, std::string>> delta;
    for (const auto& [x, row] : require_field(j, "delta", "dfa").items()) {
        for (const auto& [a, y] : row.items()) delta[x][a] = y.get<std::string>();
    }
    std::set<std::string> accepting;
    for (const auto& s : require_field(j, "accepting", "dfa")) accepting.insert(s.get<std::string>());
    std::optional<std::string> initial;
    if (j.contains("initial")) initial = j["initial"].get<std::string>();
    return Dfa(std::move(states), std::move(alphabet), std::move(delta), std::move(accepting),
               std::move(initial));
}

json markov_to_json(const MarkovChain& c) {
    json j;
    j["states"] = c.states();
    json step = json::object();
    for (const auto& [x, dist] : c.step_map()) step[x] = distribution_to_json(dist);
    j["step"] = std::move(step);
    if (c.initial()) j["initial"] = *c.initial();
    return j;
}

MarkovChain markov_from_json(const json& j) {
    std::vector<std::string> states;
    for (const auto& s : require_field(j, "states", "markov")) states.push_back(s.get<std::string>());
    std::map<std::string, Distribution> step;
    for (const auto& [x, dist] : require_field(j, "step", "markov").items()) {
        step.emplace(x, distribution_from_json(dist));
    }
    std::optional<std::string> initial;
    if (j.contains("initial")) initial = j["initial"].get<std::string>();
    return MarkovChain(std::move(states), std::move(step), std::move(initial));
}

json quantum_to_json(const QuantumSystem& sys) {
    json j;
    j["dim"] = sys.dim();
    json unitaries = json::object();
    for (const auto& [letter, u] : sys.unitaries()) unitaries[letter] = matrix_to_json(u.matrix());
    j["unitaries"] = std::move(unitaries);
    json effects = json::array();
    for (const auto& [label, e] : sys.effects()) {
        effects.push_back(json{{"label", label}, {"matrix", matrix_to_json(e.matrix())}});
    }
    j["effects"] = std::move(effects);
    j["is_test"] = sys.is_test();
    return j;
}

QuantumSystem quantum_from_json(const json& j) {
    const std::size_t dim = require_field(j, "dim", "quantum").get<std::size_t>();
    std::map<std::string, UnitaryOp> unitaries;
    for (const auto& [letter, m] : require_field(j, "unitaries", "quantum").items()) {
        unitaries.emplace(letter, UnitaryOp(matrix_from_json(m)));
    }
    std::vector<std::pair<std::string, Effect>> effects;
    for (const auto& e : require_field(j, "effects", "quantum")) {
        effects.emplace_back(require_field(e, "label", "effect").get<std::string>(),
                             Effect(matrix_from_json(require_field(e, "matrix", "effect"))));
    }
    const bool is_test = require_field(j, "is_test", "quantum").get<bool>();
    return QuantumSystem(dim, std::move(unitaries), std::move(effects), is_test);
}

std::vector<Complex> state_vector_from_json(const json& j) {
    if (!j.is_array()) throw ValidationError("initial_state: expected an array of [re, im] pairs");
    std::vector<Complex> psi;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2) {
            throw ValidationError("initial_state: entries must be [re, im] pairs");
        }
        psi.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return psi;
}

WalkSpec walk_from_json(const json& j) {
    WalkSpec spec;
    const std::string type = require_field(j, "type", "walk").get<std::string>();
    if (type == "line") {
        spec.kind = WalkSpec::Kind::Line;
        spec.n_max = require_field(j, "n_max", "walk").get<std::size_t>();
        if (spec.n_max < 1) throw ValidationError("walk: n_max must be at least 1");
    } else if (type == "graph") {
        spec.kind = WalkSpec::Kind::Graph;
        spec.vertices = require_field(j, "vertices", "walk").get<std::size_t>();
        spec.unitary = matrix_from_json(require_field(j, "unitary", "walk"));
    } else {
        throw ValidationError("walk: unknown type '" + type + "' (expected line or graph)");
    }
    return spec;
}

json realization_to_json(const MinimalRealization& m) {
    json j;
    j["dim"] = m.dim;
    json initial = json::array();
    for (double v : m.initial) initial.push_back(io::round12(v));
    j["initial"] = std::move(initial);
    json transitions = json::object();
    for (const auto& [letter, t] : m.transitions) transitions[letter] = affine_map_to_json(t);
    j["transitions"] = std::move(transitions);
    j["output"] = affine_map_to_json(m.output);
    j["effect_labels"] = m.effect_labels;
    if (m.extreme_points) {
        json pts = json::array();
        for (const auto& p : *m.extreme_points) {
            json pt = json::array();
            for (double v : p) pt.push_back(io::round12(v));
            pts.push_back(std::move(pt));
        }
        j["extreme_points"] = std::move(pts);
    }
    return j;
}

MinimalRealization realization_from_json(const json& j) {
    MinimalRealization m;
    m.dim = require_field(j, "dim", "realization").get<std::size_t>();
    for (const auto& v : require_field(j, "initial", "realization")) {
        m.initial.push_back(v.get<double>());
    }
    if (m.initial.size() != m.dim) throw ValidationError("realization: initial length differs from dim");
    auto check_rows = [&m](const AffineMap& a, std::size_t rows, const char* what) {
        if (a.offset.size() != rows) {
            throw ValidationError(std::string(what) + ": expected " + std::to_string(rows) + " rows");
        }
        for (const auto& row : a.matrix) {
            if (row.size() != m.dim) {
                throw ValidationError(std::string(what) + ": row length differs from dim");
            }
        }
    };
    for (const auto& [letter, t] : require_field(j, "transitions", "realization").items()) {
        AffineMap map = affine_map_from_json(t, "realization transition");
        check_rows(map, m.dim, "realization transition");
        m.transitions.emplace(letter, std::move(map));
    }
    m.output = affine_map_from_json(require_field(j, "output", "realization"), "realization output");
    for (const auto& l : require_field(j, "effect_labels", "realization")) {
        m.effect_labels.push_back(l.get<std::string>());
    }
    check_rows(m.output, m.effect_labels.size(), "realization output");
    if (j.contains("extreme_points")) {
        std::vector<std::vector<double>> pts;
        for (const auto& p : j["extreme_points"]) {
            std::vector<double> pt;
            for (const auto& v : p) pt.push_back(v.get<double>());
            pts.push_back(std::move(pt));
        }
        m.extreme_points = std::move(pts);
    }
    return m;
}

json distribution_to_json(const Distribution& d) {
    json j = json::object();
    for (const auto& [label, p] : d.support()) j[label] = io::round12(p);
    return j;
}

Distribution distribution_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("distribution: expected an object of label -> probability");
    std::map<std::string, double> weights;
    for (const auto& [label, p] : j.items()) weights[label] = p.get<double>();
    return Distribution::from_weights(std::move(weights));
}

}  // namespace qcoalg::detail
