#include "qcoalg/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json_detail.hpp"

namespace qcoalg::io {

namespace {

using detail::json;

// Labels and letters must survive a bare CSV cell.
void check_csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n\r") != std::string::npos) {
        throw ValidationError("label '" + s + "' cannot be written to CSV");
    }
}

// Numeric-aware label order: integer labels sort by value, everything else
// lexicographically after them.
bool label_less(const std::string& a, const std::string& b) {
    auto as_int = [](const std::string& s, long long& out) {
        if (s.empty()) return false;
        std::size_t i = s[0] == '-' ? 1 : 0;
        if (i == s.size()) return false;
        for (std::size_t k = i; k < s.size(); ++k) {
            if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
        }
        out = std::strtoll(s.c_str(), nullptr, 10);
        return true;
    };
    long long ia = 0, ib = 0;
    const bool na = as_int(a, ia), nb = as_int(b, ib);
    if (na && nb) return ia < ib;
    if (na != nb) return na;
    return a < b;
}

std::vector<std::string> sorted_labels(const Distribution& d) {
    std::vector<std::string> labels;
    labels.reserve(d.support_size());
    for (const auto& [label, p] : d.support()) {
        (void)p;
        labels.push_back(label);
    }
    std::sort(labels.begin(), labels.end(), label_less);
    return labels;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string line;
    std::istringstream is(text);
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> split_csv_row(const std::string& line, std::size_t expected,
                                       const char* what) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (line.size() > 0 && line.back() == ',') cells.push_back("");
    if (cells.size() != expected) {
        throw ValidationError(std::string(what) + ": expected " + std::to_string(expected) +
                              " columns, got " + std::to_string(cells.size()) + " in '" + line + "'");
    }
    return cells;
}

double parse_double(const std::string& s, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw ValidationError(std::string(what) + ": bad number '" + s + "'");
    }
    return v;
}

}  // namespace

double round12(double x) {
    if (!std::isfinite(x)) throw ValidationError("cannot serialize non-finite number");
    if (x == 0.0) return 0.0;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::strtod(buf, nullptr);
}

std::string format_double(double x) {
    if (!std::isfinite(x)) throw ValidationError("cannot serialize non-finite number");
    if (x == 0.0) x = 0.0;  // flush negative zero
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string write_matrix_json(const CMatrix& m) { return detail::matrix_to_json(m).dump(2) + "\n"; }
CMatrix read_matrix_json(const std::string& text) {
    return detail::matrix_from_json(detail::parse_json(text));
}

std::string write_dfa_json(const Dfa& d) { return detail::dfa_to_json(d).dump(2) + "\n"; }
Dfa read_dfa_json(const std::string& text) { return detail::dfa_from_json(detail::parse_json(text)); }

std::string write_markov_json(const MarkovChain& c) { return detail::markov_to_json(c).dump(2) + "\n"; }
MarkovChain read_markov_json(const std::string& text) {
    return detail::markov_from_json(detail::parse_json(text));
}

std::string write_quantum_json(const QuantumSystem& sys) {
    return detail::quantum_to_json(sys).dump(2) + "\n";
}
QuantumSystem read_quantum_json(const std::string& text) {
    return detail::quantum_from_json(detail::parse_json(text));
}

std::string write_realization_json(const MinimalRealization& m) {
    return detail::realization_to_json(m).dump(2) + "\n";
}
MinimalRealization read_realization_json(const std::string& text) {
    return detail::realization_from_json(detail::parse_json(text));
}

std::string write_distribution_json(const Distribution& d) {
    return detail::distribution_to_json(d).dump(2) + "\n";
}
Distribution read_distribution_json(const std::string& text) {
    return detail::distribution_from_json(detail::parse_json(text));
}

std::string write_distribution_csv(const Distribution& d) {
    std::string out = "label,probability\n";
    for (const auto& label : sorted_labels(d)) {
        check_csv_cell(label);
        out += label + "," + format_double(d.probability(label)) + "\n";
    }
    return out;
}

Distribution read_distribution_csv(const std::string& text) {
    std::map<std::string, double> weights;
    bool header = true;
    for (const auto& line : split_lines(text)) {
        if (line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        const auto cells = split_csv_row(line, 2, "distribution csv");
        weights[cells[0]] += parse_double(cells[1], "distribution csv");
    }
    return Distribution::from_weights(std::move(weights));
}

std::string write_stream_json(const DistStream& s) {
    json arr = json::array();
    for (const auto& d : s.entries) arr.push_back(detail::distribution_to_json(d));
    return arr.dump(2) + "\n";
}

DistStream read_stream_json(const std::string& text) {
    const json j = detail::parse_json(text);
    if (!j.is_array()) throw ValidationError("stream json: expected an array of distributions");
    DistStream out;
    for (const auto& e : j) out.entries.push_back(detail::distribution_from_json(e));
    return out;
}

std::string write_stream_csv(const DistStream& s) {
    std::string out = "step,label,probability\n";
    for (std::size_t t = 0; t < s.entries.size(); ++t) {
        for (const auto& label : sorted_labels(s.entries[t])) {
            check_csv_cell(label);
            out += std::to_string(t) + "," + label + "," +
                   format_double(s.entries[t].probability(label)) + "\n";
        }
    }
    return out;
}

DistStream read_stream_csv(const std::string& text) {
    std::map<std::size_t, std::map<std::string, double>> steps;
    bool header = true;
    for (const auto& line : split_lines(text)) {
        if (line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        const auto cells = split_csv_row(line, 3, "stream csv");
        const std::size_t t = static_cast<std::size_t>(parse_double(cells[0], "stream csv"));
        steps[t][cells[1]] += parse_double(cells[2], "stream csv");
    }
    DistStream out;
    for (auto& [t, weights] : steps) {
        if (t != out.entries.size()) throw ValidationError("stream csv: missing step " +
                                                           std::to_string(out.entries.size()));
        out.entries.push_back(Distribution::from_weights(std::move(weights)));
    }
    return out;
}

std::string write_raw_stream_csv(const std::vector<std::string>& labels,
                                 const std::vector<std::vector<double>>& rows) {
    std::string out = "# non-test\nstep,label,value\n";
    for (std::size_t t = 0; t < rows.size(); ++t) {
        if (rows[t].size() != labels.size()) throw ShapeError("raw stream: row length mismatch");
        for (std::size_t i = 0; i < labels.size(); ++i) {
            check_csv_cell(labels[i]);
            out += std::to_string(t) + "," + labels[i] + "," + format_double(rows[t][i]) + "\n";
        }
    }
    return out;
}

std::string write_behaviour_json(const BehaviourPrefix& b, bool non_test) {
    json j;
    j["depth"] = b.depth;
    j["effects"] = b.effect_labels;
    if (non_test) j["non_test"] = true;
    json table = json::object();
    for (const auto& [w, row] : b.table) {
        json vals = json::array();
        for (double v : row) vals.push_back(round12(v));
        table[w.str()] = std::move(vals);
    }
    j["table"] = std::move(table);
    return j.dump(2) + "\n";
}

BehaviourPrefix read_behaviour_json(const std::string& text) {
    const json j = detail::parse_json(text);
    BehaviourPrefix out;
    out.depth = detail::require_field(j, "depth", "behaviour json").get<std::size_t>();
    for (const auto& e : detail::require_field(j, "effects", "behaviour json")) {
        out.effect_labels.push_back(e.get<std::string>());
    }
    for (const auto& [w, vals] : detail::require_field(j, "table", "behaviour json").items()) {
        std::vector<double> row;
        for (const auto& v : vals) row.push_back(v.get<double>());
        if (row.size() != out.effect_labels.size()) {
            throw ValidationError("behaviour json: row length mismatch at word '" + w + "'");
        }
        out.table.emplace(Word(w), std::move(row));
    }
    return out;
}

std::string write_behaviour_csv(const BehaviourPrefix& b, bool non_test) {
    std::string out;
    if (non_test) out += "# non-test\n";
    out += "word,effect,probability\n";
    for (const auto& [w, row] : b.table) {
        check_csv_cell(w.str());
        for (std::size_t i = 0; i < b.effect_labels.size(); ++i) {
            check_csv_cell(b.effect_labels[i]);
            out += w.str() + "," + b.effect_labels[i] + "," + format_double(row[i]) + "\n";
        }
    }
    return out;
}

BehaviourPrefix read_behaviour_csv(const std::string& text) {
    BehaviourPrefix out;
    bool header = true;
    for (const auto& line : split_lines(text)) {
        if (line[0] == '#') continue;
        if (header) {
            header = false;
            continue;
        }
        const auto cells = split_csv_row(line, 3, "behaviour csv");
        const Word w(cells[0]);
        if (std::find(out.effect_labels.begin(), out.effect_labels.end(), cells[1]) ==
            out.effect_labels.end()) {
            out.effect_labels.push_back(cells[1]);
        }
        out.table[w].push_back(parse_double(cells[2], "behaviour csv"));
        out.depth = std::max(out.depth, w.size());
    }
    for (const auto& [w, row] : out.table) {
        if (row.size() != out.effect_labels.size()) {
            throw ValidationError("behaviour csv: incomplete row for word '" + w.str() + "'");
        }
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file '" + path + "'");
    out << content;
}

}  // namespace qcoalg::io
