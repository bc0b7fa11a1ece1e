#pragma once

#include <string>
#include <vector>

#include "qcoalg/automata.hpp"
#include "qcoalg/convdist.hpp"
#include "qcoalg/linalg.hpp"
#include "qcoalg/markov.hpp"
#include "qcoalg/minimize.hpp"
#include "qcoalg/quantum.hpp"

namespace qcoalg::io {

// Numbers in serialized output carry 12 significant digits; values are
// rounded before writing so re-parsing is exact.
double round12(double x);
std::string format_double(double x);

std::string write_matrix_json(const CMatrix& m);
CMatrix read_matrix_json(const std::string& text);

std::string write_dfa_json(const Dfa& d);
Dfa read_dfa_json(const std::string& text);

std::string write_markov_json(const MarkovChain& c);
MarkovChain read_markov_json(const std::string& text);

std::string write_quantum_json(const QuantumSystem& sys);
QuantumSystem read_quantum_json(const std::string& text);

std::string write_realization_json(const MinimalRealization& m);
MinimalRealization read_realization_json(const std::string& text);

std::string write_distribution_json(const Distribution& d);
Distribution read_distribution_json(const std::string& text);
std::string write_distribution_csv(const Distribution& d);
Distribution read_distribution_csv(const std::string& text);

std::string write_stream_json(const DistStream& s);
DistStream read_stream_json(const std::string& text);
std::string write_stream_csv(const DistStream& s);
DistStream read_stream_csv(const std::string& text);

// Observation stream of a non-test system: rows need not sum to one, the
// output is flagged accordingly.
std::string write_raw_stream_csv(const std::vector<std::string>& labels,
                                 const std::vector<std::vector<double>>& rows);

std::string write_behaviour_json(const BehaviourPrefix& b, bool non_test = false);
BehaviourPrefix read_behaviour_json(const std::string& text);
std::string write_behaviour_csv(const BehaviourPrefix& b, bool non_test = false);
BehaviourPrefix read_behaviour_csv(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace qcoalg::io
