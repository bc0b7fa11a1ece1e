// Internal nlohmann-based converters shared by io.cpp and cli.cpp; not part
// of the installed headers.
#pragma once

#include "json.hpp"

#include "qcoalg/automata.hpp"
#include "qcoalg/convdist.hpp"
#include "qcoalg/linalg.hpp"
#include "qcoalg/markov.hpp"
#include "qcoalg/minimize.hpp"
#include "qcoalg/quantum.hpp"

namespace qcoalg::detail {

using json = nlohmann::json;

json parse_json(const std::string& text);

json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);

json dfa_to_json(const Dfa& d);
Dfa dfa_from_json(const json& j);

json markov_to_json(const MarkovChain& c);
MarkovChain markov_from_json(const json& j);

json quantum_to_json(const QuantumSystem& sys);
QuantumSystem quantum_from_json(const json& j);
std::vector<Complex> state_vector_from_json(const json& j);

WalkSpec walk_from_json(const json& j);

json realization_to_json(const MinimalRealization& m);
MinimalRealization realization_from_json(const json& j);

json distribution_to_json(const Distribution& d);
Distribution distribution_from_json(const json& j);

const json& require_field(const json& j, const char* field, const char* what);

}  // namespace qcoalg::detail
