#include "qcoalg/cli.hpp"

#include <iostream>

#include "json_detail.hpp"
#include "qcoalg/behaviour.hpp"
#include "qcoalg/io.hpp"
#include "qcoalg/minimize.hpp"

namespace qcoalg {

namespace {

using detail::json;

RunConfig::Format effective_format(const RunConfig& cfg) {
    if (cfg.format) return *cfg.format;
    switch (cfg.command) {
        case RunConfig::Command::Behaviour:
        case RunConfig::Command::Simulate:
            return RunConfig::Format::Csv;
        default:
            return RunConfig::Format::Json;
    }
}

DensityMatrix quantum_initial(const QuantumInput& in) {
    if (in.initial_state) return pure_density(*in.initial_state);
    std::vector<Complex> psi(in.system.dim(), Complex(0.0));
    psi[0] = 1.0;
    return pure_density(psi);
}

BehaviourPrefix dfa_behaviour(const Dfa& d, std::size_t depth) {
    if (!d.initial()) {
        throw ValidationError("behaviour: dfa input needs an \"initial\" state");
    }
    ObservedSystem<std::string, std::vector<double>> sys;
    sys.alphabet = d.alphabet();
    sys.step = [&d](const std::string& x) {
        StepOutput<std::string, std::vector<double>> out;
        out.observation = {d.is_accepting(x) ? 1.0 : 0.0};
        for (const auto& a : d.alphabet()) out.successors.emplace(a, d.next(x, a));
        return out;
    };
    BehaviourPrefix bp;
    bp.depth = depth;
    bp.effect_labels = {"accept"};
    bp.table = unfold(sys, *d.initial(), depth);
    return bp;
}

std::string do_behaviour(const SystemFile& file, const RunConfig& cfg, RunConfig::Format fmt) {
    BehaviourPrefix bp;
    bool non_test = false;
    if (const auto* d = std::get_if<Dfa>(&file)) {
        bp = dfa_behaviour(*d, cfg.depth);
    } else if (const auto* q = std::get_if<QuantumInput>(&file)) {
        bp = behaviour_prefix(q->system, quantum_initial(*q), cfg.depth);
        non_test = !q->system.is_test();
    } else if (const auto* w = std::get_if<WalkSpec>(&file)) {
        if (w->kind == WalkSpec::Kind::Line && cfg.depth > w->n_max) {
            throw ValidationError("behaviour depth " + std::to_string(cfg.depth) +
                                  " exceeds the walk window n_max=" + std::to_string(w->n_max));
        }
        bp = behaviour_prefix(walk_system(*w), walk_initial_state(*w), cfg.depth);
    } else {
        throw ValidationError("behaviour: markov chains expose a stream, use the simulate command");
    }
    return fmt == RunConfig::Format::Csv ? io::write_behaviour_csv(bp, non_test)
                                         : io::write_behaviour_json(bp, non_test);
}

std::string do_simulate(const SystemFile& file, const RunConfig& cfg, RunConfig::Format fmt) {
    if (const auto* c = std::get_if<MarkovChain>(&file)) {
        if (!c->initial()) {
            throw ValidationError("simulate: markov input needs an \"initial\" state");
        }
        const DistStream s = behaviour_stream(*c, dist_unit(*c->initial()), cfg.steps);
        return fmt == RunConfig::Format::Csv ? io::write_stream_csv(s) : io::write_stream_json(s);
    }
    if (const auto* w = std::get_if<WalkSpec>(&file)) {
        const DistStream s = walk_distribution(*w, cfg.steps);
        return fmt == RunConfig::Format::Csv ? io::write_stream_csv(s) : io::write_stream_json(s);
    }
    if (const auto* q = std::get_if<QuantumInput>(&file)) {
        if (q->system.unitaries().size() != 1) {
            throw ValidationError("simulate: quantum input must have exactly one unitary");
        }
        const UnitaryOp& u = q->system.unitaries().begin()->second;
        DensityMatrix rho = quantum_initial(*q);
        if (q->system.is_test()) {
            DistStream s;
            s.entries.push_back(observation_distribution(q->system, rho));
            for (std::size_t t = 0; t < cfg.steps; ++t) {
                rho = conjugate_by(rho, u);
                s.entries.push_back(observation_distribution(q->system, rho));
            }
            return fmt == RunConfig::Format::Csv ? io::write_stream_csv(s) : io::write_stream_json(s);
        }
        // Effects do not sum to the identity: rows are raw observation
        // values, flagged as non-test.
        std::vector<std::vector<double>> rows;
        rows.push_back(q_step(q->system, rho).observations);
        for (std::size_t t = 0; t < cfg.steps; ++t) {
            rho = conjugate_by(rho, u);
            rows.push_back(q_step(q->system, rho).observations);
        }
        if (fmt == RunConfig::Format::Csv) {
            return io::write_raw_stream_csv(q->system.effect_labels(), rows);
        }
        json j;
        j["non_test"] = true;
        j["labels"] = q->system.effect_labels();
        json obs = json::array();
        for (const auto& row : rows) {
            json r = json::array();
            for (double v : row) r.push_back(io::round12(v));
            obs.push_back(std::move(r));
        }
        j["observations"] = std::move(obs);
        return j.dump(2) + "\n";
    }
    throw ValidationError("simulate: dfa inputs have no stream semantics, use the behaviour command");
}

std::string do_minimize(const SystemFile& file, const RunConfig& cfg) {
    QuantumSystem sys = [&]() -> QuantumSystem {
        if (const auto* q = std::get_if<QuantumInput>(&file)) return q->system;
        if (const auto* w = std::get_if<WalkSpec>(&file)) return walk_system(*w);
        throw ValidationError("minimize: input must be a quantum system or a walk");
    }();
    const DensityMatrix rho0 = [&]() -> DensityMatrix {
        if (const auto* q = std::get_if<QuantumInput>(&file)) return quantum_initial(*q);
        return walk_initial_state(std::get<WalkSpec>(file));
    }();

    const std::size_t check_depth = effective_check_depth(sys, cfg.check_depth);
    const MinimalRealization m = minimal_realization(sys, rho0, cfg.tol, check_depth);
    const double deviation =
        realization_behaviour(m, check_depth).max_deviation(behaviour_prefix(sys, rho0, check_depth));

    json j = detail::realization_to_json(m);
    j["report"] = json{{"original_dim", sys.dim() * sys.dim()},
                       {"dim", m.dim},
                       {"check_depth", check_depth},
                       {"max_behaviour_deviation", io::round12(deviation)}};
    return j.dump(2) + "\n";
}

std::string do_dfa_min(const SystemFile& file) {
    const auto* d = std::get_if<Dfa>(&file);
    if (!d) throw ValidationError("dfa-min: input must be a dfa");
    if (!d->initial()) throw ValidationError("dfa-min: dfa input needs an \"initial\" state");
    return io::write_dfa_json(minimize_dfa(*d, *d->initial()));
}

}  // namespace

SystemFile parse_system_text(const std::string& text) {
    const json j = detail::parse_json(text);
    const std::string kind = detail::require_field(j, "kind", "system file").get<std::string>();
    if (kind == "dfa") return detail::dfa_from_json(j);
    if (kind == "markov") return detail::markov_from_json(j);
    if (kind == "quantum") {
        QuantumInput in{detail::quantum_from_json(j), std::nullopt};
        if (j.contains("initial_state")) {
            in.initial_state = detail::state_vector_from_json(j["initial_state"]);
        }
        return in;
    }
    if (kind == "walk") return detail::walk_from_json(j);
    throw ValidationError("system file: unknown kind '" + kind +
                          "' (expected dfa, markov, quantum or walk)");
}

SystemFile parse_system_file(const std::string& path) {
    try {
        return parse_system_text(io::read_file(path));
    } catch (const Error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

int run_command(const RunConfig& cfg) {
    try {
        if (cfg.input_path.empty()) throw ValidationError("no input file given");
        const RunConfig::Format fmt = effective_format(cfg);
        const SystemFile file = parse_system_file(cfg.input_path);

        std::string payload;
        switch (cfg.command) {
            case RunConfig::Command::Behaviour:
                payload = do_behaviour(file, cfg, fmt);
                break;
            case RunConfig::Command::Simulate:
                payload = do_simulate(file, cfg, fmt);
                break;
            case RunConfig::Command::Minimize:
                if (fmt == RunConfig::Format::Csv) {
                    throw ValidationError("minimize writes JSON; csv output is not supported");
                }
                payload = do_minimize(file, cfg);
                break;
            case RunConfig::Command::DfaMin:
                if (fmt == RunConfig::Format::Csv) {
                    throw ValidationError("dfa-min writes JSON; csv output is not supported");
                }
                payload = do_dfa_min(file);
                break;
        }
        if (cfg.output_path.empty()) {
            std::cout << payload;
        } else {
            io::write_file(cfg.output_path, payload);
        }
        return kExitOk;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

}  // namespace qcoalg
