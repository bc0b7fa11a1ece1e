// Acceptance suite: exercises the end-to-end guarantees of the toolkit and
// prints one PASS/FAIL line per criterion. Exits nonzero on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qcoalg/behaviour.hpp"
#include "qcoalg/minimize.hpp"
#include "support.hpp"

using namespace qcoalg;
using testsupport::Rng;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// 1. Line walk: three steps from spin-up at the origin reproduce the
//    closed-form distributions, in under a second.
void criterion_line_walk() {
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream detail;
    bool ok = true;
    try {
        WalkSpec spec;
        spec.kind = WalkSpec::Kind::Line;
        spec.n_max = 4;
        const DistStream s = walk_distribution(spec, 3);

        const std::vector<std::pair<std::string, double>> phi1{{"-1", 0.5}, {"1", 0.5}};
        const std::vector<std::pair<std::string, double>> phi2{
            {"-2", 0.25}, {"0", 0.5}, {"2", 0.25}};
        const std::vector<std::pair<std::string, double>> phi3{
            {"-3", 0.125}, {"-1", 0.625}, {"1", 0.125}, {"3", 0.125}};
        const std::vector<std::vector<std::pair<std::string, double>>> expected{phi1, phi2, phi3};
        for (std::size_t t = 1; t <= 3; ++t) {
            const Distribution& got = s.entries[t];
            double mass = 0.0;
            for (const auto& [label, p] : expected[t - 1]) {
                ok = ok && near(got.probability(label), p, 1e-9);
                mass += p;
            }
            ok = ok && near(got.total_mass(), mass, 1e-9);
        }
        const double elapsed = seconds_since(start);
        ok = ok && elapsed < 1.0;
        detail << "phi_1..phi_3 within 1e-9, " << elapsed << " s";
    } catch (const std::exception& e) {
        ok = false;
        detail << e.what();
    }
    report(1, "line quantum walk distributions", ok, detail.str());
}

// 2. Markov chain on the square: explicit phi_1, phi_2 and period two out to
//    n = 10, within 1e-12.
void criterion_markov() {
    std::ostringstream detail;
    bool ok = true;
    try {
        const MarkovChain c = testsupport::square_markov();
        const DistStream s = behaviour_stream(c, dist_unit("x0"), 21);
        ok = ok && near(s.entries[1].probability("x1"), 0.5, 1e-12) &&
             near(s.entries[1].probability("x2"), 0.5, 1e-12) &&
             s.entries[1].support_size() == 2;
        ok = ok && near(s.entries[2].probability("x0"), 0.5, 1e-12) &&
             near(s.entries[2].probability("x3"), 0.5, 1e-12) &&
             s.entries[2].support_size() == 2;
        for (std::size_t n = 1; n <= 10; ++n) {
            ok = ok && s.entries[2 * n].approx_equal(s.entries[2], 1e-12);
            ok = ok && s.entries[2 * n + 1].approx_equal(s.entries[1], 1e-12);
        }
        detail << "phi_1, phi_2 and period 2 to n=10 within 1e-12";
    } catch (const std::exception& e) {
        ok = false;
        detail << e.what();
    }
    report(2, "markov chain stream", ok, detail.str());
}

// 3. Square-walk minimization: dimension 1, transition p -> 1 - p in
//    normalized coordinates, endpoint outputs, behaviour match to depth 20.
void criterion_square_minimization() {
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream detail;
    bool ok = true;
    try {
        const QuantumSystem sys = testsupport::square_walk_system();
        const DensityMatrix rho0 = testsupport::basis_density(4, 0);
        const MinimalRealization m = minimal_realization(sys, rho0, 1e-8, 20);

        ok = ok && m.dim == 1;
        const AffineMap& t = m.transitions.at("U");
        ok = ok && near(t.matrix[0][0], -1.0, 1e-8) && near(t.offset[0], 1.0, 1e-8);

        const std::vector<double> at1 = m.output.apply({1.0});
        const std::vector<double> at0 = m.output.apply({0.0});
        const double expect1[4] = {1.0, 0.0, 0.0, 0.0};
        const double expect0[4] = {0.0, 0.5, 0.5, 0.0};
        for (std::size_t k = 0; k < 4; ++k) {
            ok = ok && near(at1[k], expect1[k], 1e-8) && near(at0[k], expect0[k], 1e-8);
        }

        const double dev =
            realization_behaviour(m, 20).max_deviation(behaviour_prefix(sys, rho0, 20));
        ok = ok && dev <= 1e-8;

        const double elapsed = seconds_since(start);
        ok = ok && elapsed < 1.0;
        detail << "dim=" << m.dim << ", behaviour deviation " << dev << ", " << elapsed << " s";
    } catch (const std::exception& e) {
        ok = false;
        detail << e.what();
    }
    report(3, "square-walk minimization", ok, detail.str());
}

// 4. The square walk reaches exactly two behaviour suffixes: the alternating
//    stream and its rotation.
void criterion_square_suffixes() {
    std::ostringstream detail;
    bool ok = true;
    try {
        const auto suffixes = reachable_suffixes(testsupport::square_walk_system(),
                                                 testsupport::basis_density(4, 0), 1e-8, 16);
        ok = ok && suffixes.size() == 2;
        const std::vector<double> at0{1.0, 0.0, 0.0, 0.0};
        const std::vector<double> spread{0.0, 0.5, 0.5, 0.0};
        auto matches = [&](const EventuallyPeriodicStream& s, const std::vector<double>& first,
                           const std::vector<double>& second) {
            if (!s.preperiod.empty() || s.period.size() != 2) return false;
            for (std::size_t k = 0; k < 4; ++k) {
                if (!near(s.period[0][k], first[k], 1e-9)) return false;
                if (!near(s.period[1][k], second[k], 1e-9)) return false;
            }
            return true;
        };
        ok = ok && suffixes.size() == 2 &&
             ((matches(suffixes[0], at0, spread) && matches(suffixes[1], spread, at0)) ||
              (matches(suffixes[0], spread, at0) && matches(suffixes[1], at0, spread)));
        detail << suffixes.size() << " canonical streams";
    } catch (const std::exception& e) {
        ok = false;
        detail << e.what();
    }
    report(4, "square-walk reachable suffixes", ok, detail.str());
}

// 5. DFA minimization agrees with a brute-force partition-refinement oracle
//    on 200 random automata, in both state count and recognized language to
//    depth 8; the four-state example is reported minimal.
void criterion_dfa_suite() {
    const auto start = std::chrono::steady_clock::now();
    std::ostringstream detail;
    bool ok = true;
    try {
        Rng rng(2024);
        std::uniform_int_distribution<std::size_t> n_states(2, 6);
        std::uniform_int_distribution<std::size_t> n_letters(1, 3);
        for (int i = 0; i < 200 && ok; ++i) {
            const Dfa d = testsupport::random_dfa(n_states(rng), n_letters(rng), rng);
            const std::string init = d.states()[0];
            const Dfa m = minimize_dfa(d, init);
            ok = ok && m.states().size() == oracles::nerode_state_count(d, init);
            ok = ok &&
                 language_prefix(m, "q0", 8).accepted == language_prefix(d, init, 8).accepted;
        }
        const Dfa example = testsupport::four_state_dfa();
        ok = ok && minimize_dfa(example, "x0").states().size() == 4;
        const double elapsed = seconds_since(start);
        ok = ok && elapsed < 5.0;
        detail << "200 random automata vs oracle, " << elapsed << " s";
    } catch (const std::exception& e) {
        ok = false;
        detail << e.what();
    }
    report(5, "dfa minimization suite", ok, detail.str());
}

// 6. Randomized property suites at 1e-9: distribution monad laws, quantum
//    step trace/test preservation, behaviour affinity, and agreement of the
//    two acceptance-probability routes.
void criterion_property_suites() {
    std::ostringstream detail;
    bool ok = true;
    try {
        Rng rng(77);

        // monad laws, 3 x 100
        for (int i = 0; i < 100 && ok; ++i) {
            std::uniform_int_distribution<int> sz(1, 6);
            std::vector<std::string> labels;
            for (int k = 0, n = sz(rng); k < n; ++k) labels.push_back("l" + std::to_string(k));
            const Distribution phi = testsupport::random_distribution(labels, rng);

            NestedDistribution mapped;
            for (const auto& [label, p] : phi.support()) {
                mapped.support.emplace_back(dist_unit(label), p);
            }
            ok = ok && dist_flatten(mapped).approx_equal(phi, 1e-9);

            NestedDistribution outer;
            outer.support.emplace_back(phi, 1.0);
            ok = ok && dist_flatten(outer).approx_equal(phi, 1e-9);

            // associativity: flattening the inner layers first agrees with
            // flattening the outer layer first, on a random triple nesting
            std::uniform_real_distribution<double> unit(0.1, 1.0);
            std::uniform_int_distribution<int> parts(1, 3);
            std::vector<NestedDistribution> inner(static_cast<std::size_t>(parts(rng)));
            std::vector<double> w(inner.size());
            double total = 0.0;
            for (std::size_t k = 0; k < inner.size(); ++k) {
                double sub_total = 0.0;
                std::vector<double> sub(static_cast<std::size_t>(parts(rng)));
                for (double& v : sub) {
                    v = unit(rng);
                    sub_total += v;
                }
                for (double v : sub) {
                    inner[k].support.emplace_back(testsupport::random_distribution(labels, rng),
                                                  v / sub_total);
                }
                w[k] = unit(rng);
                total += w[k];
            }
            NestedDistribution map_flatten;
            NestedDistribution flatten_outer;
            for (std::size_t k = 0; k < inner.size(); ++k) {
                map_flatten.support.emplace_back(dist_flatten(inner[k]), w[k] / total);
                for (const auto& [inner_phi, s] : inner[k].support) {
                    flatten_outer.support.emplace_back(inner_phi, (w[k] / total) * s);
                }
            }
            ok = ok && dist_flatten(map_flatten).approx_equal(dist_flatten(flatten_outer), 1e-9);
        }

        // trace preservation and test normalization, 100 random steps
        for (int i = 0; i < 100 && ok; ++i) {
            const std::size_t d = 2 + static_cast<std::size_t>(i % 3);
            const QuantumSystem sys = testsupport::random_quantum_system(d, 1 + i % 2, rng);
            const QStepResult step = q_step(sys, testsupport::random_density(d, rng));
            double total = 0.0;
            for (double p : step.observations) total += p;
            ok = ok && near(total, 1.0, 1e-9);
            for (const auto& [letter, succ] : step.successors) {
                (void)letter;
                ok = ok && near(trace(succ.matrix()).real(), 1.0, 1e-9);
            }
        }

        // behaviour affinity in the state, 50 random one-qubit systems
        for (int i = 0; i < 50 && ok; ++i) {
            const QuantumSystem sys = testsupport::random_quantum_system(2, 1 + i % 2, rng);
            const DensityMatrix a = testsupport::random_density(2, rng);
            const DensityMatrix b = testsupport::random_density(2, rng);
            const double alpha = 0.4;
            const BehaviourPrefix mixed = behaviour_prefix(sys, mix_density(alpha, a, b), 3);
            const BehaviourPrefix ba = behaviour_prefix(sys, a, 3);
            const BehaviourPrefix bb = behaviour_prefix(sys, b, 3);
            for (const auto& [w, obs] : mixed.table) {
                for (std::size_t k = 0; k < obs.size(); ++k) {
                    ok = ok &&
                         near(obs[k], alpha * ba.table.at(w)[k] + (1 - alpha) * bb.table.at(w)[k],
                              1e-9);
                }
            }
        }

        // vector and density acceptance routes agree, 50 random automata
        for (int i = 0; i < 50 && ok; ++i) {
            std::map<std::string, UnitaryOp> unitaries;
            unitaries.emplace("a", testsupport::random_unitary(2, rng));
            unitaries.emplace("b", testsupport::random_unitary(2, rng));
            std::vector<std::pair<std::string, Effect>> effects;
            effects.emplace_back("yes", testsupport::random_effect(2, rng));
            const QuantumAutomaton qa(
                QuantumSystem(2, std::move(unitaries), std::move(effects), false));
            const std::vector<Complex> psi = testsupport::random_pure(2, rng);
            const BehaviourPrefix bp = behaviour_prefix(qa.system(), pure_density(psi), 4);
            for (const auto& [w, obs] : bp.table) {
                ok = ok && near(accept_probability(qa, psi, w), obs[0], 1e-9);
            }
        }
        detail << "monad laws, step invariants, affinity, acceptance routes";
    } catch (const std::exception& e) {
        ok = false;
        detail << e.what();
    }
    report(6, "randomized property suites", ok, detail.str());
}

// 7. The generic unfold reproduces both the automata language prefixes
//    (exactly) and the quantum behaviour tables (within 1e-9).
void criterion_cross_module() {
    std::ostringstream detail;
    bool ok = true;
    try {
        const Dfa d = testsupport::four_state_dfa();
        ObservedSystem<std::string, bool> dfa_sys;
        dfa_sys.alphabet = d.alphabet();
        dfa_sys.step = [&d](const std::string& x) {
            StepOutput<std::string, bool> out;
            out.observation = d.is_accepting(x);
            for (const auto& a : d.alphabet()) out.successors.emplace(a, d.next(x, a));
            return out;
        };
        for (const auto& x : d.states()) {
            const auto table = unfold(dfa_sys, x, 6);
            const LanguagePrefix lp = language_prefix(d, x, 6);
            for (const auto& [w, accepted] : table) {
                ok = ok && accepted == (lp.accepted.count(w) > 0);
            }
        }

        Rng rng(99);
        for (int i = 0; i < 10 && ok; ++i) {
            const QuantumSystem q = testsupport::random_quantum_system(2, 2, rng);
            ObservedSystem<DensityMatrix, std::vector<double>> q_sys;
            q_sys.alphabet = q.letters();
            q_sys.step = [&q](const DensityMatrix& rho) {
                QStepResult step = q_step(q, rho);
                return StepOutput<DensityMatrix, std::vector<double>>{
                    std::move(step.observations), std::move(step.successors)};
            };
            const DensityMatrix rho = testsupport::random_density(2, rng);
            const auto table = unfold(q_sys, rho, 3);
            const BehaviourPrefix bp = behaviour_prefix(q, rho, 3);
            ok = ok && table.size() == bp.table.size();
            for (const auto& [w, obs] : table) {
                for (std::size_t k = 0; k < obs.size(); ++k) {
                    ok = ok && near(obs[k], bp.table.at(w)[k], 1e-9);
                }
            }
        }
        detail << "unfold vs language_prefix (exact) and behaviour_prefix (1e-9)";
    } catch (const std::exception& e) {
        ok = false;
        detail << e.what();
    }
    report(7, "generic unfold cross-checks", ok, detail.str());
}

}  // namespace

int main() {
    criterion_line_walk();
    criterion_markov();
    criterion_square_minimization();
    criterion_square_suffixes();
    criterion_dfa_suite();
    criterion_property_suites();
    criterion_cross_module();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
