// Shared fixtures and random generators for the test suites.
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "qcoalg/automata.hpp"
#include "qcoalg/convdist.hpp"
#include "qcoalg/linalg.hpp"
#include "qcoalg/markov.hpp"
#include "qcoalg/quantum.hpp"

namespace testsupport {

using qcoalg::CMatrix;
using qcoalg::Complex;

inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// Four-state automaton over {a, b}: x0 loops on a and moves to x1 on b;
// x1 -> x3 on a, x2 on b; x2 is a sink; x3 -> x2 on a, x1 on b.
// Accepting: x0, x3. Already minimal from x0.
inline qcoalg::Dfa four_state_dfa() {
    return qcoalg::Dfa(
        {"x0", "x1", "x2", "x3"}, {"a", "b"},
        {{"x0", {{"a", "x0"}, {"b", "x1"}}},
         {"x1", {{"a", "x3"}, {"b", "x2"}}},
         {"x2", {{"a", "x2"}, {"b", "x2"}}},
         {"x3", {{"a", "x2"}, {"b", "x1"}}}},
        {"x0", "x3"}, "x0");
}

// Random walk on the 4-cycle: each vertex steps to its two neighbours with
// probability 1/2.
inline qcoalg::MarkovChain square_markov() {
    auto half = [](const std::string& a, const std::string& b) {
        return qcoalg::Distribution::from_weights({{a, 0.5}, {b, 0.5}});
    };
    return qcoalg::MarkovChain({"x0", "x1", "x2", "x3"},
                               {{"x0", half("x1", "x2")},
                                {"x1", half("x0", "x3")},
                                {"x2", half("x0", "x3")},
                                {"x3", half("x1", "x2")}},
                               "x0");
}

inline CMatrix square_walk_unitary() {
    const double s = kInvSqrt2;
    return CMatrix::from_rows({{0, s, s, 0}, {s, 0, 0, s}, {s, 0, 0, -s}, {0, s, -s, 0}});
}

// Quantum walk on the 4-cycle with one position projector per vertex.
inline qcoalg::QuantumSystem square_walk_system() {
    std::map<std::string, qcoalg::UnitaryOp> unitaries;
    unitaries.emplace("U", qcoalg::UnitaryOp(square_walk_unitary()));
    std::vector<std::pair<std::string, qcoalg::Effect>> effects;
    for (std::size_t k = 0; k < 4; ++k) {
        CMatrix p(4, 4);
        p.at(k, k) = 1.0;
        effects.emplace_back(std::to_string(k), qcoalg::Effect(std::move(p)));
    }
    return qcoalg::QuantumSystem(4, std::move(unitaries), std::move(effects), true);
}

inline qcoalg::DensityMatrix basis_density(std::size_t dim, std::size_t k) {
    std::vector<Complex> psi(dim, Complex(0.0));
    psi[k] = 1.0;
    return qcoalg::pure_density(psi);
}

using Rng = std::mt19937_64;

inline CMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix m(rows, cols);
    for (auto& z : m.entries()) z = Complex(g(rng), g(rng));
    return m;
}

inline CMatrix random_hermitian(std::size_t d, Rng& rng) {
    const CMatrix a = random_matrix(d, d, rng);
    return (a + qcoalg::dagger(a)) * Complex(0.5);
}

inline qcoalg::UnitaryOp random_unitary(std::size_t d, Rng& rng) {
    // Eigenbasis of a random Hermitian matrix with random phases.
    const auto eig = qcoalg::eig_hermitian(random_hermitian(d, rng));
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    CMatrix u = eig.eigenvectors;
    for (std::size_t j = 0; j < d; ++j) {
        const double t = angle(rng);
        const Complex phase(std::cos(t), std::sin(t));
        for (std::size_t i = 0; i < d; ++i) u.at(i, j) *= phase;
    }
    return qcoalg::UnitaryOp(std::move(u));
}

inline qcoalg::DensityMatrix random_density(std::size_t d, Rng& rng) {
    const CMatrix a = random_matrix(d, d, rng);
    CMatrix rho = qcoalg::mat_mul(a, qcoalg::dagger(a));
    const Complex tr = qcoalg::trace(rho);
    return qcoalg::DensityMatrix(rho * (1.0 / tr));
}

inline std::vector<Complex> random_pure(std::size_t d, Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Complex> psi(d);
    double n2 = 0.0;
    for (auto& z : psi) {
        z = Complex(g(rng), g(rng));
        n2 += std::norm(z);
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& z : psi) z *= inv;
    return psi;
}

inline qcoalg::Effect random_effect(std::size_t d, Rng& rng) {
    const auto eig = qcoalg::eig_hermitian(random_hermitian(d, rng));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    CMatrix m(d, d);
    for (std::size_t k = 0; k < d; ++k) {
        const double lambda = unit(rng);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                m.at(i, j) += lambda * eig.eigenvectors.at(i, k) *
                              std::conj(eig.eigenvectors.at(j, k));
            }
        }
    }
    return qcoalg::Effect(std::move(m));
}

// A test family: projectors onto the lines of a random orthonormal basis.
inline std::vector<std::pair<std::string, qcoalg::Effect>> random_test_effects(std::size_t d,
                                                                               Rng& rng) {
    const qcoalg::UnitaryOp q = random_unitary(d, rng);
    std::vector<std::pair<std::string, qcoalg::Effect>> effects;
    for (std::size_t k = 0; k < d; ++k) {
        CMatrix m(d, d);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                m.at(i, j) = q.matrix().at(i, k) * std::conj(q.matrix().at(j, k));
            }
        }
        effects.emplace_back("e" + std::to_string(k), qcoalg::Effect(std::move(m)));
    }
    return effects;
}

inline qcoalg::QuantumSystem random_quantum_system(std::size_t d, std::size_t n_letters, Rng& rng) {
    std::map<std::string, qcoalg::UnitaryOp> unitaries;
    for (std::size_t i = 0; i < n_letters; ++i) {
        unitaries.emplace(std::string(1, static_cast<char>('a' + i)), random_unitary(d, rng));
    }
    return qcoalg::QuantumSystem(d, std::move(unitaries), random_test_effects(d, rng), true);
}

inline qcoalg::Distribution random_distribution(const std::vector<std::string>& labels, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    std::map<std::string, double> w;
    double total = 0.0;
    for (const auto& l : labels) {
        w[l] = unit(rng);
        total += w[l];
    }
    for (auto& [l, p] : w) p /= total;
    return qcoalg::Distribution::from_weights(std::move(w));
}

inline qcoalg::Dfa random_dfa(std::size_t n_states, std::size_t n_letters, Rng& rng) {
    std::vector<std::string> states, alphabet;
    for (std::size_t i = 0; i < n_states; ++i) states.push_back("s" + std::to_string(i));
    for (std::size_t a = 0; a < n_letters; ++a) alphabet.push_back(std::string(1, static_cast<char>('a' + a)));
    std::uniform_int_distribution<std::size_t> pick(0, n_states - 1);
    std::bernoulli_distribution flip(0.4);
    std::map<std::string, std::map<std::string, std::string>> delta;
    std::set<std::string> accepting;
    for (const auto& x : states) {
        for (const auto& a : alphabet) delta[x][a] = states[pick(rng)];
        if (flip(rng)) accepting.insert(x);
    }
    return qcoalg::Dfa(states, alphabet, std::move(delta), std::move(accepting), states[0]);
}

}  // namespace testsupport
