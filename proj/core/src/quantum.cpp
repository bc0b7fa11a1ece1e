#include "qcoalg/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qcoalg {

namespace {

std::string fmt_deviation(double d) {
    std::ostringstream os;
    os.precision(2);
    os << std::scientific << d;
    return os.str();
}

double vector_norm(const std::vector<Complex>& psi) {
    double n2 = 0.0;
    for (const Complex& z : psi) n2 += std::norm(z);
    return std::sqrt(n2);
}

// Re tr(rho e), checked to be a probability up to tol and clamped into [0,1].
double effect_probability(const CMatrix& rho, const CMatrix& effect) {
    Complex t = 0.0;
    for (std::size_t i = 0; i < rho.rows(); ++i)
        for (std::size_t k = 0; k < rho.cols(); ++k) t += rho.at(i, k) * effect.at(k, i);
    if (std::abs(t.imag()) > kValidationTol) {
        throw NumericalError("observation has imaginary part " + fmt_deviation(t.imag()));
    }
    const double p = t.real();
    if (p < -kValidationTol || p > 1.0 + kValidationTol) {
        throw NumericalError("observation outside [0,1] by " +
                             fmt_deviation(std::max(-p, p - 1.0)));
    }
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace

QuantumSystem::QuantumSystem(std::size_t dim, std::map<std::string, UnitaryOp> unitaries,
                             std::vector<std::pair<std::string, Effect>> effects, bool is_test,
                             double tol)
    : dim_(dim), unitaries_(std::move(unitaries)), effects_(std::move(effects)), is_test_(is_test) {
    if (dim_ == 0) throw ValidationError("quantum system: dimension must be positive");
    for (const auto& [letter, u] : unitaries_) {
        if (letter.size() != 1) {
            throw ValidationError("quantum system: letter '" + letter + "' is not a single character");
        }
        if (u.dim() != dim_) {
            throw ValidationError("quantum system: unitary for '" + letter + "' is " +
                                  std::to_string(u.dim()) + "-dimensional, expected " +
                                  std::to_string(dim_));
        }
    }
    std::set<std::string> labels;
    for (const auto& [label, e] : effects_) {
        if (!labels.insert(label).second) {
            throw ValidationError("quantum system: duplicate effect label '" + label + "'");
        }
        if (e.dim() != dim_) {
            throw ValidationError("quantum system: effect '" + label + "' is " +
                                  std::to_string(e.dim()) + "-dimensional, expected " +
                                  std::to_string(dim_));
        }
    }
    if (is_test_) {
        CMatrix sum(dim_, dim_);
        for (const auto& [label, e] : effects_) {
            (void)label;
            sum = sum + e.matrix();
        }
        const double dev = sum.max_abs_deviation_from_identity();
        if (dev > tol) {
            throw ValidationError("test condition violated: effect sum deviates from identity by " +
                                  fmt_deviation(dev));
        }
    }
}

std::vector<std::string> QuantumSystem::letters() const {
    std::vector<std::string> out;
    out.reserve(unitaries_.size());
    for (const auto& [letter, u] : unitaries_) {
        (void)u;
        out.push_back(letter);
    }
    return out;
}

std::vector<std::string> QuantumSystem::effect_labels() const {
    std::vector<std::string> out;
    out.reserve(effects_.size());
    for (const auto& [label, e] : effects_) {
        (void)e;
        out.push_back(label);
    }
    return out;
}

const UnitaryOp& QuantumSystem::unitary(const std::string& letter) const {
    auto it = unitaries_.find(letter);
    if (it == unitaries_.end()) throw ValidationError("quantum system: unknown letter '" + letter + "'");
    return it->second;
}

QuantumAutomaton::QuantumAutomaton(QuantumSystem system) : system_(std::move(system)) {
    if (system_.effects().size() != 1) {
        throw ValidationError("quantum automaton: exactly one effect required, got " +
                              std::to_string(system_.effects().size()));
    }
}

bool BehaviourPrefix::approx_equal(const BehaviourPrefix& other, double tol) const {
    return depth == other.depth && effect_labels == other.effect_labels &&
           max_deviation(other) <= tol;
}

double BehaviourPrefix::max_deviation(const BehaviourPrefix& other) const {
    double dev = 0.0;
    for (const auto& [w, row] : table) {
        auto it = other.table.find(w);
        if (it == other.table.end() || it->second.size() != row.size()) {
            return std::numeric_limits<double>::infinity();
        }
        for (std::size_t i = 0; i < row.size(); ++i) dev = std::max(dev, std::abs(row[i] - it->second[i]));
    }
    if (other.table.size() != table.size()) return std::numeric_limits<double>::infinity();
    return dev;
}

DensityMatrix pure_density(const std::vector<Complex>& psi, double tol) {
    const double norm = vector_norm(psi);
    if (std::abs(norm - 1.0) > tol) {
        throw ValidationError("pure_density: state vector norm " + std::to_string(norm) +
                              " deviates from 1 by " + fmt_deviation(std::abs(norm - 1.0)));
    }
    CMatrix m(psi.size(), psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i)
        for (std::size_t j = 0; j < psi.size(); ++j) m.at(i, j) = psi[i] * std::conj(psi[j]);
    return DensityMatrix(std::move(m));
}

QStepResult q_step(const QuantumSystem& sys, const DensityMatrix& rho) {
    if (rho.dim() != sys.dim()) {
        throw ShapeError("q_step: state dimension " + std::to_string(rho.dim()) +
                         " does not match system dimension " + std::to_string(sys.dim()));
    }
    QStepResult out;
    out.observations.reserve(sys.effects().size());
    double total = 0.0;
    for (const auto& [label, e] : sys.effects()) {
        (void)label;
        const double p = effect_probability(rho.matrix(), e.matrix());
        out.observations.push_back(p);
        total += p;
    }
    if (sys.is_test() && std::abs(total - 1.0) > kValidationTol) {
        throw NumericalError("test observation sum deviates from 1 by " +
                             fmt_deviation(std::abs(total - 1.0)));
    }
    for (const auto& [letter, u] : sys.unitaries()) {
        out.successors.emplace(letter, conjugate_by(rho, u));
    }
    return out;
}

double accept_probability(const QuantumAutomaton& qa, const std::vector<Complex>& psi,
                          const Word& u, double tol) {
    const QuantumSystem& sys = qa.system();
    const double norm = vector_norm(psi);
    if (std::abs(norm - 1.0) > tol) {
        throw ValidationError("accept_probability: state vector norm " + std::to_string(norm) +
                              " deviates from 1 by " + fmt_deviation(std::abs(norm - 1.0)));
    }
    if (psi.size() != sys.dim()) {
        throw ShapeError("accept_probability: state dimension mismatch");
    }
    // Evolve the pure state directly; this is the vector-level route, kept
    // independent of the density-matrix semantics it must agree with.
    std::vector<Complex> phi = psi;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const CMatrix& m = sys.unitary(std::string(1, u.letter(i))).matrix();
        std::vector<Complex> next(phi.size(), Complex(0.0));
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) next[r] += m.at(r, c) * phi[c];
        phi = std::move(next);
    }
    const CMatrix& eff = qa.effect().matrix();
    Complex bra_e_ket = 0.0;
    for (std::size_t r = 0; r < eff.rows(); ++r)
        for (std::size_t c = 0; c < eff.cols(); ++c)
            bra_e_ket += std::conj(phi[r]) * eff.at(r, c) * phi[c];
    if (std::abs(bra_e_ket.imag()) > kValidationTol) {
        throw NumericalError("acceptance probability has imaginary part " +
                             fmt_deviation(bra_e_ket.imag()));
    }
    const double p = bra_e_ket.real();
    if (p < -kValidationTol || p > 1.0 + kValidationTol) {
        throw NumericalError("acceptance probability outside [0,1] by " +
                             fmt_deviation(std::max(-p, p - 1.0)));
    }
    return std::clamp(p, 0.0, 1.0);
}

BehaviourPrefix behaviour_prefix(const QuantumSystem& sys, const DensityMatrix& rho,
                                 std::size_t depth) {
    if (rho.dim() != sys.dim()) {
        throw ShapeError("behaviour_prefix: state dimension mismatch");
    }
    BehaviourPrefix out;
    out.depth = depth;
    out.effect_labels = sys.effect_labels();

    const std::vector<std::string> letters = sys.letters();
    std::vector<std::pair<Word, DensityMatrix>> level{{Word(), rho}};
    for (std::size_t len = 0;; ++len) {
        std::vector<std::pair<Word, DensityMatrix>> next_level;
        if (len < depth) next_level.reserve(level.size() * letters.size());
        for (const auto& [w, state] : level) {
            std::vector<double> obs;
            obs.reserve(sys.effects().size());
            for (const auto& [label, e] : sys.effects()) {
                (void)label;
                obs.push_back(effect_probability(state.matrix(), e.matrix()));
            }
            out.table.emplace(w, std::move(obs));
            if (len < depth) {
                for (const auto& a : letters) {
                    next_level.emplace_back(w.append(a[0]), conjugate_by(state, sys.unitary(a)));
                }
            }
        }
        if (len == depth) break;
        level = std::move(next_level);
    }
    return out;
}

namespace {

// Basis index for the truncated line: position-major, spin-minor, spin 0 = up.
std::size_t line_index(long long k, int spin, std::size_t n_max) {
    return 2 * static_cast<std::size_t>(k + static_cast<long long>(n_max)) +
           static_cast<std::size_t>(spin);
}

// Orthonormal completion of the unset columns against the set ones.
void complete_columns(CMatrix& m, const std::vector<bool>& is_set) {
    const std::size_t d = m.rows();
    std::vector<std::vector<Complex>> basis;
    for (std::size_t j = 0; j < d; ++j) {
        if (!is_set[j]) continue;
        std::vector<Complex> col(d);
        for (std::size_t i = 0; i < d; ++i) col[i] = m.at(i, j);
        basis.push_back(std::move(col));
    }
    for (std::size_t j = 0; j < d; ++j) {
        if (is_set[j]) continue;
        std::vector<Complex> col;
        for (std::size_t seed = 0; seed < d; ++seed) {
            col.assign(d, Complex(0.0));
            col[seed] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& b : basis) {
                    Complex ip = 0.0;
                    for (std::size_t i = 0; i < d; ++i) ip += std::conj(b[i]) * col[i];
                    for (std::size_t i = 0; i < d; ++i) col[i] -= ip * b[i];
                }
            }
            double n2 = 0.0;
            for (const Complex& z : col) n2 += std::norm(z);
            if (n2 > 0.25) {
                const double inv = 1.0 / std::sqrt(n2);
                for (Complex& z : col) z *= inv;
                break;
            }
            col.clear();
        }
        if (col.empty()) throw NumericalError("unitary completion failed");
        for (std::size_t i = 0; i < d; ++i) m.at(i, j) = col[i];
        basis.push_back(std::move(col));
    }
}

}  // namespace

QuantumSystem build_line_walk(std::size_t n_max) {
    if (n_max < 1) throw ValidationError("line walk: n_max must be at least 1");
    const long long nm = static_cast<long long>(n_max);
    const std::size_t d = 2 * (2 * n_max + 1);
    const double s = 1.0 / std::sqrt(2.0);

    CMatrix u(d, d);
    std::vector<bool> is_set(d, false);
    for (long long k = -nm + 1; k <= nm - 1; ++k) {
        // up_k  ->  s * up_{k-1} + s * down_{k+1}
        // down_k -> s * up_{k-1} - s * down_{k+1}
        const std::size_t col_up = line_index(k, 0, n_max);
        const std::size_t col_down = line_index(k, 1, n_max);
        u.at(line_index(k - 1, 0, n_max), col_up) = s;
        u.at(line_index(k + 1, 1, n_max), col_up) = s;
        u.at(line_index(k - 1, 0, n_max), col_down) = s;
        u.at(line_index(k + 1, 1, n_max), col_down) = -s;
        is_set[col_up] = true;
        is_set[col_down] = true;
    }
    complete_columns(u, is_set);

    std::map<std::string, UnitaryOp> unitaries;
    unitaries.emplace("U", UnitaryOp(std::move(u)));

    std::vector<std::pair<std::string, Effect>> effects;
    effects.reserve(2 * n_max + 1);
    for (long long k = -nm; k <= nm; ++k) {
        CMatrix proj(d, d);
        proj.at(line_index(k, 0, n_max), line_index(k, 0, n_max)) = 1.0;
        proj.at(line_index(k, 1, n_max), line_index(k, 1, n_max)) = 1.0;
        effects.emplace_back(int_label(k), Effect(std::move(proj)));
    }
    return QuantumSystem(d, std::move(unitaries), std::move(effects), /*is_test=*/true);
}

QuantumSystem walk_system(const WalkSpec& spec) {
    if (spec.kind == WalkSpec::Kind::Line) {
        return build_line_walk(spec.n_max);
    }
    if (spec.vertices == 0) throw ValidationError("graph walk: vertex count must be positive");
    if (!spec.unitary) throw ValidationError("graph walk: unitary matrix required");
    if (spec.unitary->rows() != spec.vertices || spec.unitary->cols() != spec.vertices) {
        throw ValidationError("graph walk: unitary must be " + std::to_string(spec.vertices) + "x" +
                              std::to_string(spec.vertices));
    }
    std::map<std::string, UnitaryOp> unitaries;
    unitaries.emplace("U", UnitaryOp(*spec.unitary));
    std::vector<std::pair<std::string, Effect>> effects;
    for (std::size_t v = 0; v < spec.vertices; ++v) {
        CMatrix proj(spec.vertices, spec.vertices);
        proj.at(v, v) = 1.0;
        effects.emplace_back(int_label(static_cast<long long>(v)), Effect(std::move(proj)));
    }
    return QuantumSystem(spec.vertices, std::move(unitaries), std::move(effects), /*is_test=*/true);
}

DensityMatrix walk_initial_state(const WalkSpec& spec) {
    if (spec.kind == WalkSpec::Kind::Line) {
        if (spec.n_max < 1) throw ValidationError("line walk: n_max must be at least 1");
        const std::size_t d = 2 * (2 * spec.n_max + 1);
        std::vector<Complex> psi(d, Complex(0.0));
        psi[line_index(0, 0, spec.n_max)] = 1.0;  // spin up at the origin
        return pure_density(psi);
    }
    if (spec.vertices == 0) throw ValidationError("graph walk: vertex count must be positive");
    std::vector<Complex> psi(spec.vertices, Complex(0.0));
    psi[0] = 1.0;
    return pure_density(psi);
}

DistStream walk_distribution(const WalkSpec& spec, std::size_t n) {
    if (spec.kind == WalkSpec::Kind::Line && n > spec.n_max) {
        throw ValidationError("walk truncation: " + std::to_string(n) + " steps exceed the window n_max=" +
                              std::to_string(spec.n_max) +
                              "; the boundary would contaminate the behaviour");
    }
    const QuantumSystem sys = walk_system(spec);
    DensityMatrix rho = walk_initial_state(spec);
    const UnitaryOp& u = sys.unitaries().begin()->second;

    DistStream out;
    out.entries.reserve(n + 1);
    out.entries.push_back(observation_distribution(sys, rho));
    for (std::size_t t = 0; t < n; ++t) {
        rho = conjugate_by(rho, u);
        out.entries.push_back(observation_distribution(sys, rho));
    }
    return out;
}

Distribution observation_distribution(const QuantumSystem& sys, const DensityMatrix& rho) {
    if (!sys.is_test()) {
        throw ValidationError("observation distribution requires a test (effects summing to identity)");
    }
    if (rho.dim() != sys.dim()) throw ShapeError("observation_distribution: state dimension mismatch");
    std::map<std::string, double> weights;
    for (const auto& [label, e] : sys.effects()) {
        weights[label] = effect_probability(rho.matrix(), e.matrix());
    }
    return Distribution::from_weights(std::move(weights));
}

}  // namespace qcoalg
