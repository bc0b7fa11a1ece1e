#include "qcoalg/convdist.hpp"

#include <cmath>
#include <sstream>

namespace qcoalg {

namespace {

void check_mass(double total, const char* what) {
    if (std::abs(total - 1.0) > kProbSumTol) {
        std::ostringstream os;
        os.precision(2);
        os << what << ": total mass deviates from 1 by " << std::scientific
           << std::abs(total - 1.0);
        throw ValidationError(os.str());
    }
}

}  // namespace

Distribution Distribution::from_weights(std::map<std::string, double> weights) {
    double total = 0.0;
    for (const auto& [label, p] : weights) {
        if (!std::isfinite(p)) throw ValidationError("distribution: non-finite probability");
        if (p < -kProbPruneTol) {
            throw ValidationError("distribution: negative probability at '" + label + "'");
        }
        total += p;
    }
    check_mass(total, "distribution");

    Distribution d;
    double kept = 0.0;
    for (auto& [label, p] : weights) {
        if (p < kProbPruneTol) continue;
        d.support_.emplace(label, p);
        kept += p;
    }
    // Pruning removes at most support*1e-12; renormalize only if it actually
    // pushed the total outside the tolerance band.
    if (std::abs(kept - 1.0) > kProbSumTol) {
        for (auto& [label, p] : d.support_) p /= kept;
    }
    return d;
}

double Distribution::probability(const std::string& label) const {
    auto it = support_.find(label);
    return it == support_.end() ? 0.0 : it->second;
}

double Distribution::total_mass() const {
    double t = 0.0;
    for (const auto& [label, p] : support_) t += p;
    return t;
}

bool Distribution::approx_equal(const Distribution& other, double tol) const {
    for (const auto& [label, p] : support_) {
        if (std::abs(p - other.probability(label)) > tol) return false;
    }
    for (const auto& [label, p] : other.support_) {
        if (std::abs(p - probability(label)) > tol) return false;
    }
    return true;
}

std::string int_label(long long k) { return std::to_string(k); }

ConvexCombination::ConvexCombination(std::vector<double> weights) : weights_(std::move(weights)) {
    double total = 0.0;
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0.0) {
            throw ValidationError("convex combination: weights must be finite and nonnegative");
        }
        total += w;
    }
    check_mass(total, "convex combination");
}

Distribution dist_unit(const std::string& x) {
    return Distribution::from_weights({{x, 1.0}});
}

Distribution dist_map(const std::function<std::string(const std::string&)>& f,
                      const Distribution& phi) {
    std::map<std::string, double> out;
    for (const auto& [label, p] : phi.support()) out[f(label)] += p;
    return Distribution::from_weights(std::move(out));
}

Distribution dist_flatten(const NestedDistribution& nested) {
    double outer_total = 0.0;
    for (const auto& [inner, r] : nested.support) {
        (void)inner;
        if (!std::isfinite(r) || r < 0.0) {
            throw ValidationError("nested distribution: outer weights must be nonnegative");
        }
        outer_total += r;
    }
    check_mass(outer_total, "nested distribution");

    std::map<std::string, double> out;
    for (const auto& [inner, r] : nested.support) {
        for (const auto& [label, s] : inner.support()) out[label] += r * s;
    }
    return Distribution::from_weights(std::move(out));
}

Distribution convex_sum(const ConvexCombination& weights, const std::vector<Distribution>& points) {
    if (weights.size() != points.size()) {
        std::ostringstream os;
        os << "convex_sum: " << weights.size() << " weights vs " << points.size() << " points";
        throw ShapeError(os.str());
    }
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (const auto& [label, p] : points[i].support()) out[label] += weights.weights()[i] * p;
    }
    return Distribution::from_weights(std::move(out));
}

}  // namespace qcoalg
