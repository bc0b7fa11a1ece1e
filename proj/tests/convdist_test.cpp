#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qcoalg/convdist.hpp"
#include "support.hpp"

using namespace qcoalg;
using testsupport::Rng;

namespace {

Distribution random_nested_flatten(Rng& rng, int depth);

// Random distribution over up to 6 fresh labels.
Distribution random_leaf(Rng& rng) {
    std::uniform_int_distribution<int> count(1, 6);
    std::uniform_int_distribution<int> label(0, 9);
    std::vector<std::string> labels;
    for (int i = 0, n = count(rng); i < n; ++i) labels.push_back("p" + std::to_string(label(rng)));
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    return testsupport::random_distribution(labels, rng);
}

NestedDistribution random_nested(Rng& rng, int depth) {
    std::uniform_int_distribution<int> count(1, 4);
    const int n = count(rng);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (double& v : w) {
        v = unit(rng);
        total += v;
    }
    NestedDistribution out;
    for (int i = 0; i < n; ++i) {
        out.support.emplace_back(depth <= 1 ? random_leaf(rng) : random_nested_flatten(rng, depth - 1),
                                 w[static_cast<std::size_t>(i)] / total);
    }
    return out;
}

Distribution random_nested_flatten(Rng& rng, int depth) {
    return dist_flatten(random_nested(rng, depth));
}

}  // namespace

TEST_CASE("dist_unit is a point mass") {
    const Distribution d = dist_unit("x0");
    CHECK(d.support_size() == 1);
    CHECK(d.probability("x0") == 1.0);
}

TEST_CASE("dist_map is natural on unit") {
    auto f = [](const std::string& s) { return s + "!"; };
    CHECK(dist_map(f, dist_unit("x")) == dist_unit("x!"));
}

TEST_CASE("flattening a unit of a distribution returns it") {
    Rng rng(3);
    const Distribution phi = random_leaf(rng);
    NestedDistribution nested;
    nested.support.emplace_back(phi, 1.0);
    CHECK(dist_flatten(nested).approx_equal(phi, 1e-12));
}

TEST_CASE("dist_map merges masses of a constant function") {
    const Distribution d = Distribution::from_weights({{"a", 0.5}, {"b", 0.5}});
    const Distribution out = dist_map([](const std::string&) { return std::string("c"); }, d);
    CHECK(out == dist_unit("c"));
}

TEST_CASE("dist_map with identity keeps the distribution") {
    Rng rng(5);
    const Distribution d = random_leaf(rng);
    CHECK(dist_map([](const std::string& s) { return s; }, d) == d);
}

TEST_CASE("dist_map sums masses of merged points") {
    const Distribution d =
        Distribution::from_weights({{"x0", 0.25}, {"x1", 0.25}, {"x2", 0.5}});
    auto f = [](const std::string& s) { return s == "x2" ? std::string("z") : std::string("y"); };
    const Distribution out = dist_map(f, d);
    CHECK(out.probability("y") == doctest::Approx(0.5));
    CHECK(out.probability("z") == doctest::Approx(0.5));
    CHECK(out.support_size() == 2);
}

TEST_CASE("dist_flatten computes the weighted mixture") {
    NestedDistribution nested;
    nested.support.emplace_back(Distribution::from_weights({{"a", 0.5}, {"b", 0.5}}), 0.5);
    nested.support.emplace_back(dist_unit("a"), 0.5);
    const Distribution out = dist_flatten(nested);
    CHECK(out.probability("a") == doctest::Approx(0.75));
    CHECK(out.probability("b") == doctest::Approx(0.25));
}

TEST_CASE("monad laws hold on random distributions") {
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        // flatten . map unit = id
        const Distribution phi = random_nested_flatten(rng, 2);
        NestedDistribution mapped;
        for (const auto& [label, p] : phi.support()) mapped.support.emplace_back(dist_unit(label), p);
        CHECK(dist_flatten(mapped).approx_equal(phi, 1e-9));

        // flatten . unit = id
        NestedDistribution unit_outer;
        unit_outer.support.emplace_back(phi, 1.0);
        CHECK(dist_flatten(unit_outer).approx_equal(phi, 1e-9));
    }
    // flatten . map flatten = flatten . flatten on triple nestings
    for (int i = 0; i < 100; ++i) {
        std::uniform_int_distribution<int> count(1, 3);
        const int n = count(rng);
        std::uniform_real_distribution<double> unit(0.05, 1.0);
        std::vector<NestedDistribution> inner;
        std::vector<double> w(static_cast<std::size_t>(n));
        double total = 0.0;
        for (int k = 0; k < n; ++k) {
            inner.push_back(random_nested(rng, 1));
            w[static_cast<std::size_t>(k)] = unit(rng);
            total += w[static_cast<std::size_t>(k)];
        }
        for (double& v : w) v /= total;

        // route 1: flatten each inner nesting, then flatten the result
        NestedDistribution map_flatten;
        for (int k = 0; k < n; ++k) {
            map_flatten.support.emplace_back(dist_flatten(inner[static_cast<std::size_t>(k)]),
                                             w[static_cast<std::size_t>(k)]);
        }
        // route 2: flatten the outer layer first (scale the outer weights)
        NestedDistribution flatten_outer;
        for (int k = 0; k < n; ++k) {
            for (const auto& [phi, s] : inner[static_cast<std::size_t>(k)].support) {
                flatten_outer.support.emplace_back(phi, w[static_cast<std::size_t>(k)] * s);
            }
        }
        CHECK(dist_flatten(map_flatten).approx_equal(dist_flatten(flatten_outer), 1e-9));
    }
}

TEST_CASE("every operation output passes validation") {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        const Distribution d = random_nested_flatten(rng, 2);
        CHECK(std::abs(d.total_mass() - 1.0) <= 1e-9);
        for (const auto& [label, p] : d.support()) {
            (void)label;
            CHECK(p > 0.0);
        }
    }
}

TEST_CASE("convex_sum of a single point is that point") {
    Rng rng(13);
    const Distribution phi = random_leaf(rng);
    CHECK(convex_sum(ConvexCombination({1.0}), {phi}).approx_equal(phi, 1e-12));
}

TEST_CASE("balanced convex_sum of two point masses") {
    const Distribution out = convex_sum(ConvexCombination({0.5, 0.5}), {dist_unit("a"), dist_unit("b")});
    CHECK(out.probability("a") == doctest::Approx(0.5));
    CHECK(out.probability("b") == doctest::Approx(0.5));
}

TEST_CASE("convex_sum agrees with dist_flatten on the induced nesting") {
    Rng rng(17);
    const std::vector<double> weights{0.25, 0.25, 0.5};
    std::vector<Distribution> points{dist_unit("u"), dist_unit("v"), dist_unit("w")};
    const Distribution direct = convex_sum(ConvexCombination(weights), points);
    NestedDistribution nested;
    for (std::size_t i = 0; i < points.size(); ++i) nested.support.emplace_back(points[i], weights[i]);
    CHECK(direct.approx_equal(dist_flatten(nested), 1e-12));

    for (int i = 0; i < 20; ++i) {
        std::vector<Distribution> pts{random_leaf(rng), random_leaf(rng), random_leaf(rng)};
        NestedDistribution nd;
        for (std::size_t k = 0; k < pts.size(); ++k) nd.support.emplace_back(pts[k], weights[k]);
        CHECK(convex_sum(ConvexCombination(weights), pts).approx_equal(dist_flatten(nd), 1e-9));
    }
}

TEST_CASE("convex_sum rejects mismatched lengths") {
    CHECK_THROWS_AS(convex_sum(ConvexCombination({0.5, 0.5}), {dist_unit("a")}), ShapeError);
}

TEST_CASE("distribution validation") {
    CHECK_THROWS_AS(Distribution::from_weights({{"a", 0.7}}), ValidationError);
    CHECK_THROWS_AS(Distribution::from_weights({{"a", 1.5}, {"b", -0.5}}), ValidationError);
    // zero entries are pruned
    const Distribution d = Distribution::from_weights({{"a", 1.0}, {"b", 0.0}});
    CHECK(d.support_size() == 1);
}

TEST_CASE("convex combination validation") {
    CHECK_THROWS_AS(ConvexCombination({0.5, 0.6}), ValidationError);
    CHECK_THROWS_AS(ConvexCombination({1.5, -0.5}), ValidationError);
}

TEST_CASE("integer labels have a canonical form") {
    CHECK(int_label(-3) == "-3");
    CHECK(int_label(0) == "0");
    CHECK(int_label(12) == "12");
}
