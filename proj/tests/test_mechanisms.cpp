#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "floc/adversarial.hpp"
#include "floc/mechanisms.hpp"
#include "test_support.hpp"

using namespace floc;
using Catch::Matchers::ContainsSubstring;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

Instance random_2d_instance(std::mt19937_64& rng, std::size_t n) {
    return Instance(testsupport::random_points(rng, n), testsupport::random_point(rng, -20, 20));
}

}  // namespace

TEST_CASE("minmaxp_1d branches") {
    const std::vector<double> values{0, 2};
    CHECK(minmaxp_1d(values, 1) == 1.0);   // prediction inside the range
    CHECK(minmaxp_1d(values, -3) == 0.0);  // left of every report
    CHECK(minmaxp_1d(values, 5) == 2.0);   // right of every report
    CHECK_THROWS_WITH(minmaxp_1d(std::vector<double>{}, 0), "empty instance");
}

TEST_CASE("minimum_bounding_box examples") {
    const std::vector<Point> triple{{0, 1}, {1, 0}, {-kInvSqrt2, -kInvSqrt2}};
    CHECK(minimum_bounding_box(Instance(triple, {1, 1})) == Point(1, 1));
    CHECK(minimum_bounding_box(Instance(triple, {0, 0})) == Point(0, 0));
    CHECK(minimum_bounding_box(Instance({{0, 0}, {2, 2}}, {1, 5})) == Point(1, 2));
}

TEST_CASE("coordinatewise_median examples") {
    CHECK(coordinatewise_median(std::vector<Point>{{1, 9}, {2, 8}, {3, 7}}) == Point(2, 8));
    CHECK(coordinatewise_median(std::vector<Point>{{0, 0}, {1, 1}}) == Point(0, 0));
    CHECK(coordinatewise_median(std::vector<Point>{{0, 0}, {0, 0}, {5, 5}}) == Point(0, 0));
    CHECK_THROWS_WITH(coordinatewise_median(std::vector<Point>{}), "empty instance");
}

TEST_CASE("generalized_coordinatewise_median examples") {
    CHECK(generalized_coordinatewise_median(std::vector<Point>{{0, 0}},
                                            std::vector<Point>{}) == Point(0, 0));
    CHECK(generalized_coordinatewise_median(std::vector<Point>{{0, 0}, {2, 2}},
                                            std::vector<Point>{{1, 1}}) == Point(1, 1));
    // Sorted by hand: xs {0,0,4,1,1} -> 1, ys {2,-2,0,1,1} -> 1.
    CHECK(generalized_coordinatewise_median(std::vector<Point>{{0, 2}, {0, -2}, {4, 0}},
                                            std::vector<Point>{{1, 1}, {1, 1}}) == Point(1, 1));
    CHECK_THROWS_WITH(generalized_coordinatewise_median(std::vector<Point>{},
                                                        std::vector<Point>{{1, 1}}),
                      "empty instance");
}

TEST_CASE("cmp examples") {
    std::mt19937_64 rng(31);
    const Instance inst = random_2d_instance(rng, 5);
    CHECK(cmp(inst, 0.0) == coordinatewise_median(inst.points));

    CHECK(cmp(lemma42_consistency_instance(0.5, 8), 0.5) == Point(0, 0));
    CHECK(cmp(lemma42_robustness_instance(0.5, 8), 0.5) == Point(0, 0));

    CHECK_THROWS_WITH(cmp(random_2d_instance(rng, 7), 0.5),
                      ContainsSubstring("confidence incompatible with n"));
    CHECK_THROWS_WITH(cmp(random_2d_instance(rng, 4), 1.0),
                      ContainsSubstring("confidence out of range"));
    CHECK_THROWS_WITH(cmp(random_2d_instance(rng, 4), -0.25),
                      ContainsSubstring("confidence out of range"));
}

TEST_CASE("cmp integrality error names the smallest compatible n") {
    CHECK_THROWS_WITH(cmp(Instance({{0, 0}, {1, 1}, {2, 2}}, {0, 0}), 0.25),
                      ContainsSubstring("smallest compatible n is 4"));
}

TEST_CASE("evaluate dispatch") {
    CHECK(evaluate({MechanismKind::MinimumBoundingBox, 0.0},
                   Instance({{0, 0}}, {3, 3})) == Point(0, 0));

    std::mt19937_64 rng(32);
    const Instance inst = random_2d_instance(rng, 6);
    CHECK(evaluate({MechanismKind::CMP, 0.0}, inst) == coordinatewise_median(inst.points));

    // With c = (n-1)/n, CMP coincides with the bounding-box mechanism.
    const std::vector<Point> triple{{0, 1}, {1, 0}, {-kInvSqrt2, -kInvSqrt2}};
    const Instance witness(triple, {1, 1});
    CHECK(evaluate({MechanismKind::CMP, 2.0 / 3.0}, witness) == Point(1, 1));

    CHECK_THROWS_WITH(evaluate({MechanismKind::MinMaxP1D, 0.0}, witness),
                      "mechanism is one-dimensional");
    const Instance line({{0, 0}, {2, 0}}, {1, 0});
    CHECK(evaluate({MechanismKind::MinMaxP1D, 0.0}, line) == Point(1, 0));
}

TEST_CASE("cmp with c = (n-1)/n equals the bounding-box mechanism") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 1 + rng() % 9;
        const Instance inst = random_2d_instance(rng, n);
        const double c = static_cast<double>(n - 1) / static_cast<double>(n);
        CHECK(cmp(inst, c) == minimum_bounding_box(inst));
    }
}

TEST_CASE("unanimity: coincident agents force the common point") {
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 50; ++trial) {
        const Point q = testsupport::random_point(rng);
        const std::size_t n = 1 + rng() % 8;
        const Instance inst(std::vector<Point>(n, q), testsupport::random_point(rng, -30, 30));
        CHECK(minimum_bounding_box(inst) == q);
        CHECK(coordinatewise_median(inst.points) == q);
        for (std::size_t k = 0; k < n; ++k)
            CHECK(generalized_coordinatewise_median(
                      inst.points, std::vector<Point>(k, inst.prediction)) == q);
    }
    const Instance line(std::vector<Point>(3, Point(4, 0)), Point(-7, 0));
    CHECK(evaluate({MechanismKind::MinMaxP1D, 0.0}, line) == Point(4, 0));
}

TEST_CASE("anonymity: output is invariant under permutation of agents") {
    std::mt19937_64 rng(35);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng() % 8;
        Instance inst = random_2d_instance(rng, n);
        const Point mbb = minimum_bounding_box(inst);
        const Point cm = coordinatewise_median(inst.points);
        const double c = static_cast<double>(n - 1) / static_cast<double>(n);
        const Point cmp_out = cmp(inst, c);
        std::shuffle(inst.points.begin(), inst.points.end(), rng);
        CHECK(minimum_bounding_box(inst) == mbb);
        CHECK(coordinatewise_median(inst.points) == cm);
        CHECK(cmp(inst, c) == cmp_out);
    }
}

TEST_CASE("translation equivariance") {
    std::mt19937_64 rng(36);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + rng() % 8;
        const Instance inst = random_2d_instance(rng, n);
        const Point v = testsupport::random_point(rng, -50, 50);
        std::vector<Point> shifted;
        shifted.reserve(n);
        for (const Point& p : inst.points) shifted.emplace_back(p.x + v.x, p.y + v.y);
        const Instance moved(shifted, Point(inst.prediction.x + v.x, inst.prediction.y + v.y));

        const Point f = minimum_bounding_box(inst);
        CHECK(minimum_bounding_box(moved) == Point(f.x + v.x, f.y + v.y));
        const Point g = coordinatewise_median(inst.points);
        const Point gm = coordinatewise_median(moved.points);
        CHECK(gm == Point(g.x + v.x, g.y + v.y));
        if (n % 2 == 0) {
            const Point h = cmp(inst, 0.5);
            CHECK(cmp(moved, 0.5) == Point(h.x + v.x, h.y + v.y));
        }
    }
}

TEST_CASE("shift lemma: facility moves at most as far as the prediction") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = 2 * (1 + rng() % 4);
        const auto pts = testsupport::random_points(rng, n);
        const Point o1 = testsupport::random_point(rng, -25, 25);
        const Point o2 = testsupport::random_point(rng, -25, 25);
        const Instance a(pts, o1), b(pts, o2);
        const double pred_dist = distance(o1, o2);
        CHECK(distance(minimum_bounding_box(a), minimum_bounding_box(b)) <=
              pred_dist + 1e-12);
        CHECK(distance(cmp(a, 0.5), cmp(b, 0.5)) <= pred_dist + 1e-12);
    }
}

TEST_CASE("strategyproofness holds under deviation fuzzing") {
    for (const MechanismSpec spec :
         {MechanismSpec{MechanismKind::MinMaxP1D, 0.0},
          MechanismSpec{MechanismKind::MinimumBoundingBox, 0.0},
          MechanismSpec{MechanismKind::CoordinatewiseMedian, 0.0},
          MechanismSpec{MechanismKind::CMP, 0.5}}) {
        const FuzzReport report = strategyproofness_fuzz(spec, 20, 777);
        INFO("mechanism " << to_string(spec.kind));
        CHECK(report.violations.empty());
        CHECK(report.triples > 1000);
    }
}
