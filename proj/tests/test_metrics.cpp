#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "assignment_oracle.hpp"
#include "seldkit/augment.hpp"
#include "seldkit/metrics.hpp"

using namespace seldkit;
using seldkit_test::brute_force_assignment;

namespace {

double total_cost(const std::vector<std::vector<double>>& cost,
                  const std::vector<std::pair<int, int>>& pairs) {
    double t = 0.0;
    for (const auto& [r, c] : pairs) {
        t += cost[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    return t;
}

}  // namespace

TEST_CASE("assign_min_cost basics") {
    SUBCASE("1x1") {
        const auto pairs = assign_min_cost({{42.0}});
        REQUIRE(pairs.size() == 1);
        CHECK(pairs[0] == std::pair(0, 0));
    }

    SUBCASE("2x2 diagonal optimum") {
        const auto pairs = assign_min_cost({{0.0, 50.0}, {50.0, 0.0}});
        REQUIRE(pairs.size() == 2);
        CHECK(pairs[0] == std::pair(0, 0));
        CHECK(pairs[1] == std::pair(1, 1));
    }

    SUBCASE("anti-diagonal optimum") {
        const auto pairs = assign_min_cost({{50.0, 0.0}, {0.0, 50.0}});
        REQUIRE(pairs.size() == 2);
        CHECK(pairs[0] == std::pair(0, 1));
        CHECK(pairs[1] == std::pair(1, 0));
    }

    SUBCASE("rectangular: more predictions than references") {
        const auto pairs = assign_min_cost({{30.0, 5.0, 90.0}});
        REQUIRE(pairs.size() == 1);
        CHECK(pairs[0] == std::pair(0, 1));
    }

    SUBCASE("rectangular: more references than predictions") {
        const auto pairs = assign_min_cost({{30.0}, {5.0}, {90.0}});
        REQUIRE(pairs.size() == 1);
        CHECK(pairs[0] == std::pair(1, 0));
    }

    SUBCASE("all-equal costs tie-break lexicographically") {
        const auto pairs = assign_min_cost({{7.0, 7.0}, {7.0, 7.0}});
        REQUIRE(pairs.size() == 2);
        CHECK(pairs[0] == std::pair(0, 0));
        CHECK(pairs[1] == std::pair(1, 1));
    }

    SUBCASE("empty dimensions") {
        CHECK(assign_min_cost({}).empty());
        CHECK(assign_min_cost({{}}).empty());
    }

    SUBCASE("negative or non-finite costs rejected") {
        CHECK_THROWS_AS(assign_min_cost({{-1.0}}), std::invalid_argument);
        CHECK_THROWS_AS(assign_min_cost({{std::numeric_limits<double>::infinity()}}),
                        std::invalid_argument);
    }
}

TEST_CASE("assign_min_cost matches the exhaustive oracle") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> dim(1, 6);
    std::uniform_int_distribution<int> cost_value(0, 180);

    for (int trial = 0; trial < 300; ++trial) {
        const int rows = dim(rng);
        const int cols = dim(rng);
        std::vector<std::vector<double>> cost(static_cast<std::size_t>(rows),
                                              std::vector<double>(static_cast<std::size_t>(cols)));
        for (auto& row : cost) {
            for (auto& v : row) v = cost_value(rng);
        }

        const auto got = assign_min_cost(cost);
        const auto want = brute_force_assignment(cost);
        REQUIRE(got.size() == std::min(cost.size(), cost[0].size()));
        CHECK(total_cost(cost, got) == doctest::Approx(want.total).epsilon(1e-9));
        // Integer costs make ties exact, so the lexicographic rule is testable.
        CHECK(got == want.pairs);
    }
}

TEST_CASE("evaluate: hand-derived fixtures") {
    SUBCASE("perfect prediction") {
        std::vector<SeldEvent> ref;
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> az(-180.0, 180.0);
        std::uniform_real_distribution<double> el(-80.0, 80.0);
        for (int i = 0; i < 40; ++i) {
            ref.push_back({i, i % kNumClasses, i % 2, Doa(az(rng), el(rng))});
        }
        const SeldScores s = evaluate(ref, ref);
        CHECK(s.error_rate == 0.0);
        CHECK(s.f_score == doctest::Approx(1.0));
        REQUIRE(s.localization_error.has_value());
        CHECK(*s.localization_error == doctest::Approx(0.0));
        CHECK(s.localization_recall == doctest::Approx(1.0));
    }

    SUBCASE("empty prediction against one reference event: one deletion") {
        const std::vector<SeldEvent> ref{{0, 3, 0, Doa(10, 10)}};
        const SeldScores s = evaluate(ref, {});
        CHECK(s.error_rate == doctest::Approx(1.0));
        CHECK(s.f_score == doctest::Approx(0.0));
        CHECK_FALSE(s.localization_error.has_value());
        CHECK(s.localization_recall == doctest::Approx(0.0));
    }

    SUBCASE("class match outside the 20-degree gate: one substitution") {
        const std::vector<SeldEvent> ref{{0, 2, 0, Doa(0, 0)}};
        const std::vector<SeldEvent> pred{{0, 2, 0, Doa(25, 0)}};
        const SeldScores s = evaluate(ref, pred);
        CHECK(s.error_rate == doctest::Approx(1.0));
        CHECK(s.f_score == doctest::Approx(0.0));
        REQUIRE(s.localization_error.has_value());
        CHECK(*s.localization_error == doctest::Approx(25.0).epsilon(1e-9));
        CHECK(s.localization_recall == doctest::Approx(1.0));
    }
}

TEST_CASE("evaluate: insertions and mixed errors") {
    SUBCASE("spurious prediction with empty reference counts as insertion") {
        const std::vector<SeldEvent> pred{{0, 1, 0, Doa(0, 0)}};
        const SeldScores s = evaluate({}, pred);
        CHECK(s.error_rate >= 1.0);
        CHECK(s.f_score == doctest::Approx(0.0));
        CHECK_FALSE(s.localization_error.has_value());
    }

    SUBCASE("wrong class is a substitution at segment level") {
        const std::vector<SeldEvent> ref{{0, 2, 0, Doa(0, 0)}};
        const std::vector<SeldEvent> pred{{0, 3, 0, Doa(0, 0)}};
        const SeldScores s = evaluate(ref, pred);
        // One FN (class 2) and one FP (class 3) pool into one substitution.
        CHECK(s.error_rate == doctest::Approx(1.0));
        CHECK(s.f_score == doctest::Approx(0.0));
        CHECK_FALSE(s.localization_error.has_value());  // no class-matched pair
        CHECK(s.localization_recall == doctest::Approx(0.0));
    }

    SUBCASE("within-gate match is a true positive") {
        const std::vector<SeldEvent> ref{{0, 2, 0, Doa(0, 0)}};
        const std::vector<SeldEvent> pred{{0, 2, 0, Doa(15, 0)}};
        const SeldScores s = evaluate(ref, pred);
        CHECK(s.error_rate == 0.0);
        CHECK(s.f_score == doctest::Approx(1.0));
        CHECK(*s.localization_error == doctest::Approx(15.0).epsilon(1e-9));
        CHECK(s.localization_recall == doctest::Approx(1.0));
    }

    SUBCASE("two instances match through the assignment, not greedily") {
        // Costs: r0->p0 25, r0->p1 60, r1->p0 5, r1->p1 30. Greedy nearest
        // would grab (r1, p0) at 5 and strand r0 at 60 (total 65); the
        // optimal assignment is 25 + 30 = 55.
        const std::vector<SeldEvent> ref{{0, 1, 0, Doa(0, 0)}, {0, 1, 1, Doa(30, 0)}};
        const std::vector<SeldEvent> pred{{0, 1, 0, Doa(25, 0)}, {0, 1, 1, Doa(60, 0)}};
        const SeldScores s = evaluate(ref, pred);
        REQUIRE(s.localization_error.has_value());
        CHECK(*s.localization_error == doctest::Approx(27.5).epsilon(1e-9));  // 55 / 2
    }
}

TEST_CASE("evaluate: segment pooling") {
    // The same source in consecutive frames of one segment is a single
    // segment-event; frames in different segments count separately.
    const std::vector<SeldEvent> ref{{0, 4, 0, Doa(50, 10)},
                                     {1, 4, 0, Doa(50, 10)},
                                     {9, 4, 0, Doa(50, 10)},
                                     {10, 4, 0, Doa(50, 10)}};
    const std::vector<SeldEvent> pred{{3, 4, 0, Doa(50, 10)}};
    const SeldScores s = evaluate(ref, pred);
    // Segment 0 matches; segment 1 is a deletion: ER = 1/2, LR = 1/2.
    CHECK(s.error_rate == doctest::Approx(0.5));
    CHECK(s.localization_recall == doctest::Approx(0.5));
    CHECK(*s.localization_error == doctest::Approx(0.0));
}

TEST_CASE("evaluate: permutation invariance") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> az(-180.0, 180.0);
    std::uniform_real_distribution<double> el(-80.0, 80.0);
    std::uniform_int_distribution<int> frame(0, 49);
    std::uniform_int_distribution<int> cls(0, kNumClasses - 1);
    std::uniform_int_distribution<int> src(0, 2);

    std::vector<SeldEvent> ref;
    std::vector<SeldEvent> pred;
    for (int i = 0; i < 120; ++i) {
        ref.push_back({frame(rng), cls(rng), src(rng), Doa(az(rng), el(rng))});
        pred.push_back({frame(rng), cls(rng), src(rng), Doa(az(rng), el(rng))});
    }
    const SeldScores base = evaluate(ref, pred);

    for (int shuffle = 0; shuffle < 5; ++shuffle) {
        std::shuffle(ref.begin(), ref.end(), rng);
        std::shuffle(pred.begin(), pred.end(), rng);
        const SeldScores s = evaluate(ref, pred);
        CHECK(s.error_rate == base.error_rate);
        CHECK(s.f_score == base.f_score);
        CHECK(s.localization_recall == base.localization_recall);
        REQUIRE(s.localization_error.has_value() == base.localization_error.has_value());
        if (base.localization_error) {
            CHECK(*s.localization_error == *base.localization_error);
        }
    }
}

TEST_CASE("evaluate: corrupting one true positive never improves ER or F") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> az(-180.0, 180.0);
    std::uniform_real_distribution<double> el(-70.0, 70.0);
    std::uniform_int_distribution<int> frame(0, 29);
    std::uniform_int_distribution<int> cls(0, kNumClasses - 1);

    for (int trial = 0; trial < 50; ++trial) {
        std::vector<SeldEvent> ref;
        for (int i = 0; i < 12; ++i) {
            ref.push_back({frame(rng), cls(rng), 0, Doa(az(rng), el(rng))});
        }
        std::vector<SeldEvent> pred = ref;  // all TPs
        const SeldScores before = evaluate(ref, pred);

        // Push one prediction far outside the gate.
        std::uniform_int_distribution<std::size_t> pick(0, pred.size() - 1);
        const std::size_t idx = pick(rng);
        const Doa d = pred[idx].doa;
        pred[idx].doa =
            Doa(wrap_degrees(d.azimuth() + 180.0), std::clamp(-d.elevation(), -70.0, 70.0));
        const SeldScores after = evaluate(ref, pred);

        CHECK(after.error_rate >= before.error_rate - 1e-12);
        CHECK(after.f_score <= before.f_score + 1e-12);
    }
}

TEST_CASE("evaluate: invariant under joint channel-swap transforms") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> az(-180.0, 180.0);
    std::uniform_real_distribution<double> el(-80.0, 80.0);
    std::uniform_int_distribution<int> frame(0, 39);
    std::uniform_int_distribution<int> cls(0, kNumClasses - 1);

    std::vector<SeldEvent> ref;
    std::vector<SeldEvent> pred;
    for (int i = 0; i < 60; ++i) {
        ref.push_back({frame(rng), cls(rng), 0, Doa(az(rng), el(rng))});
        pred.push_back({frame(rng), cls(rng), 0, Doa(az(rng), el(rng))});
    }
    const SeldScores base = evaluate(ref, pred);

    for (const auto& t : augmentation_set()) {
        const SeldScores s = evaluate(transform_metadata(t, ref), transform_metadata(t, pred));
        CHECK(s.error_rate == doctest::Approx(base.error_rate).epsilon(1e-12));
        CHECK(s.f_score == doctest::Approx(base.f_score).epsilon(1e-12));
        CHECK(s.localization_recall == doctest::Approx(base.localization_recall).epsilon(1e-12));
        REQUIRE(s.localization_error.has_value() == base.localization_error.has_value());
        if (base.localization_error) {
            CHECK(*s.localization_error ==
                  doctest::Approx(*base.localization_error).epsilon(1e-9));
        }
    }
}

TEST_CASE("evaluate: macro versus micro averaging") {
    // Class 0: perfect (1 TP). Class 1: complete miss (1 FN + 1 FP elsewhere).
    const std::vector<SeldEvent> ref{{0, 0, 0, Doa(0, 0)}, {0, 1, 0, Doa(90, 0)}};
    const std::vector<SeldEvent> pred{{0, 0, 0, Doa(0, 0)}, {0, 2, 0, Doa(90, 0)}};

    EvalOptions macro;
    const SeldScores m = evaluate(ref, pred, macro);
    // F per class: class0 = 1, class1 = 0, class2 = 0 -> macro 1/3.
    CHECK(m.f_score == doctest::Approx(1.0 / 3.0));

    EvalOptions micro;
    micro.average = ClassAverage::kMicro;
    const SeldScores mi = evaluate(ref, pred, micro);
    // Pooled: TP=1, FP=1, FN=1 -> 2/(2+1+1) = 0.5.
    CHECK(mi.f_score == doctest::Approx(0.5));
    CHECK(mi.localization_recall == doctest::Approx(0.5));
}

TEST_CASE("evaluate: per-class report supports the breakdown table") {
    const std::vector<SeldEvent> ref{{0, 0, 0, Doa(0, 0)}, {0, 5, 0, Doa(30, 10)}};
    const std::vector<SeldEvent> pred{{0, 0, 0, Doa(5, 0)}, {0, 5, 0, Doa(38, 10)}};
    const EvalReport rep = evaluate_detailed(ref, pred);
    REQUIRE(rep.per_class.size() == kNumClasses);
    CHECK(rep.per_class[0].matched == 1);
    CHECK(*rep.per_class[0].localization_error() == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(rep.per_class[5].matched == 1);
    CHECK(rep.per_class[5].localization_error().value() > 7.0);
    CHECK_FALSE(rep.per_class[1].localization_error().has_value());
}

TEST_CASE("evaluate: both lists empty is trivially perfect") {
    const SeldScores s = evaluate({}, {});
    CHECK(s.error_rate == 0.0);
    CHECK(s.f_score == 1.0);
    CHECK_FALSE(s.localization_error.has_value());
    CHECK(s.localization_recall == 1.0);
}
