#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "revex/errors.hpp"
#include "revex/modelsel.hpp"

using namespace revex;

namespace {

FeatureVector sparse(const std::vector<double>& dense) {
    FeatureVector v;
    for (std::uint32_t i = 0; i < dense.size(); ++i) {
        if (dense[i] != 0.0) v.entries.emplace_back(i, dense[i]);
    }
    return v;
}

// Checks that folds partition 0..n-1 and sizes differ by at most one.
void check_partition(const std::vector<std::vector<std::size_t>>& folds,
                     std::size_t n) {
    std::set<std::size_t> seen;
    std::size_t smallest = n, largest = 0;
    for (const auto& f : folds) {
        smallest = std::min(smallest, f.size());
        largest = std::max(largest, f.size());
        for (std::size_t idx : f) {
            CHECK(idx < n);
            CHECK(seen.insert(idx).second);
        }
    }
    CHECK(seen.size() == n);
    CHECK(largest - smallest <= 1);
}

}  // namespace

TEST_CASE("kfold_split partitions with near-equal fold sizes") {
    auto folds = kfold_split(23, 10, 42);
    REQUIRE(folds.size() == 10);
    check_partition(folds, 23);

    // Exactly divisible case.
    auto even = kfold_split(30, 10, 1);
    for (const auto& f : even) CHECK(f.size() == 3);
}

TEST_CASE("kfold_split is deterministic and validates arguments") {
    CHECK(kfold_split(50, 10, 7) == kfold_split(50, 10, 7));
    CHECK(kfold_split(50, 10, 7) != kfold_split(50, 10, 8));
    CHECK_THROWS_AS(kfold_split(5, 10, 0), TooFewInstancesError);
    CHECK_THROWS_AS(kfold_split(5, 1, 0), MalformedInputError);
}

TEST_CASE("stratified_kfold spreads positives evenly") {
    std::vector<int> labels(122, -1);
    for (int i = 0; i < 12; ++i) labels[static_cast<std::size_t>(i) * 10] = 1;
    auto folds = stratified_kfold(labels, 10, 3);
    REQUIRE(folds.size() == 10);
    check_partition(folds, labels.size());

    std::size_t min_pos = labels.size(), max_pos = 0;
    for (const auto& f : folds) {
        std::size_t pos = 0;
        for (std::size_t idx : f) {
            if (labels[idx] > 0) ++pos;
        }
        min_pos = std::min(min_pos, pos);
        max_pos = std::max(max_pos, pos);
    }
    CHECK(max_pos - min_pos <= 1);
    CHECK(min_pos == 1);  // 12 positives over 10 folds
    CHECK(max_pos == 2);
}

TEST_CASE("stratified_kfold tolerates fewer positives than folds") {
    std::vector<int> labels(40, -1);
    labels[0] = labels[20] = 1;
    auto folds = stratified_kfold(labels, 10, 5);
    check_partition(folds, labels.size());
    std::size_t folds_with_pos = 0;
    for (const auto& f : folds) {
        for (std::size_t idx : f) {
            if (labels[idx] > 0) {
                ++folds_with_pos;
                break;
            }
        }
    }
    CHECK(folds_with_pos == 2);
}

TEST_CASE("cross_validate scores a separable problem perfectly") {
    // Positives cluster around (+2,+2), negatives around (-2,-2).
    std::vector<FeatureVector> x;
    std::vector<int> y;
    for (int i = 0; i < 12; ++i) {
        x.push_back(sparse({2.0 + 0.1 * i, 2.0 - 0.05 * i}));
        y.push_back(+1);
        x.push_back(sparse({-2.0 - 0.1 * i, -2.0 + 0.05 * i}));
        y.push_back(-1);
        x.push_back(sparse({-2.5 + 0.1 * i, -1.5 - 0.05 * i}));
        y.push_back(-1);
    }
    GridSearchConfig cfg;
    cfg.k = 4;
    cfg.seed = 11;

    cfg.metric = CvMetric::recall_positive;
    auto recall = cross_validate(x, y, 1.0, cfg);
    CHECK(recall.fold_metrics.size() == 4);
    CHECK(recall.mean == doctest::Approx(1.0));

    cfg.metric = CvMetric::accuracy;
    auto acc = cross_validate(x, y, 1.0, cfg);
    CHECK(acc.fold_metrics.size() == 4);
    CHECK(acc.mean == doctest::Approx(1.0));
}

TEST_CASE("cross_validate drops folds where recall is undefined") {
    // Two positives across four folds: two held-out folds have none.
    std::vector<FeatureVector> x;
    std::vector<int> y;
    for (int i = 0; i < 14; ++i) {
        x.push_back(sparse({-1.0 - 0.1 * i, 0.5}));
        y.push_back(-1);
    }
    x.push_back(sparse({3.0, 3.0}));
    y.push_back(+1);
    x.push_back(sparse({3.5, 2.5}));
    y.push_back(+1);

    GridSearchConfig cfg;
    cfg.k = 4;
    cfg.seed = 2;
    cfg.metric = CvMetric::recall_positive;
    auto r = cross_validate(x, y, 10.0, cfg);
    CHECK(r.fold_metrics.size() == 2);

    cfg.metric = CvMetric::accuracy;
    auto a = cross_validate(x, y, 10.0, cfg);
    CHECK(a.fold_metrics.size() == 4);
}

TEST_CASE("cross_validate is deterministic for a fixed seed") {
    std::vector<FeatureVector> x;
    std::vector<int> y;
    for (int i = 0; i < 10; ++i) {
        x.push_back(sparse({1.0 + 0.3 * i, -0.2 * i}));
        y.push_back(i % 2 == 0 ? 1 : -1);
    }
    GridSearchConfig cfg;
    cfg.k = 5;
    cfg.seed = 9;
    auto a = cross_validate(x, y, 2.0, cfg);
    auto b = cross_validate(x, y, 2.0, cfg);
    CHECK(a.fold_metrics == b.fold_metrics);
    CHECK(a.mean == b.mean);
}

TEST_CASE("grid_search converges to an interior peak to 4 decimals") {
    GridSearchConfig cfg;
    auto unimodal_at = [](double peak) {
        return [peak](double c, int) {
            CvResult r;
            r.mean = 1.0 / (1.0 + std::abs(c - peak));
            return r;
        };
    };

    auto mid = grid_search(cfg, unimodal_at(4.263));
    CHECK(std::abs(mid.best_c - 4.263) <= 1e-4);

    auto low = grid_search(cfg, unimodal_at(0.0137));
    CHECK(std::abs(low.best_c - 0.0137) <= 1e-4);

    auto high = grid_search(cfg, unimodal_at(871.0352));
    CHECK(std::abs(high.best_c - 871.0352) <= 1e-4);
}

TEST_CASE("grid_search stays inside (c_low, c_high]") {
    GridSearchConfig cfg;
    auto at_top = grid_search(cfg, [](double c, int) {
        CvResult r;
        r.mean = c;  // monotone increasing: the boundary wins
        return r;
    });
    CHECK(at_top.best_c == doctest::Approx(cfg.c_high));
    for (const auto& r : at_top.trace) {
        CHECK(r.C > cfg.c_low);
        CHECK(r.C <= cfg.c_high);
    }
}

TEST_CASE("grid_search breaks ties toward the smallest C") {
    GridSearchConfig cfg;
    auto flat = grid_search(cfg, [](double, int) {
        CvResult r;
        r.mean = 0.5;
        return r;
    });
    CHECK(flat.best_c > cfg.c_low);
    CHECK(flat.best_c < 0.002);  // driven down to the bottom of the range
}

TEST_CASE("grid_search trace has increasing stages and unique points") {
    GridSearchConfig cfg;
    auto r = grid_search(cfg, [](double c, int) {
        CvResult out;
        out.mean = 1.0 / (1.0 + std::abs(c - 4.263));
        return out;
    });
    int last_stage = 0;
    std::set<double> cs;
    for (const auto& t : r.trace) {
        CHECK(t.stage >= last_stage);
        last_stage = t.stage;
        CHECK(cs.insert(t.C).second);
    }
}

TEST_CASE("grid_search validates its configuration") {
    GridSearchConfig bad;
    bad.c_low = 0.0;
    auto noop = [](double, int) { return CvResult{}; };
    CHECK_THROWS_AS(grid_search(bad, noop), MalformedInputError);
    bad.c_low = 10.0;
    bad.c_high = 1.0;
    CHECK_THROWS_AS(grid_search(bad, noop), MalformedInputError);
    GridSearchConfig shallow;
    shallow.refinement_decimals = 0;
    CHECK_THROWS_AS(grid_search(shallow, noop), MalformedInputError);
}

TEST_CASE("grid_search_C picks a working C on real data") {
    std::vector<FeatureVector> x;
    std::vector<int> y;
    for (int i = 0; i < 20; ++i) {
        x.push_back(sparse({1.0 + 0.05 * i, 0.8}));
        y.push_back(+1);
        x.push_back(sparse({-1.0 - 0.05 * i, -0.8}));
        y.push_back(-1);
    }
    GridSearchConfig cfg;
    cfg.k = 4;
    cfg.refinement_decimals = 2;  // keep the test quick
    auto r = grid_search_C(x, y, cfg);
    CHECK(r.best_c > cfg.c_low);
    CHECK(r.best_c <= cfg.c_high);
    REQUIRE(!r.trace.empty());
    double best_mean = -1.0;
    for (const auto& t : r.trace) best_mean = std::max(best_mean, t.mean);
    CHECK(best_mean == doctest::Approx(1.0));
}
