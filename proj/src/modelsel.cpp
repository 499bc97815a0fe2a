#include "revex/modelsel.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "revex/detail/rng.hpp"
#include "revex/errors.hpp"

namespace revex {

namespace {

std::vector<std::vector<std::size_t>> deal(
    const std::vector<std::size_t>& first,
    const std::vector<std::size_t>& second, int k) {
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    std::size_t cursor = 0;
    for (std::size_t idx : first) {
        folds[cursor % folds.size()].push_back(idx);
        ++cursor;
    }
    for (std::size_t idx : second) {
        folds[cursor % folds.size()].push_back(idx);
        ++cursor;
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

}  // namespace

std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, int k,
                                                  std::uint32_t seed) {
    if (k < 2) throw MalformedInputError("kfold_split: k must be >= 2");
    if (n < static_cast<std::size_t>(k)) {
        throw TooFewInstancesError("kfold_split: fewer instances than folds");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937 rng(seed);
    detail::shuffle(order, rng);
    return deal(order, {}, k);
}

std::vector<std::vector<std::size_t>> stratified_kfold(
    const std::vector<int>& labels, int k, std::uint32_t seed) {
    if (k < 2) throw MalformedInputError("stratified_kfold: k must be >= 2");
    if (labels.size() < static_cast<std::size_t>(k)) {
        throw TooFewInstancesError(
            "stratified_kfold: fewer instances than folds");
    }
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        (labels[i] > 0 ? pos : neg).push_back(i);
    }
    if (pos.size() < static_cast<std::size_t>(k)) {
        std::cerr << "warning: only " << pos.size() << " positive instances "
                  << "for " << k << " folds; some folds get none\n";
    }
    std::mt19937 rng(seed);
    detail::shuffle(pos, rng);
    detail::shuffle(neg, rng);
    return deal(pos, neg, k);
}

CvResult cross_validate(const std::vector<FeatureVector>& vectors,
                        const std::vector<int>& labels, double C,
                        const GridSearchConfig& config) {
    auto folds = stratified_kfold(labels, config.k, config.seed);
    CvResult result;
    result.C = C;
    for (const auto& fold : folds) {
        std::vector<char> held(labels.size(), 0);
        for (std::size_t idx : fold) held[idx] = 1;

        std::vector<FeatureVector> train_x;
        std::vector<int> train_y;
        std::size_t n_pos = 0, n_neg = 0;
        std::size_t n_features = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (held[i]) continue;
            train_x.push_back(vectors[i]);
            train_y.push_back(labels[i]);
            (labels[i] > 0 ? n_pos : n_neg)++;
        }
        for (const auto& v : vectors) {
            for (const auto& [col, val] : v.entries) {
                (void)val;
                n_features = std::max<std::size_t>(n_features, col + 1);
            }
        }
        TrainOptions opts;
        opts.C = C;
        opts.weights = class_weights(n_pos, n_neg, WeightMode::balanced);
        opts.tolerance = config.train_tolerance;
        opts.max_iterations = config.max_iterations;
        opts.seed = config.seed;
        auto [solution, report] = train_svm(train_x, train_y, n_features, opts);
        (void)report;

        std::size_t tp = 0, fn = 0, correct = 0;
        for (std::size_t idx : fold) {
            double margin = 0.0;
            for (const auto& [col, val] : vectors[idx].entries) {
                margin += solution.weights[col] * val;
            }
            margin += solution.bias;
            const bool predicted_pos = margin > 0.0;
            const bool is_pos = labels[idx] > 0;
            if (is_pos && predicted_pos) ++tp;
            if (is_pos && !predicted_pos) ++fn;
            if (predicted_pos == is_pos) ++correct;
        }
        if (config.metric == CvMetric::recall_positive) {
            if (tp + fn == 0) continue;  // undefined for this fold
            result.fold_metrics.push_back(static_cast<double>(tp) /
                                          static_cast<double>(tp + fn));
        } else {
            result.fold_metrics.push_back(static_cast<double>(correct) /
                                          static_cast<double>(fold.size()));
        }
    }
    if (result.fold_metrics.empty()) {
        throw TooFewInstancesError(
            "cross_validate: metric undefined on every fold");
    }
    result.mean =
        std::accumulate(result.fold_metrics.begin(), result.fold_metrics.end(),
                        0.0) /
        static_cast<double>(result.fold_metrics.size());
    return result;
}

GridSearchResult grid_search(
    const GridSearchConfig& config,
    const std::function<CvResult(double c, int stage)>& evaluate) {
    if (!(config.c_low > 0.0) || !(config.c_low < config.c_high)) {
        throw MalformedInputError("grid_search: need 0 < c_low < c_high");
    }
    if (config.refinement_decimals < 1) {
        throw MalformedInputError("grid_search: refinement_decimals >= 1");
    }

    GridSearchResult result;
    double best_c = 0.0;
    double best_mean = -1.0;
    std::vector<double> evaluated;

    auto run_point = [&](double c, int stage) {
        for (double e : evaluated) {
            if (std::abs(e - c) <= 1e-15 * std::max(1.0, std::abs(c))) return;
        }
        CvResult r = evaluate(c, stage);
        r.C = c;
        r.stage = stage;
        evaluated.push_back(c);
        if (r.mean > best_mean || (r.mean == best_mean && c < best_c)) {
            best_mean = r.mean;
            best_c = c;
        }
        result.trace.push_back(std::move(r));
    };

    // Stage 0: decade points inside (c_low, c_high], plus c_high itself.
    std::vector<double> coarse;
    for (int e = -3; e <= 3; ++e) {
        double c = std::pow(10.0, e);
        if (c > config.c_low && c <= config.c_high) coarse.push_back(c);
    }
    coarse.push_back(config.c_high);
    std::sort(coarse.begin(), coarse.end());
    coarse.erase(std::unique(coarse.begin(), coarse.end()), coarse.end());
    for (double c : coarse) run_point(c, 0);

    // Refinement: bracket the incumbent between its nearest evaluated
    // neighbours in the current grid and place 9 points inside.
    const double step_floor = std::pow(10.0, -config.refinement_decimals);
    std::vector<double> stage_grid = coarse;
    int stage = 1;
    const int max_stages = 64;  // hard stop; spacing shrinks >= 5x per stage
    while (stage <= max_stages) {
        double lo = best_c / 10.0;
        double hi = std::min(best_c * 10.0, config.c_high);
        for (double c : stage_grid) {
            if (c < best_c && c > lo) lo = c;
            if (c > best_c && c < hi) hi = c;
        }
        const double spacing = (hi - lo) / 10.0;
        if (!(spacing > 0.0)) break;
        std::vector<double> points;
        for (int j = 1; j <= 9; ++j) {
            double c = lo + spacing * j;
            if (c > 0.0 && c <= config.c_high) points.push_back(c);
        }
        for (double c : points) run_point(c, stage);
        stage_grid = points;
        stage_grid.push_back(best_c);
        stage_grid.push_back(lo);
        stage_grid.push_back(hi);
        ++stage;
        if (spacing < step_floor) break;
    }

    result.best_c = best_c;
    return result;
}

GridSearchResult grid_search_C(const std::vector<FeatureVector>& vectors,
                               const std::vector<int>& labels,
                               const GridSearchConfig& config) {
    return grid_search(config, [&](double c, int stage) {
        CvResult r = cross_validate(vectors, labels, c, config);
        r.stage = stage;
        return r;
    });
}

}  // namespace revex
