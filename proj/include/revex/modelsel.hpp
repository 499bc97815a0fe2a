#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "revex/featurize.hpp"
#include "revex/linsvm.hpp"

namespace revex {

enum class CvMetric { recall_positive, accuracy };

struct GridSearchConfig {
    double c_low = 1e-3;
    double c_high = 1000.0;
    int k = 10;
    CvMetric metric = CvMetric::recall_positive;
    int refinement_decimals = 4;
    std::uint32_t seed = 0;
    // Cross-validation trainings do not need the final model's tight gap.
    double train_tolerance = 1e-4;
    int max_iterations = 10000;
};

struct CvResult {
    double C = 0.0;
    int stage = 0;
    std::vector<double> fold_metrics;
    double mean = 0.0;
};

struct GridSearchResult {
    double best_c = 0.0;
    std::vector<CvResult> trace;
};

// Shuffles 0..n-1 and deals round-robin; fold sizes differ by at most 1.
// Throws TooFewInstancesError when n < k.
std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, int k,
                                                  std::uint32_t seed);

// Stratified variant: positive counts per fold also differ by at most 1.
// When positives < k, some folds get none; a warning goes to stderr.
std::vector<std::vector<std::size_t>> stratified_kfold(
    const std::vector<int>& labels, int k, std::uint32_t seed);

// Trains on each fold complement (balanced weights recomputed on the
// training portion) and scores the held-out fold. Folds with an undefined
// metric (no positives under recall) are dropped from the mean.
CvResult cross_validate(const std::vector<FeatureVector>& vectors,
                        const std::vector<int>& labels, double C,
                        const GridSearchConfig& config);

// Iterative interval-refinement search over (c_low, c_high]. Stage 0 is a
// coarse decade grid; each later stage places 9 points inside the bracket
// around the incumbent best, shrinking until the spacing drops below
// 10^-refinement_decimals. Ties go to the smallest C. The evaluator seam
// lets tests substitute a synthetic metric for real cross-validation.
GridSearchResult grid_search(
    const GridSearchConfig& config,
    const std::function<CvResult(double c, int stage)>& evaluate);

GridSearchResult grid_search_C(const std::vector<FeatureVector>& vectors,
                               const std::vector<int>& labels,
                               const GridSearchConfig& config);

}  // namespace revex
