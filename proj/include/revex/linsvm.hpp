#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "revex/featurize.hpp"
#include "revex/textcore.hpp"

namespace revex {

struct ClassWeights {
    double positive = 1.0;
    double negative = 1.0;
};

enum class WeightMode { balanced, uniform };

// balanced: w_c = N / (2 * N_c); uniform: both 1.
// Throws SingleClassError when either count is zero.
ClassWeights class_weights(std::size_t n_pos, std::size_t n_neg,
                           WeightMode mode);

struct TrainOptions {
    double C = 1.0;
    ClassWeights weights;
    double tolerance = 1e-6;  // KKT violation threshold on the dual
    int max_iterations = 10000;  // cap on solver epochs
    std::uint32_t seed = 0;
    bool fit_bias = true;
    bool record_trace = false;
};

struct TrainReport {
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    // Incumbent objective after each outer step; nonincreasing.
    std::vector<double> trace;
};

// Weight vector and bias of the separating hyperplane.
struct SvmSolution {
    std::vector<double> weights;
    double bias = 0.0;
};

// Minimizes 0.5*||w||^2 + C * sum_i cw(y_i) * max(0, 1 - y_i(w.x_i + b))
// with an unregularized bias. The solver works on the dual with the
// equality constraint sum(alpha_i y_i) = 0 that the free bias induces,
// taking pairwise steps that preserve the constraint: a shuffled sweep of
// random pairs per epoch plus maximal-violating-pair steps, maintaining
// the sparse weight vector throughout. The bias is recovered by exact 1-D
// minimization of the hinge sum. labels are +1/-1; deterministic for a
// given seed.
std::pair<SvmSolution, TrainReport> train_svm(
    const std::vector<FeatureVector>& vectors, const std::vector<int>& labels,
    std::size_t n_features, const TrainOptions& options);

// Primal objective at (w, b); shared by solver, reports and tests.
double svm_objective(const std::vector<FeatureVector>& vectors,
                     const std::vector<int>& labels,
                     const std::vector<double>& w, double bias, double C,
                     const ClassWeights& cw);

// A trained model bundled with everything needed to score raw sentences.
struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    double C = 1.0;
    ClassWeights class_weights;
    FeatureSpace feature_space;
    std::string element_kind;
    bool binary_features = false;
    std::uint32_t seed = 0;
    bool converged = true;
};

double decision_value(const LinearModel& model, const FeatureVector& v);

// (label, margin); positive iff margin > 0 (a margin of exactly 0 is
// negative). Margin for an out-of-vocabulary sentence is the bias.
std::pair<Label, double> predict(const LinearModel& model,
                                 const Sentence& sentence);

}  // namespace revex
