#include "revex/linsvm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "revex/detail/rng.hpp"
#include "revex/errors.hpp"

namespace revex {

ClassWeights class_weights(std::size_t n_pos, std::size_t n_neg,
                           WeightMode mode) {
    if (n_pos == 0 || n_neg == 0) {
        throw SingleClassError("class_weights: both classes must be present");
    }
    if (mode == WeightMode::uniform) return {1.0, 1.0};
    const double n = static_cast<double>(n_pos + n_neg);
    return {n / (2.0 * static_cast<double>(n_pos)),
            n / (2.0 * static_cast<double>(n_neg))};
}

namespace {

double sparse_dot(const std::vector<double>& w, const FeatureVector& v) {
    double s = 0.0;
    for (const auto& [col, val] : v.entries) s += w[col] * val;
    return s;
}

void axpy(std::vector<double>& w, double a, const FeatureVector& v) {
    for (const auto& [col, val] : v.entries) w[col] += a * val;
}

// Dot product of two sorted sparse vectors by two-pointer merge.
double sparse_cross_dot(const FeatureVector& a, const FeatureVector& b) {
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.entries.size() && j < b.entries.size()) {
        if (a.entries[i].first < b.entries[j].first) ++i;
        else if (a.entries[i].first > b.entries[j].first) ++j;
        else s += a.entries[i++].second * b.entries[j++].second;
    }
    return s;
}

// Exact minimizer over b of sum_i Cc_i * max(0, 1 - y_i(f_i + b)) given
// fixed per-instance scores f_i = w.x_i. The function is convex piecewise
// linear with breakpoints y_i - f_i; scan them in order until the
// subderivative turns nonnegative.
double minimize_bias(const std::vector<double>& scores,
                     const std::vector<int>& labels,
                     const std::vector<double>& loss_weight) {
    const std::size_t n = scores.size();
    std::vector<std::pair<double, std::size_t>> bp(n);
    double slope = 0.0;  // derivative left of every breakpoint
    for (std::size_t i = 0; i < n; ++i) {
        bp[i] = {static_cast<double>(labels[i]) - scores[i], i};
        if (labels[i] > 0) slope -= loss_weight[i];
    }
    std::sort(bp.begin(), bp.end());
    for (const auto& [b, i] : bp) {
        if (slope >= 0.0) return b;
        slope += loss_weight[i];  // crossing breakpoint i flips its term
        if (slope >= 0.0) return b;
    }
    return bp.empty() ? 0.0 : bp.back().first;
}

struct DualState {
    std::vector<double> alpha;
    std::vector<double> w;
    int epochs = 0;
    bool last_reached_eps = false;
};

// Dual coordinate descent at fixed bias; resumes from the current state.
// Returns sum(alpha_i * y_i), the subgradient of the bias line search.
double solve_fixed_bias(const std::vector<FeatureVector>& x,
                        const std::vector<int>& y,
                        const std::vector<double>& upper,
                        const std::vector<double>& qdiag, double bias,
                        double eps_pg, int max_epochs, std::mt19937& rng,
                        DualState& st) {
    const std::size_t n = x.size();
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    st.last_reached_eps = false;
    for (int epoch = 0; epoch < max_epochs; ++epoch) {
        detail::shuffle(order, rng);
        double max_pg = 0.0;
        for (std::uint32_t i : order) {
            const double yi = static_cast<double>(y[i]);
            const double g = yi * (sparse_dot(st.w, x[i]) + bias) - 1.0;
            double pg = g;
            if (st.alpha[i] <= 0.0) pg = std::min(g, 0.0);
            else if (st.alpha[i] >= upper[i]) pg = std::max(g, 0.0);
            max_pg = std::max(max_pg, std::abs(pg));
            if (pg == 0.0) continue;
            double a_new;
            if (qdiag[i] > 0.0) {
                a_new = std::clamp(st.alpha[i] - g / qdiag[i], 0.0, upper[i]);
            } else {
                a_new = g < 0.0 ? upper[i] : 0.0;
            }
            if (a_new != st.alpha[i]) {
                axpy(st.w, (a_new - st.alpha[i]) * yi, x[i]);
                st.alpha[i] = a_new;
            }
        }
        ++st.epochs;
        if (max_pg < eps_pg) {
            st.last_reached_eps = true;
            break;
        }
    }
    double balance = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        balance += st.alpha[i] * static_cast<double>(y[i]);
    }
    return balance;
}

}  // namespace

double svm_objective(const std::vector<FeatureVector>& vectors,
                     const std::vector<int>& labels,
                     const std::vector<double>& w, double bias, double C,
                     const ClassWeights& cw) {
    double obj = 0.0;
    for (double v : w) obj += v * v;
    obj *= 0.5;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const double yi = static_cast<double>(labels[i]);
        const double margin = 1.0 - yi * (sparse_dot(w, vectors[i]) + bias);
        if (margin > 0.0) {
            obj += C * (labels[i] > 0 ? cw.positive : cw.negative) * margin;
        }
    }
    return obj;
}

std::pair<SvmSolution, TrainReport> train_svm(
    const std::vector<FeatureVector>& vectors, const std::vector<int>& labels,
    std::size_t n_features, const TrainOptions& options) {
    const std::size_t n = vectors.size();
    if (n != labels.size()) {
        throw MalformedInputError("train_svm: vectors/labels size mismatch");
    }
    std::size_t n_pos = 0, n_neg = 0;
    for (int y : labels) (y > 0 ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0) {
        throw SingleClassError("train_svm: need at least one example of each class");
    }
    if (options.C <= 0.0 || options.weights.positive <= 0.0 ||
        options.weights.negative <= 0.0) {
        throw MalformedInputError("train_svm: C and class weights must be > 0");
    }

    std::vector<double> upper(n), qdiag(n), loss_weight(n);
    for (std::size_t i = 0; i < n; ++i) {
        loss_weight[i] = options.C * (labels[i] > 0 ? options.weights.positive
                                                    : options.weights.negative);
        upper[i] = loss_weight[i];
        double q = 0.0;
        for (const auto& [col, val] : vectors[i].entries) {
            (void)col;
            q += val * val;
        }
        qdiag[i] = q;
    }

    std::mt19937 rng(options.seed);
    const int max_epochs = options.max_iterations;

    TrainReport report;
    SvmSolution best;
    double best_obj = std::numeric_limits<double>::infinity();

    bool converged = false;
    if (!options.fit_bias) {
        const double eps_pg = std::max(options.tolerance * 1e-3, 1e-12);
        DualState st;
        st.alpha.assign(n, 0.0);
        st.w.assign(n_features, 0.0);
        solve_fixed_bias(vectors, labels, upper, qdiag, 0.0, eps_pg,
                         max_epochs, rng, st);
        best.weights = st.w;
        best.bias = 0.0;
        best_obj = svm_objective(vectors, labels, st.w, 0.0, options.C,
                                 options.weights);
        if (options.record_trace) report.trace.push_back(best_obj);
        report.iterations = st.epochs;
        converged = st.last_reached_eps;
    } else {
        // The free bias induces the equality constraint sum(alpha_i y_i)=0
        // on the dual, so all moves are over pairs along the direction
        // alpha_i += y_i*t, alpha_j -= y_j*t, which keeps the constraint
        // and changes w by t*(x_i - x_j).
        std::vector<double> alpha(n, 0.0), w(n_features, 0.0);
        const double eps_stop = std::max(options.tolerance, 1e-12);

        auto pair_step = [&](std::size_t i, std::size_t j) {
            if (i == j) return;
            const double yi = static_cast<double>(labels[i]);
            const double yj = static_cast<double>(labels[j]);
            const double gi = yi * sparse_dot(w, vectors[i]) - 1.0;
            const double gj = yj * sparse_dot(w, vectors[j]) - 1.0;
            const double deriv = yi * gi - yj * gj;
            double t_lo, t_hi;
            if (yi > 0) {
                t_lo = -alpha[i];
                t_hi = upper[i] - alpha[i];
            } else {
                t_lo = alpha[i] - upper[i];
                t_hi = alpha[i];
            }
            if (yj > 0) {
                t_lo = std::max(t_lo, alpha[j] - upper[j]);
                t_hi = std::min(t_hi, alpha[j]);
            } else {
                t_lo = std::max(t_lo, -alpha[j]);
                t_hi = std::min(t_hi, upper[j] - alpha[j]);
            }
            // Curvature along the pair direction is |x_i - x_j|^2.
            const double a =
                qdiag[i] + qdiag[j] - 2.0 * sparse_cross_dot(vectors[i], vectors[j]);
            double t;
            if (a > 1e-14) {
                t = std::clamp(-deriv / a, t_lo, t_hi);
            } else {
                t = deriv < 0.0 ? t_hi : (deriv > 0.0 ? t_lo : 0.0);
            }
            if (t == 0.0) return;
            alpha[i] += yi * t;
            alpha[j] -= yj * t;
            axpy(w, t, vectors[i]);
            axpy(w, -t, vectors[j]);
        };

        // One maximal-violating-pair step; returns the KKT violation
        // before the step (0 when a feasible direction no longer exists).
        auto mvp_step = [&]() {
            double up_best = -std::numeric_limits<double>::infinity();
            double low_best = std::numeric_limits<double>::infinity();
            std::size_t i_up = n, i_low = n;
            for (std::size_t t = 0; t < n; ++t) {
                const double yt = static_cast<double>(labels[t]);
                const double g = yt * sparse_dot(w, vectors[t]) - 1.0;
                const double v = -yt * g;
                const bool in_up = (yt > 0 && alpha[t] < upper[t]) ||
                                   (yt < 0 && alpha[t] > 0.0);
                const bool in_low = (yt > 0 && alpha[t] > 0.0) ||
                                    (yt < 0 && alpha[t] < upper[t]);
                if (in_up && v > up_best) {
                    up_best = v;
                    i_up = t;
                }
                if (in_low && v < low_best) {
                    low_best = v;
                    i_low = t;
                }
            }
            if (i_up == n || i_low == n) return 0.0;
            const double violation = up_best - low_best;
            if (violation > eps_stop) pair_step(i_up, i_low);
            return violation;
        };

        auto consider = [&]() {
            std::vector<double> scores(n);
            for (std::size_t i = 0; i < n; ++i) {
                scores[i] = sparse_dot(w, vectors[i]);
            }
            const double b = minimize_bias(scores, labels, loss_weight);
            const double obj = svm_objective(vectors, labels, w, b, options.C,
                                             options.weights);
            if (obj < best_obj) {
                best_obj = obj;
                best.weights = w;
                best.bias = b;
            }
            if (options.record_trace) report.trace.push_back(best_obj);
        };

        std::vector<std::uint32_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        for (int epoch = 0; epoch < max_epochs; ++epoch) {
            detail::shuffle(order, rng);
            for (std::size_t k = 0; k + 1 < n; k += 2) {
                pair_step(order[k], order[k + 1]);
            }
            if (n % 2 == 1 && n > 1) pair_step(order[n - 1], order[0]);
            double violation = 0.0;
            for (int r = 0; r < 10; ++r) {
                violation = mvp_step();
                if (violation <= eps_stop) break;
            }
            ++report.iterations;
            consider();
            if (violation <= eps_stop) {
                converged = true;
                break;
            }
        }
    }

    report.objective = best_obj;
    report.converged = converged;
    return {std::move(best), std::move(report)};
}

double decision_value(const LinearModel& model, const FeatureVector& v) {
    return sparse_dot(model.weights, v) + model.bias;
}

std::pair<Label, double> predict(const LinearModel& model,
                                 const Sentence& sentence) {
    FeatureVector v =
        vectorize(sentence.tokens, model.feature_space, model.binary_features);
    const double margin = decision_value(model, v);
    return {margin > 0.0 ? Label::positive : Label::negative, margin};
}

}  // namespace revex
