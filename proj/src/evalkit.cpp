#include "revex/evalkit.hpp"

#include <algorithm>

#include "revex/errors.hpp"

namespace revex {

ArticleResult score_article(const std::set<std::size_t>& predicted,
                            const std::set<std::size_t>& gold,
                            const std::string& article_id) {
    ArticleResult r;
    r.article_id = article_id;
    for (std::size_t idx : predicted) {
        if (gold.count(idx)) ++r.true_positive;
        else ++r.false_positive;
    }
    for (std::size_t idx : gold) {
        if (!predicted.count(idx)) ++r.false_negative;
    }
    if (r.true_positive + r.false_negative > 0) {
        r.recall = static_cast<double>(r.true_positive) /
                   static_cast<double>(r.true_positive + r.false_negative);
    }
    if (r.true_positive + r.false_positive > 0) {
        r.precision = static_cast<double>(r.true_positive) /
                      static_cast<double>(r.true_positive + r.false_positive);
    }
    return r;
}

AggregateReport aggregate(const std::vector<ArticleResult>& results) {
    if (results.empty()) {
        throw MalformedInputError("aggregate: no article results");
    }
    AggregateReport agg;
    agg.n_articles = results.size();
    double recall_sum = 0.0, precision_sum = 0.0;
    std::size_t recall_n = 0, precision_n = 0;
    std::size_t tp = 0, fp = 0, fn = 0;
    for (const auto& r : results) {
        if (r.recall) {
            recall_sum += *r.recall;
            ++recall_n;
        }
        if (r.precision) {
            precision_sum += *r.precision;
            ++precision_n;
        }
        tp += r.true_positive;
        fp += r.false_positive;
        fn += r.false_negative;
    }
    if (recall_n > 0) agg.macro_recall = recall_sum / static_cast<double>(recall_n);
    if (precision_n > 0)
        agg.macro_precision = precision_sum / static_cast<double>(precision_n);
    if (tp + fn > 0)
        agg.micro_recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    if (tp + fp > 0)
        agg.micro_precision =
            static_cast<double>(tp) / static_cast<double>(tp + fp);
    if (agg.macro_precision > 0.0) agg.reading_burden = 1.0 / agg.macro_precision;
    return agg;
}

std::vector<Extraction> extract_sentences(const LinearModel& model,
                                          const Document& article) {
    std::vector<Extraction> out;
    for (const Sentence& s : article.sentences) {
        auto [label, margin] = predict(model, s);
        if (label == Label::positive) out.push_back({s.index, margin});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Extraction& a, const Extraction& b) {
                         if (a.margin != b.margin) return a.margin > b.margin;
                         return a.sentence_index < b.sentence_index;
                     });
    return out;
}

}  // namespace revex
