#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "revex/linsvm.hpp"
#include "revex/textcore.hpp"

namespace revex {

// Per-article counts and rates. A zero denominator leaves the rate
// unset rather than coercing it to 0 or 1.
struct ArticleResult {
    std::string article_id;
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t false_negative = 0;
    std::optional<double> recall;
    std::optional<double> precision;
};

struct AggregateReport {
    double macro_recall = 0.0;     // mean over articles with defined recall
    double macro_precision = 0.0;  // mean over articles with defined precision
    double micro_recall = 0.0;     // from summed counts
    double micro_precision = 0.0;
    std::size_t n_articles = 0;
    double reading_burden = 0.0;  // 1 / macro_precision
};

ArticleResult score_article(const std::set<std::size_t>& predicted,
                            const std::set<std::size_t>& gold,
                            const std::string& article_id);

// Throws MalformedInputError on an empty list.
AggregateReport aggregate(const std::vector<ArticleResult>& results);

// A predicted-positive sentence with its margin.
struct Extraction {
    std::size_t sentence_index = 0;
    double margin = 0.0;
};

// Classifies every sentence and returns the positives, margin descending
// (ties by ascending index).
std::vector<Extraction> extract_sentences(const LinearModel& model,
                                          const Document& article);

}  // namespace revex
