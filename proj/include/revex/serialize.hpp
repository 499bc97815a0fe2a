#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "revex/corpusgen.hpp"
#include "revex/evalkit.hpp"
#include "revex/linsvm.hpp"
#include "revex/modelsel.hpp"

namespace revex {

// All writers emit a fixed field order and 17-significant-digit floats so
// that identical inputs give byte-identical files.

std::string fmt_double(double v);
std::string json_escape(const std::string& s);

// Writes via a temp file in the same directory, then renames.
void atomic_write_file(const std::string& path, const std::string& content);

struct CorpusFile {
    TrainingCorpus corpus;
    std::uint32_t seed = 0;
};

std::string corpus_to_json(const TrainingCorpus& corpus, std::uint32_t seed);
CorpusFile read_corpus_json(const std::string& path);

std::string model_to_json(const LinearModel& model);
LinearModel read_model_json(const std::string& path);

// One review-record row: a data-element value and the reference it cites.
struct ReviewRecord {
    std::string review_id;
    std::string reference_id;
    std::string element_kind;
    std::string value_text;
};

std::vector<ReviewRecord> read_reviews_json(const std::string& path);
std::string reviews_to_json(const std::vector<ReviewRecord>& records,
                            std::uint32_t seed);

// Extraction output: article id -> positives with margins and text.
struct PredictionEntry {
    std::size_t sentence_index = 0;
    double margin = 0.0;
    std::string text;
};
using Predictions = std::map<std::string, std::vector<PredictionEntry>>;

std::string predictions_to_json(const Predictions& predictions,
                                const std::string& element_kind,
                                std::uint32_t seed);
Predictions read_predictions_json(const std::string& path);

using GoldLabels = std::map<std::string, std::set<std::size_t>>;

std::string gold_to_json(const GoldLabels& gold);
GoldLabels read_gold_json(const std::string& path);

std::string report_to_json(const std::vector<ArticleResult>& articles,
                           const AggregateReport& aggregate);
// Aligned plain-text table with two-decimal display rounding.
std::string report_to_table(const std::vector<ArticleResult>& articles,
                            const AggregateReport& aggregate);

std::string trace_to_jsonl(const std::vector<CvResult>& trace);

}  // namespace revex
