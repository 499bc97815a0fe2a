#pragma once

#include <map>
#include <string>
#include <vector>

#include "revex/simmatch.hpp"
#include "revex/textcore.hpp"

namespace revex {

// One data-element value extracted from a review record. The value text
// may span several sentences or list items; each acts as an independent
// query against the cited reference.
struct DataElementQuery {
    std::string review_id;
    std::string reference_id;
    std::string element_kind;
    std::vector<Sentence> query_sentences;
};

enum class Label { positive, negative };

struct LabeledInstance {
    Sentence sentence;
    Label label = Label::negative;
    std::string element_kind;
    double source_score = 0.0;  // the Jac_Mod score that produced the label
    std::string review_id;
};

struct TrainingCorpus {
    std::string element_kind;
    double alpha = 0.2;
    double beta = 0.005;
    std::vector<LabeledInstance> positives;
    std::vector<LabeledInstance> negatives;
};

// Sentences whose score is within alpha of the top score, in rank order.
// Returns nothing when ranked is empty or the top score is at or below
// min_match_floor (a reference that lacks the element entirely).
std::vector<std::size_t> select_positives(
    const std::vector<ScoredSentence>& ranked, double alpha,
    double min_match_floor = 0.0);

// Sentences with score <= beta (closed interval), minus the positives.
std::vector<std::size_t> select_negatives(
    const std::vector<ScoredSentence>& ranked, double beta,
    const std::vector<std::size_t>& positives);

// Runs the alpha/beta selection for every query against its reference
// document and merges the per-reference labels into one corpus. A sentence
// is positive if any query sentence selects it; negative if its maximum
// score over all query sentences is <= beta and it is not positive.
// Mid-band sentences are excluded. Instances are ordered by
// (review_id, reference_id, sentence index).
TrainingCorpus build_gold_standard(
    const std::vector<DataElementQuery>& queries,
    const std::map<std::string, Document>& documents, double alpha,
    double beta, double min_match_floor = 0.0);

}  // namespace revex
