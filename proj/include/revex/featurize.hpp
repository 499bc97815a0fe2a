#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "revex/corpusgen.hpp"
#include "revex/textcore.hpp"

namespace revex {

// Vocabulary of unigrams, bigrams and trigrams (tokens joined by one
// space), with column indices assigned by lexicographic order of the
// n-gram string so that model files are reproducible.
struct FeatureSpace {
    std::vector<std::string> ngrams;  // sorted; position == column index
    std::unordered_map<std::string, std::uint32_t> index;

    std::size_t n_features() const { return ngrams.size(); }
};

FeatureSpace make_feature_space(std::vector<std::string> sorted_ngrams);

// Sparse count vector; entries strictly increasing by column index.
struct FeatureVector {
    std::vector<std::pair<std::uint32_t, double>> entries;
};

// Enumerates the 1/2/3-grams of a token sequence (no boundary padding).
std::vector<std::string> extract_ngrams(const std::vector<std::string>& tokens);

// Collects the distinct n-grams over all corpus instances.
// Throws EmptyCorpusError when the corpus has no instances.
FeatureSpace fit_feature_space(const TrainingCorpus& corpus);

// Counts in-vocabulary n-gram occurrences; out-of-vocabulary n-grams are
// ignored. With binary=true every present feature gets value 1.
FeatureVector vectorize(const std::vector<std::string>& tokens,
                        const FeatureSpace& space, bool binary = false);

}  // namespace revex
