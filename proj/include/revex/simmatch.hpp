#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "revex/textcore.hpp"

namespace revex {

// A document sentence with its similarity score against one query.
struct ScoredSentence {
    std::size_t sentence_index = 0;
    double score = 0.0;  // in [0, 1]
};

// Scores within this tolerance count as tied when ranking.
inline constexpr double kScoreTieTolerance = 1e-12;

// Asymmetric Jaccard: |sx ∩ sy| / |sx|. The denominator is the query
// side only, so jac_mod(sx, sy) != jac_mod(sy, sx) in general.
// Throws EmptyQueryError when sx is empty.
double jac_mod(const std::set<std::string>& query_terms,
               const std::set<std::string>& candidate_terms);

// Scores every sentence of doc against the query term set and sorts by
// score descending; ties keep document order (ascending index).
std::vector<ScoredSentence> rank_sentences(
    const std::set<std::string>& query_terms, const Document& doc);

}  // namespace revex
