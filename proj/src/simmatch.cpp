#include "revex/simmatch.hpp"

#include <algorithm>
#include <cmath>

#include "revex/errors.hpp"

namespace revex {

double jac_mod(const std::set<std::string>& query_terms,
               const std::set<std::string>& candidate_terms) {
    if (query_terms.empty()) {
        throw EmptyQueryError("jac_mod: query term set is empty");
    }
    std::size_t common = 0;
    for (const auto& t : query_terms) {
        common += candidate_terms.count(t);
    }
    return static_cast<double>(common) /
           static_cast<double>(query_terms.size());
}

std::vector<ScoredSentence> rank_sentences(
    const std::set<std::string>& query_terms, const Document& doc) {
    if (query_terms.empty()) {
        throw EmptyQueryError("rank_sentences: query term set is empty");
    }
    std::vector<ScoredSentence> ranked;
    ranked.reserve(doc.sentences.size());
    for (const Sentence& s : doc.sentences) {
        ranked.push_back({s.index, jac_mod(query_terms, s.term_set)});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const ScoredSentence& a, const ScoredSentence& b) {
                         if (std::abs(a.score - b.score) <= kScoreTieTolerance)
                             return a.sentence_index < b.sentence_index;
                         return a.score > b.score;
                     });
    return ranked;
}

}  // namespace revex
