#include "revex/corpusgen.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "revex/errors.hpp"

namespace revex {

std::vector<std::size_t> select_positives(
    const std::vector<ScoredSentence>& ranked, double alpha,
    double min_match_floor) {
    std::vector<std::size_t> out;
    if (ranked.empty()) return out;
    const double top = ranked.front().score;
    if (top <= min_match_floor) return out;
    for (const ScoredSentence& s : ranked) {
        if (s.score > min_match_floor && top - s.score <= alpha) {
            out.push_back(s.sentence_index);
        }
    }
    return out;
}

std::vector<std::size_t> select_negatives(
    const std::vector<ScoredSentence>& ranked, double beta,
    const std::vector<std::size_t>& positives) {
    std::set<std::size_t> pos(positives.begin(), positives.end());
    std::vector<std::size_t> out;
    for (const ScoredSentence& s : ranked) {
        if (s.score <= beta && pos.count(s.sentence_index) == 0) {
            out.push_back(s.sentence_index);
        }
    }
    return out;
}

namespace {

struct SentenceVerdict {
    bool positive = false;
    double max_score = 0.0;
    std::string review_id;  // query achieving max_score, first on ties
};

}  // namespace

TrainingCorpus build_gold_standard(
    const std::vector<DataElementQuery>& queries,
    const std::map<std::string, Document>& documents, double alpha,
    double beta, double min_match_floor) {
    // Fail up front on unresolved references, listing every offender.
    std::vector<std::string> missing;
    for (const auto& q : queries) {
        if (documents.find(q.reference_id) == documents.end()) {
            missing.push_back(q.reference_id);
        }
    }
    if (!missing.empty()) {
        std::sort(missing.begin(), missing.end());
        missing.erase(std::unique(missing.begin(), missing.end()),
                      missing.end());
        std::ostringstream msg;
        msg << "missing reference document(s):";
        for (const auto& id : missing) msg << ' ' << id;
        throw MissingDocumentError(msg.str(), missing);
    }

    TrainingCorpus corpus;
    corpus.alpha = alpha;
    corpus.beta = beta;
    if (!queries.empty()) corpus.element_kind = queries.front().element_kind;

    // Deterministic processing order regardless of input order.
    std::vector<const DataElementQuery*> ordered;
    ordered.reserve(queries.size());
    for (const auto& q : queries) ordered.push_back(&q);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const DataElementQuery* a, const DataElementQuery* b) {
                         if (a->review_id != b->review_id)
                             return a->review_id < b->review_id;
                         return a->reference_id < b->reference_id;
                     });

    // (doc_id, index) -> merged verdict across all queries hitting the doc.
    std::map<std::pair<std::string, std::size_t>, SentenceVerdict> verdicts;

    for (const DataElementQuery* q : ordered) {
        const Document& doc = documents.at(q->reference_id);
        if (q->query_sentences.empty()) {
            throw EmptyQueryError("query for reference " + q->reference_id +
                                  " (review " + q->review_id +
                                  ") has no query sentences");
        }
        for (const Sentence& qs : q->query_sentences) {
            if (qs.term_set.empty()) {
                throw EmptyQueryError("query for reference " +
                                      q->reference_id + " (review " +
                                      q->review_id + ") has an empty term set");
            }
            auto ranked = rank_sentences(qs.term_set, doc);
            auto positives = select_positives(ranked, alpha, min_match_floor);
            std::set<std::size_t> pos_set(positives.begin(), positives.end());
            for (const ScoredSentence& s : ranked) {
                auto& v = verdicts[{doc.id, s.sentence_index}];
                if (s.score > v.max_score || v.review_id.empty()) {
                    v.max_score = s.score;
                    v.review_id = q->review_id;
                }
                if (pos_set.count(s.sentence_index)) v.positive = true;
            }
        }
    }

    // Emit instances sorted by (review_id, doc_id, index); the verdict map
    // is keyed by (doc_id, index), so sort explicitly.
    std::vector<std::pair<const std::pair<std::string, std::size_t>*,
                          const SentenceVerdict*>> items;
    items.reserve(verdicts.size());
    for (const auto& [key, v] : verdicts) items.push_back({&key, &v});
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second->review_id != b.second->review_id)
            return a.second->review_id < b.second->review_id;
        return *a.first < *b.first;
    });

    for (const auto& [key, v] : items) {
        const Document& doc = documents.at(key->first);
        LabeledInstance inst;
        inst.sentence = doc.sentences[key->second];
        inst.element_kind = corpus.element_kind;
        inst.source_score = v->max_score;
        inst.review_id = v->review_id;
        if (v->positive) {
            inst.label = Label::positive;
            corpus.positives.push_back(std::move(inst));
        } else if (v->max_score <= beta) {
            inst.label = Label::negative;
            corpus.negatives.push_back(std::move(inst));
        }
        // Mid-band sentences get neither label and stay out of the corpus.
    }
    return corpus;
}

}  // namespace revex
