#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "revex/serialize.hpp"

namespace revex {

// Knobs for the synthetic review/reference generator used by the
// end-to-end tests. The real source corpus is not redistributable, so the
// pipeline is exercised on seeded synthetic articles instead.
struct SynthSpec {
    std::size_t n_reviews = 30;
    std::size_t refs_per_review = 3;
    std::size_t sentences_per_article = 60;
    std::size_t vocabulary_size = 500;  // background vocabulary
    std::size_t query_terms = 8;
    // Fraction of query terms replaced by background terms in the
    // planted sentence; must stay below 1 so some overlap remains.
    double paraphrase_noise = 0.3;
    std::size_t n_test_articles = 20;
    std::string element_kind = "inclusion_criteria";
    std::uint32_t seed = 0;
};

struct SynthOutput {
    std::vector<ReviewRecord> reviews;
    // reference_id -> article text, one file per article downstream.
    std::map<std::string, std::string> train_articles;
    std::map<std::string, std::string> test_articles;
    GoldLabels test_gold;  // planted sentence index per test article
};

SynthOutput generate_synthetic(const SynthSpec& spec);

}  // namespace revex
