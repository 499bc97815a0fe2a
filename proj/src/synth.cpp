#include "revex/synth.hpp"

#include <set>

#include "revex/detail/rng.hpp"
#include "revex/errors.hpp"

namespace revex {

namespace {

// Criteria-flavoured pool; planted sentences draw from here so that a
// classifier has lexical signal, the way real eligibility sentences do.
const std::vector<std::string> kCriteriaTerms = {
    "patients",   "eligible",   "criteria",  "inclusion", "aged",
    "years",      "older",      "enrolled",  "consent",   "diagnosed",
    "adults",     "heart",      "failure",   "chronic",   "randomized",
    "study",      "male",       "female",    "disease",   "severe",
    "screening",  "history",    "clinical",  "baseline",  "treatment",
    "therapy",    "stable",     "written",   "informed",  "ejection",
};

std::string background_term(std::size_t i) { return "w" + std::to_string(i); }

std::string capitalize(std::string s) {
    if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') {
        s[0] = static_cast<char>(s[0] - 'a' + 'A');
    }
    return s;
}

std::string sentence_text(const std::vector<std::string>& terms) {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i) out += ' ';
        out += i == 0 ? capitalize(terms[i]) : terms[i];
    }
    out += '.';
    return out;
}

std::vector<std::string> sample_distinct(const std::vector<std::string>& pool,
                                         std::size_t count,
                                         std::mt19937& rng) {
    std::vector<std::string> shuffled = pool;
    detail::shuffle(shuffled, rng);
    shuffled.resize(std::min(count, shuffled.size()));
    return shuffled;
}

std::string zero_pad(std::size_t v, int width) {
    std::string s = std::to_string(v);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

}  // namespace

SynthOutput generate_synthetic(const SynthSpec& spec) {
    if (spec.paraphrase_noise < 0.0 || spec.paraphrase_noise >= 1.0) {
        throw MalformedInputError(
            "synth: paraphrase_noise must be in [0, 1)");
    }
    if (spec.vocabulary_size == 0 || spec.query_terms == 0 ||
        spec.sentences_per_article == 0) {
        throw MalformedInputError("synth: counts must be positive");
    }
    if (spec.query_terms > kCriteriaTerms.size()) {
        throw MalformedInputError("synth: query_terms too large (max " +
                                  std::to_string(kCriteriaTerms.size()) + ")");
    }

    std::mt19937 rng(spec.seed);
    SynthOutput out;

    auto random_background = [&]() {
        return background_term(
            detail::bounded(rng, static_cast<std::uint32_t>(spec.vocabulary_size)));
    };
    auto background_sentence = [&]() {
        std::vector<std::string> terms(spec.query_terms);
        for (auto& t : terms) t = random_background();
        return sentence_text(terms);
    };
    auto plant = [&](const std::vector<std::string>& query) {
        std::vector<std::string> terms = query;
        const std::size_t replace = static_cast<std::size_t>(
            spec.paraphrase_noise * static_cast<double>(terms.size()));
        std::vector<std::size_t> slots(terms.size());
        for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = i;
        detail::shuffle(slots, rng);
        for (std::size_t i = 0; i < replace; ++i) {
            terms[slots[i]] = random_background();
        }
        return sentence_text(terms);
    };
    auto make_article = [&](const std::vector<std::string>& query,
                            std::size_t& planted_index) {
        planted_index =
            detail::bounded(rng, static_cast<std::uint32_t>(
                                     spec.sentences_per_article));
        std::string text;
        for (std::size_t s = 0; s < spec.sentences_per_article; ++s) {
            if (s) text += ' ';
            text += s == planted_index ? plant(query) : background_sentence();
        }
        text += '\n';
        return text;
    };

    for (std::size_t r = 0; r < spec.n_reviews; ++r) {
        const std::string review_id = "review" + zero_pad(r, 3);
        auto query = sample_distinct(kCriteriaTerms, spec.query_terms, rng);
        const std::string value_text = sentence_text(query);
        for (std::size_t j = 0; j < spec.refs_per_review; ++j) {
            const std::string ref_id =
                "ref" + zero_pad(r, 3) + "_" + zero_pad(j, 2);
            ReviewRecord rec;
            rec.review_id = review_id;
            rec.reference_id = ref_id;
            rec.element_kind = spec.element_kind;
            rec.value_text = value_text;
            out.reviews.push_back(std::move(rec));
            std::size_t planted = 0;
            out.train_articles[ref_id] = make_article(query, planted);
        }
    }

    for (std::size_t t = 0; t < spec.n_test_articles; ++t) {
        const std::string id = "test" + zero_pad(t, 3);
        auto query = sample_distinct(kCriteriaTerms, spec.query_terms, rng);
        std::size_t planted = 0;
        out.test_articles[id] = make_article(query, planted);
        out.test_gold[id] = {planted};
    }
    return out;
}

}  // namespace revex
