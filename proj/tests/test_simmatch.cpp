#include <doctest.h>

#include <random>

#include "revex/detail/rng.hpp"
#include "revex/errors.hpp"
#include "revex/simmatch.hpp"

using namespace revex;

namespace {

std::set<std::string> random_terms(std::mt19937& rng, std::size_t max_size) {
    std::set<std::string> s;
    const std::size_t n = detail::bounded(
        rng, static_cast<std::uint32_t>(max_size));
    for (std::size_t i = 0; i < n; ++i) {
        s.insert("t" + std::to_string(detail::bounded(rng, 40)));
    }
    return s;
}

Document doc_from_sentences(const std::vector<std::string>& texts) {
    Document d;
    d.id = "doc";
    for (std::size_t i = 0; i < texts.size(); ++i) {
        d.sentences.push_back(make_sentence("doc", i, texts[i]));
    }
    return d;
}

}  // namespace

TEST_CASE("jac_mod basics") {
    std::set<std::string> abc{"a", "b", "c"};
    CHECK(jac_mod(abc, abc) == doctest::Approx(1.0));
    CHECK(jac_mod(abc, {"x", "y"}) == doctest::Approx(0.0));
    // Hand-computed: 2 shared of 4 query terms.
    std::set<std::string> sx{"men", "women", "postmenopausal", "40"};
    std::set<std::string> sy{"men", "women", "were", "recruited"};
    CHECK(jac_mod(sx, sy) == doctest::Approx(0.5));
}

TEST_CASE("jac_mod is asymmetric by design") {
    std::set<std::string> sx{"a", "b"};
    std::set<std::string> sy{"a", "b", "c", "d"};
    CHECK(jac_mod(sx, sy) == doctest::Approx(1.0));
    CHECK(jac_mod(sy, sx) == doctest::Approx(0.5));
}

TEST_CASE("jac_mod rejects an empty query") {
    CHECK_THROWS_AS(jac_mod({}, {"a"}), EmptyQueryError);
}

TEST_CASE("jac_mod bound, self-similarity and monotonicity properties") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 2000; ++trial) {
        auto sx = random_terms(rng, 12);
        if (sx.empty()) sx.insert("q");
        auto sy = random_terms(rng, 12);
        const double score = jac_mod(sx, sy);
        CHECK(score >= 0.0);
        CHECK(score <= 1.0);
        CHECK(jac_mod(sx, sx) == doctest::Approx(1.0));

        // Adding a query term to sy never decreases the score.
        auto sy_plus = sy;
        sy_plus.insert(*sx.begin());
        CHECK(jac_mod(sx, sy_plus) >= score);

        // Adding a term absent from sx never changes it.
        auto sy_noise = sy;
        sy_noise.insert("definitely_not_in_sx");
        CHECK(jac_mod(sx, sy_noise) == doctest::Approx(score));
    }
}

TEST_CASE("rank_sentences orders by score with document-order ties") {
    Document doc = doc_from_sentences({
        "alpha beta noise noise noise",  // 2/3
        "alpha beta gamma",              // 3/3
        "alpha beta filler filler filler",  // 2/3
    });
    std::set<std::string> query{"alpha", "beta", "gamma"};
    auto ranked = rank_sentences(query, doc);
    REQUIRE(ranked.size() == 3);
    CHECK(ranked[0].sentence_index == 1);
    CHECK(ranked[0].score == doctest::Approx(1.0));
    CHECK(ranked[1].sentence_index == 0);
    CHECK(ranked[2].sentence_index == 2);
}

TEST_CASE("rank_sentences on an empty document") {
    Document doc;
    doc.id = "empty";
    CHECK(rank_sentences({"a"}, doc).empty());
}

TEST_CASE("rank_sentences output is a permutation of the document") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::string> texts;
        const std::size_t n = detail::bounded(rng, 15);
        for (std::size_t i = 0; i < n; ++i) {
            std::string t;
            const std::size_t words = 1 + detail::bounded(rng, 6);
            for (std::size_t w = 0; w < words; ++w) {
                t += "t" + std::to_string(detail::bounded(rng, 20)) + " ";
            }
            texts.push_back(t);
        }
        Document doc = doc_from_sentences(texts);
        auto ranked = rank_sentences({"t1", "t2", "t3"}, doc);
        REQUIRE(ranked.size() == doc.sentences.size());
        std::set<std::size_t> seen;
        for (const auto& r : ranked) seen.insert(r.sentence_index);
        CHECK(seen.size() == doc.sentences.size());
        for (std::size_t i = 1; i < ranked.size(); ++i) {
            CHECK(ranked[i - 1].score >= ranked[i].score - kScoreTieTolerance);
        }
    }
}

TEST_CASE("a verbatim query sentence ranks first with score 1") {
    Document doc = doc_from_sentences({
        "completely unrelated words here",
        "men and postmenopausal women 40 years old",
        "other filler sentence",
    });
    auto query = make_sentence("q", 0, "Men and postmenopausal women 40 years old");
    auto ranked = rank_sentences(query.term_set, doc);
    CHECK(ranked[0].sentence_index == 1);
    CHECK(ranked[0].score == doctest::Approx(1.0));
}
