#include <doctest.h>

#include <random>

#include "revex/corpusgen.hpp"
#include "revex/detail/rng.hpp"
#include "revex/errors.hpp"

using namespace revex;

namespace {

std::vector<ScoredSentence> scored(std::vector<double> scores) {
    std::vector<ScoredSentence> out;
    for (std::size_t i = 0; i < scores.size(); ++i) out.push_back({i, scores[i]});
    std::stable_sort(out.begin(), out.end(),
                     [](const ScoredSentence& a, const ScoredSentence& b) {
                         return a.score > b.score;
                     });
    return out;
}

}  // namespace

TEST_CASE("select_positives keeps the alpha band below the top score") {
    auto ranked = scored({0.9, 0.75, 0.69, 0.3});
    auto pos = select_positives(ranked, 0.2);
    REQUIRE(pos.size() == 2);  // 0.9 - 0.69 = 0.21 > 0.2 excludes the third
    CHECK(pos[0] == 0);
    CHECK(pos[1] == 1);
}

TEST_CASE("select_positives with alpha zero keeps exact ties") {
    auto ranked = scored({0.8, 0.8, 0.1});
    auto pos = select_positives(ranked, 0.0);
    CHECK(pos.size() == 2);
}

TEST_CASE("select_positives edge cases") {
    CHECK(select_positives({}, 0.2).empty());
    // A top score at the floor yields no positives at all.
    auto ranked = scored({0.0, 0.0});
    CHECK(select_positives(ranked, 0.5, 0.0).empty());
    auto low = scored({0.04, 0.0});
    CHECK(select_positives(low, 0.2, 0.05).empty());
    CHECK(select_positives(low, 0.2, 0.0).size() == 1);
}

TEST_CASE("select_negatives takes the closed [0, beta] band minus positives") {
    auto ranked = scored({0.9, 0.004, 0.0});
    auto neg = select_negatives(ranked, 0.005, {0});
    REQUIRE(neg.size() == 2);
    CHECK(neg[0] == 1);
    CHECK(neg[1] == 2);

    CHECK(select_negatives(scored({0.5, 0.3}), 0.005, {}).empty());
    // beta = 0 keeps only zero-overlap sentences.
    auto z = select_negatives(scored({0.4, 0.0}), 0.0, {});
    REQUIRE(z.size() == 1);
    CHECK(z[0] == 1);
    // beta boundary is inclusive.
    CHECK(select_negatives(scored({0.005}), 0.005, {}).size() == 1);
}

namespace {

Document planted_document(const std::string& id, const std::string& planted,
                          std::size_t n_noise) {
    std::string text = planted;
    for (std::size_t i = 0; i < n_noise; ++i) {
        text += " Unrelated filler nf" + std::to_string(i * 3) + " nf" +
                std::to_string(i * 3 + 1) + " nf" + std::to_string(i * 3 + 2) +
                ".";
    }
    return make_document(id, text);
}

}  // namespace

TEST_CASE("build_gold_standard labels verbatim plants positive") {
    const std::string criteria = "Eligible patients were adults with heart failure.";
    std::map<std::string, Document> docs;
    docs["ref1"] = planted_document("ref1", criteria, 9);
    docs["ref2"] = planted_document("ref2", criteria, 9);

    DataElementQuery q1{"rev1", "ref1", "inclusion_criteria",
                        {make_sentence("rev1", 0, criteria)}};
    DataElementQuery q2{"rev1", "ref2", "inclusion_criteria",
                        {make_sentence("rev1", 0, criteria)}};
    auto corpus = build_gold_standard({q1, q2}, docs, 0.2, 0.005);
    CHECK(corpus.positives.size() == 2);
    CHECK(corpus.negatives.size() == 18);
    CHECK(corpus.alpha == 0.2);
    CHECK(corpus.beta == 0.005);
    for (const auto& p : corpus.positives) {
        CHECK(p.sentence.index == 0);
        CHECK(p.source_score == doctest::Approx(1.0));
    }
}

TEST_CASE("build_gold_standard reports every missing reference") {
    DataElementQuery q1{"rev1", "missing_a", "k", {make_sentence("q", 0, "x")}};
    DataElementQuery q2{"rev1", "missing_b", "k", {make_sentence("q", 0, "x")}};
    std::map<std::string, Document> docs;
    try {
        build_gold_standard({q1, q2}, docs, 0.2, 0.005);
        FAIL("expected MissingDocumentError");
    } catch (const MissingDocumentError& e) {
        REQUIRE(e.missing_ids.size() == 2);
        CHECK(e.missing_ids[0] == "missing_a");
        CHECK(e.missing_ids[1] == "missing_b");
    }
}

TEST_CASE("build_gold_standard rejects empty queries") {
    std::map<std::string, Document> docs;
    docs["ref1"] = make_document("ref1", "Some text here.");
    DataElementQuery q{"rev1", "ref1", "k", {make_sentence("q", 0, "---")}};
    CHECK_THROWS_AS(build_gold_standard({q}, docs, 0.2, 0.005),
                    EmptyQueryError);
}

TEST_CASE("multi-sentence queries union their positives") {
    std::map<std::string, Document> docs;
    docs["ref1"] = make_document(
        "ref1",
        "Alpha beta gamma delta. Completely different criteria words. "
        "Filler nf1 nf2 nf3.");
    DataElementQuery q{"rev1", "ref1", "k",
                       {make_sentence("q", 0, "alpha beta gamma delta"),
                        make_sentence("q", 1, "completely different criteria words")}};
    auto corpus = build_gold_standard({q}, docs, 0.0, 0.0);
    CHECK(corpus.positives.size() == 2);
    CHECK(corpus.negatives.size() == 1);
}

TEST_CASE("partition and monotonicity over randomized documents") {
    std::mt19937 rng(321);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + detail::bounded(rng, 12);
        std::vector<double> scores(n);
        for (auto& s : scores) s = detail::bounded(rng, 101) / 100.0;
        auto ranked = scored(scores);
        const double alpha = detail::bounded(rng, 101) / 100.0;
        const double beta = detail::bounded(rng, 101) / 100.0;

        auto pos = select_positives(ranked, alpha);
        auto neg = select_negatives(ranked, beta, pos);

        // Positives and negatives never overlap and never exceed the doc.
        std::set<std::size_t> pos_set(pos.begin(), pos.end());
        std::set<std::size_t> neg_set(neg.begin(), neg.end());
        for (auto idx : neg_set) CHECK(pos_set.count(idx) == 0);
        CHECK(pos_set.size() + neg_set.size() <= n);

        // Band conditions.
        const double top = ranked.front().score;
        for (const auto& s : ranked) {
            const bool in_pos = pos_set.count(s.sentence_index) > 0;
            const bool in_neg = neg_set.count(s.sentence_index) > 0;
            if (in_pos) CHECK(top - s.score <= alpha);
            if (in_neg) CHECK(s.score <= beta);
            if (!in_pos && !in_neg) {
                const bool excluded_mid = s.score > beta && top - s.score > alpha;
                const bool no_positives_at_all = top <= 0.0 && s.score > beta;
                CHECK((excluded_mid || no_positives_at_all));
            }
        }

        // Growing alpha or beta never removes instances.
        auto pos_wider = select_positives(ranked, std::min(1.0, alpha + 0.13));
        for (auto idx : pos) {
            CHECK(std::find(pos_wider.begin(), pos_wider.end(), idx) !=
                  pos_wider.end());
        }
        auto neg_wider =
            select_negatives(ranked, std::min(1.0, beta + 0.13), pos);
        for (auto idx : neg) {
            CHECK(std::find(neg_wider.begin(), neg_wider.end(), idx) !=
                  neg_wider.end());
        }
    }
}
