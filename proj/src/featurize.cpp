#include "revex/featurize.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "revex/errors.hpp"

namespace revex {

FeatureSpace make_feature_space(std::vector<std::string> sorted_ngrams) {
    FeatureSpace space;
    space.ngrams = std::move(sorted_ngrams);
    space.index.reserve(space.ngrams.size());
    for (std::uint32_t i = 0; i < space.ngrams.size(); ++i) {
        space.index.emplace(space.ngrams[i], i);
    }
    return space;
}

std::vector<std::string> extract_ngrams(
    const std::vector<std::string>& tokens) {
    std::vector<std::string> grams;
    const std::size_t t = tokens.size();
    grams.reserve(t + (t > 1 ? t - 1 : 0) + (t > 2 ? t - 2 : 0));
    for (std::size_t i = 0; i < t; ++i) {
        grams.push_back(tokens[i]);
        if (i + 1 < t) grams.push_back(tokens[i] + ' ' + tokens[i + 1]);
        if (i + 2 < t)
            grams.push_back(tokens[i] + ' ' + tokens[i + 1] + ' ' +
                            tokens[i + 2]);
    }
    return grams;
}

FeatureSpace fit_feature_space(const TrainingCorpus& corpus) {
    if (corpus.positives.empty() && corpus.negatives.empty()) {
        throw EmptyCorpusError("fit_feature_space: corpus has no instances");
    }
    std::set<std::string> vocab;
    auto add = [&](const std::vector<LabeledInstance>& instances) {
        for (const auto& inst : instances) {
            for (auto& g : extract_ngrams(inst.sentence.tokens)) {
                vocab.insert(std::move(g));
            }
        }
    };
    add(corpus.positives);
    add(corpus.negatives);
    return make_feature_space({vocab.begin(), vocab.end()});
}

FeatureVector vectorize(const std::vector<std::string>& tokens,
                        const FeatureSpace& space, bool binary) {
    std::map<std::uint32_t, double> counts;
    for (const auto& g : extract_ngrams(tokens)) {
        auto it = space.index.find(g);
        if (it != space.index.end()) counts[it->second] += 1.0;
    }
    FeatureVector v;
    v.entries.reserve(counts.size());
    for (const auto& [col, cnt] : counts) {
        v.entries.emplace_back(col, binary ? 1.0 : cnt);
    }
    return v;
}

}  // namespace revex
