#include "revex/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "revex/errors.hpp"

namespace revex {

namespace {

constexpr int kSchemaVersion = 1;

nlohmann::json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInputError("cannot open file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw MalformedInputError("malformed JSON in " + path + ": " +
                                  e.what());
    }
    return j;
}

std::string label_name(Label label) {
    return label == Label::positive ? "positive" : "negative";
}

}  // namespace

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 8);
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += static_cast<char>(c);
                }
        }
    }
    return out;
}

void atomic_write_file(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw MalformedInputError("cannot write file: " + path);
        out << content;
    }
    fs::rename(tmp, target);
}

std::string corpus_to_json(const TrainingCorpus& corpus, std::uint32_t seed) {
    // Merge back into (review_id, doc_id, index) order across both labels.
    std::vector<const LabeledInstance*> all;
    all.reserve(corpus.positives.size() + corpus.negatives.size());
    for (const auto& i : corpus.positives) all.push_back(&i);
    for (const auto& i : corpus.negatives) all.push_back(&i);
    std::sort(all.begin(), all.end(),
              [](const LabeledInstance* a, const LabeledInstance* b) {
                  if (a->review_id != b->review_id)
                      return a->review_id < b->review_id;
                  if (a->sentence.doc_id != b->sentence.doc_id)
                      return a->sentence.doc_id < b->sentence.doc_id;
                  return a->sentence.index < b->sentence.index;
              });

    std::ostringstream out;
    out << "{\n  \"schema_version\": " << kSchemaVersion
        << ",\n  \"element_kind\": \"" << json_escape(corpus.element_kind)
        << "\",\n  \"alpha\": " << fmt_double(corpus.alpha)
        << ",\n  \"beta\": " << fmt_double(corpus.beta)
        << ",\n  \"seed\": " << seed << ",\n  \"instances\": [";
    bool first = true;
    for (const LabeledInstance* inst : all) {
        if (!first) out << ",";
        first = false;
        out << "\n    {\"doc_id\": \"" << json_escape(inst->sentence.doc_id)
            << "\", \"sentence_index\": " << inst->sentence.index
            << ", \"text\": \"" << json_escape(inst->sentence.text)
            << "\", \"label\": \"" << label_name(inst->label)
            << "\", \"score\": " << fmt_double(inst->source_score)
            << ", \"review_id\": \"" << json_escape(inst->review_id) << "\"}";
    }
    out << "\n  ]\n}\n";
    return out.str();
}

CorpusFile read_corpus_json(const std::string& path) {
    nlohmann::json j = load_json(path);
    CorpusFile file;
    try {
        file.corpus.element_kind = j.at("element_kind").get<std::string>();
        file.corpus.alpha = j.at("alpha").get<double>();
        file.corpus.beta = j.at("beta").get<double>();
        file.seed = j.value("seed", 0u);
        for (const auto& rec : j.at("instances")) {
            LabeledInstance inst;
            inst.sentence = make_sentence(rec.at("doc_id").get<std::string>(),
                                          rec.at("sentence_index").get<std::size_t>(),
                                          rec.at("text").get<std::string>());
            inst.element_kind = file.corpus.element_kind;
            inst.source_score = rec.at("score").get<double>();
            inst.review_id = rec.at("review_id").get<std::string>();
            const std::string label = rec.at("label").get<std::string>();
            if (label == "positive") {
                inst.label = Label::positive;
                file.corpus.positives.push_back(std::move(inst));
            } else if (label == "negative") {
                inst.label = Label::negative;
                file.corpus.negatives.push_back(std::move(inst));
            } else {
                throw MalformedInputError("unknown label '" + label + "' in " +
                                          path);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw MalformedInputError("bad corpus file " + path + ": " + e.what());
    }
    return file;
}

std::string model_to_json(const LinearModel& model) {
    std::ostringstream out;
    out << "{\n  \"schema_version\": " << kSchemaVersion
        << ",\n  \"element_kind\": \"" << json_escape(model.element_kind)
        << "\",\n  \"C\": " << fmt_double(model.C)
        << ",\n  \"class_weights\": {\"positive\": "
        << fmt_double(model.class_weights.positive)
        << ", \"negative\": " << fmt_double(model.class_weights.negative)
        << "},\n  \"bias\": " << fmt_double(model.bias)
        << ",\n  \"binary_features\": "
        << (model.binary_features ? "true" : "false")
        << ",\n  \"seed\": " << model.seed << ",\n  \"converged\": "
        << (model.converged ? "true" : "false")
        << ",\n  \"solver_notes\": \"linear kernel, L2 regularization, "
           "weighted hinge loss, unregularized bias\""
        << ",\n  \"feature_space\": {";
    for (std::size_t i = 0; i < model.feature_space.ngrams.size(); ++i) {
        if (i) out << ", ";
        out << "\"" << json_escape(model.feature_space.ngrams[i])
            << "\": " << i;
    }
    out << "},\n  \"weights\": [";
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
        if (i) out << ", ";
        out << fmt_double(model.weights[i]);
    }
    out << "]\n}\n";
    return out.str();
}

LinearModel read_model_json(const std::string& path) {
    nlohmann::json j = load_json(path);
    LinearModel model;
    try {
        model.element_kind = j.at("element_kind").get<std::string>();
        model.C = j.at("C").get<double>();
        model.class_weights.positive =
            j.at("class_weights").at("positive").get<double>();
        model.class_weights.negative =
            j.at("class_weights").at("negative").get<double>();
        model.bias = j.at("bias").get<double>();
        model.binary_features = j.value("binary_features", false);
        model.seed = j.value("seed", 0u);
        model.converged = j.value("converged", true);
        const auto& space = j.at("feature_space");
        std::vector<std::string> ngrams(space.size());
        for (auto it = space.begin(); it != space.end(); ++it) {
            const std::size_t idx = it.value().get<std::size_t>();
            if (idx >= ngrams.size()) {
                throw MalformedInputError("feature index out of range in " +
                                          path);
            }
            ngrams[idx] = it.key();
        }
        model.feature_space = make_feature_space(std::move(ngrams));
        model.weights = j.at("weights").get<std::vector<double>>();
        if (model.weights.size() != model.feature_space.n_features()) {
            throw MalformedInputError(
                "weight count does not match feature space in " + path);
        }
    } catch (const nlohmann::json::exception& e) {
        throw MalformedInputError("bad model file " + path + ": " + e.what());
    }
    return model;
}

std::vector<ReviewRecord> read_reviews_json(const std::string& path) {
    nlohmann::json j = load_json(path);
    if (j.is_object() && j.contains("records")) j = j.at("records");
    if (!j.is_array()) {
        throw MalformedInputError("reviews file must be a JSON array: " + path);
    }
    std::vector<ReviewRecord> out;
    for (const auto& rec : j) {
        try {
            ReviewRecord r;
            r.review_id = rec.at("review_id").get<std::string>();
            r.reference_id = rec.at("reference_id").get<std::string>();
            r.element_kind = rec.at("element_kind").get<std::string>();
            r.value_text = rec.at("value_text").get<std::string>();
            out.push_back(std::move(r));
        } catch (const nlohmann::json::exception& e) {
            throw MalformedInputError("bad review record in " + path + ": " +
                                      e.what());
        }
    }
    return out;
}

std::string reviews_to_json(const std::vector<ReviewRecord>& records,
                            std::uint32_t seed) {
    std::ostringstream out;
    out << "{\n  \"schema_version\": " << kSchemaVersion
        << ",\n  \"seed\": " << seed << ",\n  \"records\": [";
    bool first = true;
    for (const auto& r : records) {
        if (!first) out << ",";
        first = false;
        out << "\n    {\"review_id\": \"" << json_escape(r.review_id)
            << "\", \"reference_id\": \"" << json_escape(r.reference_id)
            << "\", \"element_kind\": \"" << json_escape(r.element_kind)
            << "\", \"value_text\": \"" << json_escape(r.value_text) << "\"}";
    }
    out << "\n  ]\n}\n";
    return out.str();
}

std::string predictions_to_json(const Predictions& predictions,
                                const std::string& element_kind,
                                std::uint32_t seed) {
    std::ostringstream out;
    out << "{\n  \"schema_version\": " << kSchemaVersion
        << ",\n  \"element_kind\": \"" << json_escape(element_kind)
        << "\",\n  \"seed\": " << seed << ",\n  \"articles\": {";
    bool first_article = true;
    for (const auto& [id, entries] : predictions) {
        if (!first_article) out << ",";
        first_article = false;
        out << "\n    \"" << json_escape(id) << "\": [";
        bool first = true;
        for (const auto& e : entries) {
            if (!first) out << ", ";
            first = false;
            out << "{\"sentence_index\": " << e.sentence_index
                << ", \"margin\": " << fmt_double(e.margin) << ", \"text\": \""
                << json_escape(e.text) << "\"}";
        }
        out << "]";
    }
    out << "\n  }\n}\n";
    return out.str();
}

Predictions read_predictions_json(const std::string& path) {
    nlohmann::json j = load_json(path);
    Predictions out;
    try {
        for (const auto& [id, entries] : j.at("articles").items()) {
            auto& list = out[id];
            for (const auto& e : entries) {
                PredictionEntry entry;
                entry.sentence_index = e.at("sentence_index").get<std::size_t>();
                entry.margin = e.value("margin", 0.0);
                entry.text = e.value("text", std::string());
                list.push_back(std::move(entry));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw MalformedInputError("bad predictions file " + path + ": " +
                                  e.what());
    }
    return out;
}

std::string gold_to_json(const GoldLabels& gold) {
    std::ostringstream out;
    out << "{\n  \"schema_version\": " << kSchemaVersion
        << ",\n  \"articles\": {";
    bool first_article = true;
    for (const auto& [id, indices] : gold) {
        if (!first_article) out << ",";
        first_article = false;
        out << "\n    \"" << json_escape(id) << "\": [";
        bool first = true;
        for (std::size_t idx : indices) {
            if (!first) out << ", ";
            first = false;
            out << idx;
        }
        out << "]";
    }
    out << "\n  }\n}\n";
    return out.str();
}

GoldLabels read_gold_json(const std::string& path) {
    nlohmann::json j = load_json(path);
    GoldLabels out;
    // Accept both the wrapped form and a flat {article_id: [indices]}.
    const nlohmann::json& articles =
        (j.is_object() && j.contains("articles")) ? j.at("articles") : j;
    try {
        for (const auto& [id, indices] : articles.items()) {
            if (id == "schema_version") continue;
            auto& set = out[id];
            for (const auto& idx : indices) set.insert(idx.get<std::size_t>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw MalformedInputError("bad gold file " + path + ": " + e.what());
    }
    return out;
}

std::string report_to_json(const std::vector<ArticleResult>& articles,
                           const AggregateReport& aggregate) {
    std::ostringstream out;
    out << "{\n  \"schema_version\": " << kSchemaVersion
        << ",\n  \"articles\": [";
    bool first = true;
    for (const auto& a : articles) {
        if (!first) out << ",";
        first = false;
        out << "\n    {\"article_id\": \"" << json_escape(a.article_id)
            << "\", \"true_positive\": " << a.true_positive
            << ", \"false_negative\": " << a.false_negative
            << ", \"false_positive\": " << a.false_positive << ", \"recall\": "
            << (a.recall ? fmt_double(*a.recall) : "null")
            << ", \"precision\": "
            << (a.precision ? fmt_double(*a.precision) : "null") << "}";
    }
    out << "\n  ],\n  \"macro_recall\": " << fmt_double(aggregate.macro_recall)
        << ",\n  \"macro_precision\": "
        << fmt_double(aggregate.macro_precision)
        << ",\n  \"micro_recall\": " << fmt_double(aggregate.micro_recall)
        << ",\n  \"micro_precision\": "
        << fmt_double(aggregate.micro_precision)
        << ",\n  \"n_articles\": " << aggregate.n_articles
        << ",\n  \"reading_burden\": " << fmt_double(aggregate.reading_burden)
        << "\n}\n";
    return out.str();
}

std::string report_to_table(const std::vector<ArticleResult>& articles,
                            const AggregateReport& aggregate) {
    std::ostringstream out;
    std::size_t id_width = 10;
    for (const auto& a : articles) {
        id_width = std::max(id_width, a.article_id.size());
    }
    auto pad = [](const std::string& s, std::size_t w) {
        std::string p = s;
        while (p.size() < w) p.push_back(' ');
        return p;
    };
    auto rate = [](const std::optional<double>& v) {
        if (!v) return std::string("-");
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%.2f", *v);
        return std::string(buf);
    };
    out << pad("Article Id", id_width) << "  TP  FN  FP  Recall  Precision\n";
    for (const auto& a : articles) {
        char counts[64];
        std::snprintf(counts, sizeof(counts), "  %2zu  %2zu  %2zu  ",
                      a.true_positive, a.false_negative, a.false_positive);
        out << pad(a.article_id, id_width) << counts
            << pad(rate(a.recall), 6) << "  " << rate(a.precision) << "\n";
    }
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "macro recall %.4f  macro precision %.4f  micro recall "
                  "%.4f  micro precision %.4f  reading burden %.1f\n",
                  aggregate.macro_recall, aggregate.macro_precision,
                  aggregate.micro_recall, aggregate.micro_precision,
                  aggregate.reading_burden);
    out << buf;
    return out.str();
}

std::string trace_to_jsonl(const std::vector<CvResult>& trace) {
    std::ostringstream out;
    for (const auto& r : trace) {
        out << "{\"stage\": " << r.stage << ", \"C\": " << fmt_double(r.C)
            << ", \"fold_metrics\": [";
        for (std::size_t i = 0; i < r.fold_metrics.size(); ++i) {
            if (i) out << ", ";
            out << fmt_double(r.fold_metrics[i]);
        }
        out << "], \"mean\": " << fmt_double(r.mean) << "}\n";
    }
    return out.str();
}

}  // namespace revex
