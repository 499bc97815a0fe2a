#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "revex/corpusgen.hpp"
#include "revex/errors.hpp"
#include "revex/evalkit.hpp"
#include "revex/featurize.hpp"
#include "revex/linsvm.hpp"
#include "revex/modelsel.hpp"
#include "revex/serialize.hpp"
#include "revex/simmatch.hpp"
#include "revex/synth.hpp"
#include "revex/textcore.hpp"

namespace fs = std::filesystem;
using namespace revex;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedInputError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Loads every .txt file in dir; the file stem is the document id.
std::map<std::string, Document> load_articles(
    const std::string& dir, const std::set<std::string>& abbrevs) {
    if (!fs::is_directory(dir)) {
        throw MalformedInputError("not a directory: " + dir);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::map<std::string, Document> docs;
    for (const auto& f : files) {
        docs[f.stem().string()] =
            make_document(f.stem().string(), read_file(f.string()), abbrevs);
    }
    return docs;
}

std::set<std::string> resolve_abbreviations(const std::string& abbrev_file) {
    if (abbrev_file.empty()) return default_abbreviations();
    return load_abbreviations(abbrev_file);
}

struct CorpusVectors {
    FeatureSpace space;
    std::vector<FeatureVector> vectors;
    std::vector<int> labels;
    std::size_t n_pos = 0;
    std::size_t n_neg = 0;
};

CorpusVectors vectorize_corpus(const TrainingCorpus& corpus, bool binary) {
    CorpusVectors cv;
    cv.space = fit_feature_space(corpus);
    for (const auto& inst : corpus.positives) {
        cv.vectors.push_back(vectorize(inst.sentence.tokens, cv.space, binary));
        cv.labels.push_back(+1);
    }
    for (const auto& inst : corpus.negatives) {
        cv.vectors.push_back(vectorize(inst.sentence.tokens, cv.space, binary));
        cv.labels.push_back(-1);
    }
    cv.n_pos = corpus.positives.size();
    cv.n_neg = corpus.negatives.size();
    return cv;
}

int cmd_build_corpus(const std::string& reviews_path,
                     const std::string& articles_dir, const std::string& out,
                     double alpha, double beta, double min_match_floor,
                     const std::string& element_kind,
                     const std::string& abbrev_file, std::uint32_t seed) {
    auto abbrevs = resolve_abbreviations(abbrev_file);
    auto records = read_reviews_json(reviews_path);
    auto documents = load_articles(articles_dir, abbrevs);

    std::vector<DataElementQuery> queries;
    for (const auto& rec : records) {
        if (rec.element_kind != element_kind) continue;
        DataElementQuery q;
        q.review_id = rec.review_id;
        q.reference_id = rec.reference_id;
        q.element_kind = rec.element_kind;
        q.query_sentences = segment_sentences(rec.value_text, abbrevs);
        for (auto& s : q.query_sentences) s.doc_id = rec.review_id;
        queries.push_back(std::move(q));
    }
    if (queries.empty()) {
        throw MalformedInputError("no review records with element_kind '" +
                                  element_kind + "' in " + reviews_path);
    }
    auto corpus =
        build_gold_standard(queries, documents, alpha, beta, min_match_floor);
    atomic_write_file(out, corpus_to_json(corpus, seed));

    std::cout << "element_kind=" << corpus.element_kind << " alpha=" << alpha
              << " beta=" << beta << " min_match_floor=" << min_match_floor
              << "\n";
    std::map<std::string, std::pair<std::size_t, std::size_t>> per_ref;
    for (const auto& i : corpus.positives) per_ref[i.sentence.doc_id].first++;
    for (const auto& i : corpus.negatives) per_ref[i.sentence.doc_id].second++;
    for (const auto& [ref, counts] : per_ref) {
        std::cout << ref << ": " << counts.first << " positive, "
                  << counts.second << " negative\n";
    }
    std::cout << "total: " << corpus.positives.size() << " positive, "
              << corpus.negatives.size() << " negative -> " << out << "\n";
    return 0;
}

GridSearchConfig make_grid_config(double c_low, double c_high, int k,
                                  const std::string& metric,
                                  int refinement_decimals, std::uint32_t seed,
                                  double cv_tolerance) {
    GridSearchConfig cfg;
    cfg.c_low = c_low;
    cfg.c_high = c_high;
    cfg.k = k;
    cfg.metric = metric == "accuracy" ? CvMetric::accuracy
                                      : CvMetric::recall_positive;
    cfg.refinement_decimals = refinement_decimals;
    cfg.seed = seed;
    cfg.train_tolerance = cv_tolerance;
    return cfg;
}

int cmd_train(const std::string& corpus_path, const std::string& out,
              double C, bool grid, const GridSearchConfig& grid_cfg,
              const std::string& trace_out, bool binary, bool uniform_weights,
              double tolerance, int max_iter, std::uint32_t seed) {
    auto file = read_corpus_json(corpus_path);
    auto cv = vectorize_corpus(file.corpus, binary);
    if (cv.n_pos == 0 || cv.n_neg == 0) {
        throw SingleClassError("corpus must contain both labels: " +
                               corpus_path);
    }

    double chosen_c = C;
    if (grid) {
        auto result = grid_search_C(cv.vectors, cv.labels, grid_cfg);
        chosen_c = result.best_c;
        if (!trace_out.empty()) {
            atomic_write_file(trace_out, trace_to_jsonl(result.trace));
        }
        std::cout << "grid search best C = " << fmt_double(chosen_c) << "\n";
    }

    TrainOptions opts;
    opts.C = chosen_c;
    opts.weights = class_weights(
        cv.n_pos, cv.n_neg,
        uniform_weights ? WeightMode::uniform : WeightMode::balanced);
    opts.tolerance = tolerance;
    opts.max_iterations = max_iter;
    opts.seed = seed;
    auto [solution, report] = train_svm(cv.vectors, cv.labels,
                                        cv.space.n_features(), opts);
    if (!report.converged) {
        std::cerr << "warning: solver did not converge within "
                  << opts.max_iterations << " epochs\n";
    }

    LinearModel model;
    model.weights = std::move(solution.weights);
    model.bias = solution.bias;
    model.C = chosen_c;
    model.class_weights = opts.weights;
    model.feature_space = std::move(cv.space);
    model.element_kind = file.corpus.element_kind;
    model.binary_features = binary;
    model.seed = seed;
    model.converged = report.converged;
    atomic_write_file(out, model_to_json(model));
    std::cout << "trained on " << cv.n_pos << "+" << cv.n_neg
              << " instances, objective " << fmt_double(report.objective)
              << " -> " << out << "\n";
    return 0;
}

int cmd_select_model(const std::string& corpus_path,
                     const GridSearchConfig& grid_cfg,
                     const std::string& trace_out, bool binary,
                     double synthetic_peak, bool synthetic_constant) {
    GridSearchResult result;
    if (synthetic_peak > 0.0 || synthetic_constant) {
        // Test seam: a deterministic metric replaces real CV.
        result = grid_search(grid_cfg, [&](double c, int stage) {
            CvResult r;
            r.C = c;
            r.stage = stage;
            r.mean = synthetic_constant
                         ? 0.5
                         : 1.0 / (1.0 + std::abs(c - synthetic_peak));
            r.fold_metrics = {r.mean};
            return r;
        });
    } else {
        auto file = read_corpus_json(corpus_path);
        auto cv = vectorize_corpus(file.corpus, binary);
        result = grid_search_C(cv.vectors, cv.labels, grid_cfg);
    }
    if (!trace_out.empty()) {
        atomic_write_file(trace_out, trace_to_jsonl(result.trace));
    }
    std::cout << "best C = " << fmt_double(result.best_c) << "\n";
    return 0;
}

int cmd_extract(const std::string& model_path, const std::string& articles_dir,
                const std::string& out, const std::string& abbrev_file) {
    auto abbrevs = resolve_abbreviations(abbrev_file);
    auto model = read_model_json(model_path);
    if (!fs::is_directory(articles_dir)) {
        throw MalformedInputError("not a directory: " + articles_dir);
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(articles_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    Predictions predictions;
    std::size_t failures = 0;
    for (const auto& f : files) {
        std::string text;
        try {
            text = read_file(f.string());
        } catch (const DataError& e) {
            std::cerr << "warning: skipping " << f.string() << ": " << e.what()
                      << "\n";
            ++failures;
            continue;
        }
        Document doc = make_document(f.stem().string(), text, abbrevs);
        auto extractions = extract_sentences(model, doc);
        auto& list = predictions[doc.id];
        for (const auto& e : extractions) {
            list.push_back({e.sentence_index, e.margin,
                            doc.sentences[e.sentence_index].text});
        }
        for (const auto& e : list) {
            std::cout << doc.id << "\t" << e.sentence_index << "\t"
                      << fmt_double(e.margin) << "\t" << e.text << "\n";
        }
    }
    if (!files.empty() && failures == files.size()) {
        throw MalformedInputError("no article in " + articles_dir +
                                  " could be read");
    }
    atomic_write_file(out, predictions_to_json(predictions, model.element_kind,
                                               model.seed));
    return 0;
}

int cmd_evaluate(const std::string& predictions_path,
                 const std::string& gold_path, const std::string& out) {
    auto predictions = read_predictions_json(predictions_path);
    auto gold = read_gold_json(gold_path);
    for (const auto& [id, entries] : predictions) {
        (void)entries;
        if (gold.find(id) == gold.end()) {
            throw MalformedInputError("predicted article '" + id +
                                      "' has no gold labels");
        }
    }
    std::vector<ArticleResult> results;
    for (const auto& [id, gold_set] : gold) {
        std::set<std::size_t> predicted;
        auto it = predictions.find(id);
        if (it != predictions.end()) {
            for (const auto& e : it->second) predicted.insert(e.sentence_index);
        }
        results.push_back(score_article(predicted, gold_set, id));
    }
    auto agg = aggregate(results);
    if (!out.empty()) atomic_write_file(out, report_to_json(results, agg));
    std::cout << report_to_table(results, agg);
    return 0;
}

int cmd_synth(const SynthSpec& spec, const std::string& out_dir) {
    auto data = generate_synthetic(spec);
    fs::create_directories(fs::path(out_dir) / "articles");
    fs::create_directories(fs::path(out_dir) / "test");
    atomic_write_file((fs::path(out_dir) / "reviews.json").string(),
                      reviews_to_json(data.reviews, spec.seed));
    for (const auto& [id, text] : data.train_articles) {
        atomic_write_file((fs::path(out_dir) / "articles" / (id + ".txt")).string(),
                          text);
    }
    for (const auto& [id, text] : data.test_articles) {
        atomic_write_file((fs::path(out_dir) / "test" / (id + ".txt")).string(),
                          text);
    }
    atomic_write_file((fs::path(out_dir) / "gold.json").string(),
                      gold_to_json(data.test_gold));
    std::cout << "wrote " << data.train_articles.size()
              << " training articles, " << data.test_articles.size()
              << " test articles, seed " << spec.seed << " -> " << out_dir
              << "\n";
    return 0;
}

int cmd_annotate(const std::string& article_path,
                 const std::string& abbrev_file) {
    auto abbrevs = resolve_abbreviations(abbrev_file);
    fs::path p(article_path);
    Document doc =
        make_document(p.stem().string(), read_file(article_path), abbrevs);
    for (const Sentence& s : doc.sentences) {
        std::cout << s.index << "\t" << s.text << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"revex: sentence-level data-element extraction toolkit"};
    app.require_subcommand(1);
    app.set_config("--config");

    // Shared options.
    std::uint32_t seed = 0;
    double alpha = 0.2, beta = 0.005, min_match_floor = 0.0;
    std::string element_kind = "inclusion_criteria";
    std::string abbrev_file;
    app.add_option("--seed", seed, "random seed recorded in outputs");

    // build-corpus
    auto* build = app.add_subcommand(
        "build-corpus", "build a labeled training corpus from review records");
    std::string reviews_path, articles_dir, corpus_out = "corpus.json";
    build->add_option("--reviews", reviews_path, "review records JSON")
        ->required();
    build->add_option("--articles-dir", articles_dir,
                      "directory of reference .txt files")
        ->required();
    build->add_option("--out", corpus_out, "corpus output path");
    build->add_option("--alpha", alpha, "positive band width below top score");
    build->add_option("--beta", beta, "maximum score for negatives");
    build->add_option("--min-match-floor", min_match_floor,
                      "minimum top score for a document to yield positives");
    build->add_option("--element-kind", element_kind, "data element label");
    build->add_option("--abbrev-file", abbrev_file,
                      "abbreviation list overriding the built-in one");

    // train
    auto* train = app.add_subcommand("train", "train the sentence classifier");
    std::string train_corpus, model_out = "model.json", trace_out;
    double c_value = 1.0, c_low = 1e-3, c_high = 1000.0, cv_tolerance = 1e-4;
    double tolerance = 1e-6;
    int k = 10, refinement_decimals = 4, max_iter = 10000;
    bool use_grid = false, binary_features = false, uniform_weights = false;
    std::string metric = "recall";
    train->add_option("--corpus", train_corpus, "corpus JSON")->required();
    train->add_option("--out", model_out, "model output path");
    train->add_option("--C", c_value, "regularization parameter");
    train->add_flag("--grid", use_grid, "select C by grid search");
    train->add_option("--metric", metric, "grid metric: recall or accuracy")
        ->check(CLI::IsMember({"recall", "accuracy"}));
    train->add_option("--k", k, "cross-validation folds");
    train->add_option("--c-low", c_low, "grid lower bound (exclusive)");
    train->add_option("--c-high", c_high, "grid upper bound (inclusive)");
    train->add_option("--refinement-decimals", refinement_decimals,
                      "refine C to this many decimal places");
    train->add_option("--cv-tolerance", cv_tolerance,
                      "solver tolerance during cross-validation");
    train->add_option("--tolerance", tolerance, "final solver tolerance");
    train->add_option("--max-iter", max_iter, "solver epoch cap");
    train->add_option("--trace-out", trace_out, "grid trace JSONL path");
    train->add_flag("--binary-features", binary_features,
                    "presence features instead of counts");
    train->add_flag("--uniform-weights", uniform_weights,
                    "disable balanced class weights");

    // select-model
    auto* select = app.add_subcommand("select-model",
                                      "grid-search C without training");
    std::string select_corpus;
    double synthetic_peak = 0.0;
    select->add_option("--corpus", select_corpus, "corpus JSON");
    select->add_option("--metric", metric, "grid metric: recall or accuracy")
        ->check(CLI::IsMember({"recall", "accuracy"}));
    select->add_option("--k", k, "cross-validation folds");
    select->add_option("--c-low", c_low, "grid lower bound (exclusive)");
    select->add_option("--c-high", c_high, "grid upper bound (inclusive)");
    select->add_option("--refinement-decimals", refinement_decimals,
                       "refine C to this many decimal places");
    select->add_option("--cv-tolerance", cv_tolerance,
                       "solver tolerance during cross-validation");
    select->add_option("--trace-out", trace_out, "grid trace JSONL path");
    select->add_flag("--binary-features", binary_features,
                     "presence features instead of counts");
    bool synthetic_constant = false;
    select
        ->add_option("--synthetic-peak", synthetic_peak,
                     "evaluate a synthetic unimodal metric peaking here "
                     "instead of real cross-validation (testing)")
        ->group("");  // hidden
    select
        ->add_flag("--synthetic-constant", synthetic_constant,
                   "evaluate a constant synthetic metric instead of real "
                   "cross-validation (testing)")
        ->group("");  // hidden

    // extract
    auto* extract = app.add_subcommand("extract",
                                       "extract candidate sentences");
    std::string model_path, extract_dir, predictions_out = "predictions.json";
    extract->add_option("--model", model_path, "model JSON")->required();
    extract->add_option("--articles-dir", extract_dir,
                        "directory of article .txt files")
        ->required();
    extract->add_option("--out", predictions_out, "predictions output path");
    extract->add_option("--abbrev-file", abbrev_file,
                        "abbreviation list overriding the built-in one");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate",
                                        "score predictions against gold");
    std::string predictions_path, gold_path, report_out;
    evaluate->add_option("--predictions", predictions_path, "predictions JSON")
        ->required();
    evaluate->add_option("--gold", gold_path, "gold labels JSON")->required();
    evaluate->add_option("--out", report_out, "report JSON path");

    // synth
    auto* synth = app.add_subcommand("synth",
                                     "generate a synthetic evaluation corpus");
    SynthSpec spec;
    std::string synth_dir = "synth";
    synth->add_option("--out-dir", synth_dir, "output directory");
    synth->add_option("--n-reviews", spec.n_reviews, "number of reviews");
    synth->add_option("--refs-per-review", spec.refs_per_review,
                      "references per review");
    synth->add_option("--sentences-per-article", spec.sentences_per_article,
                      "sentences per article");
    synth->add_option("--vocab-size", spec.vocabulary_size,
                      "background vocabulary size");
    synth->add_option("--query-terms", spec.query_terms,
                      "terms per query sentence");
    synth->add_option("--paraphrase-noise", spec.paraphrase_noise,
                      "fraction of query terms replaced in planted sentences");
    synth->add_option("--n-test-articles", spec.n_test_articles,
                      "held-out articles with gold labels");
    synth->add_option("--element-kind", element_kind, "data element label");

    // annotate
    auto* annotate = app.add_subcommand(
        "annotate", "print numbered sentences for manual gold labeling");
    std::string annotate_path;
    annotate->add_option("--article", annotate_path, "article .txt file")
        ->required();
    annotate->add_option("--abbrev-file", abbrev_file,
                         "abbreviation list overriding the built-in one");

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) {
            return cmd_build_corpus(reviews_path, articles_dir, corpus_out,
                                    alpha, beta, min_match_floor, element_kind,
                                    abbrev_file, seed);
        }
        if (train->parsed()) {
            auto cfg = make_grid_config(c_low, c_high, k, metric,
                                        refinement_decimals, seed,
                                        cv_tolerance);
            return cmd_train(train_corpus, model_out, c_value, use_grid, cfg,
                             trace_out, binary_features, uniform_weights,
                             tolerance, max_iter, seed);
        }
        if (select->parsed()) {
            if (select_corpus.empty() && synthetic_peak <= 0.0 &&
                !synthetic_constant) {
                std::cerr << "select-model requires --corpus\n";
                return 1;
            }
            auto cfg = make_grid_config(c_low, c_high, k, metric,
                                        refinement_decimals, seed,
                                        cv_tolerance);
            return cmd_select_model(select_corpus, cfg, trace_out,
                                    binary_features, synthetic_peak,
                                    synthetic_constant);
        }
        if (extract->parsed()) {
            return cmd_extract(model_path, extract_dir, predictions_out,
                               abbrev_file);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(predictions_path, gold_path, report_out);
        }
        if (synth->parsed()) {
            spec.seed = seed;
            spec.element_kind = element_kind;
            return cmd_synth(spec, synth_dir);
        }
        if (annotate->parsed()) {
            return cmd_annotate(annotate_path, abbrev_file);
        }
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
