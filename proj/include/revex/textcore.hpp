#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace revex {

// One sentence of a document, with token and term-set views.
// Immutable after construction; all downstream modules share these.
struct Sentence {
    std::string doc_id;
    std::size_t index = 0;
    std::string text;
    std::vector<std::string> tokens;
    std::set<std::string> term_set;
};

struct Document {
    std::string id;
    std::vector<Sentence> sentences;
};

// Lowercases and splits on every maximal run of non-alphanumeric bytes.
// No stemming, no stopword removal. Non-ASCII bytes act as separators.
std::vector<std::string> tokenize(std::string_view text);

// Deduplicated set of tokens.
std::set<std::string> term_set(const std::vector<std::string>& tokens);

// Abbreviations that suppress a sentence break at a trailing period.
// Lowercase, trailing dot included ("e.g.", "fig.", ...).
const std::set<std::string>& default_abbreviations();

// Loads one abbreviation per line; '#' starts a comment line.
std::set<std::string> load_abbreviations(const std::string& path);

// Splits raw article text into sentences. A break happens after '.', '?'
// or '!' followed by whitespace and an uppercase letter or digit, unless
// the word before a '.' is a known abbreviation. Blank lines always break.
// Whitespace-only segments are dropped; indices are assigned in order.
std::vector<Sentence> segment_sentences(
    std::string_view text,
    const std::set<std::string>& abbreviations = default_abbreviations());

// segment_sentences with doc_id stamped on every sentence.
Document make_document(
    std::string id, std::string_view text,
    const std::set<std::string>& abbreviations = default_abbreviations());

// Builds a standalone sentence (used for query-side values).
Sentence make_sentence(std::string doc_id, std::size_t index, std::string text);

}  // namespace revex
