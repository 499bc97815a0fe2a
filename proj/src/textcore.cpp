#include "revex/textcore.hpp"

#include <cctype>
#include <fstream>

#include "revex/errors.hpp"

namespace revex {

namespace {

// Locale-independent ASCII classification; bytes >= 128 are separators.
inline bool is_alnum(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return (u >= '0' && u <= '9') || (u >= 'a' && u <= 'z') ||
           (u >= 'A' && u <= 'Z');
}

inline bool is_space(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return u == ' ' || u == '\t' || u == '\n' || u == '\r' || u == '\f' ||
           u == '\v';
}

inline bool is_upper_or_digit(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9');
}

inline char to_lower(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u >= 'A' && u <= 'Z') return static_cast<char>(u - 'A' + 'a');
    return c;
}

std::string_view trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

// The word ending at position `dot` (inclusive), lowercased, with leading
// punctuation stripped: "(e.g." -> "e.g.".
std::string word_before(std::string_view text, std::size_t dot) {
    std::size_t b = dot;
    while (b > 0 && !is_space(text[b - 1])) --b;
    while (b < dot && !is_alnum(text[b])) ++b;
    std::string w;
    w.reserve(dot - b + 1);
    for (std::size_t i = b; i <= dot; ++i) w.push_back(to_lower(text[i]));
    return w;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        if (is_alnum(c)) {
            cur.push_back(to_lower(c));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

std::set<std::string> term_set(const std::vector<std::string>& tokens) {
    return {tokens.begin(), tokens.end()};
}

const std::set<std::string>& default_abbreviations() {
    static const std::set<std::string> abbrevs = {
        "e.g.", "i.e.",  "etc.",  "cf.",  "al.",  "vs.",   "v.",
        "dr.",  "mr.",   "mrs.",  "ms.",  "prof.", "st.",  "jr.",
        "sr.",  "fig.",  "figs.", "eq.",  "eqs.",  "ref.", "refs.",
        "no.",  "nos.",  "vol.",  "ca.",  "approx.", "resp.", "ed.",
        "eds.", "dept.", "univ.", "inc.", "ltd.",
    };
    return abbrevs;
}

std::set<std::string> load_abbreviations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInputError("cannot open abbreviation file: " + path);
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        std::string w;
        for (char c : t) w.push_back(to_lower(c));
        out.insert(std::move(w));
    }
    return out;
}

std::vector<Sentence> segment_sentences(
    std::string_view text, const std::set<std::string>& abbreviations) {
    std::vector<Sentence> out;
    auto emit = [&](std::size_t begin, std::size_t end) {
        std::string_view piece = trim(text.substr(begin, end - begin));
        if (piece.empty()) return;
        Sentence s;
        s.index = out.size();
        s.text = std::string(piece);
        s.tokens = tokenize(piece);
        s.term_set = term_set(s.tokens);
        out.push_back(std::move(s));
    };

    std::size_t start = 0;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        char c = text[i];
        if (is_space(c)) {
            std::size_t q = i;
            int newlines = 0;
            while (q < n && is_space(text[q])) {
                if (text[q] == '\n') ++newlines;
                ++q;
            }
            if (newlines >= 2) {  // blank line
                emit(start, i);
                start = q;
            }
            i = q;
            continue;
        }
        if (c == '.' || c == '?' || c == '!') {
            std::size_t k = i + 1;
            while (k < n && is_space(text[k])) ++k;
            bool breaks = k > i + 1 && k < n && is_upper_or_digit(text[k]);
            if (breaks && c == '.' &&
                abbreviations.count(word_before(text, i)) > 0) {
                breaks = false;
            }
            if (breaks) {
                emit(start, i + 1);
                start = i + 1;
            }
            i = i + 1;
            continue;
        }
        ++i;
    }
    emit(start, n);
    return out;
}

Document make_document(std::string id, std::string_view text,
                       const std::set<std::string>& abbreviations) {
    Document doc;
    doc.id = std::move(id);
    doc.sentences = segment_sentences(text, abbreviations);
    for (auto& s : doc.sentences) s.doc_id = doc.id;
    return doc;
}

Sentence make_sentence(std::string doc_id, std::size_t index, std::string text) {
    Sentence s;
    s.doc_id = std::move(doc_id);
    s.index = index;
    s.text = std::move(text);
    s.tokens = tokenize(s.text);
    s.term_set = term_set(s.tokens);
    return s;
}

}  // namespace revex
