#include "mdlgraph/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

namespace mdlgraph {

namespace {

bool is_ascii_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_token_char(unsigned char c) {
    if (c >= 0x80) return true;
    return std::isalnum(c) != 0;
}

// Short list of function words; used only for the "concept from the text"
// check, where articles and prepositions must not count as shared content.
const std::set<std::string>& stopwords() {
    static const std::set<std::string> words = {
        "a",   "an",  "and", "are", "as",  "at",  "be",  "but", "by",  "for",
        "from", "has", "have", "if", "in",  "is",  "it",  "its", "not", "of",
        "on",  "or",  "s",   "that", "the", "then", "this", "to", "was", "were",
        "will", "with"};
    return words;
}

} // namespace

std::string trim(std::string_view s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && is_ascii_space(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && is_ascii_space(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> tokenize(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (unsigned char c : s) {
        if (is_token_char(c)) {
            cur.push_back(static_cast<char>(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::vector<std::string> token_set(std::string_view s) {
    std::vector<std::string> toks = tokenize(s);
    std::sort(toks.begin(), toks.end());
    toks.erase(std::unique(toks.begin(), toks.end()), toks.end());
    return toks;
}

double jaccard_sets(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    size_t inter = 0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        int cmp = a[i].compare(b[j]);
        if (cmp == 0) {
            ++inter;
            ++i;
            ++j;
        } else if (cmp < 0) {
            ++i;
        } else {
            ++j;
        }
    }
    size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

double jaccard(std::string_view a, std::string_view b) {
    return jaccard_sets(token_set(a), token_set(b));
}

bool shares_content_token(std::string_view a, std::string_view b) {
    std::vector<std::string> ta = token_set(a);
    std::vector<std::string> tb = token_set(b);
    size_t i = 0, j = 0;
    while (i < ta.size() && j < tb.size()) {
        int cmp = ta[i].compare(tb[j]);
        if (cmp == 0) {
            if (stopwords().count(ta[i]) == 0) return true;
            ++i;
            ++j;
        } else if (cmp < 0) {
            ++i;
        } else {
            ++j;
        }
    }
    return false;
}

} // namespace mdlgraph
