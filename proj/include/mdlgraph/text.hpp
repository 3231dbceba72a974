#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mdlgraph {

/// Strips leading/trailing ASCII whitespace.
std::string trim(std::string_view s);

/// Splits into lowercase tokens. Token characters are ASCII alphanumerics
/// and any byte >= 0x80 (multi-byte UTF-8 sequences stay intact); everything
/// else separates. Case folding is ASCII-only.
std::vector<std::string> tokenize(std::string_view s);

/// Token-set Jaccard similarity. Both sets empty -> 1.0.
double jaccard(std::string_view a, std::string_view b);

/// Jaccard over pre-tokenized sets (sorted unique token vectors).
double jaccard_sets(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Sorted unique tokens of s.
std::vector<std::string> token_set(std::string_view s);

/// True if the two texts share at least one token not in the builtin
/// English stopword list.
bool shares_content_token(std::string_view a, std::string_view b);

} // namespace mdlgraph
