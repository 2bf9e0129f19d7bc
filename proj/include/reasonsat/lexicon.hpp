// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace reasonsat {

/// Word categories for reason-giving language. A pattern ending in '*'
/// matches any token with that prefix; other patterns match whole tokens.
class WordLexicon {
 public:
  using Category = std::pair<std::string, std::vector<std::string>>;

  explicit WordLexicon(std::vector<Category> categories);

  /// Causation, Simplification, Importance, Counterfactual, Contradiction.
  static WordLexicon standard();
  /// {"Category": ["pattern", ...], ...}; category order is kept.
  static WordLexicon from_json(std::string_view text);

  const std::vector<Category>& categories() const noexcept { return categories_; }
  std::vector<std::string> category_names() const;

 private:
  std::vector<Category> categories_;
};

/// Lowercased maximal ASCII-alphanumeric runs.
std::vector<std::string> tokenize(std::string_view text);

bool pattern_matches(std::string_view pattern, std::string_view token) noexcept;

/// Categories with at least one matching token, in lexicon order.
std::vector<std::string> tag_text(std::string_view text, const WordLexicon& lexicon);

}  // namespace reasonsat
