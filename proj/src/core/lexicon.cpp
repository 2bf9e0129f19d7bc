// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#include "reasonsat/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include <json.hpp>

#include "reasonsat/cnf.hpp"

namespace reasonsat {

WordLexicon::WordLexicon(std::vector<Category> categories) : categories_(std::move(categories)) {
  if (categories_.empty()) throw ContractViolation("lexicon has no categories");
  for (const auto& [name, patterns] : categories_) {
    if (patterns.empty()) throw ContractViolation("lexicon category '" + name + "' is empty");
    for (const auto& p : patterns) {
      const bool ok = !p.empty() && std::none_of(p.begin(), p.end(), [](unsigned char c) {
        return std::isupper(c) != 0;
      });
      if (!ok) throw ContractViolation("lexicon patterns must be non-empty lowercase: '" + p + "'");
    }
  }
}

WordLexicon WordLexicon::standard() {
  return WordLexicon({
      {"Causation",
       {"forc*", "require*", "impact*", "relies", "fixes", "constrains", "caus*", "effect*",
        "dictate*"}},
      {"Simplification", {"simpli*", "easier", "key"}},
      {"Importance",
       {"mult*", "strong", "importan*", "pivotal", "crucial", "critic*", "central", "influential",
        "hinge", "vital"}},
      {"Counterfactual",
       {"otherwise", "if", "would", "could", "should", "unless", "instead", "although", "despite"}},
      {"Contradiction", {"only", "contradict*", "necess*", "consisten*"}},
  });
}

WordLexicon WordLexicon::from_json(std::string_view text) {
  const auto doc = nlohmann::ordered_json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ContractViolation("lexicon file must be a JSON object of category -> pattern list");
  }
  std::vector<Category> categories;
  for (const auto& [name, patterns] : doc.items()) {
    if (!patterns.is_array()) throw ContractViolation("lexicon category '" + name + "' is not a list");
    std::vector<std::string> list;
    for (const auto& p : patterns) {
      if (!p.is_string()) throw ContractViolation("lexicon patterns must be strings");
      list.push_back(p.get<std::string>());
    }
    categories.emplace_back(name, std::move(list));
  }
  return WordLexicon(std::move(categories));
}

std::vector<std::string> WordLexicon::category_names() const {
  std::vector<std::string> names;
  for (const auto& c : categories_) names.push_back(c.first);
  return names;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 128 && std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

bool pattern_matches(std::string_view pattern, std::string_view token) noexcept {
  if (!pattern.empty() && pattern.back() == '*') {
    pattern.remove_suffix(1);
    return token.substr(0, pattern.size()) == pattern;
  }
  return token == pattern;
}

std::vector<std::string> tag_text(std::string_view text, const WordLexicon& lexicon) {
  const auto tokens = tokenize(text);
  std::vector<std::string> present;
  for (const auto& [name, patterns] : lexicon.categories()) {
    const bool hit = std::any_of(tokens.begin(), tokens.end(), [&](const std::string& token) {
      return std::any_of(patterns.begin(), patterns.end(),
                         [&](const std::string& p) { return pattern_matches(p, token); });
    });
    if (hit) present.push_back(name);
  }
  return present;
}

}  // namespace reasonsat
