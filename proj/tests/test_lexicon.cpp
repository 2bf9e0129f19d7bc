// Copyright 2026 The reasonsat Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sstream>

#include "reasonsat/lexicon.hpp"
#include "support.hpp"

using namespace reasonsat;

namespace {

using Tags = std::vector<std::string>;

Tags split_tags(const std::string& field) {
  Tags out;
  if (field == "-") return out;
  std::istringstream in(field);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

}  // namespace

TEST_CASE("documented tagging examples") {
  const auto lex = WordLexicon::standard();
  CHECK(tag_text("setting x4 true forces a contradiction", lex) == Tags{"Causation", "Contradiction"});
  CHECK(tag_text("this simplifies the formula and is the key step", lex) == Tags{"Simplification"});
  CHECK(tag_text("the assignment satisfies clause two", lex).empty());
}

TEST_CASE("golden sentences") {
  const auto lex = WordLexicon::standard();
  std::istringstream lines(read_file(rsat_test::fixture("tagger_golden.tsv")));
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    const std::string sentence = line.substr(0, tab);
    INFO(sentence);
    CHECK(tag_text(sentence, lex) == split_tags(line.substr(tab + 1)));
    ++count;
  }
  CHECK(count == 50);
}

TEST_CASE("tokenizer and patterns") {
  CHECK(tokenize("IF-THEN x4=F, don't") == Tags{"if", "then", "x4", "f", "don", "t"});
  CHECK(tokenize("").empty());
  CHECK(pattern_matches("forc*", "forced"));
  CHECK(pattern_matches("forc*", "forc"));
  CHECK(!pattern_matches("forc*", "for"));
  CHECK(pattern_matches("key", "key"));
  CHECK(!pattern_matches("key", "keys"));
}

TEST_CASE("tagging is idempotent and case-insensitive") {
  const auto lex = WordLexicon::standard();
  const std::string text = "Only x2 is CRITICAL and it Dictates the rest";
  const auto once = tag_text(text, lex);
  CHECK(tag_text(text, lex) == once);
  std::string lower = text;
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  CHECK(tag_text(lower, lex) == once);
}

TEST_CASE("custom lexicons keep category order") {
  const auto lex = WordLexicon::from_json(R"({"Zeta": ["end*"], "Alpha": ["start"]})");
  CHECK(lex.category_names() == Tags{"Zeta", "Alpha"});
  CHECK(tag_text("start at the end", lex) == Tags{"Zeta", "Alpha"});
  CHECK_THROWS_AS(WordLexicon::from_json("[1]"), ContractViolation);
  CHECK_THROWS_AS(WordLexicon::from_json(R"({"A": "x"})"), ContractViolation);
  CHECK_THROWS_AS(WordLexicon::from_json(R"({"A": [1]})"), ContractViolation);
}
