// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srlkit/corpus.hpp"
#include "srlkit/extraction.hpp"
#include "srlkit/roles.hpp"

namespace srlkit::matcher {

// Ratcliff-Obershelp (gestalt) similarity: 2*M / (|a|+|b|), where M is the
// total length of the recursive longest-common-substring decomposition.
// Length ties pick the earliest block in a, then the earliest in b. No junk
// heuristics. ratio("", "") is defined as 1.0.
double ratio(std::string_view a, std::string_view b);

// Same recursion with whole tokens as the unit of matching.
double token_ratio(std::span<const std::string> a, std::span<const std::string> b);

enum class MatchUnit { Character, Token };

struct MatchParams {
  int step = 1;     // window stride t, >= 1
  int flexity = 8;  // boundary perturbation limit f, >= 0
  MatchUnit unit = MatchUnit::Character;
};

struct MatchResult {
  std::string substring;   // matched slice (tokens joined by spaces in token mode)
  std::size_t start = 0;   // half-open unit offsets into the corpus
  std::size_t end = 0;
  double similarity = 0.0; // ratio(query, substring)
};

// Fuzzy substring search. Phase 1 slides a |query|-sized window over the
// corpus at stride `step`, keeping the first strictly-best window. Phase 2
// perturbs the window's two boundaries independently by 1..flexity in both
// directions (clamped to the corpus), again accepting only strict
// improvements, then returns the best of the combined and single-sided
// slices. An empty query yields an empty match at offset 0.
MatchResult match(std::string_view query, std::string_view corpus,
                  const MatchParams& params = {});
MatchResult match_tokens(std::span<const std::string> query,
                         std::span<const std::string> corpus,
                         const MatchParams& params = {});

struct GroundedArg {
  RoleLabel role;
  std::size_t start = 0;  // inclusive token span, corpus convention
  std::size_t end = 0;
  std::string text;       // sentence tokens[start..end] joined
  double similarity = 0.0;
};

struct Prediction {
  std::string instance_id;
  std::string predicate;
  std::string chosen_sense;
  std::vector<GroundedArg> args;
  std::vector<std::string> notes;
};

struct GroundParams {
  MatchParams match;
  double floor = 0.6;  // arguments grounded below this similarity are dropped
};

// Stage IV: anchor each predicted argument string in the sentence. Character
// matches are snapped to the minimal covering token span.
Prediction ground_prediction(const extraction::RawPrediction& raw,
                             const corpus::Sentence& sentence,
                             const GroundParams& params = {});

}  // namespace srlkit::matcher
