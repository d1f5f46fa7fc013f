// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "srlkit/framebank.hpp"
#include "srlkit/roles.hpp"

namespace srlkit::extraction {

struct ChoiceAnswer {
  std::size_t index = 0;  // 0-based option index
  std::string raw;        // matched substring of the response
};

// Stage-I answer resolution, in order: (1) first standalone capital letter
// whose index is within range, (2) longest option text occurring in the
// response (case-insensitive), (3) NoChoiceFoundError.
ChoiceAnswer parse_choice(std::string_view response,
                          std::span<const std::string> options);

struct RawPrediction {
  std::string predicate;
  // Canonical role -> argument text, in response order. A role repeats when
  // the model returned a list value.
  std::vector<std::pair<RoleLabel, std::string>> args;
  std::vector<std::string> parse_notes;

  friend bool operator==(const RawPrediction& a, const RawPrediction& b) {
    return a.predicate == b.predicate && a.args == b.args;
  }
};

struct ExtractionParams {
  // Returned keys that match no role label are mapped to the role whose
  // description is most similar, if that similarity reaches the threshold.
  double description_threshold = 0.75;
};

// Stage-III answer recovery. Total over arbitrary input: scans for the first
// balanced, parseable {...} (code fences and surrounding prose tolerated),
// unwraps the outer predicate key, then maps every returned key to a known
// role (exact label match case-insensitively, else description similarity).
// Throws NoJsonObjectError / EmptyObjectError only.
RawPrediction parse_argument_json(std::string_view response,
                                  const framebank::RoleList& known_roles,
                                  const ExtractionParams& params = {});

}  // namespace srlkit::extraction
