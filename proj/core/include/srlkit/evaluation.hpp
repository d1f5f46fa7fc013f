// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srlkit/corpus.hpp"
#include "srlkit/matcher.hpp"
#include "srlkit/roles.hpp"

namespace srlkit::evaluation {

// One scorable (instance, role, span) fact. V never appears here.
struct ScoredTuple {
  std::string instance_id;
  RoleLabel role;
  std::size_t start = 0;  // inclusive token indices
  std::size_t end = 0;

  friend bool operator==(const ScoredTuple&, const ScoredTuple&) = default;
  friend auto operator<=>(const ScoredTuple&, const ScoredTuple&) = default;
};

struct PRF {
  double precision = 0.0, recall = 0.0, f1 = 0.0;
  std::uint64_t tp = 0, fp = 0, fn = 0;
};

struct ErrorCounts {
  std::uint64_t discontinuity = 0;
  std::uint64_t boundary = 0;
  std::uint64_t wrong_label = 0;
  std::uint64_t spurious = 0;
  std::uint64_t missing = 0;
};

struct EvalReport {
  PRF micro;
  std::map<RoleLabel, PRF> per_role;
  ErrorCounts errors;
  // Reported separately from the headline metrics; null when no gold senses
  // were available.
  std::optional<double> sense_accuracy;
  std::uint64_t n_instances = 0;
  std::string config_hash;
  std::string cache_hash;
};

std::vector<ScoredTuple> tuples_from_gold(const corpus::Corpus& corpus);
std::vector<ScoredTuple> tuples_from_predictions(
    std::span<const matcher::Prediction> predictions);

// Micro precision/recall/F1 with exact (instance, role, span) matching; set
// semantics (duplicates collapse).
PRF micro_prf(std::span<const ScoredTuple> pred, std::span<const ScoredTuple> gold);

std::map<RoleLabel, PRF> per_role_prf(std::span<const ScoredTuple> pred,
                                      std::span<const ScoredTuple> gold);

// Unmatched predictions fall into the first matching class of the fixed
// order discontinuity -> boundary -> wrong_label -> spurious; unmatched gold
// counts as missing.
ErrorCounts classify_errors(std::span<const ScoredTuple> pred,
                            std::span<const ScoredTuple> gold);

// Items x categories counts, one row per item, each row summing to the
// number of raters.
struct RatingMatrix {
  std::vector<std::vector<std::uint64_t>> counts;
};

// Fleiss' kappa. Throws DegenerateAgreementError when expected agreement is
// 1 (all ratings in a single category); Error on ragged/undersized input.
double fleiss_kappa(const RatingMatrix& ratings);

std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(std::string_view json_text);
std::string report_to_table(const EvalReport& report);
std::string per_role_csv(const EvalReport& report);

}  // namespace srlkit::evaluation
