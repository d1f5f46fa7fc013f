// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srlkit/roles.hpp"

namespace srlkit::corpus {

struct Sentence {
  std::string id;
  std::vector<std::string> tokens;
  std::string text;  // tokens joined with single spaces

  static Sentence make(std::string id, std::vector<std::string> tokens);

  // Character offset of each token within text; one extra entry holding
  // text.size() + 1 to keep [offset[i], offset[i] + len) arithmetic simple.
  std::vector<std::size_t> token_offsets() const;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct ArgumentSpan {
  RoleLabel label;
  std::size_t start = 0;  // inclusive token indices
  std::size_t end = 0;
  std::string surface;    // tokens[start..end] joined

  friend bool operator==(const ArgumentSpan&, const ArgumentSpan&) = default;
};

struct PredicateInstance {
  std::string id;  // "<sentence_id>#<column>"
  std::size_t sentence_index = 0;
  std::size_t pred_index = 0;
  std::string lemma;
  std::string gold_sense;  // optional, from the sidecar; "" when unknown
  std::vector<ArgumentSpan> gold_args;  // V excluded

  friend bool operator==(const PredicateInstance&, const PredicateInstance&) = default;
};

struct ParseNote {
  std::string instance_id;
  std::string code;  // e.g. "MissingVerbSpan"
  std::string message;
};

struct Corpus {
  std::vector<Sentence> sentences;
  std::vector<PredicateInstance> instances;
  std::vector<ParseNote> notes;

  const Sentence& sentence_of(const PredicateInstance& inst) const {
    return sentences.at(inst.sentence_index);
  }
  const std::string& predicate_surface(const PredicateInstance& inst) const {
    return sentence_of(inst).tokens.at(inst.pred_index);
  }
};

// Props column format: one token per line, column 0 = token, one extra
// column per predicate with tags from {*, (X*, *), (X*)}; sentences are
// separated by a single blank line. Throws UnbalancedBracketError,
// ColumnCountMismatchError, EmptySentenceError. Columns without a V span
// still yield an instance plus a MissingVerbSpan note.
Corpus parse_props(std::string_view column_text);

// Sidecar JSON: {"sentences": [{"id": str, "predicates": [{"pred_index": int,
// "lemma": str, "sense": str?}, ...]}, ...]} matched positionally.
Corpus parse_props(std::string_view column_text, std::string_view sidecar_json);

Corpus load_props_file(const std::filesystem::path& props,
                       const std::optional<std::filesystem::path>& sidecar = {});

// Inverse of parse_props for one sentence block (no trailing blank line).
// All instances must share the sentence; per-column spans (gold + V) must
// not overlap, else OverlappingSpansError.
std::string serialize_props(const Sentence& sentence,
                            std::span<const PredicateInstance> instances);

// Whole corpus; sentence blocks separated by blank lines, trailing newline.
std::string serialize_corpus(const Corpus& corpus);

// Sidecar JSON matching serialize_corpus order.
std::string serialize_sidecar(const Corpus& corpus);

struct ExemplarPool {
  struct Item {
    PredicateInstance instance;
    std::string sentence_text;
    std::string predicate;         // surface form of the predicate token
    std::string gold_answer_json;  // Stage-III answer shape, one line
  };
  std::vector<Item> items;
  std::uint64_t rng_seed = 0;
};

// Deterministic sampling without replacement: a pure function of (pool
// contents, seed, k, exclude). Never returns the excluded instance; throws
// PoolTooSmallError when fewer than k candidates remain.
std::vector<std::size_t> sample_exemplar_indices(const ExemplarPool& pool,
                                                 std::size_t k,
                                                 std::string_view exclude_id);
std::vector<const ExemplarPool::Item*> sample_exemplars(const ExemplarPool& pool,
                                                        std::size_t k,
                                                        std::string_view exclude_id);

}  // namespace srlkit::corpus
