// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "srlkit/corpus.hpp"
#include "srlkit/extraction.hpp"
#include "srlkit/framebank.hpp"

namespace srlkit::prompting {

// Stage-III template family. v1..v4 are the alternative phrasings evaluated
// against the original; no_description is the original minus the role
// object. v1 intentionally carries the "prdicate" misspelling; see
// PromptOptions::fix_typos.
enum class Variant { Original, V1, V2, V3, V4, NoDescription };

Variant variant_from_string(std::string_view name);  // throws ConfigError
std::string_view to_string(Variant v);
// V3/V4/NoDescription templates carry no role-description slot.
bool variant_needs_roles(Variant v);
// Raw template text with <sentence>, <predicate>, <{role: description}> slots.
std::string_view variant_template(Variant v, bool fix_typos = false);

struct PromptBundle {
  std::string text;
  Variant variant = Variant::Original;
  std::size_t shots = 0;
  std::vector<std::string> exemplar_ids;
  std::string target_id;
};

struct PromptOptions {
  Variant variant = Variant::Original;
  bool fix_typos = false;
};

// A pre-rendered k-shot demonstration: the same filled template followed by
// one line holding the gold answer JSON.
struct PromptExemplar {
  std::string id;
  std::string sentence;
  std::string predicate;
  framebank::RoleList roles;
  std::string answer_json;
};

// Stage I: multiple-choice sense disambiguation. Options are lettered A..Z
// in order; more than 26 throws TooManyOptionsError.
PromptBundle build_sense_prompt(std::string_view sentence,
                                std::string_view predicate,
                                std::span<const std::string> options,
                                std::string_view target_id = "");

// Stage III: argument labeling, k exemplar blocks then the unanswered
// target. Throws MissingRolesError when the variant requires a role object
// and roles is empty.
PromptBundle build_label_prompt(std::string_view sentence,
                                std::string_view predicate,
                                const framebank::RoleList& roles,
                                const PromptOptions& opts,
                                std::span<const PromptExemplar> exemplars = {},
                                std::string_view target_id = "");

// {"A0": "seller", "TMP": "temporal"} — keys in input order, prompt-key
// spelling, deterministic bytes.
std::string render_role_json(const framebank::RoleList& roles);

// Answer shape: {"<predicate>": {"A0": "John", ...}}. Roles repeating in
// args collapse into a JSON array value.
std::string render_answer_json(
    std::string_view predicate,
    std::span<const std::pair<RoleLabel, std::string>> args);
std::string render_answer_json(const corpus::PredicateInstance& inst,
                               const corpus::Sentence& sentence);

// Collects every instance of a corpus into an exemplar pool with gold
// answers serialized in the Stage-III shape.
corpus::ExemplarPool build_exemplar_pool(const corpus::Corpus& corpus,
                                         std::uint64_t seed);

}  // namespace srlkit::prompting
