// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace srlkit {

enum class RoleKind { Core, Adjunct, Continuation, Reference, Verb };

// A normalized PropBank-style role label.
//
// The canonical space follows the CoNLL-2005 surface forms: A0..A5, AA,
// AM-TMP, C-A1, R-AM-LOC, V. CoNLL-2012 forms (ARG0, ARGM-TMP, C-ARG1) and
// bare adjunct codes (TMP) normalize into the same space. Normalization is
// idempotent: parse(x.canonical()) == x.
class RoleLabel {
 public:
  RoleLabel() = default;

  // Throws std::invalid_argument on empty/blank input.
  static RoleLabel parse(std::string_view surface);

  const std::string& canonical() const { return canonical_; }
  RoleKind kind() const { return kind_; }
  bool is_core() const { return kind_ == RoleKind::Core; }
  bool is_verb() const { return kind_ == RoleKind::Verb; }

  // Label a C-/R- role points back to ("A1" for "C-A1"); canonical() itself
  // for plain labels.
  std::string base() const;

  // Short form used in prompt role objects and answer JSON: adjuncts lose
  // the AM- prefix ("AM-TMP" -> "TMP"), everything else keeps its canonical
  // spelling.
  std::string prompt_key() const;

  friend bool operator==(const RoleLabel& a, const RoleLabel& b) {
    return a.canonical_ == b.canonical_;
  }
  friend std::strong_ordering operator<=>(const RoleLabel& a, const RoleLabel& b) {
    return a.canonical_ <=> b.canonical_;
  }

 private:
  RoleLabel(RoleKind kind, std::string canonical)
      : kind_(kind), canonical_(std::move(canonical)) {}

  RoleKind kind_ = RoleKind::Adjunct;
  std::string canonical_;
};

}  // namespace srlkit
