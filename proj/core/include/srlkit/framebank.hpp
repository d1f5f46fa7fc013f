// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "srlkit/roles.hpp"

namespace srlkit::framebank {

// Ordered role->description list; order is meaningful everywhere it appears.
using RoleList = std::vector<std::pair<RoleLabel, std::string>>;

// One PropBank-style sense of a lemma.
struct Roleset {
  std::string lemma;
  std::string sense_id;     // "sell.01"
  std::string description;  // short gloss
  RoleList core_roles;      // keys limited to A0..A5, AA; file order
};

// The fixed AM-* inventory shared by every predicate.
struct NonCoreInventory {
  RoleList roles;

  // Built-in 15-role table; data/noncore_roles.json ships the same content
  // and can be overridden per run.
  static NonCoreInventory defaults();
  static NonCoreInventory from_json(std::string_view json_text);
  static NonCoreInventory load(const std::filesystem::path& path);
};

class FrameBank {
 public:
  FrameBank() : noncore_(NonCoreInventory::defaults()) {}

  // Frame JSON schema: {"<lemma>": [{"sense_id": str, "description": str,
  // "roles": {"A0": str, ...}}, ...]}. Throws SchemaViolationError,
  // DuplicateSenseIdError.
  static FrameBank from_json(std::string_view frames_json_text,
                             NonCoreInventory inventory = NonCoreInventory::defaults());
  static FrameBank load(const std::filesystem::path& frames_json,
                        const std::optional<std::filesystem::path>& noncore_json = {});

  bool has_lemma(std::string_view lemma) const;
  // Senses in file order; throws UnknownLemmaError.
  const std::vector<Roleset>& senses_of(std::string_view lemma) const;

  // Stage II: core roles (frame order) united with the non-core inventory
  // (inventory order). The two key sets are disjoint by construction.
  RoleList retrieve_roles(const Roleset& roleset) const;

  const NonCoreInventory& noncore() const { return noncore_; }
  std::size_t lemma_count() const { return frames_.size(); }

 private:
  std::map<std::string, std::vector<Roleset>, std::less<>> frames_;
  NonCoreInventory noncore_;
};

}  // namespace srlkit::framebank
