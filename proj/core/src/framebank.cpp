// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#include "srlkit/framebank.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "srlkit/errors.hpp"

namespace srlkit::framebank {
namespace {

using nlohmann::ordered_json;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw SchemaViolationError("cannot open " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

NonCoreInventory NonCoreInventory::defaults() {
  static const std::pair<const char*, const char*> kTable[] = {
      {"TMP", "temporal"},
      {"LOC", "location"},
      {"MNR", "manner"},
      {"DIR", "direction"},
      {"ADV", "adverbial modification"},
      {"DIS", "discourse marker"},
      {"EXT", "extent"},
      {"CAU", "cause"},
      {"NEG", "negation"},
      {"MOD", "modal verb"},
      {"PNC", "purpose"},
      {"PRD", "secondary predication"},
      {"REC", "reciprocal"},
      {"GOL", "goal"},
      {"COM", "comitative"},
  };
  NonCoreInventory inv;
  inv.roles.reserve(std::size(kTable));
  for (const auto& [code, desc] : kTable)
    inv.roles.emplace_back(RoleLabel::parse(code), desc);
  return inv;
}

NonCoreInventory NonCoreInventory::from_json(std::string_view json_text) {
  ordered_json doc = ordered_json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw SchemaViolationError("non-core inventory: expected a JSON object");
  NonCoreInventory inv;
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_string() || value.get<std::string>().empty())
      throw SchemaViolationError("non-core inventory: description for '" + key +
                                 "' must be a non-empty string");
    const RoleLabel label = RoleLabel::parse(key);
    if (label.kind() != RoleKind::Adjunct)
      throw SchemaViolationError("non-core inventory: '" + key +
                                 "' is not an adjunct role");
    inv.roles.emplace_back(label, value.get<std::string>());
  }
  return inv;
}

NonCoreInventory NonCoreInventory::load(const std::filesystem::path& path) {
  return from_json(slurp(path));
}

FrameBank FrameBank::from_json(std::string_view frames_json_text,
                               NonCoreInventory inventory) {
  ordered_json doc = ordered_json::parse(frames_json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object())
    throw SchemaViolationError("frame bank: expected a JSON object keyed by lemma");

  FrameBank bank;
  bank.noncore_ = std::move(inventory);

  std::set<std::string> seen_senses;
  for (const auto& [lemma, senses] : doc.items()) {
    if (!senses.is_array())
      throw SchemaViolationError("frame bank: lemma '" + lemma +
                                 "' must map to an array of rolesets");
    std::vector<Roleset> rolesets;
    for (const auto& entry : senses) {
      if (!entry.is_object())
        throw SchemaViolationError("frame bank: roleset entries must be objects");
      Roleset rs;
      rs.lemma = lemma;
      rs.sense_id = entry.value("sense_id", "");
      rs.description = entry.value("description", "");
      if (rs.sense_id.empty())
        throw SchemaViolationError("frame bank: roleset under '" + lemma +
                                   "' is missing sense_id");
      if (rs.description.empty())
        throw SchemaViolationError("frame bank: roleset " + rs.sense_id +
                                   " is missing description");
      if (!seen_senses.insert(rs.sense_id).second)
        throw DuplicateSenseIdError("duplicate sense_id " + rs.sense_id);
      if (entry.contains("roles")) {
        if (!entry["roles"].is_object())
          throw SchemaViolationError("frame bank: roles of " + rs.sense_id +
                                     " must be an object");
        for (const auto& [role, desc] : entry["roles"].items()) {
          const RoleLabel label = RoleLabel::parse(role);
          if (!label.is_core())
            throw SchemaViolationError("frame bank: role '" + role + "' of " +
                                       rs.sense_id + " is not a core role");
          if (!desc.is_string() || desc.get<std::string>().empty())
            throw SchemaViolationError("frame bank: description of " + role +
                                       " in " + rs.sense_id +
                                       " must be a non-empty string");
          rs.core_roles.emplace_back(label, desc.get<std::string>());
        }
      }
      rolesets.push_back(std::move(rs));
    }
    bank.frames_.emplace(lemma, std::move(rolesets));
  }
  return bank;
}

FrameBank FrameBank::load(const std::filesystem::path& frames_json,
                          const std::optional<std::filesystem::path>& noncore_json) {
  NonCoreInventory inv = noncore_json ? NonCoreInventory::load(*noncore_json)
                                      : NonCoreInventory::defaults();
  return from_json(slurp(frames_json), std::move(inv));
}

bool FrameBank::has_lemma(std::string_view lemma) const {
  return frames_.find(lemma) != frames_.end();
}

const std::vector<Roleset>& FrameBank::senses_of(std::string_view lemma) const {
  const auto it = frames_.find(lemma);
  if (it == frames_.end())
    throw UnknownLemmaError("lemma '" + std::string(lemma) + "' not in frame bank");
  return it->second;
}

RoleList FrameBank::retrieve_roles(const Roleset& roleset) const {
  RoleList out = roleset.core_roles;
  out.insert(out.end(), noncore_.roles.begin(), noncore_.roles.end());
  return out;
}

}  // namespace srlkit::framebank
