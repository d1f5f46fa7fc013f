// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#include "srlkit/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include <nlohmann/json.hpp>

#include "srlkit/errors.hpp"
#include "srlkit/matcher.hpp"

namespace srlkit::extraction {
namespace {

using nlohmann::ordered_json;

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

std::string strip_value(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  if (e - b >= 2) {
    const char first = s[b], last = s[e - 1];
    if ((first == '"' && last == '"') || (first == '\'' && last == '\'')) {
      ++b;
      --e;
    }
  }
  return std::string(s.substr(b, e - b));
}

// End offset (one past '}') of the balanced object starting at `open`, or
// npos. Walks over double-quoted strings with backslash escapes.
std::size_t balanced_end(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\')
        ++i;
      else if (c == '"')
        in_string = false;
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

std::optional<ordered_json> first_json_object(std::string_view text) {
  std::size_t from = 0;
  while (true) {
    const std::size_t open = text.find('{', from);
    if (open == std::string_view::npos) return std::nullopt;
    const std::size_t end = balanced_end(text, open);
    if (end == std::string_view::npos) {
      from = open + 1;
      continue;
    }
    ordered_json parsed =
        ordered_json::parse(text.substr(open, end - open), nullptr, false);
    if (!parsed.is_discarded() && parsed.is_object()) return parsed;
    from = open + 1;
  }
}

struct RoleMatch {
  RoleLabel role;
  double similarity = 0.0;
  bool exact = false;
};

std::optional<RoleMatch> resolve_key(const std::string& key,
                                     const framebank::RoleList& known_roles,
                                     double threshold) {
  RoleLabel parsed;
  bool parsed_ok = true;
  try {
    parsed = RoleLabel::parse(key);
  } catch (const std::invalid_argument&) {
    parsed_ok = false;
  }
  if (parsed_ok) {
    for (const auto& [role, desc] : known_roles)
      if (role == parsed) return RoleMatch{role, 1.0, true};
  }

  const std::string key_lower = lowercase(key);
  RoleMatch best;
  bool found = false;
  for (const auto& [role, desc] : known_roles) {
    const double sim = matcher::ratio(key_lower, lowercase(desc));
    if (!found || sim > best.similarity) {
      best = RoleMatch{role, sim, false};
      found = true;
    }
  }
  if (found && best.similarity >= threshold) return best;
  return std::nullopt;
}

}  // namespace

ChoiceAnswer parse_choice(std::string_view response,
                          std::span<const std::string> options) {
  // (1) first standalone capital letter whose index is within range
  for (std::size_t i = 0; i < response.size(); ++i) {
    const char c = response[i];
    if (c < 'A' || c > 'Z') continue;
    if (i > 0 && is_word_char(response[i - 1])) continue;
    if (i + 1 < response.size() && is_word_char(response[i + 1])) continue;
    const auto index = static_cast<std::size_t>(c - 'A');
    if (index < options.size())
      return ChoiceAnswer{index, std::string(1, c)};
  }

  // (2) longest option text contained in the response, case-insensitive
  const std::string response_lower = lowercase(response);
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (options[i].empty()) continue;
    if (response_lower.find(lowercase(options[i])) == std::string::npos) continue;
    if (!best || options[i].size() > options[*best].size()) best = i;
  }
  if (best) return ChoiceAnswer{*best, options[*best]};

  throw NoChoiceFoundError("no option letter or option text in response");
}

RawPrediction parse_argument_json(std::string_view response,
                                  const framebank::RoleList& known_roles,
                                  const ExtractionParams& params) {
  auto object = first_json_object(response);
  if (!object) throw NoJsonObjectError("no balanced JSON object in response");

  RawPrediction out;

  // Unwrap the outer {"<predicate>": {...}} shell when present. A single
  // key that itself names a known role is kept as an argument map.
  if (object->size() == 1 && object->begin().value().is_object()) {
    const std::string key = object->begin().key();
    bool key_is_role = false;
    try {
      const RoleLabel parsed = RoleLabel::parse(key);
      for (const auto& [role, desc] : known_roles)
        if (role == parsed) key_is_role = true;
    } catch (const std::invalid_argument&) {
    }
    if (!key_is_role) {
      out.predicate = key;
      *object = object->begin().value();
    }
  }

  if (object->empty()) throw EmptyObjectError("argument object is empty");

  struct Claimed {
    double similarity;
    std::string source_key;
    std::vector<std::size_t> arg_positions;
  };
  std::map<RoleLabel, Claimed> claimed;

  for (const auto& [key, value] : object->items()) {
    if (key.empty()) {
      out.parse_notes.push_back("dropped empty role key");
      continue;
    }

    const auto match = resolve_key(key, known_roles, params.description_threshold);
    if (!match) {
      out.parse_notes.push_back("dropped key '" + key + "': no role match");
      continue;
    }
    if (!match->exact)
      out.parse_notes.push_back("mapped key '" + key + "' to " +
                                match->role.canonical() + " by description similarity");

    std::vector<std::string> texts;
    auto add_value = [&](const ordered_json& v) {
      if (v.is_null()) return;  // role not predicted
      if (v.is_string()) {
        std::string s = strip_value(v.get<std::string>());
        if (!s.empty()) texts.push_back(std::move(s));
        return;
      }
      if (v.is_number() || v.is_boolean()) {
        texts.push_back(v.dump());
        return;
      }
      out.parse_notes.push_back("dropped non-text value for key '" + key + "'");
    };
    if (value.is_array())
      for (const auto& v : value) add_value(v);
    else
      add_value(value);
    if (texts.empty()) continue;

    const auto it = claimed.find(match->role);
    if (it != claimed.end()) {
      // Two distinct returned keys resolved to one canonical role: keep the
      // higher-similarity key (first wins ties).
      if (match->similarity <= it->second.similarity) {
        out.parse_notes.push_back("dropped key '" + key + "': role " +
                                  match->role.canonical() + " already claimed by '" +
                                  it->second.source_key + "'");
        continue;
      }
      out.parse_notes.push_back("key '" + key + "' displaced '" +
                                it->second.source_key + "' for role " +
                                match->role.canonical());
      // Remove the loser's entries, back to front.
      for (auto pos = it->second.arg_positions.rbegin();
           pos != it->second.arg_positions.rend(); ++pos)
        out.args.erase(out.args.begin() + static_cast<std::ptrdiff_t>(*pos));
      claimed.erase(it);
      // Reindex surviving claims.
      for (auto& [role, claim] : claimed) {
        std::vector<std::size_t> fixed;
        for (std::size_t p = 0; p < out.args.size(); ++p)
          if (out.args[p].first == role) fixed.push_back(p);
        claim.arg_positions = std::move(fixed);
      }
    }

    Claimed claim{match->similarity, key, {}};
    for (auto& text : texts) {
      claim.arg_positions.push_back(out.args.size());
      out.args.emplace_back(match->role, std::move(text));
    }
    claimed.emplace(match->role, std::move(claim));
  }

  return out;
}

}  // namespace srlkit::extraction
