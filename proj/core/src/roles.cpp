// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#include "srlkit/roles.hpp"

#include <cctype>
#include <stdexcept>

namespace srlkit {
namespace {

std::string upper_trimmed(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out;
  out.reserve(e - b);
  for (size_t i = b; i < e; ++i)
    out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(s[i]))));
  return out;
}

}  // namespace

RoleLabel RoleLabel::parse(std::string_view surface) {
  const std::string s = upper_trimmed(surface);
  if (s.empty()) throw std::invalid_argument("empty role label");

  if (s.size() > 2 && s[1] == '-' && (s[0] == 'C' || s[0] == 'R')) {
    const RoleLabel inner = parse(s.substr(2));
    const RoleKind kind =
        s[0] == 'C' ? RoleKind::Continuation : RoleKind::Reference;
    return RoleLabel(kind, s.substr(0, 2) + inner.canonical());
  }

  if (s == "V" || s == "REL") return RoleLabel(RoleKind::Verb, "V");

  // Core arguments: A0..A5 / AA and the CoNLL-2012 ARG* spellings.
  if (s.size() == 2 && s[0] == 'A' &&
      (std::isdigit(static_cast<unsigned char>(s[1])) || s[1] == 'A'))
    return RoleLabel(RoleKind::Core, s);
  if (s.size() == 4 && s.starts_with("ARG") &&
      (std::isdigit(static_cast<unsigned char>(s[3])) || s[3] == 'A'))
    return RoleLabel(RoleKind::Core, std::string("A") + s[3]);

  if (s.starts_with("ARGM-") && s.size() > 5)
    return RoleLabel(RoleKind::Adjunct, "AM-" + s.substr(5));
  if (s.starts_with("AM-") && s.size() > 3)
    return RoleLabel(RoleKind::Adjunct, s);

  // Bare adjunct code ("TMP", "LOC", ...).
  return RoleLabel(RoleKind::Adjunct, "AM-" + s);
}

std::string RoleLabel::base() const {
  if (kind_ == RoleKind::Continuation || kind_ == RoleKind::Reference)
    return canonical_.substr(2);
  return canonical_;
}

std::string RoleLabel::prompt_key() const {
  std::string s = canonical_;
  const size_t pos = (s.starts_with("C-") || s.starts_with("R-")) ? 2 : 0;
  if (s.compare(pos, 3, "AM-") == 0) s.erase(pos, 3);
  return s;
}

}  // namespace srlkit
