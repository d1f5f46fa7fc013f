// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#include "srlkit/prompting.hpp"

#include <map>

#include <nlohmann/json.hpp>

#include "srlkit/errors.hpp"

namespace srlkit::prompting {
namespace {

// Stage-I template.
constexpr std::string_view kSenseLead = "Give a sentence: ";
constexpr std::string_view kSenseQuestion =
    ".\nQuestion: What is the sense of predicate ";
constexpr std::string_view kSenseQuestionTail = " in the given sentence above?\n";
constexpr std::string_view kSenseClose =
    "Please give the best option as the answer. Answer:";

// Stage-III templates, one string per variant, two lines each.
constexpr std::string_view kOriginal =
    "Give a sentence: <sentence>, a predicate: <predicate>, all possible "
    "argument roles and their descriptions: <{role: description}>, please "
    "label the arguments about predicate <predicate> of the sentence.\n"
    "Provide the answer in JSON format as follows: {<predicate>: {role: "
    "argument}}.";

constexpr std::string_view kV1 =
    "Give a sentence: <sentence>, all the possible arguments of the prdicate "
    "<predicate> and their descriptions: <{role: description}>, please label "
    "the arguments about predicate <predicate> of the sentence.\n"
    "Provide the answer in JSON format as follows: {<predicate>: {role: "
    "argument}}.";

constexpr std::string_view kV1Fixed =
    "Give a sentence: <sentence>, all the possible arguments of the predicate "
    "<predicate> and their descriptions: <{role: description}>, please label "
    "the arguments about predicate <predicate> of the sentence.\n"
    "Provide the answer in JSON format as follows: {<predicate>: {role: "
    "argument}}.";

constexpr std::string_view kV2 =
    "Give sentence: <sentence>, predicate: <predicate>, possible argument and "
    "descriptions: <{role: description}>, please label the arguments about "
    "predicate <predicate> of the sentence.\n"
    "Provide the answer in JSON format as follows: {<predicate>: {role: "
    "argument}}.";

constexpr std::string_view kV3 =
    "Give sentence: <sentence>, predicate: <predicate>, please label the "
    "arguments about predicate <predicate> of the sentence.\n"
    "Provide the answer in JSON format as follows: {<predicate>: {role: "
    "argument}}.";

constexpr std::string_view kV4 =
    "Give sentence: <sentence>, predicate: <predicate>, please label the "
    "arguments about predicate <predicate> of the sentence in the given "
    "PropBank-style semantic role labels.\n"
    "Provide the answer in JSON format as follows: {<predicate>: {role: "
    "argument}}.";

constexpr std::string_view kNoDescription =
    "Give a sentence: <sentence>, a predicate: <predicate>, please label the "
    "arguments about predicate <predicate> of the sentence.\n"
    "Provide the answer in JSON format as follows: {<predicate>: {role: "
    "argument}}.";

std::string quote(std::string_view s) {
  return nlohmann::json(s).dump();  // escaped, double-quoted
}

// Single left-to-right pass; replacement text is never rescanned.
std::string fill_slots(std::string_view tmpl, std::string_view sentence,
                       std::string_view predicate, std::string_view roles_json,
                       bool has_roles) {
  static constexpr std::string_view kSentenceSlot = "<sentence>";
  static constexpr std::string_view kPredicateSlot = "<predicate>";
  static constexpr std::string_view kRolesSlot = "<{role: description}>";

  std::string out;
  out.reserve(tmpl.size() + sentence.size() + roles_json.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl.compare(i, kSentenceSlot.size(), kSentenceSlot) == 0) {
      out += sentence;
      i += kSentenceSlot.size();
    } else if (tmpl.compare(i, kPredicateSlot.size(), kPredicateSlot) == 0) {
      out += predicate;
      i += kPredicateSlot.size();
    } else if (has_roles && tmpl.compare(i, kRolesSlot.size(), kRolesSlot) == 0) {
      out += roles_json;
      i += kRolesSlot.size();
    } else {
      out += tmpl[i];
      ++i;
    }
  }
  return out;
}

}  // namespace

Variant variant_from_string(std::string_view name) {
  static const std::map<std::string_view, Variant> table = {
      {"original", Variant::Original}, {"v1", Variant::V1},
      {"v2", Variant::V2},             {"v3", Variant::V3},
      {"v4", Variant::V4},             {"no_description", Variant::NoDescription},
  };
  const auto it = table.find(name);
  if (it == table.end())
    throw ConfigError("unknown prompt variant '" + std::string(name) + "'");
  return it->second;
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Original: return "original";
    case Variant::V1: return "v1";
    case Variant::V2: return "v2";
    case Variant::V3: return "v3";
    case Variant::V4: return "v4";
    case Variant::NoDescription: return "no_description";
  }
  return "original";
}

bool variant_needs_roles(Variant v) {
  return v == Variant::Original || v == Variant::V1 || v == Variant::V2;
}

std::string_view variant_template(Variant v, bool fix_typos) {
  switch (v) {
    case Variant::Original: return kOriginal;
    case Variant::V1: return fix_typos ? kV1Fixed : kV1;
    case Variant::V2: return kV2;
    case Variant::V3: return kV3;
    case Variant::V4: return kV4;
    case Variant::NoDescription: return kNoDescription;
  }
  return kOriginal;
}

PromptBundle build_sense_prompt(std::string_view sentence,
                                std::string_view predicate,
                                std::span<const std::string> options,
                                std::string_view target_id) {
  if (options.empty()) throw Error("build_sense_prompt: no sense options");
  if (options.size() > 26)
    throw TooManyOptionsError("cannot letter " + std::to_string(options.size()) +
                              " options");
  std::string text;
  text += kSenseLead;
  text += sentence;
  text += kSenseQuestion;
  text += predicate;
  text += kSenseQuestionTail;
  for (std::size_t i = 0; i < options.size(); ++i) {
    text += static_cast<char>('A' + i);
    text += ": ";
    text += options[i];
    text += "\n";
  }
  text += kSenseClose;

  PromptBundle bundle;
  bundle.text = std::move(text);
  bundle.shots = 0;
  bundle.target_id = std::string(target_id);
  return bundle;
}

PromptBundle build_label_prompt(std::string_view sentence,
                                std::string_view predicate,
                                const framebank::RoleList& roles,
                                const PromptOptions& opts,
                                std::span<const PromptExemplar> exemplars,
                                std::string_view target_id) {
  if (variant_needs_roles(opts.variant) && roles.empty())
    throw MissingRolesError("variant '" + std::string(to_string(opts.variant)) +
                            "' requires a non-empty role map");

  const std::string_view tmpl = variant_template(opts.variant, opts.fix_typos);
  const bool has_roles = variant_needs_roles(opts.variant);

  PromptBundle bundle;
  bundle.variant = opts.variant;
  bundle.shots = exemplars.size();
  bundle.target_id = std::string(target_id);

  std::string text;
  for (const auto& ex : exemplars) {
    bundle.exemplar_ids.push_back(ex.id);
    text += fill_slots(tmpl, ex.sentence, ex.predicate,
                       render_role_json(ex.roles), has_roles);
    text += "\n";
    text += ex.answer_json;
    text += "\n\n";
  }
  text += fill_slots(tmpl, sentence, predicate, render_role_json(roles), has_roles);
  bundle.text = std::move(text);
  return bundle;
}

std::string render_role_json(const framebank::RoleList& roles) {
  std::string out = "{";
  bool first = true;
  for (const auto& [role, desc] : roles) {
    if (!first) out += ", ";
    first = false;
    out += quote(role.prompt_key());
    out += ": ";
    out += quote(desc);
  }
  out += "}";
  return out;
}

std::string render_answer_json(
    std::string_view predicate,
    std::span<const std::pair<RoleLabel, std::string>> args) {
  // Group repeated roles into arrays, first-occurrence order.
  std::vector<std::pair<RoleLabel, std::vector<std::string>>> grouped;
  for (const auto& [role, text] : args) {
    auto it = std::find_if(grouped.begin(), grouped.end(),
                           [&](const auto& g) { return g.first == role; });
    if (it == grouped.end())
      grouped.push_back({role, {text}});
    else
      it->second.push_back(text);
  }

  std::string inner = "{";
  bool first = true;
  for (const auto& [role, texts] : grouped) {
    if (!first) inner += ", ";
    first = false;
    inner += quote(role.prompt_key());
    inner += ": ";
    if (texts.size() == 1) {
      inner += quote(texts[0]);
    } else {
      inner += "[";
      for (std::size_t i = 0; i < texts.size(); ++i) {
        if (i) inner += ", ";
        inner += quote(texts[i]);
      }
      inner += "]";
    }
  }
  inner += "}";
  return "{" + quote(predicate) + ": " + inner + "}";
}

std::string render_answer_json(const corpus::PredicateInstance& inst,
                               const corpus::Sentence& sentence) {
  std::vector<std::pair<RoleLabel, std::string>> args;
  args.reserve(inst.gold_args.size());
  for (const auto& arg : inst.gold_args) args.emplace_back(arg.label, arg.surface);
  return render_answer_json(sentence.tokens.at(inst.pred_index), args);
}

corpus::ExemplarPool build_exemplar_pool(const corpus::Corpus& corpus,
                                         std::uint64_t seed) {
  corpus::ExemplarPool pool;
  pool.rng_seed = seed;
  pool.items.reserve(corpus.instances.size());
  for (const auto& inst : corpus.instances) {
    const auto& sentence = corpus.sentence_of(inst);
    corpus::ExemplarPool::Item item;
    item.instance = inst;
    item.sentence_text = sentence.text;
    item.predicate = sentence.tokens.at(inst.pred_index);
    item.gold_answer_json = render_answer_json(inst, sentence);
    pool.items.push_back(std::move(item));
  }
  return pool;
}

}  // namespace srlkit::prompting
