// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#include "srlkit/corpus.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "srlkit/errors.hpp"

namespace srlkit::corpus {
namespace {

using nlohmann::ordered_json;

std::vector<std::string> split_columns(std::string_view line) {
  std::vector<std::string> cols;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) cols.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return cols;
}

bool blank(std::string_view line) {
  return std::ranges::all_of(
      line, [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

struct SidecarPredicate {
  std::optional<std::size_t> pred_index;
  std::string lemma;
  std::string sense;
};

struct SidecarSentence {
  std::string id;
  std::vector<SidecarPredicate> predicates;
};

std::vector<SidecarSentence> parse_sidecar(std::string_view text) {
  ordered_json doc = ordered_json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || !doc.contains("sentences") ||
      !doc["sentences"].is_array())
    throw SchemaViolationError("sidecar: expected {\"sentences\": [...]}");
  std::vector<SidecarSentence> out;
  for (const auto& s : doc["sentences"]) {
    if (!s.is_object()) throw SchemaViolationError("sidecar: sentence entries must be objects");
    SidecarSentence sent;
    sent.id = s.value("id", "");
    if (s.contains("predicates")) {
      for (const auto& p : s["predicates"]) {
        SidecarPredicate pred;
        if (p.contains("pred_index")) pred.pred_index = p["pred_index"].get<std::size_t>();
        pred.lemma = p.value("lemma", "");
        pred.sense = p.value("sense", "");
        sent.predicates.push_back(std::move(pred));
      }
    }
    out.push_back(std::move(sent));
  }
  return out;
}

struct RawSpan {
  RoleLabel label;
  std::size_t start = 0, end = 0;
};

// Decodes one predicate column of a sentence block. base_line is the 1-based
// file line of the block's first row.
std::vector<RawSpan> decode_column(const std::vector<std::vector<std::string>>& rows,
                                   std::size_t col, int base_line) {
  std::vector<RawSpan> spans;
  std::optional<RoleLabel> open;
  std::size_t open_start = 0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string& tag = rows[r][col];
    const int line = base_line + static_cast<int>(r);
    if (tag == "*") continue;
    if (tag == "*)") {
      if (!open) throw UnbalancedBracketError("close without open bracket", line);
      spans.push_back(RawSpan{*open, open_start, r});
      open.reset();
      continue;
    }
    if (tag.front() == '(') {
      const std::size_t star = tag.find('*');
      if (star == std::string::npos || star < 2)
        throw UnbalancedBracketError("malformed tag '" + tag + "'", line);
      if (open)
        throw UnbalancedBracketError("nested open bracket in tag '" + tag + "'", line);
      open = RoleLabel::parse(std::string_view(tag).substr(1, star - 1));
      open_start = r;
      const std::string_view rest = std::string_view(tag).substr(star + 1);
      if (rest.empty()) continue;  // "(X*"
      if (rest == ")") {           // "(X*)"
        spans.push_back(RawSpan{*open, open_start, r});
        open.reset();
        continue;
      }
      throw UnbalancedBracketError("malformed tag '" + tag + "'", line);
    }
    throw UnbalancedBracketError("malformed tag '" + tag + "'", line);
  }
  if (open)
    throw UnbalancedBracketError("unclosed bracket for label " + open->canonical(),
                                 base_line + static_cast<int>(rows.size()) - 1);
  return spans;
}

Corpus parse_blocks(std::string_view text,
                    const std::vector<SidecarSentence>* sidecar) {
  // Split into sentence blocks. Sentences are separated by one blank line;
  // a separator with no content before it (leading blank or double blank)
  // is an empty sentence, tolerated only at end of file.
  std::vector<std::pair<std::vector<std::vector<std::string>>, int>> blocks;
  std::vector<std::vector<std::string>> rows;
  int base_line = 1, line_no = 0, dangling_blank = 0;

  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) {
      if (rows.empty()) {
        if (dangling_blank == 0) dangling_blank = line_no;
      } else {
        blocks.emplace_back(std::move(rows), base_line);
        rows.clear();
      }
      continue;
    }
    if (dangling_blank != 0)
      throw EmptySentenceError("empty sentence block at line " +
                               std::to_string(dangling_blank));
    if (rows.empty()) base_line = line_no;
    auto cols = split_columns(line);
    if (!rows.empty() && cols.size() != rows.front().size())
      throw ColumnCountMismatchError(
          "expected " + std::to_string(rows.front().size()) + " columns, got " +
              std::to_string(cols.size()),
          line_no);
    rows.push_back(std::move(cols));
  }
  if (!rows.empty()) blocks.emplace_back(std::move(rows), base_line);

  Corpus corpus;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& [block, first_line] = blocks[b];
    const SidecarSentence* meta =
        sidecar && b < sidecar->size() ? &(*sidecar)[b] : nullptr;

    std::vector<std::string> tokens;
    tokens.reserve(block.size());
    for (const auto& row : block) tokens.push_back(row[0]);

    Sentence sentence = Sentence::make(
        meta && !meta->id.empty() ? meta->id : "s" + std::to_string(b),
        std::move(tokens));
    const std::size_t n_cols = block.front().size();

    for (std::size_t col = 1; col < n_cols; ++col) {
      const auto spans = decode_column(block, col, first_line);
      PredicateInstance inst;
      inst.id = sentence.id + "#" + std::to_string(col - 1);
      inst.sentence_index = corpus.sentences.size();

      const SidecarPredicate* pmeta =
          meta && col - 1 < meta->predicates.size() ? &meta->predicates[col - 1]
                                                    : nullptr;
      if (pmeta && pmeta->pred_index && *pmeta->pred_index >= sentence.tokens.size())
        throw SchemaViolationError("sidecar pred_index out of range for " + inst.id);

      std::optional<std::size_t> verb_at;
      for (const auto& span : spans) {
        if (span.label.is_verb()) {
          if (verb_at)
            corpus.notes.push_back(
                {inst.id, "MultipleVerbSpans", "keeping the first V span"});
          else
            verb_at = span.start;
          continue;
        }
        ArgumentSpan arg;
        arg.label = span.label;
        arg.start = span.start;
        arg.end = span.end;
        arg.surface = sentence.tokens[span.start];
        for (std::size_t i = span.start + 1; i <= span.end; ++i)
          arg.surface += " " + sentence.tokens[i];
        inst.gold_args.push_back(std::move(arg));
      }

      if (verb_at) {
        inst.pred_index = *verb_at;
      } else if (pmeta && pmeta->pred_index) {
        inst.pred_index = *pmeta->pred_index;
        corpus.notes.push_back(
            {inst.id, "MissingVerbSpan", "no V tag; predicate index from sidecar"});
      } else {
        inst.pred_index = 0;
        corpus.notes.push_back(
            {inst.id, "MissingVerbSpan", "no V tag in predicate column"});
      }

      inst.lemma = pmeta && !pmeta->lemma.empty()
                       ? pmeta->lemma
                       : lowercase(sentence.tokens[inst.pred_index]);
      if (pmeta) inst.gold_sense = pmeta->sense;
      corpus.instances.push_back(std::move(inst));
    }
    corpus.sentences.push_back(std::move(sentence));
  }
  return corpus;
}

std::uint64_t bounded_draw(std::mt19937_64& gen, std::uint64_t n) {
  // Rejection sampling keeps the draw unbiased and identical on every
  // platform (mt19937_64 output is pinned by the standard; the stdlib
  // distributions are not).
  const std::uint64_t limit = n * (UINT64_MAX / n);
  std::uint64_t x;
  do {
    x = gen();
  } while (x >= limit);
  return x % n;
}

}  // namespace

Sentence Sentence::make(std::string id, std::vector<std::string> tokens) {
  if (tokens.empty()) throw EmptySentenceError("sentence '" + id + "' has no tokens");
  Sentence s;
  s.id = std::move(id);
  s.tokens = std::move(tokens);
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    if (i) s.text += ' ';
    s.text += s.tokens[i];
  }
  return s;
}

std::vector<std::size_t> Sentence::token_offsets() const {
  std::vector<std::size_t> offsets;
  offsets.reserve(tokens.size() + 1);
  std::size_t pos = 0;
  for (const auto& tok : tokens) {
    offsets.push_back(pos);
    pos += tok.size() + 1;
  }
  offsets.push_back(pos);
  return offsets;
}

Corpus parse_props(std::string_view column_text) {
  return parse_blocks(column_text, nullptr);
}

Corpus parse_props(std::string_view column_text, std::string_view sidecar_json) {
  const auto sidecar = parse_sidecar(sidecar_json);
  return parse_blocks(column_text, &sidecar);
}

Corpus load_props_file(const std::filesystem::path& props,
                       const std::optional<std::filesystem::path>& sidecar) {
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string text = slurp(props);
  if (sidecar) return parse_props(text, slurp(*sidecar));
  return parse_props(text);
}

std::string serialize_props(const Sentence& sentence,
                            std::span<const PredicateInstance> instances) {
  std::vector<std::vector<RawSpan>> columns;
  columns.reserve(instances.size());
  for (const auto& inst : instances) {
    if (inst.pred_index >= sentence.tokens.size())
      throw Error("pred_index out of bounds in instance " + inst.id);
    std::vector<RawSpan> spans;
    spans.push_back(RawSpan{RoleLabel::parse("V"), inst.pred_index, inst.pred_index});
    for (const auto& arg : inst.gold_args) {
      if (arg.start > arg.end || arg.end >= sentence.tokens.size())
        throw Error("argument span out of bounds in instance " + inst.id);
      spans.push_back(RawSpan{arg.label, arg.start, arg.end});
    }
    std::ranges::sort(spans, {}, [](const RawSpan& s) { return s.start; });
    for (std::size_t i = 1; i < spans.size(); ++i)
      if (spans[i].start <= spans[i - 1].end)
        throw OverlappingSpansError("overlapping spans in instance " + inst.id);
    columns.push_back(std::move(spans));
  }

  std::string out;
  for (std::size_t r = 0; r < sentence.tokens.size(); ++r) {
    out += sentence.tokens[r];
    for (const auto& spans : columns) {
      std::string tag = "*";
      for (const auto& span : spans) {
        if (span.start == r && span.end == r)
          tag = "(" + span.label.canonical() + "*)";
        else if (span.start == r)
          tag = "(" + span.label.canonical() + "*";
        else if (span.end == r)
          tag = "*)";
      }
      out += " " + tag;
    }
    out += "\n";
  }
  return out;
}

std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    std::vector<PredicateInstance> block;
    for (const auto& inst : corpus.instances)
      if (inst.sentence_index == s) block.push_back(inst);
    if (s) out += "\n";
    out += serialize_props(corpus.sentences[s], block);
  }
  return out;
}

std::string serialize_sidecar(const Corpus& corpus) {
  ordered_json sentences = ordered_json::array();
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    ordered_json preds = ordered_json::array();
    for (const auto& inst : corpus.instances) {
      if (inst.sentence_index != s) continue;
      ordered_json p;
      p["pred_index"] = inst.pred_index;
      p["lemma"] = inst.lemma;
      if (!inst.gold_sense.empty()) p["sense"] = inst.gold_sense;
      preds.push_back(std::move(p));
    }
    ordered_json sent;
    sent["id"] = corpus.sentences[s].id;
    sent["predicates"] = std::move(preds);
    sentences.push_back(std::move(sent));
  }
  ordered_json doc;
  doc["sentences"] = std::move(sentences);
  return doc.dump(2) + "\n";
}

std::vector<std::size_t> sample_exemplar_indices(const ExemplarPool& pool,
                                                 std::size_t k,
                                                 std::string_view exclude_id) {
  std::vector<std::size_t> candidates;
  candidates.reserve(pool.items.size());
  for (std::size_t i = 0; i < pool.items.size(); ++i)
    if (pool.items[i].instance.id != exclude_id) candidates.push_back(i);

  if (k > candidates.size())
    throw PoolTooSmallError("requested " + std::to_string(k) +
                            " exemplars from a pool of " +
                            std::to_string(candidates.size()));
  if (k == 0) return {};

  std::mt19937_64 gen(pool.rng_seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j =
        i + static_cast<std::size_t>(bounded_draw(gen, candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
  }
  candidates.resize(k);
  return candidates;
}

std::vector<const ExemplarPool::Item*> sample_exemplars(const ExemplarPool& pool,
                                                        std::size_t k,
                                                        std::string_view exclude_id) {
  std::vector<const ExemplarPool::Item*> out;
  for (const std::size_t idx : sample_exemplar_indices(pool, k, exclude_id))
    out.push_back(&pool.items[idx]);
  return out;
}

}  // namespace srlkit::corpus
