// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#include "srlkit/matcher.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <numeric>
#include <sstream>

namespace srlkit::matcher {
namespace {

struct Block {
  std::size_t a = 0, b = 0, len = 0;
};

// First maximal common run of a[alo,ahi) x b[blo,bhi): longest, ties broken
// by earliest position in a, then earliest in b. Rolling-row DP over suffix
// lengths; row-major scan makes the first strictly-longer hit the winner.
template <typename Seq>
Block longest_common_run(const Seq& a, std::size_t alo, std::size_t ahi,
                         const Seq& b, std::size_t blo, std::size_t bhi) {
  Block best{alo, blo, 0};
  const std::size_t width = bhi - blo;
  std::vector<std::size_t> prev(width + 1, 0), cur(width + 1, 0);
  for (std::size_t i = alo; i < ahi; ++i) {
    for (std::size_t j = blo; j < bhi; ++j) {
      const std::size_t jj = j - blo + 1;
      if (a[i] == b[j]) {
        cur[jj] = prev[jj - 1] + 1;
        if (cur[jj] > best.len)
          best = Block{i + 1 - cur[jj], j + 1 - cur[jj], cur[jj]};
      } else {
        cur[jj] = 0;
      }
    }
    std::swap(prev, cur);
  }
  return best;
}

template <typename Seq>
std::size_t matched_total(const Seq& a, const Seq& b) {
  std::size_t total = 0;
  std::vector<std::array<std::size_t, 4>> queue;
  queue.push_back({0, a.size(), 0, b.size()});
  while (!queue.empty()) {
    const auto [alo, ahi, blo, bhi] = queue.back();
    queue.pop_back();
    if (alo >= ahi || blo >= bhi) continue;
    const Block blk = longest_common_run(a, alo, ahi, b, blo, bhi);
    if (blk.len == 0) continue;
    total += blk.len;
    queue.push_back({alo, blk.a, blo, blk.b});
    queue.push_back({blk.a + blk.len, ahi, blk.b + blk.len, bhi});
  }
  return total;
}

template <typename Seq>
double ratio_impl(const Seq& a, const Seq& b) {
  const std::size_t denom = a.size() + b.size();
  if (denom == 0) return 1.0;
  return 2.0 * static_cast<double>(matched_total(a, b)) /
         static_cast<double>(denom);
}

// Paper-faithful fuzzy window search over any indexable sequence. Slices use
// Python semantics: out-of-range boundaries clamp, inverted ranges are empty.
template <typename Seq>
struct WindowSearch {
  const Seq& query;
  const Seq& corpus;

  std::pair<std::size_t, std::size_t> clamp(std::ptrdiff_t lo,
                                            std::ptrdiff_t hi) const {
    const auto n = static_cast<std::ptrdiff_t>(corpus.size());
    lo = std::clamp<std::ptrdiff_t>(lo, 0, n);
    hi = std::clamp<std::ptrdiff_t>(hi, lo, n);
    return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
  }

  double slice_ratio(std::ptrdiff_t lo, std::ptrdiff_t hi) const {
    const auto [l, h] = clamp(lo, hi);
    return ratio_impl(query, corpus.subview(l, h));
  }

  // Returns half-open [start, end) plus similarity of the winning slice.
  std::tuple<std::size_t, std::size_t, double> run(int step, int flexity) const {
    const auto lq = static_cast<std::ptrdiff_t>(query.size());
    const auto lc = static_cast<std::ptrdiff_t>(corpus.size());
    const auto t = static_cast<std::ptrdiff_t>(step);

    if (lq == 0) return {0, 0, ratio_impl(query, corpus.subview(0, 0))};

    // Phase 1: stride-t window scan, first strict improvement wins. The
    // printed pseudocode advances m only on improvement, which never
    // terminates on a flat stretch; m advances every iteration here.
    double sim = 0.0;
    std::ptrdiff_t bl = 0, br = 0;
    for (std::ptrdiff_t m = 0; m + lq - t < lc; m += t) {
      if (const double s = slice_ratio(m, m + lq); s > sim) {
        sim = s;
        bl = m;
        br = std::min(m + lq, lc);
      }
    }

    // Phase 2: perturb each boundary independently around the fixed phase-1
    // window [tl, tr), strict improvements only, offsets clamped at 0.
    double sim_l = sim, sim_r = sim;
    const std::ptrdiff_t tl = bl, tr = br;
    for (std::ptrdiff_t i = 1; i <= flexity; ++i) {
      if (const double s = slice_ratio(tl - i, tr); s > sim_l) {
        sim_l = s;
        bl = std::max<std::ptrdiff_t>(tl - i, 0);
      }
      if (const double s = slice_ratio(tl + i, tr); s > sim_l) {
        sim_l = s;
        bl = tl + i;
      }
      if (const double s = slice_ratio(tl, tr - i); s > sim_r) {
        sim_r = s;
        br = std::max<std::ptrdiff_t>(tr - i, 0);
      }
      if (const double s = slice_ratio(tl, tr + i); s > sim_r) {
        sim_r = s;
        br = std::min(tr + i, lc);
      }
    }

    // The two boundaries were refined independently; their combination can
    // score below slices already measured above. Keep the combined slice
    // unless one of those is strictly better, so the result never falls
    // under the phase-1 optimum.
    std::ptrdiff_t lo = bl, hi = br;
    double best = slice_ratio(bl, br);
    const std::array<std::pair<std::ptrdiff_t, std::ptrdiff_t>, 3> fallbacks{
        {{bl, tr}, {tl, br}, {tl, tr}}};
    for (const auto& [clo, chi] : fallbacks) {
      if (const double s = slice_ratio(clo, chi); s > best) {
        best = s;
        lo = clo;
        hi = chi;
      }
    }
    const auto [l, h] = clamp(lo, hi);
    return {l, h, best};
  }
};

struct CharSeq {
  std::string_view data;
  std::size_t size() const { return data.size(); }
  char operator[](std::size_t i) const { return data[i]; }
  CharSeq subview(std::size_t lo, std::size_t hi) const {
    return CharSeq{data.substr(lo, hi - lo)};
  }
};

struct TokenSeq {
  std::span<const std::string> data;
  std::size_t size() const { return data.size(); }
  const std::string& operator[](std::size_t i) const { return data[i]; }
  TokenSeq subview(std::size_t lo, std::size_t hi) const {
    return TokenSeq{data.subspan(lo, hi - lo)};
  }
};

std::string join_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> split_ws(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

double ratio(std::string_view a, std::string_view b) {
  return ratio_impl(CharSeq{a}, CharSeq{b});
}

double token_ratio(std::span<const std::string> a, std::span<const std::string> b) {
  return ratio_impl(TokenSeq{a}, TokenSeq{b});
}

MatchResult match(std::string_view query, std::string_view corpus,
                  const MatchParams& params) {
  const WindowSearch<CharSeq> search{CharSeq{query}, CharSeq{corpus}};
  const auto [lo, hi, sim] = search.run(std::max(params.step, 1), params.flexity);
  return MatchResult{std::string(corpus.substr(lo, hi - lo)), lo, hi, sim};
}

MatchResult match_tokens(std::span<const std::string> query,
                         std::span<const std::string> corpus,
                         const MatchParams& params) {
  const WindowSearch<TokenSeq> search{TokenSeq{query}, TokenSeq{corpus}};
  const auto [lo, hi, sim] = search.run(std::max(params.step, 1), params.flexity);
  return MatchResult{join_tokens(corpus.subspan(lo, hi - lo)), lo, hi, sim};
}

Prediction ground_prediction(const extraction::RawPrediction& raw,
                             const corpus::Sentence& sentence,
                             const GroundParams& params) {
  Prediction out;
  out.predicate = raw.predicate;
  out.notes = raw.parse_notes;

  const auto offsets = sentence.token_offsets();

  for (const auto& [role, text] : raw.args) {
    if (params.match.unit == MatchUnit::Token) {
      const std::vector<std::string> query = split_ws(text);
      const MatchResult res = match_tokens(query, sentence.tokens, params.match);
      if (res.similarity < params.floor || res.start >= res.end) {
        out.notes.push_back("dropped " + role.canonical() + " argument '" + text +
                            "': best match similarity below floor");
        continue;
      }
      out.args.push_back(GroundedArg{role, res.start, res.end - 1, res.substring,
                                     res.similarity});
      continue;
    }

    const MatchResult res = match(text, sentence.text, params.match);
    if (res.similarity < params.floor) {
      out.notes.push_back("dropped " + role.canonical() + " argument '" + text +
                          "': best match similarity below floor");
      continue;
    }
    // Snap the character range to the minimal covering token span.
    std::size_t first = sentence.tokens.size(), last = 0;
    bool any = false;
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      const std::size_t tok_lo = offsets[i];
      const std::size_t tok_hi = tok_lo + sentence.tokens[i].size();
      if (tok_lo < res.end && tok_hi > res.start) {
        if (!any) first = i;
        last = i;
        any = true;
      }
    }
    if (!any) {
      out.notes.push_back("dropped " + role.canonical() + " argument '" + text +
                          "': match covers no token");
      continue;
    }
    std::string surface = sentence.tokens[first];
    for (std::size_t i = first + 1; i <= last; ++i)
      surface += " " + sentence.tokens[i];
    out.args.push_back(GroundedArg{role, first, last, std::move(surface),
                                   res.similarity});
  }
  return out;
}

}  // namespace srlkit::matcher
