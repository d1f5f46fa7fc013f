// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#include "srlkit/evaluation.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "srlkit/errors.hpp"

namespace srlkit::evaluation {
namespace {

using nlohmann::ordered_json;

std::set<ScoredTuple> as_set(std::span<const ScoredTuple> tuples) {
  std::set<ScoredTuple> out;
  for (const auto& t : tuples)
    if (!t.role.is_verb()) out.insert(t);
  return out;
}

PRF prf_from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
  PRF prf;
  prf.tp = tp;
  prf.fp = fp;
  prf.fn = fn;
  const std::uint64_t n_pred = tp + fp, n_gold = tp + fn;
  prf.precision = n_pred ? static_cast<double>(tp) / static_cast<double>(n_pred) : 0.0;
  prf.recall = n_gold ? static_cast<double>(tp) / static_cast<double>(n_gold) : 0.0;
  prf.f1 = (prf.precision + prf.recall) > 0.0
               ? 2.0 * prf.precision * prf.recall / (prf.precision + prf.recall)
               : 0.0;
  return prf;
}

bool spans_overlap(const ScoredTuple& a, const ScoredTuple& b) {
  return a.instance_id == b.instance_id && a.start <= b.end && b.start <= a.end;
}

bool covers(const ScoredTuple& outer, const ScoredTuple& inner) {
  return outer.instance_id == inner.instance_id && outer.start <= inner.start &&
         outer.end >= inner.end;
}

ordered_json prf_json(const PRF& p) {
  return ordered_json{{"precision", p.precision}, {"recall", p.recall},
                      {"f1", p.f1},               {"tp", p.tp},
                      {"fp", p.fp},               {"fn", p.fn}};
}

PRF prf_from_json(const ordered_json& j) {
  PRF p;
  p.precision = j.value("precision", 0.0);
  p.recall = j.value("recall", 0.0);
  p.f1 = j.value("f1", 0.0);
  p.tp = j.value("tp", std::uint64_t{0});
  p.fp = j.value("fp", std::uint64_t{0});
  p.fn = j.value("fn", std::uint64_t{0});
  return p;
}

}  // namespace

std::vector<ScoredTuple> tuples_from_gold(const corpus::Corpus& corpus) {
  std::vector<ScoredTuple> out;
  for (const auto& inst : corpus.instances)
    for (const auto& arg : inst.gold_args)
      out.push_back(ScoredTuple{inst.id, arg.label, arg.start, arg.end});
  return out;
}

std::vector<ScoredTuple> tuples_from_predictions(
    std::span<const matcher::Prediction> predictions) {
  std::vector<ScoredTuple> out;
  for (const auto& pred : predictions)
    for (const auto& arg : pred.args)
      out.push_back(ScoredTuple{pred.instance_id, arg.role, arg.start, arg.end});
  return out;
}

PRF micro_prf(std::span<const ScoredTuple> pred, std::span<const ScoredTuple> gold) {
  const auto pred_set = as_set(pred);
  const auto gold_set = as_set(gold);
  std::uint64_t tp = 0;
  for (const auto& t : pred_set) tp += gold_set.contains(t) ? 1 : 0;
  return prf_from_counts(tp, pred_set.size() - tp, gold_set.size() - tp);
}

std::map<RoleLabel, PRF> per_role_prf(std::span<const ScoredTuple> pred,
                                      std::span<const ScoredTuple> gold) {
  std::map<RoleLabel, std::pair<std::vector<ScoredTuple>, std::vector<ScoredTuple>>>
      buckets;
  for (const auto& t : pred)
    if (!t.role.is_verb()) buckets[t.role].first.push_back(t);
  for (const auto& t : gold)
    if (!t.role.is_verb()) buckets[t.role].second.push_back(t);

  std::map<RoleLabel, PRF> out;
  for (const auto& [role, pair] : buckets)
    out.emplace(role, micro_prf(pair.first, pair.second));
  return out;
}

ErrorCounts classify_errors(std::span<const ScoredTuple> pred,
                            std::span<const ScoredTuple> gold) {
  const auto pred_set = as_set(pred);
  const auto gold_set = as_set(gold);

  ErrorCounts counts;
  for (const auto& p : pred_set) {
    if (gold_set.contains(p)) continue;

    // discontinuity: the prediction covers a gold argument and its C-
    // continuation in one span
    bool discontinuity = false;
    for (const auto& g : gold_set) {
      if (g.role.kind() != RoleKind::Continuation) continue;
      if (!covers(p, g)) continue;
      for (const auto& head : gold_set) {
        if (head.instance_id != g.instance_id) continue;
        if (head.role.canonical() != g.role.base()) continue;
        if (covers(p, head)) {
          discontinuity = true;
          break;
        }
      }
      if (discontinuity) break;
    }
    if (discontinuity) {
      ++counts.discontinuity;
      continue;
    }

    bool boundary = false;
    for (const auto& g : gold_set)
      if (g.role == p.role && spans_overlap(p, g)) {
        boundary = true;
        break;
      }
    if (boundary) {
      ++counts.boundary;
      continue;
    }

    bool wrong_label = false;
    for (const auto& g : gold_set)
      if (g.instance_id == p.instance_id && g.start == p.start && g.end == p.end &&
          !(g.role == p.role)) {
        wrong_label = true;
        break;
      }
    if (wrong_label) {
      ++counts.wrong_label;
      continue;
    }

    ++counts.spurious;
  }

  for (const auto& g : gold_set)
    if (!pred_set.contains(g)) ++counts.missing;

  return counts;
}

double fleiss_kappa(const RatingMatrix& ratings) {
  const auto& m = ratings.counts;
  if (m.size() < 2) throw Error("fleiss_kappa: need at least 2 items");
  const std::size_t n_categories = m.front().size();
  if (n_categories < 2) throw Error("fleiss_kappa: need at least 2 categories");

  std::uint64_t n_raters = 0;
  for (const auto& row : m) {
    if (row.size() != n_categories) throw Error("fleiss_kappa: ragged matrix");
    std::uint64_t sum = 0;
    for (const auto c : row) sum += c;
    if (n_raters == 0)
      n_raters = sum;
    else if (sum != n_raters)
      throw Error("fleiss_kappa: rows must all sum to the rater count");
  }
  if (n_raters < 2) throw Error("fleiss_kappa: need at least 2 raters");

  const double n = static_cast<double>(n_raters);
  const double n_items = static_cast<double>(m.size());

  double p_bar = 0.0;
  std::vector<double> category_share(n_categories, 0.0);
  for (const auto& row : m) {
    double agree = 0.0;
    for (std::size_t j = 0; j < n_categories; ++j) {
      const double c = static_cast<double>(row[j]);
      agree += c * c;
      category_share[j] += c;
    }
    p_bar += (agree - n) / (n * (n - 1.0));
  }
  p_bar /= n_items;

  double pe = 0.0;
  for (double share : category_share) {
    const double pj = share / (n * n_items);
    pe += pj * pj;
  }

  if (pe >= 1.0)
    throw DegenerateAgreementError(
        "expected agreement is 1; kappa undefined (single category used)");
  return (p_bar - pe) / (1.0 - pe);
}

std::string report_to_json(const EvalReport& report) {
  ordered_json j;
  j["micro"] = prf_json(report.micro);
  ordered_json per_role = ordered_json::object();
  for (const auto& [role, prf] : report.per_role)
    per_role[role.canonical()] = prf_json(prf);
  j["per_role"] = std::move(per_role);
  j["errors"] = ordered_json{{"discontinuity", report.errors.discontinuity},
                             {"boundary", report.errors.boundary},
                             {"wrong_label", report.errors.wrong_label},
                             {"spurious", report.errors.spurious},
                             {"missing", report.errors.missing}};
  if (report.sense_accuracy)
    j["sense_accuracy"] = *report.sense_accuracy;
  else
    j["sense_accuracy"] = nullptr;
  j["n_instances"] = report.n_instances;
  j["config_hash"] = report.config_hash;
  j["cache_hash"] = report.cache_hash;
  return j.dump(2);
}

EvalReport report_from_json(std::string_view json_text) {
  ordered_json j = ordered_json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    throw Error("report_from_json: not a JSON object");
  EvalReport report;
  report.micro = prf_from_json(j.at("micro"));
  for (const auto& [name, prf] : j.at("per_role").items())
    report.per_role.emplace(RoleLabel::parse(name), prf_from_json(prf));
  const auto& errors = j.at("errors");
  report.errors.discontinuity = errors.value("discontinuity", std::uint64_t{0});
  report.errors.boundary = errors.value("boundary", std::uint64_t{0});
  report.errors.wrong_label = errors.value("wrong_label", std::uint64_t{0});
  report.errors.spurious = errors.value("spurious", std::uint64_t{0});
  report.errors.missing = errors.value("missing", std::uint64_t{0});
  if (j.contains("sense_accuracy") && !j["sense_accuracy"].is_null())
    report.sense_accuracy = j["sense_accuracy"].get<double>();
  report.n_instances = j.value("n_instances", std::uint64_t{0});
  report.config_hash = j.value("config_hash", "");
  report.cache_hash = j.value("cache_hash", "");
  return report;
}

std::string report_to_table(const EvalReport& report) {
  std::ostringstream out;
  auto line = [&](std::string_view name, const PRF& p) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-10s %8.4f %8.4f %8.4f %6llu %6llu %6llu\n",
                  std::string(name).c_str(), p.precision, p.recall, p.f1,
                  static_cast<unsigned long long>(p.tp),
                  static_cast<unsigned long long>(p.fp),
                  static_cast<unsigned long long>(p.fn));
    out << buf;
  };
  out << "role              P        R       F1     TP     FP     FN\n";
  line("micro", report.micro);
  for (const auto& [role, prf] : report.per_role) line(role.canonical(), prf);
  out << "errors: discontinuity=" << report.errors.discontinuity
      << " boundary=" << report.errors.boundary
      << " wrong_label=" << report.errors.wrong_label
      << " spurious=" << report.errors.spurious
      << " missing=" << report.errors.missing << "\n";
  if (report.sense_accuracy) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "sense accuracy: %.4f\n", *report.sense_accuracy);
    out << buf;
  }
  return out.str();
}

std::string per_role_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "role,precision,recall,f1,tp,fp,fn\n";
  for (const auto& [role, p] : report.per_role) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%llu,%llu,%llu\n",
                  role.canonical().c_str(), p.precision, p.recall, p.f1,
                  static_cast<unsigned long long>(p.tp),
                  static_cast<unsigned long long>(p.fp),
                  static_cast<unsigned long long>(p.fn));
    out << buf;
  }
  return out.str();
}

}  // namespace srlkit::evaluation
