// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#include "srlkit/runner.hpp"

#include <atomic>
#include <chrono>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "srlkit/errors.hpp"
#include "srlkit/hashing.hpp"

namespace srlkit::runner {
namespace {

using nlohmann::ordered_json;

std::string backend_kind_name(gateway::BackendConfig::Kind kind) {
  switch (kind) {
    case gateway::BackendConfig::Kind::Http: return "http";
    case gateway::BackendConfig::Kind::Replay: return "replay";
    case gateway::BackendConfig::Kind::Mock: return "mock";
  }
  return "mock";
}

struct LoadedInputs {
  corpus::Corpus dataset;
  framebank::FrameBank bank;
  corpus::ExemplarPool pool;
};

LoadedInputs load_inputs(const ExperimentConfig& config) {
  LoadedInputs inputs;
  inputs.dataset = corpus::load_props_file(
      config.dataset,
      config.sidecar.empty() ? std::nullopt
                             : std::optional(config.sidecar));
  inputs.bank = framebank::FrameBank::load(
      config.frames,
      config.noncore.empty() ? std::nullopt : std::optional(config.noncore));

  if (config.pool.empty() || config.pool == config.dataset) {
    inputs.pool = prompting::build_exemplar_pool(inputs.dataset, config.seed);
  } else {
    const corpus::Corpus pool_corpus = corpus::load_props_file(
        config.pool, config.pool_sidecar.empty()
                         ? std::nullopt
                         : std::optional(config.pool_sidecar));
    inputs.pool = prompting::build_exemplar_pool(pool_corpus, config.seed);
  }
  return inputs;
}

prompting::Variant effective_variant(const ExperimentConfig& config) {
  return config.with_description ? config.variant
                                 : prompting::Variant::NoDescription;
}

// Role object for an exemplar block: first listed sense of its lemma united
// with the non-core inventory; inventory alone when the lemma is unknown.
framebank::RoleList exemplar_roles(const framebank::FrameBank& bank,
                                   const std::string& lemma) {
  if (bank.has_lemma(lemma)) {
    const auto& senses = bank.senses_of(lemma);
    if (!senses.empty()) return bank.retrieve_roles(senses.front());
  }
  return bank.noncore().roles;
}

InstanceRecord process_instance(const ExperimentConfig& config,
                                const LoadedInputs& inputs,
                                gateway::Gateway& gw,
                                const corpus::PredicateInstance& inst) {
  const auto started = std::chrono::steady_clock::now();
  const corpus::Sentence& sentence = inputs.dataset.sentence_of(inst);
  const std::string& predicate = inputs.dataset.predicate_surface(inst);

  InstanceRecord rec;
  rec.instance_id = inst.id;
  rec.grounded.instance_id = inst.id;
  rec.grounded.predicate = predicate;

  auto finish = [&]() -> InstanceRecord& {
    rec.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - started)
                         .count();
    rec.grounded.chosen_sense = rec.chosen_sense;
    return rec;
  };

  gateway::CompletionRequest base_request;
  base_request.model = config.backend.model;

  // Stage I: predicate disambiguation, skipped for single-sense lemmas.
  const framebank::Roleset* roleset = nullptr;
  framebank::RoleList roles;
  if (!inputs.bank.has_lemma(inst.lemma)) {
    rec.sense_skipped = true;
    rec.notes.push_back("lemma '" + inst.lemma +
                        "' not in frame bank; using non-core roles only");
    roles = inputs.bank.noncore().roles;
  } else {
    const auto& senses = inputs.bank.senses_of(inst.lemma);
    if (senses.size() == 1) {
      rec.sense_skipped = true;
      roleset = &senses.front();
    } else {
      std::vector<std::string> options;
      options.reserve(senses.size());
      for (const auto& sense : senses) options.push_back(sense.description);
      const auto prompt = prompting::build_sense_prompt(sentence.text, predicate,
                                                        options, inst.id);
      rec.sense_prompt = prompt.text;
      gateway::CompletionRequest request = base_request;
      request.prompt = prompt.text;
      try {
        rec.sense_response = gw.complete(request);
        const auto choice = extraction::parse_choice(rec.sense_response, options);
        roleset = &senses[choice.index];
      } catch (const Error& e) {
        rec.notes.push_back(std::string("stage I failed: ") + e.what());
        return finish();
      }
    }
    if (roleset) {
      rec.chosen_sense = roleset->sense_id;
      roles = inputs.bank.retrieve_roles(*roleset);
    }
  }

  // Stage III: k-shot argument labeling (Stage II is the role retrieval
  // above).
  prompting::PromptOptions opts;
  opts.variant = effective_variant(config);
  opts.fix_typos = config.fix_typos;

  std::vector<prompting::PromptExemplar> exemplars;
  try {
    const auto picks =
        corpus::sample_exemplars(inputs.pool, config.shots, inst.id);
    exemplars.reserve(picks.size());
    for (const auto* item : picks) {
      prompting::PromptExemplar ex;
      ex.id = item->instance.id;
      ex.sentence = item->sentence_text;
      ex.predicate = item->predicate;
      ex.roles = exemplar_roles(inputs.bank, item->instance.lemma);
      ex.answer_json = item->gold_answer_json;
      exemplars.push_back(std::move(ex));
    }
  } catch (const PoolTooSmallError& e) {
    rec.notes.push_back(std::string("exemplar sampling failed: ") + e.what());
    return finish();
  }

  try {
    const auto prompt = prompting::build_label_prompt(sentence.text, predicate,
                                                      roles, opts, exemplars,
                                                      inst.id);
    rec.label_prompt = prompt.text;
    rec.exemplar_ids = prompt.exemplar_ids;

    gateway::CompletionRequest request = base_request;
    request.prompt = prompt.text;
    rec.label_response = gw.complete(request);

    rec.raw = extraction::parse_argument_json(rec.label_response, roles);

    matcher::GroundParams ground;
    ground.match.step = config.matcher.step;
    ground.match.flexity = config.matcher.flexity;
    ground.match.unit = config.matcher.unit;
    ground.floor = config.matcher.floor;
    matcher::Prediction grounded =
        matcher::ground_prediction(rec.raw, sentence, ground);
    grounded.instance_id = inst.id;
    grounded.chosen_sense = rec.chosen_sense;
    rec.grounded = std::move(grounded);
  } catch (const Error& e) {
    rec.notes.push_back(std::string("stage III failed: ") + e.what());
    rec.grounded.args.clear();
  }
  return finish();
}

ordered_json grounded_args_json(const matcher::Prediction& pred) {
  ordered_json args = ordered_json::array();
  for (const auto& arg : pred.args) {
    ordered_json a;
    a["role"] = arg.role.canonical();
    a["start"] = arg.start;
    a["end"] = arg.end;
    a["text"] = arg.text;
    a["similarity"] = arg.similarity;
    args.push_back(std::move(a));
  }
  return args;
}

ordered_json prediction_json(const InstanceRecord& rec) {
  ordered_json j;
  j["instance"] = rec.instance_id;
  j["predicate"] = rec.grounded.predicate;
  j["sense"] = rec.chosen_sense;
  j["sense_skipped"] = rec.sense_skipped;
  j["args"] = grounded_args_json(rec.grounded);
  ordered_json notes = ordered_json::array();
  for (const auto& n : rec.notes) notes.push_back(n);
  for (const auto& n : rec.grounded.notes) notes.push_back(n);
  j["notes"] = std::move(notes);
  return j;
}

}  // namespace

void validate(const ExperimentConfig& config) {
  if (config.dataset.empty()) throw ConfigError("dataset path is required");
  if (config.frames.empty()) throw ConfigError("frames path is required");
  if (config.matcher.step < 1) throw ConfigError("match step must be >= 1");
  if (config.matcher.flexity < 0) throw ConfigError("flexity must be >= 0");
  if (config.matcher.floor < 0.0 || config.matcher.floor > 1.0)
    throw ConfigError("similarity floor must be in [0, 1]");
  if (config.backend.kind == gateway::BackendConfig::Kind::Http &&
      config.backend.endpoint.empty())
    throw ConfigError("http backend requires --endpoint");
  if (config.backend.kind == gateway::BackendConfig::Kind::Replay &&
      config.backend.cache_path.empty())
    throw ConfigError("replay backend requires a cache path");
}

std::string config_json(const ExperimentConfig& config) {
  ordered_json j;
  j["dataset"] = config.dataset.string();
  j["sidecar"] = config.sidecar.string();
  j["frames"] = config.frames.string();
  j["noncore"] = config.noncore.string();
  j["pool"] = config.pool.string();
  j["pool_sidecar"] = config.pool_sidecar.string();
  j["backend"] = ordered_json{{"kind", backend_kind_name(config.backend.kind)},
                              {"endpoint", config.backend.endpoint},
                              {"model", config.backend.model},
                              {"api_key_env", config.backend.api_key_env},
                              {"cache_path", config.backend.cache_path},
                              {"record", config.backend.record},
                              {"max_parallel", config.backend.max_parallel}};
  j["variant"] = std::string(prompting::to_string(config.variant));
  j["shots"] = config.shots;
  j["seed"] = config.seed;
  j["matcher"] = ordered_json{
      {"step", config.matcher.step},
      {"flexity", config.matcher.flexity},
      {"unit", config.matcher.unit == matcher::MatchUnit::Token ? "token"
                                                                : "character"},
      {"floor", config.matcher.floor}};
  j["with_description"] = config.with_description;
  j["fix_typos"] = config.fix_typos;
  j["limit"] = config.limit;
  return j.dump(2);
}

RunResult run_pipeline(const ExperimentConfig& config,
                       std::shared_ptr<gateway::Backend> injected) {
  validate(config);
  const LoadedInputs inputs = load_inputs(config);
  gateway::Gateway gw(config.backend, std::move(injected));

  std::size_t count = inputs.dataset.instances.size();
  if (config.limit > 0) count = std::min(count, config.limit);

  RunResult result;
  result.records.resize(count);

  const int n_workers =
      std::max(1, std::min<int>(config.backend.max_parallel,
                                static_cast<int>(count ? count : 1)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      // Failure isolation: a crash in one instance must not take down the
      // run; typed errors are already handled inside.
      try {
        result.records[i] =
            process_instance(config, inputs, gw, inputs.dataset.instances[i]);
      } catch (const std::exception& e) {
        InstanceRecord rec;
        rec.instance_id = inputs.dataset.instances[i].id;
        rec.grounded.instance_id = rec.instance_id;
        rec.notes.push_back(std::string("instance failed: ") + e.what());
        result.records[i] = std::move(rec);
      }
    }
  };
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> workers;
    workers.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) workers.emplace_back(work);
    for (auto& t : workers) t.join();
  }

  // Scoring over the processed slice only.
  corpus::Corpus scored = inputs.dataset;
  scored.instances.resize(count);
  const auto gold = evaluation::tuples_from_gold(scored);
  std::vector<matcher::Prediction> predictions;
  predictions.reserve(count);
  for (const auto& rec : result.records) predictions.push_back(rec.grounded);
  const auto pred = evaluation::tuples_from_predictions(predictions);

  evaluation::EvalReport report;
  report.micro = evaluation::micro_prf(pred, gold);
  report.per_role = evaluation::per_role_prf(pred, gold);
  report.errors = evaluation::classify_errors(pred, gold);
  report.n_instances = count;

  std::uint64_t with_gold_sense = 0, sense_correct = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const auto& inst = scored.instances[i];
    if (inst.gold_sense.empty()) continue;
    ++with_gold_sense;
    if (result.records[i].chosen_sense == inst.gold_sense) ++sense_correct;
  }
  if (with_gold_sense > 0)
    report.sense_accuracy =
        static_cast<double>(sense_correct) / static_cast<double>(with_gold_sense);

  result.config_hash = content_hash(config_json(config));
  result.cache_hash = gw.cache_hash();
  report.config_hash = result.config_hash;
  report.cache_hash = result.cache_hash;
  result.report = std::move(report);
  result.stats = gw.stats();

  if (!config.out_dir.empty()) write_outputs(result, config);
  return result;
}

std::vector<GridCell> run_grid(const ExperimentConfig& base,
                               std::span<const std::size_t> shots,
                               std::span<const prompting::Variant> variants,
                               std::shared_ptr<gateway::Backend> injected) {
  std::vector<GridCell> cells;
  for (const auto variant : variants) {
    for (const auto k : shots) {
      GridCell cell;
      cell.variant = variant;
      cell.shots = k;
      ExperimentConfig config = base;
      config.variant = variant;
      config.shots = k;
      config.out_dir.clear();
      try {
        cell.report = run_pipeline(config, injected).report;
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::string predictions_jsonl(const RunResult& result) {
  std::string out;
  for (const auto& rec : result.records) {
    out += prediction_json(rec).dump();
    out += "\n";
  }
  return out;
}

std::string records_jsonl(const RunResult& result, bool include_timing) {
  std::string out;
  for (const auto& rec : result.records) {
    ordered_json j = prediction_json(rec);
    j["sense_prompt"] = rec.sense_prompt;
    j["sense_response"] = rec.sense_response;
    j["label_prompt"] = rec.label_prompt;
    j["label_response"] = rec.label_response;
    ordered_json raw = ordered_json::array();
    for (const auto& [role, text] : rec.raw.args)
      raw.push_back(ordered_json{{"role", role.canonical()}, {"text", text}});
    j["raw_args"] = std::move(raw);
    ordered_json ex = ordered_json::array();
    for (const auto& id : rec.exemplar_ids) ex.push_back(id);
    j["exemplars"] = std::move(ex);
    if (include_timing) j["elapsed_ms"] = rec.elapsed_ms;
    out += j.dump();
    out += "\n";
  }
  return out;
}

std::string grid_to_json(std::span<const GridCell> cells) {
  ordered_json rows = ordered_json::array();
  for (const auto& cell : cells) {
    ordered_json row;
    row["variant"] = std::string(prompting::to_string(cell.variant));
    row["shots"] = cell.shots;
    if (cell.report)
      row["report"] =
          ordered_json::parse(evaluation::report_to_json(*cell.report));
    else
      row["error"] = cell.error;
    rows.push_back(std::move(row));
  }
  ordered_json j;
  j["rows"] = std::move(rows);
  return j.dump(2);
}

std::vector<GridCell> grid_from_json(std::string_view json_text) {
  const ordered_json j = ordered_json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("rows"))
    throw Error("grid_from_json: malformed grid report");
  std::vector<GridCell> cells;
  for (const auto& row : j["rows"]) {
    GridCell cell;
    cell.variant = prompting::variant_from_string(row.value("variant", "original"));
    cell.shots = row.value("shots", std::size_t{0});
    if (row.contains("report"))
      cell.report = evaluation::report_from_json(row["report"].dump());
    else
      cell.error = row.value("error", "");
    cells.push_back(std::move(cell));
  }
  return cells;
}

std::vector<evaluation::ScoredTuple> tuples_from_predictions_jsonl(
    std::string_view jsonl_text) {
  std::vector<evaluation::ScoredTuple> out;
  std::size_t pos = 0;
  while (pos < jsonl_text.size()) {
    std::size_t nl = jsonl_text.find('\n', pos);
    if (nl == std::string_view::npos) nl = jsonl_text.size();
    const std::string_view line = jsonl_text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const ordered_json j = ordered_json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw Error("malformed predictions line: " + std::string(line.substr(0, 80)));
    const std::string instance = j.value("instance", "");
    for (const auto& arg : j.value("args", ordered_json::array())) {
      evaluation::ScoredTuple t;
      t.instance_id = instance;
      t.role = RoleLabel::parse(arg.at("role").get<std::string>());
      t.start = arg.at("start").get<std::size_t>();
      t.end = arg.at("end").get<std::size_t>();
      out.push_back(std::move(t));
    }
  }
  return out;
}

void write_outputs(const RunResult& result, const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  auto write = [&](const char* name, const std::string& contents) {
    std::ofstream out(config.out_dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (config.out_dir / name).string());
    out << contents;
  };
  write("records.jsonl", records_jsonl(result, true));
  write("predictions.jsonl", predictions_jsonl(result));
  write("report.json", evaluation::report_to_json(result.report) + "\n");
  write("report.txt", evaluation::report_to_table(result.report));
  write("per_role.csv", evaluation::per_role_csv(result.report));
  write("config.json", config_json(config) + "\n");
}

}  // namespace srlkit::runner
