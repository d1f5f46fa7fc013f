// Copyright (c) 2026 the srlkit authors
// Licensed under the Apache 2.0 license found in the LICENSE file or at:
//     https://opensource.org/licenses/Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "srlkit/corpus.hpp"
#include "srlkit/evaluation.hpp"
#include "srlkit/extraction.hpp"
#include "srlkit/framebank.hpp"
#include "srlkit/gateway.hpp"
#include "srlkit/matcher.hpp"
#include "srlkit/prompting.hpp"

namespace srlkit::runner {

struct MatcherConfig {
  int step = 1;
  int flexity = 8;
  matcher::MatchUnit unit = matcher::MatchUnit::Character;
  double floor = 0.6;
};

struct ExperimentConfig {
  std::filesystem::path dataset;       // props file under evaluation
  std::filesystem::path sidecar;       // optional predicate metadata
  std::filesystem::path frames;        // frame bank JSON
  std::filesystem::path noncore;       // optional non-core inventory JSON
  std::filesystem::path pool;          // exemplar source; dataset when empty
  std::filesystem::path pool_sidecar;
  gateway::BackendConfig backend;
  prompting::Variant variant = prompting::Variant::Original;
  std::size_t shots = 3;
  std::uint64_t seed = 0;
  MatcherConfig matcher;
  bool with_description = true;  // --no-description ablation
  bool fix_typos = false;
  std::size_t limit = 0;  // 0 = every instance
  std::filesystem::path out_dir;  // empty = nothing written
};

void validate(const ExperimentConfig& config);  // throws ConfigError
// Canonical JSON used for the provenance hash and config.json.
std::string config_json(const ExperimentConfig& config);

struct InstanceRecord {
  std::string instance_id;
  bool sense_skipped = false;
  std::string chosen_sense;
  std::string sense_prompt;
  std::string sense_response;
  std::string label_prompt;
  std::string label_response;
  std::vector<std::string> exemplar_ids;
  extraction::RawPrediction raw;
  matcher::Prediction grounded;
  std::vector<std::string> notes;
  std::int64_t elapsed_ms = 0;
};

struct RunResult {
  std::vector<InstanceRecord> records;
  evaluation::EvalReport report;
  gateway::Gateway::Stats stats;
  std::string config_hash;
  std::string cache_hash;
};

// Full four-stage pipeline over every instance of the dataset. Per-instance
// failures (extraction errors, cache misses, transport errors) degrade to an
// empty prediction for that instance; the run itself always completes.
// `injected` overrides the transport for mock/custom backends.
RunResult run_pipeline(const ExperimentConfig& config,
                       std::shared_ptr<gateway::Backend> injected = nullptr);

struct GridCell {
  prompting::Variant variant = prompting::Variant::Original;
  std::size_t shots = 0;
  std::optional<evaluation::EvalReport> report;
  std::string error;  // non-empty when the cell failed
};

// Cartesian (variant, shots) sweep sharing one recorded cache across cells.
// A failing cell is reported in place, the rest still run.
std::vector<GridCell> run_grid(const ExperimentConfig& base,
                               std::span<const std::size_t> shots,
                               std::span<const prompting::Variant> variants,
                               std::shared_ptr<gateway::Backend> injected = nullptr);

// Deterministic per-instance outputs (no prompts, no timing).
std::string predictions_jsonl(const RunResult& result);
// Full record stream, prompts and raw responses included.
std::string records_jsonl(const RunResult& result, bool include_timing = true);
std::string grid_to_json(std::span<const GridCell> cells);
std::vector<GridCell> grid_from_json(std::string_view json_text);

// Reads tuples back from a predictions.jsonl stream (for `srl eval`).
std::vector<evaluation::ScoredTuple> tuples_from_predictions_jsonl(
    std::string_view jsonl_text);

// Writes records.jsonl, predictions.jsonl, report.json, report.txt,
// per_role.csv and config.json under config.out_dir.
void write_outputs(const RunResult& result, const ExperimentConfig& config);

}  // namespace srlkit::runner
