#pragma once

#include <string>
#include <vector>

#include "brgcl/eval.hpp"
#include "brgcl/noise.hpp"
#include "brgcl/trainer.hpp"

namespace brgcl {

enum class ExperimentTask { Classify, Cluster, Both };

ExperimentTask parse_task(const std::string& name);
std::string task_name(ExperimentTask task);

/// One sweep entry: a noise kind at one corruption level. Run seeds are
/// derived from the root seed and the (entry index, repeat index) pair, so
/// any single run can be reproduced in isolation.
struct NoiseEntry {
  NoiseKind kind = NoiseKind::LabelSymmetric;
  real_t level = 0;
};

/// Declarative description of a full experiment sweep. Parsed from a
/// TOML-style config file; command-line flags override file values.
struct ExperimentConfig {
  std::string dataset;
  std::string output_dir = "runs/out";
  ExperimentTask task = ExperimentTask::Classify;
  std::size_t repeats = 1;
  std::uint64_t seed = 0;
  std::size_t checkpoint_interval = 0;  // epochs between mid-run checkpoints; 0 = final only
  TrainConfig train;
  std::vector<NoiseEntry> noise;

  void validate() const;
};

/// Parses the config file format: `key = value` scalars, one `[train]`
/// section, and repeated `[[noise]]` entries. Strings are double-quoted;
/// `#` starts a comment. Unknown sections or keys are errors.
ExperimentConfig parse_experiment_file(const std::string& path);
ExperimentConfig parse_experiment_text(const std::string& text, const std::string& origin);

/// Canonical key-sorted dump of every field that affects results; two configs
/// hash equal iff this string is equal.
std::string canonical_dump(const ExperimentConfig& cfg);

/// FNV-1a (64-bit) over canonical_dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

/// Resolves a dataset name or path against, in order: the literal path, the
/// directory named by the BRGCL_DATA_ROOT environment variable, and ./data.
std::string resolve_dataset_path(const std::string& dataset);

std::string metrics_to_json(const MetricsRecord& rec);

struct ExperimentResult {
  std::vector<MetricsRecord> records;
  std::vector<std::string> errors;  // per-run failures; the sweep continues past them
};

/// Runs the full grid (noise entry x repeat): corrupt a fresh copy, train the
/// encoder on the label-stripped view, fit the decoupled classifier and the
/// supervised baseline on the corrupted labels, evaluate on the clean test
/// mask, and optionally cluster the embeddings. Writes metrics.jsonl,
/// curves/*.csv, and checkpoints/*.bin under cfg.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Mean/std accuracy per (noise entry, model), written as a CSV curve and
/// returned as display rows ("kind level model mean std n").
std::vector<std::string> summarize_records(const std::vector<MetricsRecord>& records,
                                           const std::string& csv_path);

}  // namespace brgcl
