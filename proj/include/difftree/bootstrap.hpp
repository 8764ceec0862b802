#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "difftree/corpus.hpp"
#include "difftree/execution.hpp"
#include "difftree/metrics.hpp"

namespace difftree {

struct BootstrapOptions {
  double fraction = 0.1;  // share of generation-1 papers kept per trial, in (0, 1]
  std::size_t trials = 100;
  std::uint64_t seed = 42;
  SvVariant sv_variant = SvVariant::Mean;
};

// Scalar metrics recomputed per trial.
struct TrialMetrics {
  double depth = 0.0;
  double structural_virality = 0.0;
  double cascade_virality = 0.0;
  double broadcast_share = 0.0;
};

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 for a single trial

  friend bool operator==(const MeanSd&, const MeanSd&) = default;
};

struct BootstrapResult {
  BootstrapOptions options;
  std::size_t sample_size = 0;  // generation-1 papers kept per trial
  std::size_t completed = 0;
  std::size_t skipped = 0;      // trials whose sample left no adopters
  std::vector<TrialMetrics> trials;  // completed trials in trial order
  std::map<std::string, MeanSd> summary;  // keyed by metric name
};

// Scalar metrics of the full corpus, as used per trial.
// Returns nullopt when the closure is empty.
std::optional<TrialMetrics> scalar_metrics(const Corpus& corpus, SvVariant variant = SvVariant::Mean,
                                           Exec exec = Exec::Serial);

// Per-trial RNG seed: a SplitMix64 hash of (seed, trial).
std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial);

// Sorted generation-1 ids kept by one trial.
std::vector<PaperId> sample_generation1(const std::vector<PaperId>& generation1, std::size_t keep,
                                        std::uint64_t seed);

// Resamples ceil(fraction * |generation 1|) generation-1 papers without
// replacement per trial, drops the rest from the corpus, and recomputes the
// scalar metrics. Trials run in parallel with independent seeds, so the
// result does not depend on thread count. Throws UsageError for a fraction
// outside (0, 1] or zero trials.
BootstrapResult bootstrap_metrics(const Corpus& corpus, const BootstrapOptions& options,
                                  Exec exec = Exec::Parallel);

}  // namespace difftree
