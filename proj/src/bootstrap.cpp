#include "difftree/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <set>

#include "difftree/errors.hpp"

namespace difftree {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Unbiased draw from [0, bound); fixed algorithm so samples match across
// standard libraries.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

MeanSd mean_sd(const std::vector<double>& values) {
  MeanSd out;
  if (values.empty()) return out;
  // Shifted by the first value, so identical samples give exactly sd = 0.
  const double shift = values.front();
  double total = 0.0;
  for (double v : values) total += v - shift;
  out.mean = shift + total / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  return out;
}

}  // namespace

std::optional<TrialMetrics> scalar_metrics(const Corpus& corpus, SvVariant variant, Exec exec) {
  const Closure closure = closure_generations(corpus);
  if (closure.empty()) return std::nullopt;
  const auto profiles = extract_adopters(corpus, closure, exec);
  if (profiles.empty()) return std::nullopt;
  const DiffusionTree tree = build_tree(profiles, corpus.innovation_id(), exec);
  const Topology topo = tree.topology();
  TrialMetrics m;
  m.depth = static_cast<double>(tree.depth());
  m.structural_virality = structural_virality(topo, variant).value_or(0.0);
  m.cascade_virality = cascade_virality(topo);
  m.broadcast_share =
      static_cast<double>(tree.layer_sizes().front()) / static_cast<double>(tree.size());
  return m;
}

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(trial));
}

std::vector<PaperId> sample_generation1(const std::vector<PaperId>& generation1, std::size_t keep,
                                        std::uint64_t seed) {
  std::vector<PaperId> pool = generation1;
  keep = std::min(keep, pool.size());
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first `keep` slots become the sample.
  for (std::size_t i = 0; i < keep; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(bounded(rng, pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(keep);
  std::sort(pool.begin(), pool.end());
  return pool;
}

BootstrapResult bootstrap_metrics(const Corpus& corpus, const BootstrapOptions& options, Exec exec) {
  if (!(options.fraction > 0.0 && options.fraction <= 1.0)) {
    throw UsageError("bootstrap fraction must lie in (0, 1]");
  }
  if (options.trials < 1) throw UsageError("bootstrap needs at least one trial");

  const Closure closure = closure_generations(corpus);
  const std::vector<PaperId> generation1(closure.generation1.begin(), closure.generation1.end());

  BootstrapResult result;
  result.options = options;
  result.sample_size = static_cast<std::size_t>(
      std::ceil(options.fraction * static_cast<double>(generation1.size())));
  result.sample_size = std::min(result.sample_size, generation1.size());

  std::vector<std::optional<TrialMetrics>> per_trial(options.trials);
  const auto run_trial = [&](std::size_t t) {
    if (result.sample_size == 0) return;
    const auto kept = sample_generation1(generation1, result.sample_size,
                                         trial_seed(options.seed, t));
    std::set<PaperId> removed(generation1.begin(), generation1.end());
    for (const auto& id : kept) removed.erase(id);
    per_trial[t] = scalar_metrics(corpus.without(removed), options.sv_variant, Exec::Serial);
  };

  const auto n = static_cast<std::ptrdiff_t>(options.trials);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t t = 0; t < n; ++t) run_trial(static_cast<std::size_t>(t));
  } else {
    for (std::ptrdiff_t t = 0; t < n; ++t) run_trial(static_cast<std::size_t>(t));
  }

  std::vector<double> depth, sv, cv, share;
  for (const auto& m : per_trial) {
    if (!m) {
      ++result.skipped;
      continue;
    }
    ++result.completed;
    result.trials.push_back(*m);
    depth.push_back(m->depth);
    sv.push_back(m->structural_virality);
    cv.push_back(m->cascade_virality);
    share.push_back(m->broadcast_share);
  }
  result.summary["depth"] = mean_sd(depth);
  result.summary["structural_virality"] = mean_sd(sv);
  result.summary["cascade_virality"] = mean_sd(cv);
  result.summary["broadcast_share"] = mean_sd(share);
  return result;
}

}  // namespace difftree
