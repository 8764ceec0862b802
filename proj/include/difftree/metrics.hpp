#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "difftree/adoption.hpp"
#include "difftree/execution.hpp"
#include "difftree/tree.hpp"

namespace difftree {

// Exact nonnegative fraction, kept in lowest terms.
class Ratio {
 public:
  Ratio(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend Ratio operator*(const Ratio& a, const Ratio& b);
  friend bool operator==(const Ratio&, const Ratio&) = default;

 private:
  std::int64_t num_;
  std::int64_t den_;
};

struct ChannelCounts {
  std::size_t broadcasting = 0;
  std::size_t virality = 0;

  friend bool operator==(const ChannelCounts&, const ChannelCounts&) = default;
};

std::map<int, ChannelCounts> channel_counts_by_year(const DiffusionTree& tree);

// Per layer n (index n - 1): active(n) = members with at least one child.
//   activation[n] = active(n) / size(n)
//   growth[n]     = size(n) / active(n - 1), absent for n = 1 or active(n - 1) = 0
struct ActivationGrowth {
  std::vector<std::size_t> active;
  std::vector<Ratio> activation;
  std::vector<std::optional<Ratio>> growth;
};

ActivationGrowth activation_growth(const DiffusionTree& tree);

struct Interval {
  long days = 0;
  bool clamped = false;  // raw value was negative
};

// Days between adoption and the later of career start and source
// availability. The source is the innovation (or cited citation) for
// broadcasting members and the parent's adoption for virality members.
// Throws UsageError when the author is not in the tree.
Interval interval_time(const AdopterProfile& adopter, const DiffusionTree& tree);

// 1 / (days / 365 + 1). Throws UsageError for negative input.
double diffusion_speed(long interval_days);

// Intervals for every tree node, parallel to tree.nodes(). Throws
// UsageError when a node has no profile.
std::vector<Interval> node_intervals(const DiffusionTree& tree,
                                     std::span<const AdopterProfile> profiles,
                                     Exec exec = Exec::Parallel);

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;

  friend bool operator==(const Summary&, const Summary&) = default;
};

// Empty input gives count 0 and zero statistics.
Summary summarize(std::vector<double> values);

struct LayerSpeed {
  int layer = 1;
  Summary speed;          // DS values
  Summary interval_days;  // raw it values after clamping
};

struct SpeedByLayer {
  std::vector<LayerSpeed> layers;
  std::size_t anomalies = 0;  // clamped negative intervals
};

SpeedByLayer speed_by_layer(const DiffusionTree& tree, std::span<const AdopterProfile> profiles,
                            Exec exec = Exec::Parallel);

enum class SvVariant {
  Mean,  // mean distance over unordered vertex pairs
  Sum,   // sum over vertices of their mean distance to every other vertex
};

std::optional<SvVariant> parse_sv_variant(std::string_view text);
std::string_view to_string(SvVariant variant);

// Undirected, root included. Absent for fewer than two vertices.
std::optional<double> structural_virality(const Topology& topo, SvVariant variant = SvVariant::Mean);
std::optional<double> structural_virality(const DiffusionTree& tree,
                                          SvVariant variant = SvVariant::Mean);

// Sum over vertices with descendants of the mean distance to those
// descendants. Root included; a lone root gives 0.
double cascade_virality(const Topology& topo);
double cascade_virality(const DiffusionTree& tree);

using LayerDomain = std::pair<int, std::string>;
std::map<LayerDomain, std::size_t> domain_by_layer(const DiffusionTree& tree,
                                                   std::span<const AdopterProfile> profiles);

struct RatioDistribution {
  std::vector<double> ratios;  // in author_id order
  Summary summary;
};

struct RepeatAdoption {
  std::size_t min_pubs = 1;
  RatioDistribution broadcasting;
  RatioDistribution virality;
};

// Direct citations over publications for adopters with more than min_pubs
// publications, split by channel. Throws UsageError when min_pubs < 1.
RepeatAdoption repeat_adoption(std::span<const AdopterProfile> profiles, const DiffusionTree& tree,
                               std::size_t min_pubs);

struct MetricsOptions {
  std::size_t min_pubs = 1;
  SvVariant sv_variant = SvVariant::Mean;
};

struct MetricsReport {
  std::string innovation_id;
  std::size_t node_count = 0;
  std::vector<std::size_t> layer_sizes;
  int depth = 0;
  std::map<int, ChannelCounts> channel_by_year;
  std::vector<std::size_t> active_members;
  std::vector<Ratio> activation_rate;
  std::vector<std::optional<Ratio>> growth_rate;
  SpeedByLayer speed;
  SvVariant sv_variant = SvVariant::Mean;
  std::optional<double> structural_virality;
  double cascade_virality = 0.0;
  std::map<LayerDomain, std::size_t> domain_by_layer;
  RepeatAdoption repeat_adoption;
  std::size_t anomalies = 0;
};

MetricsReport compute_metrics(const DiffusionTree& tree, std::span<const AdopterProfile> profiles,
                              const MetricsOptions& options = {}, Exec exec = Exec::Parallel);

}  // namespace difftree
