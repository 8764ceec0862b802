#include "difftree/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "difftree/errors.hpp"

namespace difftree {

Ratio::Ratio(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
  if (den_ <= 0 || num_ < 0) throw UsageError("ratio needs a nonnegative numerator over a positive denominator");
  const std::int64_t g = std::gcd(num_, den_);
  num_ /= g;
  den_ /= g;
}

Ratio operator*(const Ratio& a, const Ratio& b) {
  // Cross-reduce first to keep the products small.
  const std::int64_t g1 = std::gcd(a.num_, b.den_);
  const std::int64_t g2 = std::gcd(b.num_, a.den_);
  return Ratio((a.num_ / g1) * (b.num_ / g2), (a.den_ / g2) * (b.den_ / g1));
}

std::map<int, ChannelCounts> channel_counts_by_year(const DiffusionTree& tree) {
  std::map<int, ChannelCounts> out;
  for (const auto& n : tree.nodes()) {
    auto& counts = out[n.t_adopt.year()];
    if (n.channel == Channel::Broadcasting) {
      ++counts.broadcasting;
    } else {
      ++counts.virality;
    }
  }
  return out;
}

ActivationGrowth activation_growth(const DiffusionTree& tree) {
  const auto& sizes = tree.layer_sizes();
  ActivationGrowth out;
  out.active.assign(sizes.size(), 0);
  const auto nodes = tree.nodes();
  const auto& children = tree.child_counts();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (children[i] > 0) ++out.active[nodes[i].layer - 1];
  }
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    out.activation.emplace_back(static_cast<std::int64_t>(out.active[k]),
                                static_cast<std::int64_t>(sizes[k]));
    if (k == 0 || out.active[k - 1] == 0) {
      out.growth.emplace_back(std::nullopt);
    } else {
      out.growth.emplace_back(Ratio(static_cast<std::int64_t>(sizes[k]),
                                    static_cast<std::int64_t>(out.active[k - 1])));
    }
  }
  return out;
}

namespace {

Interval interval_for(const AdopterProfile& adopter, const DiffusionNode& node,
                      const DiffusionTree& tree) {
  Date source = adopter.t_source;
  if (node.parent) source = tree.find(*node.parent)->t_adopt;
  const long raw = adopter.t_first_adopt - std::max(adopter.t_first_paper, source);
  if (raw < 0) return Interval{0, true};
  return Interval{raw, false};
}

}  // namespace

Interval interval_time(const AdopterProfile& adopter, const DiffusionTree& tree) {
  const DiffusionNode* node = tree.find(adopter.author_id);
  if (node == nullptr) throw UsageError("adopter " + adopter.author_id + " is not in the tree");
  return interval_for(adopter, *node, tree);
}

double diffusion_speed(long interval_days) {
  if (interval_days < 0) throw UsageError("interval time must be nonnegative");
  return 1.0 / (static_cast<double>(interval_days) / 365.0 + 1.0);
}

std::vector<Interval> node_intervals(const DiffusionTree& tree,
                                     std::span<const AdopterProfile> profiles, Exec exec) {
  std::unordered_map<std::string_view, const AdopterProfile*> by_id;
  by_id.reserve(profiles.size());
  for (const auto& p : profiles) by_id.emplace(p.author_id, &p);

  const auto nodes = tree.nodes();
  std::vector<const AdopterProfile*> matched(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto it = by_id.find(nodes[i].author_id);
    if (it == by_id.end()) throw UsageError("no profile for tree node " + nodes[i].author_id);
    matched[i] = it->second;
  }

  const auto n = static_cast<std::ptrdiff_t>(nodes.size());
  std::vector<Interval> out(nodes.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = interval_for(*matched[i], nodes[i], tree);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = interval_for(*matched[i], nodes[i], tree);
  }
  return out;
}

Summary summarize(std::vector<double> values) {
  Summary s;
  s.count = values.size();
  if (values.empty()) return s;
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  s.median = values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
  return s;
}

SpeedByLayer speed_by_layer(const DiffusionTree& tree, std::span<const AdopterProfile> profiles,
                            Exec exec) {
  const auto intervals = node_intervals(tree, profiles, exec);
  const auto nodes = tree.nodes();
  std::vector<std::vector<double>> speeds(tree.layer_sizes().size());
  std::vector<std::vector<double>> days(tree.layer_sizes().size());
  SpeedByLayer out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto k = static_cast<std::size_t>(nodes[i].layer - 1);
    speeds[k].push_back(diffusion_speed(intervals[i].days));
    days[k].push_back(static_cast<double>(intervals[i].days));
    if (intervals[i].clamped) ++out.anomalies;
  }
  for (std::size_t k = 0; k < speeds.size(); ++k) {
    out.layers.push_back(LayerSpeed{static_cast<int>(k + 1), summarize(std::move(speeds[k])),
                                    summarize(std::move(days[k]))});
  }
  return out;
}

std::optional<SvVariant> parse_sv_variant(std::string_view text) {
  if (text == "mean") return SvVariant::Mean;
  if (text == "sum") return SvVariant::Sum;
  return std::nullopt;
}

std::string_view to_string(SvVariant variant) {
  return variant == SvVariant::Mean ? "mean" : "sum";
}

namespace {

// Vertices in breadth-first order from the root.
std::vector<int> bfs_order(const Topology& topo, const std::vector<std::vector<int>>& children) {
  std::vector<int> order;
  order.reserve(topo.size());
  if (topo.size() == 0) return order;
  if (topo.parent[0] != -1) throw UsageError("topology vertex 0 must be the root");
  order.push_back(0);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (int c : children[order[head]]) order.push_back(c);
  }
  if (order.size() != topo.size()) throw UsageError("topology is not a single rooted tree");
  return order;
}

}  // namespace

std::optional<double> structural_virality(const Topology& topo, SvVariant variant) {
  const std::size_t n = topo.size();
  if (n < 2) return std::nullopt;
  const auto children = topo.children();
  const auto order = bfs_order(topo, children);

  // Each edge (v, parent(v)) lies on subtree(v) * (n - subtree(v)) paths.
  std::vector<std::uint64_t> subtree(n, 1);
  std::uint64_t wiener = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (v == 0) continue;
    subtree[topo.parent[v]] += subtree[v];
    wiener += subtree[v] * (n - subtree[v]);
  }
  const auto w = static_cast<double>(wiener);
  const auto nn = static_cast<double>(n);
  if (variant == SvVariant::Mean) return w / (nn * (nn - 1.0) / 2.0);
  return 2.0 * w / (nn - 1.0);
}

std::optional<double> structural_virality(const DiffusionTree& tree, SvVariant variant) {
  return structural_virality(tree.topology(), variant);
}

double cascade_virality(const Topology& topo) {
  const std::size_t n = topo.size();
  if (n == 0) return 0.0;
  const auto children = topo.children();
  const auto order = bfs_order(topo, children);

  std::vector<std::uint64_t> count(n, 0);     // descendants, self excluded
  std::vector<std::uint64_t> distance(n, 0);  // summed distance to descendants
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (v == 0) continue;
    const int p = topo.parent[v];
    count[p] += count[v] + 1;
    distance[p] += distance[v] + count[v] + 1;
  }
  double total = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    if (count[v] > 0) total += static_cast<double>(distance[v]) / static_cast<double>(count[v]);
  }
  return total;
}

double cascade_virality(const DiffusionTree& tree) { return cascade_virality(tree.topology()); }

std::map<LayerDomain, std::size_t> domain_by_layer(const DiffusionTree& tree,
                                                   std::span<const AdopterProfile> profiles) {
  std::map<LayerDomain, std::size_t> out;
  for (const auto& p : profiles) {
    const DiffusionNode* node = tree.find(p.author_id);
    if (node == nullptr) continue;
    ++out[{node->layer, p.domain.empty() ? std::string(kUnknownDomain) : p.domain}];
  }
  return out;
}

RepeatAdoption repeat_adoption(std::span<const AdopterProfile> profiles, const DiffusionTree& tree,
                               std::size_t min_pubs) {
  if (min_pubs < 1) throw UsageError("min_pubs must be at least 1");
  std::vector<const AdopterProfile*> ordered;
  for (const auto& p : profiles) ordered.push_back(&p);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto* a, const auto* b) { return a->author_id < b->author_id; });

  RepeatAdoption out;
  out.min_pubs = min_pubs;
  for (const auto* p : ordered) {
    if (p->n_publications <= min_pubs) continue;
    const DiffusionNode* node = tree.find(p->author_id);
    if (node == nullptr) continue;
    const double ratio =
        static_cast<double>(p->n_direct_citations) / static_cast<double>(p->n_publications);
    auto& dist = node->channel == Channel::Broadcasting ? out.broadcasting : out.virality;
    dist.ratios.push_back(ratio);
  }
  out.broadcasting.summary = summarize(out.broadcasting.ratios);
  out.virality.summary = summarize(out.virality.ratios);
  return out;
}

MetricsReport compute_metrics(const DiffusionTree& tree, std::span<const AdopterProfile> profiles,
                              const MetricsOptions& options, Exec exec) {
  MetricsReport r;
  r.innovation_id = tree.root();
  r.node_count = tree.size();
  r.layer_sizes = tree.layer_sizes();
  r.depth = tree.depth();
  r.channel_by_year = channel_counts_by_year(tree);
  auto ag = activation_growth(tree);
  r.active_members = std::move(ag.active);
  r.activation_rate = std::move(ag.activation);
  r.growth_rate = std::move(ag.growth);
  r.speed = speed_by_layer(tree, profiles, exec);
  r.sv_variant = options.sv_variant;
  const Topology topo = tree.topology();
  r.structural_virality = structural_virality(topo, options.sv_variant);
  r.cascade_virality = cascade_virality(topo);
  r.domain_by_layer = domain_by_layer(tree, profiles);
  r.repeat_adoption = repeat_adoption(profiles, tree, options.min_pubs);
  r.anomalies = r.speed.anomalies;
  return r;
}

}  // namespace difftree
