#include "difftree/tree.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "difftree/csv.hpp"
#include "difftree/errors.hpp"

namespace difftree {

std::string_view to_string(Channel channel) {
  return channel == Channel::Broadcasting ? "broadcasting" : "virality";
}

std::optional<Channel> parse_channel(std::string_view text) {
  if (text == "broadcasting") return Channel::Broadcasting;
  if (text == "virality") return Channel::Virality;
  return std::nullopt;
}

std::vector<std::vector<int>> Topology::children() const {
  std::vector<std::vector<int>> out(parent.size());
  for (std::size_t v = 0; v < parent.size(); ++v) {
    if (parent[v] >= 0) out[parent[v]].push_back(static_cast<int>(v));
  }
  return out;
}

DiffusionTree::DiffusionTree(PaperId root, std::vector<DiffusionNode> nodes)
    : root_(std::move(root)), nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end(),
            [](const DiffusionNode& a, const DiffusionNode& b) { return a.author_id < b.author_id; });
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i].author_id, i).second) {
      throw DataError("tree lists author " + nodes_[i].author_id + " twice");
    }
  }
  parent_.assign(nodes_.size(), -1);
  child_counts_.assign(nodes_.size(), 0);
  int max_layer = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const DiffusionNode& n = nodes_[i];
    int expected_layer = 1;
    if (n.parent) {
      const auto it = index_.find(*n.parent);
      if (it == index_.end()) {
        throw DataError("parent " + *n.parent + " of " + n.author_id + " is not in the tree");
      }
      parent_[i] = static_cast<std::ptrdiff_t>(it->second);
      ++child_counts_[it->second];
      expected_layer = nodes_[it->second].layer + 1;
    }
    if (n.layer != expected_layer) {
      throw DataError("node " + n.author_id + " has layer " + std::to_string(n.layer) +
                      ", expected " + std::to_string(expected_layer));
    }
    max_layer = std::max(max_layer, n.layer);
  }
  layer_sizes_.assign(static_cast<std::size_t>(max_layer), 0);
  for (const auto& n : nodes_) ++layer_sizes_[n.layer - 1];
}

const DiffusionNode* DiffusionTree::find(const AuthorId& id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

std::optional<std::size_t> DiffusionTree::parent_index(std::size_t node) const {
  if (parent_[node] < 0) return std::nullopt;
  return static_cast<std::size_t>(parent_[node]);
}

Topology DiffusionTree::topology() const {
  Topology topo;
  topo.parent.resize(nodes_.size() + 1);
  topo.parent[0] = -1;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    topo.parent[i + 1] = static_cast<int>(parent_[i] + 1);
  }
  return topo;
}

namespace {

std::ptrdiff_t choose_parent(std::span<const AdopterProfile> profiles, std::size_t i) {
  const AdopterProfile& self = profiles[i];
  std::ptrdiff_t best = -1;
  for (const auto& coauthor : self.coauthors) {
    const auto it = std::lower_bound(
        profiles.begin(), profiles.end(), coauthor,
        [](const AdopterProfile& p, const AuthorId& id) { return p.author_id < id; });
    if (it == profiles.end() || it->author_id != coauthor) continue;
    if (!(it->t_first_adopt < self.t_first_adopt)) continue;
    // Coauthors iterate in id order, so the first strictly earlier date wins ties.
    if (best < 0 || it->t_first_adopt < profiles[best].t_first_adopt) {
      best = it - profiles.begin();
    }
  }
  return best;
}

}  // namespace

std::vector<std::ptrdiff_t> select_parents(std::span<const AdopterProfile> profiles, Exec exec) {
  const auto n = static_cast<std::ptrdiff_t>(profiles.size());
  std::vector<std::ptrdiff_t> parents(profiles.size(), -1);
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 256)
    for (std::ptrdiff_t i = 0; i < n; ++i) parents[i] = choose_parent(profiles, i);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) parents[i] = choose_parent(profiles, i);
  }
  return parents;
}

DiffusionTree build_tree(std::span<const AdopterProfile> profiles, const PaperId& innovation_id,
                         Exec exec) {
  std::vector<AdopterProfile> sorted;
  if (!std::is_sorted(profiles.begin(), profiles.end(),
                      [](const auto& a, const auto& b) { return a.author_id < b.author_id; })) {
    sorted.assign(profiles.begin(), profiles.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.author_id < b.author_id; });
    profiles = sorted;
  }

  const auto parents = select_parents(profiles, exec);

  // Parents adopt strictly earlier, so date order visits every parent first.
  std::vector<std::size_t> order(profiles.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return profiles[a].t_first_adopt < profiles[b].t_first_adopt;
  });
  std::vector<int> layer(profiles.size(), 0);
  for (std::size_t i : order) {
    layer[i] = parents[i] < 0 ? 1 : layer[parents[i]] + 1;
  }

  std::vector<DiffusionNode> nodes(profiles.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    DiffusionNode& n = nodes[i];
    n.author_id = profiles[i].author_id;
    n.t_adopt = profiles[i].t_first_adopt;
    n.layer = layer[i];
    if (parents[i] >= 0) {
      n.parent = profiles[parents[i]].author_id;
      n.channel = Channel::Virality;
    }
  }
  return DiffusionTree(innovation_id, std::move(nodes));
}

std::vector<std::string> tree_violations(const DiffusionTree& tree) {
  std::vector<std::string> out;
  const auto nodes = tree.nodes();
  std::size_t layer_total = 0;
  for (std::size_t s : tree.layer_sizes()) layer_total += s;
  if (layer_total != nodes.size()) out.push_back("layer sizes do not sum to the node count");

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const DiffusionNode& n = nodes[i];
    if (i > 0 && nodes[i - 1].author_id == n.author_id) {
      out.push_back(n.author_id + ": more than one node");
    }
    const bool broadcast = n.channel == Channel::Broadcasting;
    if (broadcast != !n.parent.has_value() || broadcast != (n.layer == 1)) {
      out.push_back(n.author_id + ": channel, parent and layer disagree");
    }
    if (!n.parent) continue;
    const DiffusionNode* p = tree.find(*n.parent);
    if (p == nullptr) {
      out.push_back(n.author_id + ": unresolved parent " + *n.parent);
      continue;
    }
    if (!(p->t_adopt < n.t_adopt)) {
      out.push_back(n.author_id + ": adopts no later than parent " + p->author_id);
    }
    if (n.layer != p->layer + 1) out.push_back(n.author_id + ": layer skips its parent");
  }
  return out;
}

namespace {

std::string quoted(std::string_view id) {
  std::string out = "\"";
  for (char c : id) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string export_dot(const DiffusionTree& tree) {
  std::vector<const DiffusionNode*> order;
  order.reserve(tree.size());
  for (const auto& n : tree.nodes()) order.push_back(&n);
  std::sort(order.begin(), order.end(), [](const DiffusionNode* a, const DiffusionNode* b) {
    return std::tie(a->layer, a->author_id) < std::tie(b->layer, b->author_id);
  });

  std::ostringstream dot;
  dot << "digraph diffusion {\n";
  dot << "  " << quoted(kRootLabel) << " [label=" << quoted(tree.root())
      << ", channel=\"root\", layer=0];\n";
  for (const auto* n : order) {
    dot << "  " << quoted(n->author_id) << " [channel=\"" << to_string(n->channel)
        << "\", layer=" << n->layer << ", t_adopt=\"" << n->t_adopt.to_string() << "\"];\n";
  }
  for (const auto* n : order) {
    dot << "  " << quoted(n->parent ? std::string_view(*n->parent) : kRootLabel) << " -> "
        << quoted(n->author_id) << ";\n";
  }
  dot << "}\n";
  return dot.str();
}

void write_tree_csv(std::ostream& out, const DiffusionTree& tree) {
  std::vector<const DiffusionNode*> order;
  for (const auto& n : tree.nodes()) order.push_back(&n);
  std::sort(order.begin(), order.end(), [](const DiffusionNode* a, const DiffusionNode* b) {
    return std::tie(a->layer, a->author_id) < std::tie(b->layer, b->author_id);
  });
  csv::write_row(out, {"child_id", "parent_id", "channel", "layer", "t_adopt"});
  for (const auto* n : order) {
    csv::write_row(out, {n->author_id, n->parent ? *n->parent : std::string(kRootLabel),
                         std::string(to_string(n->channel)), std::to_string(n->layer),
                         n->t_adopt.to_string()});
  }
}

DiffusionTree read_tree_csv(std::istream& in, const PaperId& root) {
  const auto header = csv::read_row(in);
  if (!header || header->size() != 5 || header->front() != "child_id") {
    throw DataError("tree CSV: unexpected header");
  }
  std::vector<DiffusionNode> nodes;
  while (auto row = csv::read_row(in)) {
    if (row->size() == 1 && row->front().empty()) continue;
    if (row->size() != 5) throw DataError("tree CSV: row with wrong column count");
    DiffusionNode n;
    n.author_id = (*row)[0];
    if ((*row)[1] != kRootLabel) n.parent = (*row)[1];
    const auto channel = parse_channel((*row)[2]);
    if (!channel) throw DataError("tree CSV: unknown channel " + (*row)[2]);
    n.channel = *channel;
    try {
      n.layer = std::stoi((*row)[3]);
    } catch (const std::exception&) {
      throw DataError("tree CSV: bad layer for " + n.author_id);
    }
    const auto date = parse_date((*row)[4]);
    if (!date) throw DataError("tree CSV: bad date for " + n.author_id);
    n.t_adopt = date->date;
    nodes.push_back(std::move(n));
  }
  return DiffusionTree(root, std::move(nodes));
}

}  // namespace difftree
