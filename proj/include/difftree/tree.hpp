#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "difftree/adoption.hpp"
#include "difftree/execution.hpp"

namespace difftree {

inline constexpr std::string_view kRootLabel = "ROOT";

enum class Channel { Broadcasting, Virality };

std::string_view to_string(Channel channel);
std::optional<Channel> parse_channel(std::string_view text);

struct DiffusionNode {
  AuthorId author_id;
  std::optional<AuthorId> parent;  // nullopt: attached to the innovation root
  Channel channel = Channel::Broadcasting;
  int layer = 1;
  Date t_adopt;

  friend bool operator==(const DiffusionNode&, const DiffusionNode&) = default;
};

// Rooted tree as a parent array. Vertex 0 is the root; parent[0] == -1.
struct Topology {
  std::vector<int> parent;

  std::size_t size() const { return parent.size(); }
  std::vector<std::vector<int>> children() const;
};

class DiffusionTree {
 public:
  DiffusionTree() = default;
  // Nodes are stored sorted by author_id. Throws DataError if a parent does
  // not resolve or the layers are inconsistent with the parent links.
  DiffusionTree(PaperId root, std::vector<DiffusionNode> nodes);

  const PaperId& root() const { return root_; }
  std::span<const DiffusionNode> nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  const DiffusionNode* find(const AuthorId& id) const;
  // Index into nodes() of the node's parent, or nullopt for root children.
  std::optional<std::size_t> parent_index(std::size_t node) const;

  int depth() const { return static_cast<int>(layer_sizes_.size()); }
  // layer_sizes()[k] is the size of layer k + 1.
  const std::vector<std::size_t>& layer_sizes() const { return layer_sizes_; }
  // Number of children of each node, parallel to nodes().
  const std::vector<std::size_t>& child_counts() const { return child_counts_; }

  // Vertex i + 1 of the topology is nodes()[i].
  Topology topology() const;

  friend bool operator==(const DiffusionTree& a, const DiffusionTree& b) {
    return a.root_ == b.root_ && a.nodes_ == b.nodes_;
  }

 private:
  PaperId root_;
  std::vector<DiffusionNode> nodes_;
  std::unordered_map<AuthorId, std::size_t> index_;
  std::vector<std::ptrdiff_t> parent_;  // -1 for root children
  std::vector<std::size_t> layer_sizes_;
  std::vector<std::size_t> child_counts_;
};

// Chooses each adopter's parent: the coauthor with the strictly earliest
// adoption date (ties to the smaller author_id), or the root when no
// coauthor adopted strictly earlier. Returns indices into profiles, -1 for
// the root. Profiles must be sorted by author_id.
std::vector<std::ptrdiff_t> select_parents(std::span<const AdopterProfile> profiles,
                                           Exec exec = Exec::Parallel);

DiffusionTree build_tree(std::span<const AdopterProfile> profiles, const PaperId& innovation_id,
                         Exec exec = Exec::Parallel);

// Structural checks: unique node ids, strict date increase along every edge,
// channel/parent/layer agreement, layer sizes summing to the node count.
std::vector<std::string> tree_violations(const DiffusionTree& tree);

// Deterministic DOT digraph; nodes ordered by (layer, author_id).
std::string export_dot(const DiffusionTree& tree);

// CSV edge list: child_id,parent_id,channel,layer,t_adopt. The root is "ROOT".
void write_tree_csv(std::ostream& out, const DiffusionTree& tree);
DiffusionTree read_tree_csv(std::istream& in, const PaperId& root);

}  // namespace difftree
