#pragma once

// Independent reference computations used only by tests. Nothing here
// shares code with the library's metric kernels.

#include <cstdint>
#include <random>
#include <vector>

#include "difftree/tree.hpp"

namespace difftree::oracle {

// Mean shortest-path distance over unordered vertex pairs, by breadth-first
// search from every vertex of the undirected tree.
double all_pairs_mean_distance(const Topology& topo);
// Sum of all pairwise distances (Wiener index) by the same search.
std::uint64_t all_pairs_distance_sum(const Topology& topo);

// For every vertex, walks each other vertex's ancestor chain to find
// descendants and their depths below it.
double descendant_distance_sum_of_means(const Topology& topo);

// Uniform random recursive tree on n vertices with shuffled labels;
// vertex 0 is the root.
Topology random_topology(std::mt19937_64& rng, std::size_t n);

Topology star(std::size_t leaves);
Topology chain(std::size_t length);

}  // namespace difftree::oracle
