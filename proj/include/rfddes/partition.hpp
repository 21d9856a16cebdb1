#pragma once

#include <cstdint>
#include <vector>

#include "rfddes/sparse.hpp"

namespace rfddes {

/// Undirected adjacency graph: CSR with sorted neighbor lists, no self loops.
struct Graph {
  int n = 0;
  std::vector<int> offsets;
  std::vector<int> neighbors;

  int degree(int v) const { return offsets[v + 1] - offsets[v]; }
};

/// Union of the off-diagonal nonzero patterns of A and M.
Graph build_adjacency(const SparseSym& a, const SparseSym& m);

/// Splits the vertex set into p parts by recursive BFS level-set bisection.
/// The bisection start vertex is a pseudo-peripheral vertex located by
/// repeated BFS; `seed` picks the initial probe vertex, and all remaining
/// ties break toward the smallest vertex id, so results are reproducible.
std::vector<int> partition_graph(const Graph& g, int p, std::uint64_t seed);

/// Vertex classification and block ordering derived from subdomain labels.
///
/// The permutation lists the interior vertices of subdomain 0..p-1 first,
/// then the interface vertices grouped by subdomain, preserving original
/// relative order inside every group. perm maps new position -> old index;
/// iperm maps old index -> new position.
struct PartitionMeta {
  int p = 1;
  int n = 0;
  std::vector<int> labels;
  std::vector<char> is_interface;
  std::vector<int> perm;
  std::vector<int> iperm;
  std::vector<int> d;                  // interior count per subdomain
  std::vector<int> s;                  // interface count per subdomain
  std::vector<int> interior_offsets;   // prefix sums of d, size p + 1
  std::vector<int> interface_offsets;  // prefix sums of s, size p + 1
  int d_total = 0;
  int s_total = 0;

  /// First permuted row of subdomain j's interface window (global index).
  int window_start(int j) const { return d_total + interface_offsets[j]; }
};

/// A vertex is interface iff it has a neighbor with a different label.
PartitionMeta classify_and_permute(const Graph& g, const std::vector<int>& labels);

/// P A P^T for the meta's permutation.
SparseSym permute_matrix(const SparseSym& a, const PartitionMeta& meta);

} // namespace rfddes
