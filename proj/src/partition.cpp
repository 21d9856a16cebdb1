#include "rfddes/partition.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace rfddes {

Graph build_adjacency(const SparseSym& a, const SparseSym& m) {
  if (a.n != m.n) throw SolverError("partition", "pencil matrices have different dimensions");
  const int n = a.n;
  Graph g;
  g.n = n;
  g.offsets.assign(n + 1, 0);
  std::vector<std::vector<int>> adj(n);
  auto add_pattern = [&](const SparseSym& x) {
    for (int i = 0; i < n; ++i)
      for (int k = x.row_offsets[i]; k < x.row_offsets[i + 1]; ++k) {
        const int j = x.col_indices[k];
        if (j != i && x.values[k] != 0.0) adj[i].push_back(j);
      }
  };
  add_pattern(a);
  add_pattern(m);
  for (int i = 0; i < n; ++i) {
    std::sort(adj[i].begin(), adj[i].end());
    adj[i].erase(std::unique(adj[i].begin(), adj[i].end()), adj[i].end());
    g.offsets[i + 1] = g.offsets[i] + static_cast<int>(adj[i].size());
  }
  g.neighbors.reserve(g.offsets[n]);
  for (int i = 0; i < n; ++i) g.neighbors.insert(g.neighbors.end(), adj[i].begin(), adj[i].end());
  return g;
}

namespace {

// BFS over the subgraph induced by `verts`. Levels restart (continuing the
// numbering) whenever a connected component is exhausted, so every vertex
// of the subset receives a level. Returns per-subset-position levels and the
// position of a farthest vertex (smallest id among ties).
struct LevelStructure {
  std::vector<int> level;  // indexed by position in verts
  int farthest_pos = 0;
  int eccentricity = 0;
};

LevelStructure bfs_levels(const Graph& g, const std::vector<int>& verts, const std::vector<int>& pos_of,
                          int start_pos) {
  const int m = static_cast<int>(verts.size());
  LevelStructure ls;
  ls.level.assign(m, -1);
  std::vector<int> queue;
  queue.reserve(m);
  int next_component_level = 0;
  int scan = 0;
  auto push_start = [&](int p, int lvl) {
    ls.level[p] = lvl;
    queue.push_back(p);
  };
  push_start(start_pos, 0);
  std::size_t head = 0;
  int visited = 1;
  while (visited < m || head < queue.size()) {
    if (head == queue.size()) {
      // disconnected: continue from the smallest unvisited vertex
      while (scan < m && ls.level[scan] >= 0) ++scan;
      push_start(scan, next_component_level + 1);
      ++visited;
      continue;
    }
    const int p = queue[head++];
    const int v = verts[p];
    const int lv = ls.level[p];
    next_component_level = std::max(next_component_level, lv);
    for (int k = g.offsets[v]; k < g.offsets[v + 1]; ++k) {
      const int q = pos_of[g.neighbors[k]];
      if (q < 0) continue;  // neighbor outside the subset
      if (ls.level[q] < 0) {
        ls.level[q] = lv + 1;
        queue.push_back(q);
        ++visited;
        next_component_level = std::max(next_component_level, lv + 1);
      }
    }
  }
  ls.eccentricity = 0;
  ls.farthest_pos = start_pos;
  for (int p = 0; p < m; ++p) {
    if (ls.level[p] > ls.eccentricity) {
      ls.eccentricity = ls.level[p];
      ls.farthest_pos = p;
    }
  }
  return ls;
}

void bisect_recursive(const Graph& g, std::vector<int>& labels, std::vector<int>& pos_of, std::vector<int> verts,
                      int p, int first_label, std::uint64_t seed) {
  if (p == 1 || verts.size() <= 1) {
    for (int v : verts) labels[v] = first_label;
    return;
  }
  const int m = static_cast<int>(verts.size());
  for (int i = 0; i < m; ++i) pos_of[verts[i]] = i;

  // pseudo-peripheral start: repeated BFS until the eccentricity stalls
  int start = static_cast<int>(seed % static_cast<std::uint64_t>(m));
  LevelStructure ls = bfs_levels(g, verts, pos_of, start);
  for (int round = 0; round < 8; ++round) {
    LevelStructure probe = bfs_levels(g, verts, pos_of, ls.farthest_pos);
    if (probe.eccentricity <= ls.eccentricity) {
      ls = std::move(probe);
      break;
    }
    ls = std::move(probe);
  }

  const int p_left = p / 2;
  const int p_right = p - p_left;
  const double target = static_cast<double>(m) * p_left / p;

  // cut between consecutive levels, closest to the proportional target
  const int max_level = *std::max_element(ls.level.begin(), ls.level.end());
  std::vector<int> level_count(max_level + 1, 0);
  for (int lv : ls.level) ++level_count[lv];
  int best_cut = 0;
  double best_diff = 0.0;
  int cum = 0;
  bool first = true;
  for (int lv = 0; lv < max_level; ++lv) {
    cum += level_count[lv];
    if (cum < 1 || cum > m - 1) continue;
    const double diff = std::abs(cum - target);
    if (first || diff < best_diff) {
      best_cut = lv;
      best_diff = diff;
      first = false;
    }
  }
  std::vector<int> left, right;
  left.reserve(m);
  right.reserve(m);
  if (first) {
    // no usable level boundary (single level): fall back to an index split
    const int k = std::max(1, std::min(m - 1, static_cast<int>(target + 0.5)));
    left.assign(verts.begin(), verts.begin() + k);
    right.assign(verts.begin() + k, verts.end());
  } else {
    for (int i = 0; i < m; ++i) (ls.level[i] <= best_cut ? left : right).push_back(verts[i]);
  }

  for (int v : verts) pos_of[v] = -1;
  verts.clear();
  verts.shrink_to_fit();
  bisect_recursive(g, labels, pos_of, std::move(left), p_left, first_label, seed);
  bisect_recursive(g, labels, pos_of, std::move(right), p_right, first_label + p_left, seed);
}

} // namespace

std::vector<int> partition_graph(const Graph& g, int p, std::uint64_t seed) {
  if (p < 1) throw SolverError("partition", "subdomain count must be at least 1");
  if (p > g.n) throw SolverError("partition", "more subdomains than vertices");
  std::vector<int> labels(g.n, 0);
  if (p == 1) return labels;
  std::vector<int> verts(g.n);
  std::iota(verts.begin(), verts.end(), 0);
  std::vector<int> pos_of(g.n, -1);
  bisect_recursive(g, labels, pos_of, std::move(verts), p, 0, seed);
  return labels;
}

PartitionMeta classify_and_permute(const Graph& g, const std::vector<int>& labels) {
  PartitionMeta meta;
  meta.n = g.n;
  meta.labels = labels;
  meta.p = labels.empty() ? 1 : *std::max_element(labels.begin(), labels.end()) + 1;
  meta.is_interface.assign(g.n, 0);
  for (int v = 0; v < g.n; ++v) {
    for (int k = g.offsets[v]; k < g.offsets[v + 1]; ++k) {
      if (labels[g.neighbors[k]] != labels[v]) {
        meta.is_interface[v] = 1;
        break;
      }
    }
  }
  meta.d.assign(meta.p, 0);
  meta.s.assign(meta.p, 0);
  for (int v = 0; v < g.n; ++v) (meta.is_interface[v] ? meta.s : meta.d)[labels[v]] += 1;
  meta.interior_offsets.assign(meta.p + 1, 0);
  meta.interface_offsets.assign(meta.p + 1, 0);
  for (int j = 0; j < meta.p; ++j) {
    meta.interior_offsets[j + 1] = meta.interior_offsets[j] + meta.d[j];
    meta.interface_offsets[j + 1] = meta.interface_offsets[j] + meta.s[j];
  }
  meta.d_total = meta.interior_offsets[meta.p];
  meta.s_total = meta.interface_offsets[meta.p];

  meta.perm.resize(g.n);
  meta.iperm.resize(g.n);
  std::vector<int> next_interior(meta.interior_offsets.begin(), meta.interior_offsets.end() - 1);
  std::vector<int> next_interface(meta.interface_offsets.begin(), meta.interface_offsets.end() - 1);
  for (int v = 0; v < g.n; ++v) {  // stable: ascending original index
    int pos;
    if (meta.is_interface[v]) {
      pos = meta.d_total + next_interface[labels[v]]++;
    } else {
      pos = next_interior[labels[v]]++;
    }
    meta.perm[pos] = v;
    meta.iperm[v] = pos;
  }
  return meta;
}

SparseSym permute_matrix(const SparseSym& a, const PartitionMeta& meta) {
  std::vector<SparseSym::Entry> entries;
  entries.reserve(a.col_indices.size());
  for (int i = 0; i < a.n; ++i)
    for (int k = a.row_offsets[i]; k < a.row_offsets[i + 1]; ++k)
      entries.push_back({meta.iperm[i], meta.iperm[a.col_indices[k]], a.values[k]});
  return SparseSym::from_entries(a.n, std::move(entries));
}

} // namespace rfddes
