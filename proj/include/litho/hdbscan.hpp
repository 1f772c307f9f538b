#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace litho {

// Points to cluster under the Euclidean metric.
struct PointSet {
  std::vector<std::vector<double>> points;

  std::size_t size() const { return points.size(); }
  std::size_t dim() const { return points.empty() ? 0 : points[0].size(); }

  void validate() const {
    if (points.empty()) throw std::invalid_argument("PointSet: empty");
    for (const auto& p : points)
      if (p.size() != points[0].size())
        throw std::invalid_argument("PointSet: ragged dimensions");
  }

  double distance(std::size_t p, std::size_t q) const {
    double s = 0.0;
    const auto& a = points[p];
    const auto& b = points[q];
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = a[i] - b[i];
      s += d * d;
    }
    return std::sqrt(s);
  }
};

// Lambda scale for zero-distance merges; duplicated points must not
// produce infinite or NaN stabilities.
constexpr double kLambdaCap = 1e12;

inline double distance_to_lambda(double dist) {
  if (dist <= 0.0) return kLambdaCap;
  return std::min(1.0 / dist, kLambdaCap);
}

// Distance from each point to its m_pts-th nearest neighbor, the point
// itself counting as its own first neighbor.
inline std::vector<double> core_distances(const PointSet& x, std::size_t m_pts,
                                          unsigned threads = 1) {
  x.validate();
  const std::size_t n = x.size();
  if (m_pts < 1 || m_pts > n) throw std::invalid_argument("core_distances: m_pts out of range");
  std::vector<double> core(n, 0.0);
  auto work = [&](std::size_t lo, std::size_t hi) {
    std::vector<double> row(n);
    for (std::size_t p = lo; p < hi; ++p) {
      for (std::size_t q = 0; q < n; ++q) row[q] = x.distance(p, q);
      std::nth_element(row.begin(), row.begin() + (m_pts - 1), row.end());
      core[p] = row[m_pts - 1];
    }
  };
  if (threads <= 1 || n < 256) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t step = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t lo = std::min<std::size_t>(t * step, n);
      const std::size_t hi = std::min(lo + step, n);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return core;
}

inline double mutual_reachability(const PointSet& x, const std::vector<double>& core,
                                  std::size_t p, std::size_t q) {
  return std::max({core.at(p), core.at(q), x.distance(p, q)});
}

struct MstEdge {
  std::uint32_t p = 0, q = 0;
  double weight = 0.0;
};

// Prim's algorithm on the implicit dense mutual-reachability graph.
// O(N^2) time, O(N) memory. Ties broken by (weight, index) so the tree
// is the same on every platform. Edges returned sorted by weight.
inline std::vector<MstEdge> build_mst(const PointSet& x, const std::vector<double>& core) {
  const std::size_t n = x.size();
  std::vector<MstEdge> edges;
  if (n < 2) return edges;
  std::vector<char> in_tree(n, 0);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::uint32_t> partner(n, 0);
  in_tree[0] = 1;
  std::size_t current = 0;
  for (std::size_t added = 1; added < n; ++added) {
    for (std::size_t q = 0; q < n; ++q) {
      if (in_tree[q]) continue;
      const double w = std::max({core[current], core[q], x.distance(current, q)});
      if (w < best[q]) {
        best[q] = w;
        partner[q] = static_cast<std::uint32_t>(current);
      }
    }
    std::size_t pick = n;
    for (std::size_t q = 0; q < n; ++q) {
      if (in_tree[q]) continue;
      if (pick == n || best[q] < best[pick]) pick = q;
    }
    MstEdge e;
    e.p = partner[pick];
    e.q = static_cast<std::uint32_t>(pick);
    if (e.p > e.q) std::swap(e.p, e.q);
    e.weight = best[pick];
    edges.push_back(e);
    in_tree[pick] = 1;
    current = pick;
  }
  std::sort(edges.begin(), edges.end(), [](const MstEdge& a, const MstEdge& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    if (a.p != b.p) return a.p < b.p;
    return a.q < b.q;
  });
  return edges;
}

// Single-linkage merge: the two components joined, the merge distance and
// the size of the merged component. Node ids: 0..n-1 points, n..2n-2 merges.
struct LinkageNode {
  std::int64_t left = -1, right = -1;
  double dist = 0.0;
  std::uint32_t size = 1;
};

// Union-find pass over the sorted MST edges. Returns all 2n-1 nodes
// (leaves first); the last node is the root.
inline std::vector<LinkageNode> single_linkage(const std::vector<MstEdge>& edges,
                                               std::size_t n) {
  std::vector<LinkageNode> nodes(n);
  std::vector<std::int64_t> repr(n);  // component -> current node id
  std::vector<std::int64_t> uf(n);
  for (std::size_t i = 0; i < n; ++i) {
    repr[i] = static_cast<std::int64_t>(i);
    uf[i] = static_cast<std::int64_t>(i);
  }
  auto find = [&uf](std::int64_t a) {
    while (uf[a] != a) {
      uf[a] = uf[uf[a]];
      a = uf[a];
    }
    return a;
  };
  for (const auto& e : edges) {
    const std::int64_t ra = find(e.p);
    const std::int64_t rb = find(e.q);
    if (ra == rb) continue;
    LinkageNode merge;
    merge.left = repr[ra];
    merge.right = repr[rb];
    merge.dist = e.weight;
    merge.size = nodes[merge.left].size + nodes[merge.right].size;
    nodes.push_back(merge);
    uf[rb] = ra;
    repr[ra] = static_cast<std::int64_t>(nodes.size() - 1);
  }
  return nodes;
}

// One cluster of the condensed hierarchy.
struct CondensedCluster {
  std::int32_t parent = -1;                  // -1 for root
  double birth_lambda = 0.0;
  std::uint32_t size_at_birth = 0;
  std::vector<std::int32_t> children;        // cluster ids of a true split
  std::vector<std::pair<std::uint32_t, double>> point_exits;  // fall-outs
  double split_lambda = 0.0;                 // lambda of the true split, if any
  double stability = 0.0;
};

struct CondensedTree {
  std::size_t n_points = 0;
  std::vector<CondensedCluster> clusters;            // [0] is the root
  std::vector<std::int32_t> fall_cluster;            // per point: cluster it fell out of
  std::vector<double> fall_lambda;                   // per point: lambda of the fall-out
  std::vector<std::int32_t> selected;                // filled by eom_extract
};

namespace detail {

inline void collect_leaves(const std::vector<LinkageNode>& nodes, std::int64_t at,
                           std::size_t n, std::vector<std::uint32_t>& out) {
  std::vector<std::int64_t> stack{at};
  while (!stack.empty()) {
    const std::int64_t t = stack.back();
    stack.pop_back();
    if (t < static_cast<std::int64_t>(n)) {
      out.push_back(static_cast<std::uint32_t>(t));
    } else {
      stack.push_back(nodes[t].left);
      stack.push_back(nodes[t].right);
    }
  }
}

}  // namespace detail

// Condense the single-linkage dendrogram: a split is a true cluster split
// only when both children hold at least m_clSize points; otherwise the
// smaller side falls out of the parent at lambda = 1 / merge distance.
inline CondensedTree condense_tree(const std::vector<MstEdge>& mst_edges,
                                   std::size_t n_points, std::size_t m_clSize) {
  if (m_clSize < 1) throw std::invalid_argument("condense_tree: m_clSize must be >= 1");
  CondensedTree tree;
  tree.n_points = n_points;
  tree.fall_cluster.assign(n_points, 0);
  tree.fall_lambda.assign(n_points, kLambdaCap);

  CondensedCluster root;
  root.birth_lambda = 0.0;
  root.size_at_birth = static_cast<std::uint32_t>(n_points);
  tree.clusters.push_back(root);
  if (n_points == 1) {
    tree.fall_cluster[0] = 0;
    tree.fall_lambda[0] = kLambdaCap;
    tree.clusters[0].point_exits.emplace_back(0u, kLambdaCap);
    tree.clusters[0].stability = 0.0;
    return tree;
  }

  const std::vector<LinkageNode> nodes = single_linkage(mst_edges, n_points);
  const std::int64_t root_node = static_cast<std::int64_t>(nodes.size()) - 1;

  struct Frame {
    std::int64_t link_node;
    std::int32_t cluster;
  };
  std::vector<Frame> stack{{root_node, 0}};
  std::vector<std::uint32_t> scratch;

  auto fall_out = [&](std::int64_t subtree, std::int32_t cluster, double lambda) {
    scratch.clear();
    detail::collect_leaves(nodes, subtree, n_points, scratch);
    for (std::uint32_t p : scratch) {
      tree.fall_cluster[p] = cluster;
      tree.fall_lambda[p] = lambda;
      tree.clusters[cluster].point_exits.emplace_back(p, lambda);
      tree.clusters[cluster].stability += lambda - tree.clusters[cluster].birth_lambda;
    }
  };

  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    std::int64_t at = fr.link_node;
    const std::int32_t cluster = fr.cluster;
    // Walk down inside this cluster until it truly splits or dissolves.
    for (;;) {
      if (at < static_cast<std::int64_t>(n_points)) {
        // Lone point reached (m_clSize == 1 path): exits at the cap.
        fall_out(at, cluster, kLambdaCap);
        break;
      }
      const LinkageNode& nd = nodes[at];
      const double lambda = distance_to_lambda(nd.dist);
      const std::uint32_t sl = (nd.left < static_cast<std::int64_t>(n_points))
                                   ? 1u : nodes[nd.left].size;
      const std::uint32_t sr = (nd.right < static_cast<std::int64_t>(n_points))
                                   ? 1u : nodes[nd.right].size;
      const bool left_ok = sl >= m_clSize;
      const bool right_ok = sr >= m_clSize;
      if (left_ok && right_ok) {
        // True split: remaining members exit here, two children are born.
        auto& c = tree.clusters[cluster];
        c.split_lambda = lambda;
        c.stability += static_cast<double>(sl + sr) * (lambda - c.birth_lambda);
        for (std::int64_t side : {nd.left, nd.right}) {
          CondensedCluster child;
          child.parent = cluster;
          child.birth_lambda = lambda;
          child.size_at_birth = (side < static_cast<std::int64_t>(n_points))
                                    ? 1u : nodes[side].size;
          tree.clusters.push_back(child);
          const std::int32_t cid = static_cast<std::int32_t>(tree.clusters.size() - 1);
          tree.clusters[cluster].children.push_back(cid);
          stack.push_back({side, cid});
        }
        break;
      }
      if (!left_ok && !right_ok) {
        fall_out(nd.left, cluster, lambda);
        fall_out(nd.right, cluster, lambda);
        break;
      }
      // One side too small: it falls out, the walk continues in the other.
      if (left_ok) {
        fall_out(nd.right, cluster, lambda);
        at = nd.left;
      } else {
        fall_out(nd.left, cluster, lambda);
        at = nd.right;
      }
    }
  }
  return tree;
}

struct ClusterLabels {
  std::vector<std::int32_t> labels;  // -1 noise, else 0..K-1
  std::vector<std::uint32_t> cluster_sizes;

  std::size_t num_clusters() const { return cluster_sizes.size(); }
  std::size_t noise_count() const {
    std::size_t c = 0;
    for (auto l : labels)
      if (l < 0) ++c;
    return c;
  }
};

// Excess-of-Mass flat extraction. A cluster is selected when its own
// stability exceeds the total selected stability of its descendants. The
// root is never selected while it has child clusters; clusters smaller
// than min_size are never selectable.
inline ClusterLabels eom_extract(CondensedTree& tree, std::size_t min_size = 2) {
  const std::size_t nc = tree.clusters.size();
  std::vector<double> sel_stab(nc, 0.0);
  std::vector<char> marked(nc, 0);
  // Children always carry a larger id than their parent, so a reverse
  // scan is a bottom-up traversal.
  for (std::size_t i = nc; i-- > 0;) {
    auto& c = tree.clusters[i];
    const bool is_root = (c.parent < 0);
    double child_sum = 0.0;
    for (std::int32_t ch : c.children) child_sum += sel_stab[ch];
    const bool selectable =
        c.size_at_birth >= min_size && !(is_root && !c.children.empty());
    if (c.children.empty()) {
      sel_stab[i] = c.stability;
      marked[i] = selectable ? 1 : 0;
    } else if (selectable && c.stability > child_sum) {
      sel_stab[i] = c.stability;
      marked[i] = 1;
    } else {
      sel_stab[i] = child_sum;
    }
  }
  // Top-down: keep only marked clusters with no marked ancestor.
  tree.selected.clear();
  std::vector<std::int32_t> stack{0};
  while (!stack.empty()) {
    const std::int32_t i = stack.back();
    stack.pop_back();
    if (marked[i]) {
      tree.selected.push_back(i);
      continue;
    }
    for (std::int32_t ch : tree.clusters[i].children) stack.push_back(ch);
  }
  std::sort(tree.selected.begin(), tree.selected.end());

  std::vector<std::int32_t> label_of(nc, -1);
  for (std::size_t k = 0; k < tree.selected.size(); ++k)
    label_of[tree.selected[k]] = static_cast<std::int32_t>(k);

  ClusterLabels out;
  out.labels.assign(tree.n_points, -1);
  out.cluster_sizes.assign(tree.selected.size(), 0);
  for (std::size_t p = 0; p < tree.n_points; ++p) {
    std::int32_t c = tree.fall_cluster[p];
    while (c >= 0) {
      if (label_of[c] >= 0) {
        out.labels[p] = label_of[c];
        out.cluster_sizes[label_of[c]]++;
        break;
      }
      c = tree.clusters[c].parent;
    }
  }
  return out;
}

// Full pipeline: core distances, mutual-reachability MST, condensed tree,
// EOM extraction.
inline ClusterLabels hdbscan(const PointSet& x, std::size_t m_pts, std::size_t m_clSize,
                             unsigned threads = 1, CondensedTree* tree_out = nullptr) {
  x.validate();
  const std::size_t n = x.size();
  if (m_clSize < 2) throw std::invalid_argument("hdbscan: m_clSize must be >= 2");
  if (n < 2 || n < m_clSize) {
    ClusterLabels all_noise;
    all_noise.labels.assign(n, -1);
    return all_noise;
  }
  const std::vector<double> core = core_distances(x, std::min(m_pts, n), threads);
  const std::vector<MstEdge> mst = build_mst(x, core);
  CondensedTree tree = condense_tree(mst, n, m_clSize);
  ClusterLabels labels = eom_extract(tree, m_clSize);
  if (tree_out) *tree_out = std::move(tree);
  return labels;
}

}  // namespace litho
