#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bmep/errors.hpp"

namespace bmep {

/// Unrooted leaf-labeled binary tree on n >= 3 taxa.
///
/// Node convention: nodes 0..n-1 are the leaves (leaf node k carries label
/// k+1), nodes n..2n-3 are the internal degree-3 nodes. Trees are immutable
/// after construction; equality and ordering go through canonical_key(),
/// a minimal rooted-at-leaf-1 serialization that is identical for
/// label-respecting isomorphic trees.
class BinaryTree {
 public:
  /// Builds and validates a tree from an undirected edge list over the node
  /// convention above. Throws DomainError unless the graph is connected,
  /// acyclic, and has exactly n degree-1 and n-2 degree-3 nodes.
  static BinaryTree from_edges(int n, const std::vector<std::pair<int, int>>& edges);

  int leaf_count() const { return n_; }
  int node_count() const { return 2 * n_ - 2; }

  static int leaf_node(int label) { return label - 1; }
  static int leaf_label(int node) { return node + 1; }
  bool is_leaf(int node) const { return node < n_; }

  const std::vector<std::vector<int>>& adjacency() const { return adj_; }

  /// All edges as (min,max) node pairs, sorted.
  std::vector<std::pair<int, int>> edges() const;
  /// Edges whose endpoints are both internal nodes; there are n-3 of them.
  std::vector<std::pair<int, int>> internal_edges() const;

  const std::string& canonical_key() const { return key_; }

  bool operator==(const BinaryTree& other) const { return key_ == other.key_; }
  bool operator!=(const BinaryTree& other) const { return key_ != other.key_; }
  bool operator<(const BinaryTree& other) const { return key_ < other.key_; }

 private:
  BinaryTree(int n, std::vector<std::vector<int>> adj);
  int n_ = 0;
  std::vector<std::vector<int>> adj_;
  std::string key_;
};

/// All (2n-5)!! trees on n labeled leaves, sorted by canonical key.
/// Construction is leaf insertion: every tree on k leaves spawns 2k-3 trees
/// on k+1 leaves by subdividing each edge.
std::vector<BinaryTree> enumerate_trees(int n, int cap = 10);

/// Number of internal nodes on the leaf path between labels i and j
/// (the exponent l in x_ij = 2^(n-2-l)); equals the hop distance minus one.
int path_internal_nodes(const BinaryTree& t, int i, int j);

/// All l values at once, indexed by pair rank. Cheaper than per-pair calls.
std::vector<int> all_path_internal_nodes(const BinaryTree& t);

/// Cherries as sorted (min,max) label pairs. For n=3 all three pairs share
/// the unique internal node and all three are returned.
std::vector<std::pair<int, int>> cherries(const BinaryTree& t);

/// True iff some internal edge of t separates exactly `clade_leaves` from the
/// rest. Requires 2 <= |clade_leaves| <= n-2.
bool displays_clade(const BinaryTree& t, const std::vector<int>& clade_leaves);

/// A caterpillar has exactly two cherries; every tree on n <= 4 leaves counts.
bool is_caterpillar(const BinaryTree& t);

/// The two end cherries of a caterpillar. Throws DomainError if t is not a
/// caterpillar or if n=3 (where the ends are not well defined).
std::array<std::pair<int, int>, 2> caterpillar_ends(const BinaryTree& t);

/// True iff t has a planar embedding whose leaves read in circular order give
/// `cycle`; equivalently, every clade of t is a contiguous arc of the cycle.
bool coplanar_with_cycle(const BinaryTree& t, const std::vector<int>& cycle);

/// The 2(n-3) nearest-neighbor-interchange rearrangements of t, sorted by
/// canonical key. Empty for n=3.
std::vector<BinaryTree> nni_neighbors(const BinaryTree& t);

/// Newick text with integer leaf labels. Rooted binary input is accepted and
/// unrooted by suppressing the degree-2 root; a root trifurcation is read as
/// an internal node. Branch lengths are parsed and discarded.
BinaryTree parse_newick(const std::string& text);

/// Canonical Newick form: the canonical key plus the terminating semicolon.
/// parse_newick(format_newick(t)) == t.
std::string format_newick(const BinaryTree& t);

/// Caterpillar whose spine reads spine_order[0], ..., spine_order[n-1]:
/// the first two labels form one end cherry, the last two the other.
BinaryTree make_caterpillar(const std::vector<int>& spine_order);

/// All trees on n leaves that display every listed pair as a cherry, sorted
/// by canonical key. Pairs must be disjoint (intersecting cherries cannot
/// coexist on one tree). Count is (2m-5)!! for m = n - #pairs pseudo-leaves.
std::vector<BinaryTree> enumerate_trees_with_cherries(
    int n, const std::vector<std::pair<int, int>>& fixed_cherries, int cap = 16);

/// Uniform-ish random topology by random leaf insertion; deterministic for a
/// given generator state.
BinaryTree random_tree(int n, std::mt19937_64& rng);

/// JSON edge-list form {"n":..., "edges":[[u,v],...], "leaf_labels":{node:label}}.
std::string tree_to_json(const BinaryTree& t);
BinaryTree tree_from_json(const std::string& text);

}  // namespace bmep
