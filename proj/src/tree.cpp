#include "bmep/tree.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <set>

#include <nlohmann/json.hpp>

#include "bmep/pair_index.hpp"

namespace bmep {

namespace {

// Rooted canonical serialization of the subtree hanging off `node` away from
// `parent`. Children strings are sorted, so the result is invariant under
// planar rotations.
std::string canon_subtree(const std::vector<std::vector<int>>& adj, int n, int node,
                          int parent) {
  if (node < n) return std::to_string(node + 1);
  std::vector<std::string> parts;
  for (int next : adj[node]) {
    if (next != parent) parts.push_back(canon_subtree(adj, n, next, node));
  }
  std::sort(parts.begin(), parts.end());
  std::string out = "(";
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += ',';
    out += parts[k];
  }
  out += ')';
  return out;
}

}  // namespace

BinaryTree::BinaryTree(int n, std::vector<std::vector<int>> adj)
    : n_(n), adj_(std::move(adj)) {
  key_ = "(1," + canon_subtree(adj_, n_, adj_[0][0], 0) + ")";
}

BinaryTree BinaryTree::from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
  if (n < 3) throw DomainError("BinaryTree: need at least 3 leaves");
  const int nodes = 2 * n - 2;
  if (static_cast<int>(edges.size()) != 2 * n - 3)
    throw DomainError("BinaryTree: expected " + std::to_string(2 * n - 3) + " edges, got " +
                      std::to_string(edges.size()));
  std::vector<std::vector<int>> adj(nodes);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= nodes || v >= nodes || u == v)
      throw DomainError("BinaryTree: edge endpoint out of range");
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  for (int v = 0; v < nodes; ++v) {
    const std::size_t want = v < n ? 1 : 3;
    if (adj[v].size() != want)
      throw DomainError("BinaryTree: node " + std::to_string(v) + " has degree " +
                        std::to_string(adj[v].size()));
    std::sort(adj[v].begin(), adj[v].end());
  }
  // Connected + |E| = |V|-1 makes the graph a tree.
  std::vector<char> seen(nodes, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 0;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    ++reached;
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        q.push(w);
      }
  }
  if (reached != nodes) throw DomainError("BinaryTree: graph is not connected");
  return BinaryTree(n, std::move(adj));
}

std::vector<std::pair<int, int>> BinaryTree::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < node_count(); ++u)
    for (int v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<int, int>> BinaryTree::internal_edges() const {
  std::vector<std::pair<int, int>> out;
  for (auto [u, v] : edges())
    if (!is_leaf(u) && !is_leaf(v)) out.emplace_back(u, v);
  return out;
}

namespace {

using EdgeList = std::vector<std::pair<int, int>>;

// Leaf-insertion enumeration over edge lists in the final node numbering:
// leaves 0..n-1, internals n..2n-3. A k-leaf intermediate uses internals
// n..n+k-3.
void enumerate_edge_lists(int n, std::vector<EdgeList>& out) {
  std::vector<EdgeList> current;
  current.push_back({{0, n}, {1, n}, {2, n}});
  for (int k = 4; k <= n; ++k) {
    const int new_leaf = k - 1;
    const int new_internal = n + k - 3;
    std::vector<EdgeList> grown;
    grown.reserve(current.size() * (2 * k - 5));
    for (const EdgeList& tree : current) {
      for (std::size_t e = 0; e < tree.size(); ++e) {
        EdgeList next = tree;
        auto [u, v] = next[e];
        next[e] = {u, new_internal};
        next.emplace_back(new_internal, v);
        next.emplace_back(new_internal, new_leaf);
        grown.push_back(std::move(next));
      }
    }
    current = std::move(grown);
  }
  out = std::move(current);
}

}  // namespace

std::vector<BinaryTree> enumerate_trees(int n, int cap) {
  if (n < 3 || n > cap)
    throw DomainError("enumerate_trees: n must be in 3.." + std::to_string(cap));
  std::vector<EdgeList> lists;
  enumerate_edge_lists(n, lists);
  std::vector<BinaryTree> trees;
  trees.reserve(lists.size());
  for (const EdgeList& e : lists) trees.push_back(BinaryTree::from_edges(n, e));
  std::sort(trees.begin(), trees.end(),
            [](const BinaryTree& a, const BinaryTree& b) {
              return a.canonical_key() < b.canonical_key();
            });
  return trees;
}

int path_internal_nodes(const BinaryTree& t, int i, int j) {
  const int n = t.leaf_count();
  if (i == j || i < 1 || j < 1 || i > n || j > n)
    throw DomainError("path_internal_nodes: labels must be distinct leaves");
  const auto& adj = t.adjacency();
  std::vector<int> dist(t.node_count(), -1);
  std::queue<int> q;
  int src = BinaryTree::leaf_node(i), dst = BinaryTree::leaf_node(j);
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    if (v == dst) break;
    for (int w : adj[v])
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
  }
  // Every interior node of a leaf-to-leaf path has degree 3.
  return dist[dst] - 1;
}

std::vector<int> all_path_internal_nodes(const BinaryTree& t) {
  const int n = t.leaf_count();
  const auto& adj = t.adjacency();
  std::vector<int> out(num_pairs(n), 0);
  std::vector<int> dist(t.node_count());
  for (int i = 1; i <= n; ++i) {
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<int> q;
    int src = BinaryTree::leaf_node(i);
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : adj[v])
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
    }
    for (int j = i + 1; j <= n; ++j)
      out[pair_rank(i, j, n)] = dist[BinaryTree::leaf_node(j)] - 1;
  }
  return out;
}

std::vector<std::pair<int, int>> cherries(const BinaryTree& t) {
  const int n = t.leaf_count();
  std::vector<std::pair<int, int>> out;
  for (int v = n; v < t.node_count(); ++v) {
    std::vector<int> leaves;
    for (int w : t.adjacency()[v])
      if (t.is_leaf(w)) leaves.push_back(BinaryTree::leaf_label(w));
    for (std::size_t a = 0; a < leaves.size(); ++a)
      for (std::size_t b = a + 1; b < leaves.size(); ++b)
        out.emplace_back(std::min(leaves[a], leaves[b]), std::max(leaves[a], leaves[b]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Mask of leaf labels (bit label-1) in the subtree under `node` seen from
// `parent`, for every directed edge; filled for the parent->child direction
// of a DFS rooted at leaf 0.
void edge_masks(const BinaryTree& t, int node, int parent,
                std::map<std::pair<int, int>, std::uint64_t>& masks) {
  std::uint64_t m = 0;
  if (t.is_leaf(node)) m |= std::uint64_t{1} << node;
  for (int w : t.adjacency()[node]) {
    if (w == parent) continue;
    edge_masks(t, w, node, masks);
    m |= masks.at({node, w});
  }
  if (parent >= 0) masks[{parent, node}] = m;
}

std::map<std::pair<int, int>, std::uint64_t> all_edge_masks(const BinaryTree& t) {
  std::map<std::pair<int, int>, std::uint64_t> masks;
  edge_masks(t, 0, -1, masks);
  // 0 is a leaf, so the DFS covers every edge except none; orient from leaf 0.
  return masks;
}

}  // namespace

bool displays_clade(const BinaryTree& t, const std::vector<int>& clade_leaves) {
  const int n = t.leaf_count();
  std::set<int> uniq(clade_leaves.begin(), clade_leaves.end());
  if (uniq.size() != clade_leaves.size())
    throw DomainError("displays_clade: duplicate labels in clade");
  for (int x : uniq)
    if (x < 1 || x > n) throw DomainError("displays_clade: label out of range");
  const int size = static_cast<int>(uniq.size());
  if (size < 2 || size > n - 2)
    throw DomainError("displays_clade: clade size must be in 2..n-2");
  std::uint64_t want = 0;
  for (int x : uniq) want |= std::uint64_t{1} << (x - 1);
  const std::uint64_t full = (n == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  for (auto& [edge, mask] : all_edge_masks(t)) {
    if (mask == want || mask == (full ^ want)) return true;
  }
  return false;
}

bool is_caterpillar(const BinaryTree& t) {
  if (t.leaf_count() <= 4) return true;
  return cherries(t).size() == 2;
}

std::array<std::pair<int, int>, 2> caterpillar_ends(const BinaryTree& t) {
  if (t.leaf_count() == 3)
    throw DomainError("caterpillar_ends: undefined for n=3 (three cherries)");
  if (!is_caterpillar(t)) throw DomainError("caterpillar_ends: tree is not a caterpillar");
  auto ch = cherries(t);
  return {ch[0], ch[1]};
}

bool coplanar_with_cycle(const BinaryTree& t, const std::vector<int>& cycle) {
  const int n = t.leaf_count();
  if (static_cast<int>(cycle.size()) != n)
    throw DomainError("coplanar_with_cycle: cycle must list all n labels");
  std::vector<int> pos(n + 1, -1);
  for (int k = 0; k < n; ++k) {
    int label = cycle[k];
    if (label < 1 || label > n || pos[label] >= 0)
      throw DomainError("coplanar_with_cycle: cycle is not a permutation of 1..n");
    pos[label] = k;
  }
  // A tree embeds in the disk with this boundary order iff each internal
  // edge splits the leaves into two contiguous arcs.
  auto masks = all_edge_masks(t);
  for (auto [u, v] : t.internal_edges()) {
    std::uint64_t side = masks.count({u, v}) ? masks.at({u, v}) : masks.at({v, u});
    // Count circular "arc starts" within the side set.
    std::vector<char> in(n, 0);
    for (int label = 1; label <= n; ++label)
      if (side >> (label - 1) & 1) in[pos[label]] = 1;
    int starts = 0;
    for (int k = 0; k < n; ++k)
      if (in[k] && !in[(k + n - 1) % n]) ++starts;
    if (starts > 1) return false;
  }
  return true;
}

std::vector<BinaryTree> nni_neighbors(const BinaryTree& t) {
  const int n = t.leaf_count();
  std::vector<BinaryTree> out;
  if (n == 3) return out;
  auto base_edges = t.edges();
  auto swap_edge = [&](int x, int a, int y, int c) {
    EdgeList next;
    next.reserve(base_edges.size());
    for (auto [u, v] : base_edges) {
      if ((u == std::min(x, a) && v == std::max(x, a)) ||
          (u == std::min(y, c) && v == std::max(y, c)))
        continue;
      next.emplace_back(u, v);
    }
    next.emplace_back(x, c);
    next.emplace_back(y, a);
    return BinaryTree::from_edges(n, next);
  };
  for (auto [u, v] : t.internal_edges()) {
    std::vector<int> us, vs;
    for (int w : t.adjacency()[u])
      if (w != v) us.push_back(w);
    for (int w : t.adjacency()[v])
      if (w != u) vs.push_back(w);
    // Swapping one subtree of u with one of v realizes the two alternative
    // quartet topologies across this edge.
    out.push_back(swap_edge(u, us[1], v, vs[0]));
    out.push_back(swap_edge(u, us[1], v, vs[1]));
  }
  std::sort(out.begin(), out.end(),
            [](const BinaryTree& a, const BinaryTree& b) {
              return a.canonical_key() < b.canonical_key();
            });
  return out;
}

// ---------------------------------------------------------------------------
// Newick
// ---------------------------------------------------------------------------

namespace {

struct NewickNode {
  int label = -1;  // >= 1 for leaves
  std::vector<NewickNode> children;
};

struct NewickParser {
  const std::string& text;
  std::size_t pos = 0;

  explicit NewickParser(const std::string& s) : text(s) {}

  void skip_space() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  char peek() {
    skip_space();
    if (pos >= text.size()) throw ParseError("unexpected end of Newick input", pos);
    return text[pos];
  }

  void expect(char c) {
    if (peek() != c)
      throw ParseError(std::string("expected '") + c + "'", pos);
    ++pos;
  }

  void skip_branch_length() {
    skip_space();
    if (pos < text.size() && text[pos] == ':') {
      ++pos;
      skip_space();
      std::size_t start = pos;
      while (pos < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
              text[pos] == '-' || text[pos] == '+' || text[pos] == 'e' || text[pos] == 'E'))
        ++pos;
      if (pos == start) throw ParseError("expected branch length after ':'", pos);
    }
  }

  NewickNode parse_node() {
    NewickNode node;
    if (peek() == '(') {
      ++pos;
      node.children.push_back(parse_node());
      while (peek() == ',') {
        ++pos;
        node.children.push_back(parse_node());
      }
      expect(')');
      skip_space();
      if (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos]))))
        throw ParseError("labels on internal nodes are not supported", pos);
    } else {
      skip_space();
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos == start) throw ParseError("expected integer leaf label", pos);
      node.label = std::stoi(text.substr(start, pos - start));
      if (node.label < 1) throw ParseError("leaf labels must be >= 1", start);
    }
    skip_branch_length();
    return node;
  }
};

int count_leaves(const NewickNode& node) {
  if (node.children.empty()) return 1;
  int total = 0;
  for (const auto& c : node.children) total += count_leaves(c);
  return total;
}

// Assigns final node ids and emits edges; returns the id representing `node`.
int build_edges(const NewickNode& node, int n, int& next_internal, EdgeList& edges) {
  if (node.children.empty()) return BinaryTree::leaf_node(node.label);
  if (node.children.size() != 2)
    throw DomainError("parse_newick: internal node with " +
                      std::to_string(node.children.size()) + " children (tree not binary)");
  int self = next_internal++;
  for (const auto& c : node.children) {
    int child = build_edges(c, n, next_internal, edges);
    edges.emplace_back(self, child);
  }
  return self;
}

}  // namespace

BinaryTree parse_newick(const std::string& text) {
  NewickParser p(text);
  NewickNode root = p.parse_node();
  p.skip_space();
  if (p.pos >= text.size() || text[p.pos] != ';')
    throw ParseError("expected ';' terminating the tree", p.pos);
  ++p.pos;
  p.skip_space();
  if (p.pos != text.size()) throw ParseError("trailing characters after ';'", p.pos);

  if (root.children.empty()) throw DomainError("parse_newick: single leaf is not a tree");
  const int n = count_leaves(root);
  if (n < 3) throw DomainError("parse_newick: need at least 3 leaves");

  // Validate the label set before touching node ids.
  std::function<void(const NewickNode&, std::set<int>&)> collect =
      [&](const NewickNode& node, std::set<int>& labels) {
        if (node.children.empty()) {
          if (!labels.insert(node.label).second)
            throw DomainError("parse_newick: duplicate leaf label " +
                              std::to_string(node.label));
        }
        for (const auto& c : node.children) collect(c, labels);
      };
  std::set<int> labels;
  collect(root, labels);
  if (*labels.rbegin() != n)
    throw DomainError("parse_newick: leaf labels must be exactly 1..n");

  EdgeList edges;
  int next_internal = n;
  if (root.children.size() == 2) {
    // Rooted form: suppress the degree-2 root by joining its two subtrees.
    int a = build_edges(root.children[0], n, next_internal, edges);
    int b = build_edges(root.children[1], n, next_internal, edges);
    edges.emplace_back(a, b);
  } else if (root.children.size() == 3) {
    // Already-unrooted form: the root is an internal node.
    int self = next_internal++;
    for (const auto& c : root.children)
      edges.emplace_back(self, build_edges(c, n, next_internal, edges));
  } else {
    throw DomainError("parse_newick: root must have 2 or 3 subtrees");
  }
  return BinaryTree::from_edges(n, edges);
}

std::string format_newick(const BinaryTree& t) { return t.canonical_key() + ";"; }

BinaryTree make_caterpillar(const std::vector<int>& spine_order) {
  const int n = static_cast<int>(spine_order.size());
  if (n < 4) throw DomainError("make_caterpillar: need at least 4 leaves");
  EdgeList edges;
  auto spine_node = [&](int j) { return n + j - 1; };  // j in 1..n-2
  edges.emplace_back(BinaryTree::leaf_node(spine_order[0]), spine_node(1));
  edges.emplace_back(BinaryTree::leaf_node(spine_order[1]), spine_node(1));
  for (int j = 1; j <= n - 3; ++j) edges.emplace_back(spine_node(j), spine_node(j + 1));
  for (int j = 2; j <= n - 3; ++j)
    edges.emplace_back(BinaryTree::leaf_node(spine_order[j]), spine_node(j));
  edges.emplace_back(BinaryTree::leaf_node(spine_order[n - 2]), spine_node(n - 2));
  edges.emplace_back(BinaryTree::leaf_node(spine_order[n - 1]), spine_node(n - 2));
  return BinaryTree::from_edges(n, edges);
}

std::vector<BinaryTree> enumerate_trees_with_cherries(
    int n, const std::vector<std::pair<int, int>>& fixed_cherries, int cap) {
  std::set<int> used;
  for (auto [a, b] : fixed_cherries) {
    if (a < 1 || b < 1 || a > n || b > n || a == b)
      throw DomainError("enumerate_trees_with_cherries: bad pair");
    if (!used.insert(a).second || !used.insert(b).second)
      throw DomainError(
          "enumerate_trees_with_cherries: pairs intersect; intersecting cherries cannot "
          "coexist on one tree");
  }
  const int m = n - static_cast<int>(fixed_cherries.size());

  // Slot s holds either a single label or a fixed cherry; slots are ordered
  // by their smallest label so results are deterministic.
  struct Slot {
    int rep;
    std::vector<int> labels;  // size 1 or 2
  };
  std::vector<Slot> slots;
  for (auto [a, b] : fixed_cherries)
    slots.push_back({std::min(a, b), {std::min(a, b), std::max(a, b)}});
  for (int x = 1; x <= n; ++x)
    if (!used.count(x)) slots.push_back({x, {x}});
  std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) {
    return a.rep < b.rep;
  });

  // Expand one slot-level edge list into final node numbering.
  auto expand = [&](const EdgeList& slot_edges, int slot_internals) {
    EdgeList edges;
    int next_internal = n;
    // Map slot-tree node -> final node. Slot leaves are 0..m-1, slot
    // internals m..m+slot_internals-1.
    std::vector<int> node_map(m + slot_internals, -1);
    for (int s = 0; s < m; ++s) {
      const Slot& slot = slots[s];
      if (slot.labels.size() == 1) {
        node_map[s] = BinaryTree::leaf_node(slot.labels[0]);
      } else {
        int w = next_internal++;
        node_map[s] = w;
        edges.emplace_back(w, BinaryTree::leaf_node(slot.labels[0]));
        edges.emplace_back(w, BinaryTree::leaf_node(slot.labels[1]));
      }
    }
    for (int k = 0; k < slot_internals; ++k) node_map[m + k] = next_internal++;
    for (auto [u, v] : slot_edges) edges.emplace_back(node_map[u], node_map[v]);
    return BinaryTree::from_edges(n, edges);
  };

  std::vector<BinaryTree> out;
  if (m == 2) {
    out.push_back(expand({{0, 1}}, 0));
  } else {
    std::vector<EdgeList> lists;
    {
      // Slot trees in slot numbering: leaves 0..m-1, internals m..2m-3.
      std::vector<EdgeList> tmp;
      enumerate_edge_lists(m, tmp);
      lists = std::move(tmp);
    }
    if (m > cap) throw DomainError("enumerate_trees_with_cherries: too many free slots");
    out.reserve(lists.size());
    for (const EdgeList& slot_edges : lists) out.push_back(expand(slot_edges, m - 2));
  }
  std::sort(out.begin(), out.end(), [](const BinaryTree& a, const BinaryTree& b) {
    return a.canonical_key() < b.canonical_key();
  });
  return out;
}

BinaryTree random_tree(int n, std::mt19937_64& rng) {
  if (n < 3) throw DomainError("random_tree: n must be >= 3");
  EdgeList edges = {{0, n}, {1, n}, {2, n}};
  for (int k = 4; k <= n; ++k) {
    const int new_leaf = k - 1;
    const int new_internal = n + k - 3;
    std::size_t e = static_cast<std::size_t>(rng() % edges.size());
    auto [u, v] = edges[e];
    edges[e] = {u, new_internal};
    edges.emplace_back(new_internal, v);
    edges.emplace_back(new_internal, new_leaf);
  }
  return BinaryTree::from_edges(n, edges);
}

std::string tree_to_json(const BinaryTree& t) {
  nlohmann::json j;
  j["n"] = t.leaf_count();
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : t.edges()) edges.push_back({u, v});
  j["edges"] = std::move(edges);
  nlohmann::json labels = nlohmann::json::object();
  for (int k = 0; k < t.leaf_count(); ++k)
    labels[std::to_string(k)] = BinaryTree::leaf_label(k);
  j["leaf_labels"] = std::move(labels);
  return j.dump();
}

BinaryTree tree_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("tree_from_json: ") + e.what(), 0);
  }
  const int n = j.at("n").get<int>();
  if (n < 3) throw DomainError("tree_from_json: n must be >= 3");
  // The format allows arbitrary node ids; remap through leaf_labels.
  std::map<long long, int> node_map;
  for (auto& [key, value] : j.at("leaf_labels").items()) {
    long long node = std::stoll(key);
    int label = value.get<int>();
    if (label < 1 || label > n) throw DomainError("tree_from_json: leaf label out of range");
    node_map[node] = BinaryTree::leaf_node(label);
  }
  if (static_cast<int>(node_map.size()) != n)
    throw DomainError("tree_from_json: expected n leaf labels");
  int next_internal = n;
  EdgeList edges;
  for (const auto& e : j.at("edges")) {
    long long u = e.at(0).get<long long>(), v = e.at(1).get<long long>();
    for (long long x : {u, v})
      if (!node_map.count(x)) node_map[x] = next_internal++;
    edges.emplace_back(node_map[u], node_map[v]);
  }
  return BinaryTree::from_edges(n, edges);
}

}  // namespace bmep
