#include "qlb/kp_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace qlb {

namespace {

constexpr double kMinScalar = 1e-100;
constexpr double kMaxScalar = 1e100;

std::size_t ceil_log2(std::size_t d) {
  std::size_t depth = 0;
  while ((std::size_t{1} << depth) < d) ++depth;
  return depth;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

KPTree::KPTree(std::size_t d) : d_(d), depth_(std::max<std::size_t>(1, ceil_log2(d))) {
  if (d < 1) throw std::invalid_argument("KPTree: d must be at least 1");
}

KPTree KPTree::from_dense(const std::vector<double>& theta) {
  KPTree tree(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) {
    if (theta[j] != 0.0) tree.update(1.0, theta[j], j);
  }
  return tree;
}

double KPTree::leaf_value(std::size_t j) const {
  const auto it = nodes_.find(key(depth_, j));
  return it == nodes_.end() ? 0.0 : it->second;
}

double KPTree::read_entry(std::size_t j) const {
  if (j >= d_) throw std::out_of_range("KPTree::read_entry: index out of range");
  touched_ = 1;  // root
  for (std::size_t layer = 1; layer <= depth_; ++layer) {
    ++touched_;
    const auto it = nodes_.find(key(layer, j >> (depth_ - layer)));
    if (it == nodes_.end()) return 0.0;
    if (layer == depth_) return it->second * A_;
  }
  return 0.0;
}

double KPTree::child_sum(std::size_t layer, std::size_t k, bool& any_child) const {
  double sum = 0.0;
  any_child = false;
  for (std::size_t c = 2 * k; c <= 2 * k + 1; ++c) {
    ++touched_;
    const auto it = nodes_.find(key(layer + 1, c));
    if (it != nodes_.end()) {
      sum += std::abs(it->second);
      any_child = true;
    }
  }
  return sum;
}

void KPTree::refresh_path(std::size_t j) {
  for (std::size_t layer = depth_; layer-- > 0;) {
    const std::size_t k = j >> (depth_ - layer);
    bool has_children = false;
    const double sum = child_sum(layer, k, has_children);
    ++touched_;
    if (has_children) {
      nodes_[key(layer, k)] = sum;
    } else {
      nodes_.erase(key(layer, k));
    }
  }
}

void KPTree::update(double a, double b, std::size_t j) {
  if (a == 0.0) throw std::invalid_argument("KPTree::update: a must be nonzero");
  if (j >= d_) throw std::out_of_range("KPTree::update: index out of range");
  touched_ = 0;
  const double scaled = a * A_;
  const auto leaf = nodes_.find(key(depth_, j));
  ++touched_;
  bool path_changed = false;
  if (leaf != nodes_.end()) {
    const double v = leaf->second + b / scaled;
    ++touched_;
    if (v == 0.0) {
      nodes_.erase(leaf);
      --t_;
    } else {
      leaf->second = v;
    }
    path_changed = true;
  } else if (b != 0.0) {
    nodes_[key(depth_, j)] = b / scaled;
    ++touched_;
    ++t_;
    path_changed = true;
  }
  A_ = scaled;
  if (path_changed) refresh_path(j);
  maybe_renormalize();
}

void KPTree::maybe_renormalize() {
  const double mag = std::abs(A_);
  if (mag < kMinScalar || mag > kMaxScalar) rebuild();
}

void KPTree::rebuild() {
  std::map<std::size_t, double> leaves;
  for (const auto& [k, v] : nodes_) {
    if ((k >> 56) == depth_) leaves.emplace(static_cast<std::size_t>(k & ((1ULL << 56) - 1)), v);
  }
  nodes_.clear();
  std::map<std::size_t, double> layer_nodes;
  for (const auto& [j, v] : leaves) {
    const double folded = v * A_;
    if (folded != 0.0) layer_nodes.emplace(j, folded);
  }
  A_ = 1.0;
  t_ = layer_nodes.size();
  for (std::size_t layer = depth_;; --layer) {
    for (const auto& [k, v] : layer_nodes) nodes_[key(layer, k)] = v;
    if (layer == 0) break;
    std::map<std::size_t, double> parents;
    for (const auto& [k, v] : layer_nodes) parents[k >> 1] += 0.0;
    for (auto& [k, v] : parents) {
      const auto l = layer_nodes.find(2 * k);
      const auto r = layer_nodes.find(2 * k + 1);
      v = (l == layer_nodes.end() ? 0.0 : std::abs(l->second)) +
          (r == layer_nodes.end() ? 0.0 : std::abs(r->second));
    }
    layer_nodes = std::move(parents);
  }
}

double KPTree::node_value(std::size_t layer, std::size_t k) const {
  if (layer > depth_) throw std::out_of_range("KPTree::node_value: layer out of range");
  if (k >= (std::size_t{1} << layer)) throw std::out_of_range("KPTree::node_value: position out of range");
  const auto it = nodes_.find(key(layer, k));
  return it == nodes_.end() ? 0.0 : it->second;
}

double KPTree::l1_norm() const { return std::abs(A_) * node_value(0, 0); }

std::vector<Amplitude> KPTree::amplitudes() const {
  if (t_ == 0) throw std::logic_error("KPTree::amplitudes: zero vector has no state");
  // Descend from the root, multiplying the branch probabilities |child| / |parent|.
  std::vector<Amplitude> out;
  out.reserve(t_);
  struct Frame {
    std::size_t layer;
    std::size_t k;
    double prob;
  };
  std::vector<Frame> stack{{0, 0, 1.0}};
  const int root_sign = A_ < 0 ? -1 : 1;
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.layer == depth_) {
      const double v = node_value(f.layer, f.k);
      out.push_back({f.k, std::sqrt(f.prob), (v < 0 ? -1 : 1) * root_sign});
      continue;
    }
    const double parent = node_value(f.layer, f.k);
    // Right child first so the left subtree is emitted first.
    for (std::size_t c = 2 * f.k + 2; c-- > 2 * f.k;) {
      const auto it = nodes_.find(key(f.layer + 1, c));
      if (it == nodes_.end()) continue;
      stack.push_back({f.layer + 1, c, f.prob * std::abs(it->second) / parent});
    }
  }
  return out;
}

std::vector<double> KPTree::to_dense() const {
  std::vector<double> dense(d_, 0.0);
  for (const auto& [k, v] : nodes_) {
    if ((k >> 56) == depth_) dense[static_cast<std::size_t>(k & ((1ULL << 56) - 1))] = v * A_;
  }
  return dense;
}

std::vector<std::size_t> KPTree::support() const {
  std::vector<std::size_t> out;
  out.reserve(t_);
  for (const auto& [k, v] : nodes_) {
    if ((k >> 56) == depth_) out.push_back(static_cast<std::size_t>(k & ((1ULL << 56) - 1)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<std::string> KPTree::audit() const {
  std::size_t leaves = 0;
  for (const auto& [kk, v] : nodes_) {
    const std::size_t layer = kk >> 56;
    const std::size_t k = kk & ((1ULL << 56) - 1);
    const std::string where = "node (" + std::to_string(layer) + "," + std::to_string(k) + ")";
    if (layer > depth_) return where + " lies below the leaf layer";
    if (k >= (std::size_t{1} << layer)) return where + " has an out-of-range position";
    if (layer == depth_) {
      ++leaves;
      if (k >= d_) return where + " is a leaf beyond d";
      if (v == 0.0) return where + " is a zero leaf";
    } else {
      const auto l = nodes_.find(key(layer + 1, 2 * k));
      const auto r = nodes_.find(key(layer + 1, 2 * k + 1));
      if (l == nodes_.end() && r == nodes_.end()) return where + " has no children";
      const double expect = (l == nodes_.end() ? 0.0 : std::abs(l->second)) +
                            (r == nodes_.end() ? 0.0 : std::abs(r->second));
      if (v != expect) return where + " differs from its children's absolute sum";
    }
    if (layer > 0 && nodes_.count(key(layer - 1, k >> 1)) == 0) return where + " has no parent";
  }
  if (leaves != t_) return "leaf count " + std::to_string(leaves) + " differs from t";
  if (nodes_.size() > t_ * (depth_ + 1) + 1) return "node count exceeds t*(depth+1)+1";
  return std::nullopt;
}

std::string KPTree::debug_dump() const {
  std::string out = fmt(A_) + "," + std::to_string(t_) + "," + std::to_string(d_) + "\n";
  std::vector<std::pair<std::uint64_t, double>> sorted(nodes_.begin(), nodes_.end());
  std::sort(sorted.begin(), sorted.end());
  for (const auto& [kk, v] : sorted) {
    out += std::to_string(kk >> 56) + "," + std::to_string(kk & ((1ULL << 56) - 1)) + "," +
           fmt(v) + "\n";
  }
  return out;
}

}  // namespace qlb
