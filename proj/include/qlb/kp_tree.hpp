#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace qlb {

/// One entry of the l1-proportional amplitude vector.
struct Amplitude {
  std::size_t index;
  double magnitude;  ///< sqrt(|theta_j| / ||theta||_1)
  int sign;          ///< +1 or -1
};

/// Sparse vector theta held as a global scalar A times a binary tree of leaves.
///
/// Leaves (layer `depth`) store theta_j / A; every intermediate node stores the
/// sum of its children's absolute values, so node (0,0) holds ||theta||_1 / |A|.
/// Reads and updates `a * theta + b * e_j` touch one root-to-leaf path.
class KPTree {
 public:
  /// The zero vector of dimension d.
  explicit KPTree(std::size_t d);

  static KPTree new_zero(std::size_t d) { return KPTree(d); }
  static KPTree from_dense(const std::vector<double>& theta);

  std::size_t dim() const { return d_; }
  std::size_t depth() const { return depth_; }
  double root_scalar() const { return A_; }
  std::size_t support_size() const { return t_; }
  std::size_t node_count() const { return nodes_.size(); }

  /// theta_j. Walks the root-to-leaf path.
  double read_entry(std::size_t j) const;

  /// theta <- a * theta + b * e_j. Rejects a == 0.
  void update(double a, double b, std::size_t j);

  /// Stored value of node (layer, k), 0 when absent.
  double node_value(std::size_t layer, std::size_t k) const;

  double l1_norm() const;

  /// Entries for supp(theta) in index order. Throws for the zero vector.
  std::vector<Amplitude> amplitudes() const;

  std::vector<double> to_dense() const;

  /// Support indices in ascending order.
  std::vector<std::size_t> support() const;

  /// Calls f(j, theta_j) for each support index in ascending order.
  template <typename F>
  void for_each_entry(F&& f) const {
    for (std::size_t j : support()) f(j, leaf_value(j) * A_);
  }

  /// Folds A into the leaves and recomputes every internal sum.
  void rebuild();

  /// Checks every structural invariant; returns a description of the first failure.
  std::optional<std::string> audit() const;

  /// Nodes read or written by the last read_entry/update call.
  std::size_t last_touched() const { return touched_; }

  /// Root line `A,t,d` followed by `layer,k,value` for every node.
  std::string debug_dump() const;

 private:
  static std::uint64_t key(std::size_t layer, std::size_t k) {
    return (static_cast<std::uint64_t>(layer) << 56) | static_cast<std::uint64_t>(k);
  }
  double leaf_value(std::size_t j) const;
  double child_sum(std::size_t layer, std::size_t k, bool& any_child) const;
  void refresh_path(std::size_t j);
  void maybe_renormalize();

  std::size_t d_;
  std::size_t depth_;
  double A_ = 1.0;
  std::size_t t_ = 0;
  std::unordered_map<std::uint64_t, double> nodes_;
  mutable std::size_t touched_ = 0;
};

}  // namespace qlb
