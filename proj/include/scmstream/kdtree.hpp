#ifndef SCMSTREAM_KDTREE_HPP
#define SCMSTREAM_KDTREE_HPP

#include <cstdint>
#include <vector>

#include "scmstream/core.hpp"

namespace scmstream {

/// Neighbour candidate ordered lexicographically by (squared distance, id).
/// Ids are insertion positions, so distance ties resolve toward the earlier
/// arrival.
struct Neighbor {
  double dist2;
  std::int32_t id;

  friend bool operator<(const Neighbor& a, const Neighbor& b) {
    if (a.dist2 != b.dist2) return a.dist2 < b.dist2;
    return a.id < b.id;
  }
};

double squared_distance(const double* a, const double* b, int dim);

/// Serial reference: full scan over a flat point array, exact (dist2, id)
/// ordering. Kept alongside the tree both as the test oracle and for the
/// benchmark comparison.
std::vector<Neighbor> brute_force_knn(const std::vector<double>& points, int dim,
                                      const double* query, int k);

/// Exact k-nearest-neighbour search tree. Median split on the
/// widest-spread dimension, leaf size 16. Query results are identical to
/// brute_force_knn including tie handling.
class KdTree {
 public:
  static constexpr int kLeafSize = 16;

  KdTree() = default;

  /// Builds over n points stored row-major in `points` (n*dim values); point
  /// i gets id `ids[i]`.
  void build(const std::vector<double>& points, int dim, const std::vector<std::int32_t>& ids);

  void clear();
  bool empty() const { return nodes_.empty(); }
  std::size_t size() const { return ids_.size(); }

  /// Pushes up to k nearest tree points onto `heap` (a std::push_heap max-heap
  /// of worst-first Neighbors shared with the caller's buffer scan).
  void knn_into(const double* query, int k, std::vector<Neighbor>& heap) const;

 private:
  struct Node {
    int left = -1;
    int right = -1;
    int split_dim = -1;
    double split_val = 0.0;
    int begin = 0;
    int end = 0;  // leaf point range in order_
  };

  int build_node(int begin, int end);
  void search(int node, const double* query, int k, std::vector<Neighbor>& heap) const;

  std::vector<double> points_;  // row-major copies
  std::vector<std::int32_t> ids_;
  std::vector<int> order_;  // permutation of point slots
  std::vector<Node> nodes_;
  int dim_ = 0;
  int root_ = -1;
};

/// Mutable point store backing kd-tree search: appends go to a linear
/// insertion buffer and the tree is rebuilt once the buffer exceeds
/// max(64, size/4) or on any truncation. Queries merge tree and buffer, so
/// search stays exact under mutation. Ids are current positions (0-based
/// insertion order).
class DynamicPointIndex {
 public:
  explicit DynamicPointIndex(int dim = 0) : dim_(dim) {}

  void reset(int dim);
  void assign(const std::vector<double>& points, int dim);
  void insert(const FeatureVector& x);
  /// Keeps the newest `count` points; ids are renumbered to 0..count-1.
  void truncate_to_newest(std::size_t count);

  std::size_t size() const { return count_; }
  int dim() const { return dim_; }
  const double* point(std::size_t id) const { return coords_.data() + id * dim_; }

  /// k nearest by (dist2, id); returns all points when k >= size.
  std::vector<Neighbor> knn(const FeatureVector& query, int k) const;

  std::size_t buffered() const { return count_ - tree_count_; }

 private:
  void rebuild();

  std::vector<double> coords_;  // all points, row-major, id order
  std::size_t count_ = 0;
  std::size_t tree_count_ = 0;  // prefix covered by tree_
  KdTree tree_;
  int dim_ = 0;
};

}  // namespace scmstream

#endif
