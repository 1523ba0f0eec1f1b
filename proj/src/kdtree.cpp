#include "scmstream/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scmstream {

double squared_distance(const double* a, const double* b, int dim) {
  double s = 0.0;
  for (int j = 0; j < dim; ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return s;
}

std::vector<Neighbor> brute_force_knn(const std::vector<double>& points, int dim,
                                      const double* query, int k) {
  const std::size_t n = dim > 0 ? points.size() / dim : 0;
  std::vector<Neighbor> all(n);
  for (std::size_t i = 0; i < n; ++i) {
    all[i] = Neighbor{squared_distance(points.data() + i * dim, query, dim),
                      static_cast<std::int32_t>(i)};
  }
  const std::size_t kk = std::min<std::size_t>(k, n);
  std::partial_sort(all.begin(), all.begin() + kk, all.end());
  all.resize(kk);
  return all;
}

namespace {

// worst candidate on top
inline bool heap_less(const Neighbor& a, const Neighbor& b) { return a < b; }

inline void heap_push(std::vector<Neighbor>& heap, const Neighbor& c, int k) {
  if (static_cast<int>(heap.size()) < k) {
    heap.push_back(c);
    std::push_heap(heap.begin(), heap.end(), heap_less);
  } else if (c < heap.front()) {
    std::pop_heap(heap.begin(), heap.end(), heap_less);
    heap.back() = c;
    std::push_heap(heap.begin(), heap.end(), heap_less);
  }
}

}  // namespace

void KdTree::build(const std::vector<double>& points, int dim,
                   const std::vector<std::int32_t>& ids) {
  if (dim <= 0) throw std::invalid_argument("kd-tree: dimension must be positive");
  if (points.size() != ids.size() * static_cast<std::size_t>(dim)) {
    throw std::invalid_argument("kd-tree: points/ids size mismatch");
  }
  points_ = points;
  ids_ = ids;
  dim_ = dim;
  nodes_.clear();
  order_.resize(ids.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
  root_ = order_.empty() ? -1 : build_node(0, static_cast<int>(order_.size()));
}

void KdTree::clear() {
  points_.clear();
  ids_.clear();
  order_.clear();
  nodes_.clear();
  dim_ = 0;
  root_ = -1;
}

int KdTree::build_node(int begin, int end) {
  const int idx = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  if (end - begin <= kLeafSize) {
    nodes_[idx].begin = begin;
    nodes_[idx].end = end;
    return idx;
  }
  // widest-spread dimension over this node's points
  int best_dim = 0;
  double best_spread = -1.0;
  for (int d = 0; d < dim_; ++d) {
    double lo = points_[order_[begin] * dim_ + d];
    double hi = lo;
    for (int i = begin + 1; i < end; ++i) {
      const double v = points_[order_[i] * dim_ + d];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_dim = d;
    }
  }
  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) {
                     return points_[a * dim_ + best_dim] < points_[b * dim_ + best_dim];
                   });
  const double split_val = points_[order_[mid] * dim_ + best_dim];
  const int left = build_node(begin, mid);
  const int right = build_node(mid, end);
  nodes_[idx].split_dim = best_dim;
  nodes_[idx].split_val = split_val;
  nodes_[idx].left = left;
  nodes_[idx].right = right;
  return idx;
}

void KdTree::knn_into(const double* query, int k, std::vector<Neighbor>& heap) const {
  if (root_ < 0 || k <= 0) return;
  search(root_, query, k, heap);
}

void KdTree::search(int node, const double* query, int k, std::vector<Neighbor>& heap) const {
  const Node& nd = nodes_[node];
  if (nd.split_dim < 0) {
    for (int i = nd.begin; i < nd.end; ++i) {
      const int slot = order_[i];
      heap_push(heap, Neighbor{squared_distance(points_.data() + slot * dim_, query, dim_),
                               ids_[slot]},
                k);
    }
    return;
  }
  const double diff = query[nd.split_dim] - nd.split_val;
  const int near = diff < 0.0 ? nd.left : nd.right;
  const int far = diff < 0.0 ? nd.right : nd.left;
  search(near, query, k, heap);
  // The far side may still hold an equal-distance point with a smaller id,
  // so prune only when the plane is strictly farther than the current worst.
  if (static_cast<int>(heap.size()) < k || diff * diff <= heap.front().dist2) {
    search(far, query, k, heap);
  }
}

void DynamicPointIndex::reset(int dim) {
  coords_.clear();
  count_ = 0;
  tree_count_ = 0;
  tree_.clear();
  dim_ = dim;
}

void DynamicPointIndex::assign(const std::vector<double>& points, int dim) {
  reset(dim);
  coords_ = points;
  count_ = dim > 0 ? points.size() / dim : 0;
  rebuild();
}

void DynamicPointIndex::insert(const FeatureVector& x) {
  if (static_cast<int>(x.size()) != dim_) {
    throw std::invalid_argument("point index: dimensionality mismatch");
  }
  coords_.insert(coords_.end(), x.begin(), x.end());
  ++count_;
  const std::size_t limit = std::max<std::size_t>(64, count_ / 4);
  if (count_ - tree_count_ > limit) rebuild();
}

void DynamicPointIndex::truncate_to_newest(std::size_t count) {
  if (count >= count_) return;
  coords_.erase(coords_.begin(),
                coords_.begin() + static_cast<std::ptrdiff_t>((count_ - count) * dim_));
  count_ = count;
  rebuild();
}

void DynamicPointIndex::rebuild() {
  std::vector<std::int32_t> ids(count_);
  for (std::size_t i = 0; i < count_; ++i) ids[i] = static_cast<std::int32_t>(i);
  tree_.build(coords_, dim_, ids);
  tree_count_ = count_;
}

std::vector<Neighbor> DynamicPointIndex::knn(const FeatureVector& query, int k) const {
  if (static_cast<int>(query.size()) != dim_) {
    throw std::invalid_argument("point index: dimensionality mismatch");
  }
  std::vector<Neighbor> heap;
  const int kk = static_cast<int>(std::min<std::size_t>(k, count_));
  if (kk <= 0) return heap;
  heap.reserve(kk);
  tree_.knn_into(query.data(), kk, heap);
  for (std::size_t i = tree_count_; i < count_; ++i) {
    heap_push(heap,
              Neighbor{squared_distance(coords_.data() + i * dim_, query.data(), dim_),
                       static_cast<std::int32_t>(i)},
              kk);
  }
  std::sort_heap(heap.begin(), heap.end(), heap_less);
  return heap;
}

}  // namespace scmstream
