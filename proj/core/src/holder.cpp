#include "ilab/holder.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace ilab {

FieldRef FieldRef::of(const GridFunction& u) {
  return FieldRef{u.geometry(), {u.samples()}, u.factor()};
}

FieldRef FieldRef::of(const DerivativeTensor& t) {
  FieldRef f{t.geometry(), {}, t.factor()};
  for (const auto& c : t.components()) f.components.emplace_back(c);
  return f;
}

double node_distance(const GridGeometry& g, const Index& a, const Index& b) {
  double d2 = 0.0;
  for (int ax = 0; ax < g.n; ++ax) {
    const std::size_t diff = a[ax] > b[ax] ? a[ax] - b[ax] : b[ax] - a[ax];
    const double delta = static_cast<double>(diff) * g.spacing[ax];
    d2 += delta * delta;
  }
  return std::sqrt(d2);
}

namespace {

// Slack applied to box bounds so that rounding in pow() can never make a
// bound fall below a quotient it covers.
constexpr double kBoundSlack = 1.0 + 1e-12;

class PairQuotient {
 public:
  PairQuotient(const FieldRef& v, double alpha) : v_(v), alpha_(alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
      throw std::invalid_argument("Hoelder exponent must lie in (0, 1]");
    }
    if (v.components.empty()) throw std::invalid_argument("field has no components");
    if (v.size() < 2) throw std::invalid_argument("Hoelder semi-norm needs at least two nodes");
  }

  double numerator(std::size_t i, std::size_t j) const {
    if (v_.components.size() == 1) return std::abs(v_.components[0][i] - v_.components[0][j]);
    double s = 0.0;
    for (const auto& c : v_.components) {
      const double d = c[i] - c[j];
      s += d * d;
    }
    return std::sqrt(s);
  }

  double denominator(double distance) const {
    return alpha_ == 1.0 ? distance : std::pow(distance, alpha_);
  }

 private:
  const FieldRef& v_;
  double alpha_;
};

struct Incumbent {
  double value = 0.0;
  std::size_t first = 0, second = 0;
  bool found = false;
  std::uint64_t evaluated = 0;

  void offer(double q, std::size_t i, std::size_t j) {
    ++evaluated;
    if (q > value) {
      value = q;
      first = i;
      second = j;
      found = true;
    }
  }
};

HolderResult finish(const FieldRef& v, const Incumbent& best, std::uint64_t box_pairs) {
  HolderResult r;
  r.value = std::abs(v.factor) * best.value;
  r.best_first = best.first;
  r.best_second = best.second;
  r.found_pair = best.found;
  r.evaluated_pairs = best.evaluated;
  const auto n = static_cast<std::uint64_t>(v.size());
  r.total_pairs = n * (n - 1) / 2;
  r.box_pairs = box_pairs;
  return r;
}

constexpr std::size_t kLeafExtent = 8;

struct Box {
  Index lo{0, 0, 0};
  Index hi{0, 0, 0};  // inclusive
  std::vector<double> min, max;
  std::size_t first_child = 0;
  std::size_t child_count = 0;
  std::uint64_t count = 0;
  bool leaf() const { return child_count == 0; }
};

class BoxTree {
 public:
  explicit BoxTree(const FieldRef& v) : v_(v) {
    Box root;
    for (int a = 0; a < v.geometry.n; ++a) root.hi[a] = v.geometry.shape[a] - 1;
    boxes_.push_back(root);
    build(0);
  }

  const Box& operator[](std::size_t i) const { return boxes_[i]; }

  template <typename F>
  void for_each_node(const Box& b, F&& f) const {
    const GridGeometry& g = v_.geometry;
    Index idx{0, 0, 0};
    for (idx[0] = b.lo[0]; idx[0] <= b.hi[0]; ++idx[0]) {
      for (idx[1] = b.lo[1]; idx[1] <= b.hi[1]; ++idx[1]) {
        for (idx[2] = b.lo[2]; idx[2] <= b.hi[2]; ++idx[2]) f(idx, g.ravel(idx));
      }
    }
  }

 private:
  void build(std::size_t id) {
    const GridGeometry& g = v_.geometry;
    const std::size_t comps = v_.components.size();
    {
      Box& b = boxes_[id];
      b.min.assign(comps, std::numeric_limits<double>::infinity());
      b.max.assign(comps, -std::numeric_limits<double>::infinity());
      b.count = 1;
      for (int a = 0; a < g.n; ++a) b.count *= b.hi[a] - b.lo[a] + 1;
    }

    // Split every axis longer than the leaf extent at its midpoint.
    const Box parent = boxes_[id];
    std::vector<int> split_axes;
    for (int a = 0; a < g.n; ++a) {
      if (parent.hi[a] - parent.lo[a] + 1 > kLeafExtent) split_axes.push_back(a);
    }
    if (split_axes.empty()) {
      Box& b = boxes_[id];
      for_each_node(b, [&](const Index&, std::size_t flat) {
        for (std::size_t c = 0; c < comps; ++c) {
          const double x = v_.components[c][flat];
          b.min[c] = std::min(b.min[c], x);
          b.max[c] = std::max(b.max[c], x);
        }
      });
      return;
    }

    const std::size_t children = std::size_t{1} << split_axes.size();
    const std::size_t first = boxes_.size();
    boxes_[id].first_child = first;
    boxes_[id].child_count = children;
    for (std::size_t mask = 0; mask < children; ++mask) {
      Box child;
      child.lo = parent.lo;
      child.hi = parent.hi;
      for (std::size_t k = 0; k < split_axes.size(); ++k) {
        const int a = split_axes[k];
        const std::size_t mid = parent.lo[a] + (parent.hi[a] - parent.lo[a] + 1) / 2;
        if (mask & (std::size_t{1} << k)) {
          child.lo[a] = mid;
        } else {
          child.hi[a] = mid - 1;
        }
      }
      boxes_.push_back(child);
    }
    for (std::size_t c = 0; c < children; ++c) build(first + c);
    Box& b = boxes_[id];
    for (std::size_t c = 0; c < children; ++c) {
      const Box& ch = boxes_[first + c];
      for (std::size_t k = 0; k < comps; ++k) {
        b.min[k] = std::min(b.min[k], ch.min[k]);
        b.max[k] = std::max(b.max[k], ch.max[k]);
      }
    }
  }

  const FieldRef& v_;
  std::vector<Box> boxes_;
};

struct QueueEntry {
  double bound;
  std::uint64_t volume;
  std::size_t a, b;
};

struct QueueOrder {
  // Larger bound first, then larger volume, then smaller ids.
  bool operator()(const QueueEntry& x, const QueueEntry& y) const {
    if (x.bound != y.bound) return x.bound < y.bound;
    if (x.volume != y.volume) return x.volume < y.volume;
    if (x.a != y.a) return x.a > y.a;
    return x.b > y.b;
  }
};

}  // namespace

HolderResult holder_seminorm_naive(const FieldRef& v, double alpha, const PairWindow& window) {
  const PairQuotient quotient(v, alpha);
  const GridGeometry& g = v.geometry;
  Incumbent best;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Index xi = g.unravel(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = node_distance(g, xi, g.unravel(j));
      if (!window.admits(d)) continue;
      best.offer(quotient.numerator(i, j) / quotient.denominator(d), i, j);
    }
  }
  return finish(v, best, 0);
}

HolderResult holder_seminorm_bb(const FieldRef& v, double alpha, const PairWindow& window) {
  const PairQuotient quotient(v, alpha);
  const GridGeometry& g = v.geometry;
  const BoxTree tree(v);
  const std::size_t comps = v.components.size();

  // Upper bound on every admitted quotient between nodes of the two boxes;
  // negative when the window excludes all of their pairs.
  auto bound = [&](const Box& A, const Box& B) {
    double d2min = 0.0, d2max = 0.0;
    for (int a = 0; a < g.n; ++a) {
      std::size_t gap = 0;
      if (B.lo[a] > A.hi[a]) gap = B.lo[a] - A.hi[a];
      if (A.lo[a] > B.hi[a]) gap = A.lo[a] - B.hi[a];
      const std::size_t reach = std::max(B.hi[a] > A.lo[a] ? B.hi[a] - A.lo[a] : 0,
                                         A.hi[a] > B.lo[a] ? A.hi[a] - B.lo[a] : 0);
      const double dmin = static_cast<double>(gap) * g.spacing[a];
      const double dmax = static_cast<double>(reach) * g.spacing[a];
      d2min += dmin * dmin;
      d2max += dmax * dmax;
    }
    const double dmin = std::sqrt(d2min), dmax = std::sqrt(d2max);
    if (dmax <= window.min_exclusive || dmin > window.max_inclusive) return -1.0;

    double num = 0.0;
    if (comps == 1) {
      num = std::max(A.max[0] - B.min[0], B.max[0] - A.min[0]);
    } else {
      double s = 0.0;
      for (std::size_t c = 0; c < comps; ++c) {
        const double w = std::max(A.max[c] - B.min[c], B.max[c] - A.min[c]);
        s += w * w;
      }
      num = std::sqrt(s);
    }
    if (num <= 0.0) return 0.0;
    const double dlow = std::max(dmin, window.min_exclusive);
    if (dlow <= 0.0) return std::numeric_limits<double>::infinity();
    return num / quotient.denominator(dlow) * kBoundSlack;
  };

  Incumbent best;
  std::uint64_t popped = 0;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> queue;
  auto push = [&](std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    const double ub = bound(tree[a], tree[b]);
    if (ub < 0.0 || ub <= best.value) return;
    queue.push({ub, tree[a].count + tree[b].count, a, b});
  };

  auto evaluate = [&](const Box& A, const Box& B, bool same) {
    tree.for_each_node(A, [&](const Index& xi, std::size_t i) {
      tree.for_each_node(B, [&](const Index& yj, std::size_t j) {
        if (same && j <= i) return;
        const double d = node_distance(g, xi, yj);
        if (!window.admits(d)) return;
        best.offer(quotient.numerator(i, j) / quotient.denominator(d), std::min(i, j),
                   std::max(i, j));
      });
    });
  };

  push(0, 0);
  while (!queue.empty()) {
    const QueueEntry e = queue.top();
    queue.pop();
    if (e.bound <= best.value) break;
    ++popped;
    const Box& A = tree[e.a];
    const Box& B = tree[e.b];
    if (A.leaf() && B.leaf()) {
      evaluate(A, B, e.a == e.b);
    } else if (e.a == e.b) {
      for (std::size_t i = 0; i < A.child_count; ++i) {
        for (std::size_t j = i; j < A.child_count; ++j) push(A.first_child + i, A.first_child + j);
      }
    } else {
      const bool split_a = !A.leaf() && (B.leaf() || A.count >= B.count);
      const Box& S = split_a ? A : B;
      const std::size_t other = split_a ? e.b : e.a;
      for (std::size_t c = 0; c < S.child_count; ++c) push(S.first_child + c, other);
    }
  }
  return finish(v, best, popped);
}

}  // namespace ilab
