#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "driftkit/stream.hpp"

namespace driftkit {

inline double hoeffding_bound(double range, double delta, double n) {
  if (n < 1 || delta <= 0.0 || delta > 1.0 || range <= 0.0)
    throw std::invalid_argument("bad hoeffding_bound arguments");
  return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * n));
}

struct HoeffdingParams {
  std::size_t grace_period = 100;   // instances between split attempts
  double split_confidence = 1e-7;   // delta in the bound
  double tie_threshold = 0.25;
  std::size_t max_depth = 0;        // 0 = unlimited
  std::size_t split_candidates = 10;
};

// Incremental decision tree with binary numeric splits. Split decisions use
// the Hoeffding bound on information gain; class-conditional attribute
// distributions at each leaf are tracked as running Gaussians.
class HoeffdingTree {
 public:
  HoeffdingTree(std::size_t dim, int num_classes,
                HoeffdingParams params = {})
      : d_(dim), nc_(num_classes), p_(params) {
    if (dim < 1 || num_classes < 2)
      throw std::invalid_argument("bad tree dimensions");
    root_ = std::make_unique<Node>(d_, nc_, 0);
  }

  HoeffdingTree(const HoeffdingTree& other)
      : d_(other.d_), nc_(other.nc_), p_(other.p_),
        trained_(other.trained_), root_(clone(other.root_.get())) {}

  HoeffdingTree& operator=(const HoeffdingTree& other) {
    if (this != &other) {
      d_ = other.d_;
      nc_ = other.nc_;
      p_ = other.p_;
      trained_ = other.trained_;
      root_ = clone(other.root_.get());
    }
    return *this;
  }

  HoeffdingTree(HoeffdingTree&&) = default;
  HoeffdingTree& operator=(HoeffdingTree&&) = default;

  void train_one(const std::vector<double>& x, ClassId y) {
    if (x.size() != d_) throw std::invalid_argument("feature dimension mismatch");
    if (y < 0 || y >= nc_) throw std::invalid_argument("label out of range");
    Node* leaf = route(root_.get(), x);
    leaf->absorb(x, y);
    ++trained_;
    if (leaf->since_check >= p_.grace_period) {
      leaf->since_check = 0;
      try_split(leaf);
    }
  }

  void train_batch(const std::vector<std::vector<double>>& X,
                   const std::vector<ClassId>& y) {
    if (X.size() != y.size()) throw std::invalid_argument("size mismatch");
    for (std::size_t i = 0; i < X.size(); ++i) train_one(X[i], y[i]);
  }

  // Batch fit for an incremental learner: replay the set until at least
  // min_total presentations happened (at least one full pass).
  void train_replayed(const std::vector<std::vector<double>>& X,
                      const std::vector<ClassId>& y, std::size_t min_total) {
    if (X.empty()) return;
    std::size_t passes = 1;
    if (min_total > X.size())
      passes = (min_total + X.size() - 1) / X.size();
    for (std::size_t p = 0; p < passes; ++p) train_batch(X, y);
  }

  ClassId predict(const std::vector<double>& x,
                  bool* low_confidence = nullptr) const {
    if (x.size() != d_) throw std::invalid_argument("feature dimension mismatch");
    const Node* leaf = route(root_.get(), x);
    double total = 0.0;
    for (double c : leaf->counts) total += c;
    if (total <= 0.0) {
      if (low_confidence) *low_confidence = true;
      return leaf->fallback;
    }
    if (low_confidence) *low_confidence = false;
    ClassId best = 0;
    double best_count = -1.0;
    for (int c = 0; c < nc_; ++c) {
      if (leaf->counts[c] > best_count) {  // ties keep the lowest class id
        best_count = leaf->counts[c];
        best = c;
      }
    }
    return best;
  }

  bool trained() const { return trained_ > 0; }
  std::size_t instances_trained() const { return trained_; }
  std::size_t dimension() const { return d_; }
  int num_classes() const { return nc_; }
  const HoeffdingParams& params() const { return p_; }

  std::size_t node_count() const { return count_nodes(root_.get()); }
  std::size_t leaf_count() const { return count_leaves(root_.get()); }

  // Full-precision text form; equal strings mean equal trees.
  std::string dump() const {
    std::ostringstream os;
    dump_node(os, root_.get(), 0);
    return os.str();
  }

 private:
  struct Gauss {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
      ++n;
      double d = x - mean;
      mean += d / static_cast<double>(n);
      m2 += d * (x - mean);
    }
    double var() const { return n > 0 ? m2 / static_cast<double>(n) : 0.0; }
  };

  struct Node {
    // split payload (attr < 0 means leaf)
    int attr = -1;
    double threshold = 0.0;
    std::unique_ptr<Node> left, right;

    // leaf payload
    std::vector<double> counts;     // per class
    std::vector<Gauss> stats;       // class-major: [c * d + i]
    std::vector<double> amin, amax; // per attribute, over all classes
    std::size_t since_check = 0;
    ClassId fallback = 0;
    std::size_t depth = 0;

    Node(std::size_t d, int nc, std::size_t dep)
        : counts(nc, 0.0), stats(static_cast<std::size_t>(nc) * d),
          amin(d, 0.0), amax(d, 0.0), depth(dep) {}

    bool is_leaf() const { return attr < 0; }

    void absorb(const std::vector<double>& x, ClassId y) {
      double total = 0.0;
      for (double c : counts) total += c;
      const std::size_t d = amin.size();
      for (std::size_t i = 0; i < d; ++i) {
        if (total <= 0.0) {
          amin[i] = amax[i] = x[i];
        } else {
          amin[i] = std::min(amin[i], x[i]);
          amax[i] = std::max(amax[i], x[i]);
        }
        stats[static_cast<std::size_t>(y) * d + i].add(x[i]);
      }
      counts[y] += 1.0;
      ++since_check;
    }
  };

  static std::unique_ptr<Node> clone(const Node* n) {
    auto copy = std::make_unique<Node>(n->amin.size(), static_cast<int>(n->counts.size()),
                                       n->depth);
    copy->attr = n->attr;
    copy->threshold = n->threshold;
    copy->counts = n->counts;
    copy->stats = n->stats;
    copy->amin = n->amin;
    copy->amax = n->amax;
    copy->since_check = n->since_check;
    copy->fallback = n->fallback;
    if (n->left) copy->left = clone(n->left.get());
    if (n->right) copy->right = clone(n->right.get());
    return copy;
  }

  static Node* route(Node* n, const std::vector<double>& x) {
    while (!n->is_leaf())
      n = (x[static_cast<std::size_t>(n->attr)] <= n->threshold)
              ? n->left.get() : n->right.get();
    return n;
  }
  static const Node* route(const Node* n, const std::vector<double>& x) {
    while (!n->is_leaf())
      n = (x[static_cast<std::size_t>(n->attr)] <= n->threshold)
              ? n->left.get() : n->right.get();
    return n;
  }

  static double entropy(const std::vector<double>& counts, double total) {
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (double c : counts) {
      if (c <= 0.0) continue;
      double p = c / total;
      h -= p * std::log2(p);
    }
    return h;
  }

  static double normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

  // Roots of w_a N(mu_a, var_a) = w_b N(mu_b, var_b) inside (lo, hi). The
  // crossing of two class-conditional Gaussians is the sketch's own estimate
  // of the class boundary; grid points alone can sit arbitrarily far from it.
  static void gaussian_crossings(double wa, const Gauss& ga, double wb,
                                 const Gauss& gb, double lo, double hi,
                                 std::vector<double>& out) {
    const double va = ga.var(), vb = gb.var();
    const double qa = 0.5 / vb - 0.5 / va;
    const double qb = ga.mean / va - gb.mean / vb;
    const double qc = gb.mean * gb.mean / (2.0 * vb)
                    - ga.mean * ga.mean / (2.0 * va)
                    - std::log((wb * std::sqrt(va)) / (wa * std::sqrt(vb)));
    const auto keep = [&](double x) {
      if (std::isfinite(x) && lo < x && x < hi) out.push_back(x);
    };
    if (std::abs(qa) < 1e-12) {
      if (std::abs(qb) > 1e-12) keep(-qc / qb);
      return;
    }
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) return;
    const double s = std::sqrt(disc);
    keep((-qb - s) / (2.0 * qa));
    keep((-qb + s) / (2.0 * qa));
  }

  void try_split(Node* leaf) {
    if (p_.max_depth > 0 && leaf->depth + 1 > p_.max_depth) return;
    double total = 0.0;
    int classes_present = 0;
    for (double c : leaf->counts) {
      total += c;
      if (c > 0.0) ++classes_present;
    }
    if (classes_present < 2 || total < 2.0) return;

    const double h0 = entropy(leaf->counts, total);
    double best_gain = 0.0, second_gain = 0.0, best_thresh = 0.0;
    int best_attr = -1;

    std::vector<double> lc(nc_), rc(nc_);
    std::vector<double> cands;
    for (std::size_t i = 0; i < d_; ++i) {
      const double lo = leaf->amin[i], hi = leaf->amax[i];
      if (!(hi > lo)) continue;

      cands.clear();
      for (std::size_t k = 1; k <= p_.split_candidates; ++k)
        cands.push_back(lo + (hi - lo) * static_cast<double>(k) /
                                 static_cast<double>(p_.split_candidates + 1));
      for (int a = 0; a < nc_; ++a) {
        const Gauss& ga = leaf->stats[static_cast<std::size_t>(a) * d_ + i];
        if (leaf->counts[a] <= 0.0 || ga.var() <= 0.0) continue;
        for (int b = a + 1; b < nc_; ++b) {
          const Gauss& gb = leaf->stats[static_cast<std::size_t>(b) * d_ + i];
          if (leaf->counts[b] <= 0.0 || gb.var() <= 0.0) continue;
          gaussian_crossings(leaf->counts[a], ga, leaf->counts[b], gb,
                             lo, hi, cands);
        }
      }

      double attr_gain = 0.0, attr_thresh = 0.0;
      for (const double t : cands) {
        double nl = 0.0;
        for (int c = 0; c < nc_; ++c) {
          const Gauss& g = leaf->stats[static_cast<std::size_t>(c) * d_ + i];
          double frac;
          if (g.n == 0) {
            frac = 0.0;
          } else if (g.var() <= 0.0) {
            frac = (g.mean <= t) ? 1.0 : 0.0;
          } else {
            frac = normal_cdf((t - g.mean) / std::sqrt(g.var()));
          }
          lc[c] = leaf->counts[c] * frac;
          rc[c] = leaf->counts[c] - lc[c];
          nl += lc[c];
        }
        const double nr = total - nl;
        if (nl < 1e-9 || nr < 1e-9) continue;
        const double gain = h0 - (nl / total) * entropy(lc, nl)
                               - (nr / total) * entropy(rc, nr);
        if (gain > attr_gain) {
          attr_gain = gain;
          attr_thresh = t;
        }
      }
      if (attr_gain > best_gain) {
        second_gain = best_gain;
        best_gain = attr_gain;
        best_thresh = attr_thresh;
        best_attr = static_cast<int>(i);
      } else if (attr_gain > second_gain) {
        second_gain = attr_gain;
      }
    }

    if (best_attr < 0 || best_gain <= 1e-10) return;
    const double range = std::log2(static_cast<double>(nc_));
    const double eps = hoeffding_bound(range, p_.split_confidence, total);
    if (!(best_gain - second_gain > eps || eps < p_.tie_threshold)) return;

    ClassId majority = 0;
    double best_count = -1.0;
    for (int c = 0; c < nc_; ++c) {
      if (leaf->counts[c] > best_count) {
        best_count = leaf->counts[c];
        majority = c;
      }
    }
    leaf->attr = best_attr;
    leaf->threshold = best_thresh;
    leaf->left = std::make_unique<Node>(d_, nc_, leaf->depth + 1);
    leaf->right = std::make_unique<Node>(d_, nc_, leaf->depth + 1);
    leaf->left->fallback = majority;
    leaf->right->fallback = majority;
    // drop leaf payload; children start empty
    leaf->counts.assign(nc_, 0.0);
    leaf->stats.assign(static_cast<std::size_t>(nc_) * d_, Gauss{});
    leaf->since_check = 0;
  }

  static std::size_t count_nodes(const Node* n) {
    if (n->is_leaf()) return 1;
    return 1 + count_nodes(n->left.get()) + count_nodes(n->right.get());
  }
  static std::size_t count_leaves(const Node* n) {
    if (n->is_leaf()) return 1;
    return count_leaves(n->left.get()) + count_leaves(n->right.get());
  }

  void dump_node(std::ostringstream& os, const Node* n, int indent) const {
    char buf[64];
    for (int i = 0; i < indent; ++i) os << "  ";
    if (!n->is_leaf()) {
      std::snprintf(buf, sizeof buf, "%.17g", n->threshold);
      os << "f" << n->attr << " <= " << buf << "\n";
      dump_node(os, n->left.get(), indent + 1);
      dump_node(os, n->right.get(), indent + 1);
      return;
    }
    os << "leaf fb=" << n->fallback << " counts=[";
    for (std::size_t c = 0; c < n->counts.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", n->counts[c]);
      os << (c ? " " : "") << buf;
    }
    os << "] stats=[";
    for (std::size_t s = 0; s < n->stats.size(); ++s) {
      std::snprintf(buf, sizeof buf, "%zu:%.17g:%.17g", n->stats[s].n,
                    n->stats[s].mean, n->stats[s].m2);
      os << (s ? " " : "") << buf;
    }
    os << "]\n";
  }

  std::size_t d_;
  int nc_;
  HoeffdingParams p_;
  std::size_t trained_ = 0;
  std::unique_ptr<Node> root_;
};

}  // namespace driftkit
