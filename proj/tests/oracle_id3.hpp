#pragma once

// Classical ID3 on discrete data, written from scratch on integer counts. It
// shares nothing with the library's induction code and is used as the oracle
// for the crisp-reduction property.

#include <cmath>
#include <cstddef>
#include <memory>
#include <random>
#include <vector>

namespace oracle {

struct DiscreteData {
  std::vector<int> arity;             // values per variable
  int num_classes = 2;
  std::vector<std::vector<int>> x;    // x[i][v] in [0, arity[v])
  std::vector<int> cls;               // class label per example
  std::vector<double> effort;         // effort per example
};

struct Node {
  int var = -1;
  double value = 0.0;
  std::vector<std::unique_ptr<Node>> kids;
};

inline double entropy_of(const std::vector<int> &counts, int n) {
  double h = 0.0;
  for (int c : counts) {
    if (c == 0)
      continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

inline std::unique_ptr<Node> build(const DiscreteData &d, const std::vector<int> &members,
                                   std::vector<bool> used, double inherited) {
  auto node = std::make_unique<Node>();
  const int n = static_cast<int>(members.size());
  if (n == 0) {
    node->value = inherited;
    return node;
  }
  double sum = 0.0;
  for (int i : members)
    sum += d.effort[i];
  node->value = sum / n;

  std::vector<int> counts(d.num_classes, 0);
  for (int i : members)
    ++counts[d.cls[i]];
  const double h = entropy_of(counts, n);

  bool all_used = true;
  for (bool u : used)
    all_used = all_used && u;
  if (h <= 1e-12 || all_used)
    return node;

  int best = -1;
  double best_gain = 0.0;
  for (int v = 0; v < static_cast<int>(d.arity.size()); ++v) {
    if (used[v])
      continue;
    double remainder = 0.0;
    for (int val = 0; val < d.arity[v]; ++val) {
      std::vector<int> sub(d.num_classes, 0);
      int m = 0;
      for (int i : members)
        if (d.x[i][v] == val) {
          ++sub[d.cls[i]];
          ++m;
        }
      if (m > 0)
        remainder += static_cast<double>(m) / n * entropy_of(sub, m);
    }
    const double gain = h - remainder;
    if (best < 0 || gain > best_gain + 1e-12) {
      best = v;
      best_gain = gain;
    }
  }

  node->var = best;
  used[best] = true;
  for (int val = 0; val < d.arity[best]; ++val) {
    std::vector<int> sub;
    for (int i : members)
      if (d.x[i][best] == val)
        sub.push_back(i);
    node->kids.push_back(build(d, sub, used, node->value));
  }
  return node;
}

inline std::unique_ptr<Node> id3(const DiscreteData &d) {
  std::vector<int> all(d.x.size());
  for (std::size_t i = 0; i < all.size(); ++i)
    all[i] = static_cast<int>(i);
  return build(d, all, std::vector<bool>(d.arity.size(), false), 0.0);
}

inline double descend(const Node &node, const std::vector<int> &x) {
  const Node *cur = &node;
  while (cur->var >= 0)
    cur = cur->kids[x[cur->var]].get();
  return cur->value;
}

/// Random discrete dataset: up to 30 examples, up to 4 variables of arity 2-4,
/// 2-4 classes with effort 10, 20, ... per class.
inline DiscreteData random_data(std::mt19937_64 &rng) {
  auto uniform = [&rng](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  DiscreteData d;
  const int vars = uniform(1, 4);
  for (int v = 0; v < vars; ++v)
    d.arity.push_back(uniform(2, 4));
  d.num_classes = uniform(2, 4);
  const int n = uniform(1, 30);
  // Half the datasets get a class that depends on the first variable so trees
  // have real structure; the rest are noise.
  const bool structured = rng() % 2 == 0;
  for (int i = 0; i < n; ++i) {
    std::vector<int> row;
    for (int v = 0; v < vars; ++v)
      row.push_back(uniform(0, d.arity[v] - 1));
    int c = uniform(0, d.num_classes - 1);
    if (structured && rng() % 4 != 0)
      c = row[0] % d.num_classes;
    d.x.push_back(row);
    d.cls.push_back(c);
    d.effort.push_back(10.0 * (c + 1));
  }
  return d;
}

} // namespace oracle
