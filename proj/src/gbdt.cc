/*
 * Copyright 2026 The progpipe Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cmath>
#include <limits>

#include "progpipe/error.h"
#include "progpipe/models.h"

namespace progpipe {

namespace {

constexpr int kMaxBins = 4096;
constexpr double kMinGain = 1e-12;

// Features pre-binned once per fit. Codes are row-major; within a feature
// bins 0..n_cuts hold values and bin n_cuts + 1 holds NaN.
struct BinnedMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<double>> cuts;
  std::vector<std::size_t> offset;  // first histogram slot of each feature
  std::size_t slots = 0;
  std::vector<std::uint16_t> codes;

  std::size_t missing_code(std::size_t f) const { return cuts[f].size() + 1; }
};

BinnedMatrix bin_matrix(const Matrix& x, int n_bins) {
  BinnedMatrix b;
  b.rows = x.rows();
  b.cols = x.cols();
  b.cuts.resize(b.cols);
  b.offset.resize(b.cols);
  std::vector<double> column(b.rows);
  for (std::size_t f = 0; f < b.cols; ++f) {
    for (std::size_t r = 0; r < b.rows; ++r) column[r] = x(r, f);
    b.cuts[f] = bin_thresholds(column, n_bins);
    b.offset[f] = b.slots;
    b.slots += b.cuts[f].size() + 2;
  }
  b.codes.resize(b.rows * b.cols);
  for (std::size_t r = 0; r < b.rows; ++r) {
    for (std::size_t f = 0; f < b.cols; ++f) {
      const double v = x(r, f);
      const auto& cuts = b.cuts[f];
      std::size_t code;
      if (std::isnan(v)) {
        code = b.missing_code(f);
      } else {
        code = static_cast<std::size_t>(std::lower_bound(cuts.begin(), cuts.end(), v) -
                                        cuts.begin());
      }
      b.codes[r * b.cols + f] = static_cast<std::uint16_t>(code);
    }
  }
  return b;
}

struct Slot {
  double g = 0.0;
  double h = 0.0;
  double count = 0.0;
};

using Histogram = std::vector<Slot>;

Histogram build_histogram(const BinnedMatrix& b, const std::vector<std::size_t>& rows,
                          std::span<const double> g, std::span<const double> h) {
  Histogram hist(b.slots);
  for (std::size_t r : rows) {
    const std::uint16_t* codes = b.codes.data() + r * b.cols;
    for (std::size_t f = 0; f < b.cols; ++f) {
      Slot& s = hist[b.offset[f] + codes[f]];
      s.g += g[r];
      s.h += h[r];
      s.count += 1.0;
    }
  }
  return hist;
}

Histogram subtract(const Histogram& parent, const Histogram& child) {
  Histogram out(parent.size());
  for (std::size_t i = 0; i < parent.size(); ++i) {
    out[i].g = parent[i].g - child[i].g;
    out[i].h = parent[i].h - child[i].h;
    out[i].count = parent[i].count - child[i].count;
  }
  return out;
}

struct NodeSplit {
  SplitCandidate split;
  std::size_t cut = 0;  // bins 0..cut go left
};

// Scans every feature's cuts in order; a candidate replaces the incumbent
// only on strictly larger gain, so ties keep the lowest feature and cut.
NodeSplit scan_histogram(const BinnedMatrix& b, const Histogram& hist, double l2,
                         int min_samples_leaf) {
  NodeSplit best;
  best.split.gain = kMinGain;
  const double min_count = static_cast<double>(min_samples_leaf);
  for (std::size_t f = 0; f < b.cols; ++f) {
    const std::size_t n_cuts = b.cuts[f].size();
    if (n_cuts == 0) continue;
    const Slot* slots = hist.data() + b.offset[f];
    Slot total, missing = slots[n_cuts + 1];
    for (std::size_t k = 0; k <= n_cuts + 1; ++k) {
      total.g += slots[k].g;
      total.h += slots[k].h;
      total.count += slots[k].count;
    }
    Slot acc;
    for (std::size_t k = 0; k < n_cuts; ++k) {
      acc.g += slots[k].g;
      acc.h += slots[k].h;
      acc.count += slots[k].count;
      for (int direction = 0; direction < 2; ++direction) {
        const bool missing_left = direction == 1;
        if (missing_left && missing.count == 0.0) break;
        Slot left = acc;
        if (missing_left) {
          left.g += missing.g;
          left.h += missing.h;
          left.count += missing.count;
        }
        const double right_count = total.count - left.count;
        if (left.count < min_count || right_count < min_count) continue;
        const double right_h = total.h - left.h;
        if (left.h + l2 <= 0.0 || right_h + l2 <= 0.0) continue;
        const double gain = split_gain(left.g, left.h, total.g - left.g, right_h, l2);
        if (gain > best.split.gain) {
          best.split.feature = static_cast<int>(f);
          best.split.threshold = b.cuts[f][k];
          best.split.gain = gain;
          best.cut = k;
          // With no missing values at this node, NaN follows the larger child.
          best.split.missing_left =
              missing.count > 0.0 ? missing_left : left.count >= right_count;
        }
      }
    }
  }
  return best;
}

double leaf_value(double g, double h, double l2) {
  const double denom = h + l2;
  return denom > 0.0 ? -g / denom : 0.0;
}

struct OpenLeaf {
  int node = 0;
  int depth = 0;
  std::vector<std::size_t> rows;
  Histogram hist;
  NodeSplit best;
};

double mean_loss(Task task, std::span<const double> f, std::span<const double> y) {
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    total += task == Task::kClassification ? logistic_loss(f[i], y[i])
                                           : 0.5 * (f[i] - y[i]) * (f[i] - y[i]);
  }
  return y.empty() ? 0.0 : total / static_cast<double>(y.size());
}

class TreeBuilder {
 public:
  TreeBuilder(const BinnedMatrix& b, std::span<const double> g, std::span<const double> h,
              const GbdtParams& params)
      : b_(b), g_(g), h_(h), params_(params) {}

  // Returns the tree and, for every row, the leaf value it received.
  Tree build(Growth growth, std::vector<double>& row_values) {
    tree_ = Tree{};
    row_values.assign(b_.rows, 0.0);
    OpenLeaf root;
    root.node = add_leaf();
    root.rows.resize(b_.rows);
    for (std::size_t r = 0; r < b_.rows; ++r) root.rows[r] = r;
    root.hist = build_histogram(b_, root.rows, g_, h_);
    evaluate(root);
    std::vector<OpenLeaf> open;
    open.push_back(std::move(root));
    int leaves = 1;

    if (growth == Growth::kLeafWise) {
      while (leaves < params_.max_leaves) {
        int pick = -1;
        for (std::size_t i = 0; i < open.size(); ++i) {
          if (!open[i].best.split.valid()) continue;
          if (pick < 0 || open[i].best.split.gain > open[pick].best.split.gain) {
            pick = static_cast<int>(i);
          }
        }
        if (pick < 0) break;
        OpenLeaf parent = std::move(open[pick]);
        open.erase(open.begin() + pick);
        auto [left, right] = split(parent);
        open.push_back(std::move(left));
        open.push_back(std::move(right));
        ++leaves;
      }
    } else {
      for (int depth = 0; depth < params_.max_depth; ++depth) {
        std::vector<OpenLeaf> next;
        for (auto& leaf : open) {
          if (leaf.depth == depth && leaf.best.split.valid() && leaves < params_.max_leaves) {
            auto [left, right] = split(leaf);
            next.push_back(std::move(left));
            next.push_back(std::move(right));
            ++leaves;
          } else {
            next.push_back(std::move(leaf));
          }
        }
        open = std::move(next);
      }
    }
    for (const auto& leaf : open) finalize(leaf, row_values);
    return std::move(tree_);
  }

 private:
  int add_leaf() {
    tree_.nodes.emplace_back();
    return static_cast<int>(tree_.nodes.size()) - 1;
  }

  void evaluate(OpenLeaf& leaf) {
    if (leaf.depth >= params_.max_depth) {
      leaf.best = NodeSplit{};
      return;
    }
    leaf.best = scan_histogram(b_, leaf.hist, params_.l2_leaf, params_.min_samples_leaf);
  }

  std::pair<OpenLeaf, OpenLeaf> split(OpenLeaf& parent) {
    const SplitCandidate& s = parent.best.split;
    const std::size_t f = static_cast<std::size_t>(s.feature);
    const std::size_t missing = b_.missing_code(f);
    OpenLeaf left, right;
    left.depth = right.depth = parent.depth + 1;
    for (std::size_t r : parent.rows) {
      const std::size_t code = b_.codes[r * b_.cols + f];
      const bool goes_left = code == missing ? s.missing_left : code <= parent.best.cut;
      (goes_left ? left.rows : right.rows).push_back(r);
    }
    if (left.rows.size() <= right.rows.size()) {
      left.hist = build_histogram(b_, left.rows, g_, h_);
      right.hist = subtract(parent.hist, left.hist);
    } else {
      right.hist = build_histogram(b_, right.rows, g_, h_);
      left.hist = subtract(parent.hist, right.hist);
    }
    left.node = add_leaf();
    right.node = add_leaf();
    TreeNode& node = tree_.nodes[parent.node];
    node.leaf = false;
    node.feature = s.feature;
    node.threshold = s.threshold;
    node.missing_left = s.missing_left;
    node.gain = s.gain;
    node.left = left.node;
    node.right = right.node;
    parent.rows.clear();
    parent.hist.clear();
    evaluate(left);
    evaluate(right);
    return {std::move(left), std::move(right)};
  }

  void finalize(const OpenLeaf& leaf, std::vector<double>& row_values) {
    // Exact sums over the leaf's rows, in row order.
    double g = 0.0, h = 0.0;
    for (std::size_t r : leaf.rows) {
      g += g_[r];
      h += h_[r];
    }
    const double value = leaf_value(g, h, params_.l2_leaf);
    tree_.nodes[leaf.node].value = value;
    for (std::size_t r : leaf.rows) row_values[r] = value;
  }

  const BinnedMatrix& b_;
  std::span<const double> g_;
  std::span<const double> h_;
  const GbdtParams& params_;
  Tree tree_;
};

nlohmann::json node_to_json(const Tree& tree, int index) {
  const TreeNode& node = tree.nodes[index];
  if (node.leaf) return {{"leaf", node.value}};
  return {{"feature", node.feature},
          {"threshold", node.threshold},
          {"missing", node.missing_left ? "left" : "right"},
          {"gain", node.gain},
          {"left", node_to_json(tree, node.left)},
          {"right", node_to_json(tree, node.right)}};
}

int node_from_json(const nlohmann::json& doc, Tree& tree) {
  const int index = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  if (doc.contains("leaf")) {
    tree.nodes[index].value = doc.at("leaf").get<double>();
    return index;
  }
  TreeNode node;
  node.leaf = false;
  node.feature = doc.at("feature").get<int>();
  node.threshold = doc.at("threshold").get<double>();
  check(std::isfinite(node.threshold), ErrorCode::kSchemaMismatch,
        "tree threshold must be finite");
  node.missing_left = doc.at("missing").get<std::string>() == "left";
  node.gain = doc.value("gain", 0.0);
  node.left = node_from_json(doc.at("left"), tree);
  node.right = node_from_json(doc.at("right"), tree);
  tree.nodes[index] = node;
  return index;
}

}  // namespace

double split_gain(double gl, double hl, double gr, double hr, double l2) {
  const double g = gl + gr;
  const double h = hl + hr;
  return 0.5 * (gl * gl / (hl + l2) + gr * gr / (hr + l2) - g * g / (h + l2));
}

std::vector<double> bin_thresholds(std::span<const double> values, int n_bins) {
  std::vector<double> sorted;
  sorted.reserve(values.size());
  for (double v : values) {
    if (!std::isnan(v)) sorted.push_back(v);
  }
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> unique = sorted;
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  std::vector<double> cuts;
  auto midpoint = [&](std::size_t u) { return unique[u - 1] + (unique[u] - unique[u - 1]) / 2; };
  if (unique.size() <= static_cast<std::size_t>(n_bins)) {
    for (std::size_t u = 1; u < unique.size(); ++u) cuts.push_back(midpoint(u));
    return cuts;
  }
  for (int q = 1; q < n_bins; ++q) {
    const std::size_t pos = sorted.size() * static_cast<std::size_t>(q) /
                            static_cast<std::size_t>(n_bins);
    const std::size_t u = static_cast<std::size_t>(
        std::lower_bound(unique.begin(), unique.end(), sorted[pos]) - unique.begin());
    if (u == 0) continue;
    const double cut = midpoint(u);
    if (cuts.empty() || cut > cuts.back()) cuts.push_back(cut);
  }
  return cuts;
}

SplitCandidate best_histogram_split(const Matrix& x, std::span<const double> g,
                                    std::span<const double> h, int n_bins, double l2_leaf,
                                    int min_samples_leaf) {
  check(g.size() == x.rows() && h.size() == x.rows(), ErrorCode::kDimensionMismatch,
        "gradients must align with rows");
  const BinnedMatrix b = bin_matrix(x, n_bins);
  std::vector<std::size_t> rows(x.rows());
  for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = r;
  return scan_histogram(b, build_histogram(b, rows, g, h), l2_leaf, min_samples_leaf).split;
}

void GbdtParams::validate() const {
  check(n_trees >= 0, ErrorCode::kSpecInvalid, "n_trees must be >= 0");
  check(max_leaves >= 2, ErrorCode::kSpecInvalid, "max_leaves must be >= 2");
  check(max_depth >= 1, ErrorCode::kSpecInvalid, "max_depth must be >= 1");
  check(min_samples_leaf >= 1, ErrorCode::kSpecInvalid, "min_samples_leaf must be >= 1");
  check(shrinkage > 0.0 && shrinkage <= 1.0, ErrorCode::kSpecInvalid,
        "shrinkage must be in (0, 1]");
  check(n_bins >= 2 && n_bins <= kMaxBins, ErrorCode::kSpecInvalid,
        "n_bins must be in [2, " + std::to_string(kMaxBins) + "]");
  check(l2_leaf >= 0.0, ErrorCode::kSpecInvalid, "l2_leaf must be >= 0");
}

int Tree::leaf_index(std::span<const double> row) const {
  int index = 0;
  while (!nodes[index].leaf) {
    const TreeNode& node = nodes[index];
    const double v = row[node.feature];
    const bool left = std::isnan(v) ? node.missing_left : v <= node.threshold;
    index = left ? node.left : node.right;
  }
  return index;
}

double Tree::predict(std::span<const double> row) const {
  return nodes[leaf_index(row)].value;
}

int Tree::leaf_count() const {
  int count = 0;
  for (const auto& node : nodes) count += node.leaf ? 1 : 0;
  return count;
}

TreeEnsemble fit_gbdt(Task task, const Matrix& x, std::span<const double> y,
                      const GbdtParams& params, Growth growth) {
  params.validate();
  check(x.rows() == y.size(), ErrorCode::kDimensionMismatch,
        "gbdt: " + std::to_string(x.rows()) + " rows but " + std::to_string(y.size()) +
            " targets");
  check(x.rows() > 0, ErrorCode::kDimensionMismatch, "gbdt: no rows");
  const std::size_t n = x.rows();
  for (double v : y) {
    check(std::isfinite(v), ErrorCode::kNonFinite, "gbdt target contains NaN or inf");
  }
  for (double v : x.data()) {
    check(!std::isinf(v), ErrorCode::kNonFinite, "gbdt input contains inf");
  }

  TreeEnsemble model;
  model.task_ = task;
  model.growth_ = growth;
  model.shrinkage_ = params.shrinkage;
  for (std::size_t f = 0; f < x.cols(); ++f) model.feature_names_.push_back("f" + std::to_string(f));

  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);
  if (task == Task::kClassification) {
    for (double v : y) {
      check(v == 0.0 || v == 1.0, ErrorCode::kDegenerateTarget,
            "classification labels must be 0 or 1");
    }
    check(mean > 0.0 && mean < 1.0, ErrorCode::kDegenerateTarget,
          "classification target has a single class");
    model.base_score_ = std::log(mean / (1.0 - mean));
  } else {
    model.base_score_ = mean;
  }

  std::vector<double> f(n, model.base_score_);
  model.loss_history_.push_back(mean_loss(task, f, y));
  if (params.n_trees == 0) return model;

  const BinnedMatrix binned = bin_matrix(x, params.n_bins);
  std::vector<double> g(n), h(n), row_values;
  TreeBuilder builder(binned, g, h, params);
  for (int t = 0; t < params.n_trees; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      if (task == Task::kClassification) {
        g[i] = logistic_gradient(f[i], y[i]);
        h[i] = logistic_hessian(f[i]);
      } else {
        g[i] = f[i] - y[i];
        h[i] = 1.0;
      }
    }
    model.trees_.push_back(builder.build(growth, row_values));
    for (std::size_t i = 0; i < n; ++i) f[i] += params.shrinkage * row_values[i];
    model.loss_history_.push_back(mean_loss(task, f, y));
  }
  return model;
}

void TreeEnsemble::set_feature_names(std::vector<std::string> names) {
  check(names.size() == feature_names_.size(), ErrorCode::kDimensionMismatch,
        "feature name count differs from the model's feature count");
  feature_names_ = std::move(names);
}

std::vector<double> TreeEnsemble::raw_predict(const Matrix& x) const {
  check(x.cols() == feature_names_.size(), ErrorCode::kDimensionMismatch,
        "tree ensemble expects " + std::to_string(feature_names_.size()) +
            " features, got " + std::to_string(x.cols()));
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    auto row = x.row(i);
    double sum = 0.0;
    for (const auto& tree : trees_) sum += tree.predict(row);
    out[i] = base_score_ + shrinkage_ * sum;
  }
  return out;
}

std::vector<double> TreeEnsemble::predict(const Matrix& x) const {
  std::vector<double> out = raw_predict(x);
  if (task_ == Task::kClassification) {
    for (double& v : out) v = sigmoid(v);
  }
  return out;
}

nlohmann::json TreeEnsemble::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : trees_) trees.push_back(node_to_json(tree, 0));
  return {{"task", std::string(to_string(task_))},
          {"growth", growth_ == Growth::kLeafWise ? "leaf-wise" : "level-wise"},
          {"base_score", base_score_},
          {"shrinkage", shrinkage_},
          {"feature_names", feature_names_},
          {"trees", trees}};
}

TreeEnsemble TreeEnsemble::from_json(const nlohmann::json& doc) {
  TreeEnsemble model;
  model.task_ = parse_task(doc.at("task").get<std::string>());
  model.growth_ = doc.at("growth").get<std::string>() == "level-wise" ? Growth::kLevelWise
                                                                       : Growth::kLeafWise;
  model.base_score_ = doc.at("base_score").get<double>();
  model.shrinkage_ = doc.at("shrinkage").get<double>();
  model.feature_names_ = doc.at("feature_names").get<std::vector<std::string>>();
  for (const auto& tree_doc : doc.at("trees")) {
    Tree tree;
    node_from_json(tree_doc, tree);
    for (const auto& node : tree.nodes) {
      check(node.leaf || (node.feature >= 0 &&
                          static_cast<std::size_t>(node.feature) < model.feature_names_.size()),
            ErrorCode::kSchemaMismatch, "tree splits on an unknown feature");
    }
    model.trees_.push_back(std::move(tree));
  }
  return model;
}

std::vector<std::pair<std::string, double>> feature_importance(const TreeEnsemble& model) {
  std::vector<double> gain(model.feature_count(), 0.0);
  std::vector<bool> used(model.feature_count(), false);
  for (const auto& tree : model.trees()) {
    for (const auto& node : tree.nodes) {
      if (node.leaf) continue;
      gain[node.feature] += node.gain;
      used[node.feature] = true;
    }
  }
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t f = 0; f < gain.size(); ++f) {
    if (used[f]) out.emplace_back(model.feature_names()[f], gain[f]);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

}  // namespace progpipe
