#include "cladbench/estimators/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cladbench/error.hpp"

namespace clad {

TreeParams tree_params_from(const EstimatorSpec& spec, bool classify) {
  TreeParams p;
  p.max_depth = static_cast<int>(spec.integer("max_depth"));
  p.min_samples_split = static_cast<std::size_t>(spec.integer("min_samples_split"));
  p.min_samples_leaf = static_cast<std::size_t>(spec.integer("min_samples_leaf"));
  const std::string& mf = spec.text("max_features");
  if (mf == "sqrt" || (mf == "auto" && classify)) {
    p.max_features = MaxFeatures::Sqrt;
  } else if (mf == "log2") {
    p.max_features = MaxFeatures::Log2;
  } else {
    p.max_features = MaxFeatures::All;
  }
  const std::string& crit = spec.text("criterion");
  if (!classify) {
    p.criterion = SplitCriterion::SquaredError;
  } else if (crit == "entropy" || crit == "log_loss") {
    p.criterion = SplitCriterion::Entropy;
  } else {
    p.criterion = SplitCriterion::Gini;
  }
  return p;
}

std::size_t features_per_split(MaxFeatures mode, std::size_t dims) {
  switch (mode) {
    case MaxFeatures::All: return dims;
    case MaxFeatures::Sqrt:
      return std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(dims))));
    case MaxFeatures::Log2:
      return std::max<std::size_t>(1, static_cast<std::size_t>(std::log2(static_cast<double>(dims))));
  }
  return dims;
}

std::uint64_t tree_stream_seed(std::uint64_t seed, std::size_t tree_index) {
  return derive_seed(seed, tree_index);
}

namespace {

double binary_impurity(SplitCriterion c, double p) {
  if (c == SplitCriterion::Gini) return 2.0 * p * (1.0 - p);
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

class Builder {
 public:
  Builder(const Matrix& x, const Vector& y, const Vector& w, const TreeParams& params, Rng& rng)
      : x_(x), y_(y), w_(w), params_(params), rng_(rng) {
    features_.resize(static_cast<std::size_t>(x.cols()));
    std::iota(features_.begin(), features_.end(), 0);
    per_split_ = features_per_split(params.max_features, features_.size());
  }

  std::vector<TreeNode> run(std::vector<std::size_t> rows) {
    if (!rows.empty()) build(rows, 0);
    return std::move(nodes_);
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = -std::numeric_limits<double>::infinity();
  };

  int build(std::vector<std::size_t>& rows, int depth) {
    const int index = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    double weight = 0.0;
    double sum = 0.0;
    for (auto r : rows) {
      weight += w_(r);
      sum += w_(r) * y_(r);
    }
    nodes_[index].value = sum / weight;

    const bool depth_exhausted = params_.max_depth >= 0 && depth >= params_.max_depth;
    const bool too_few = rows.size() < params_.min_samples_split ||
                         rows.size() < 2 * params_.min_samples_leaf;
    const bool pure = std::all_of(rows.begin(), rows.end(),
                                  [&](std::size_t r) { return y_(r) == y_(rows.front()); });
    if (depth_exhausted || too_few || pure) return index;

    const Split split = best_split(rows, weight, sum);
    if (split.feature < 0) return index;

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (auto r : rows) {
      (x_(r, split.feature) <= split.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = build(left, depth + 1);
    const int rgt = build(right, depth + 1);
    nodes_[index].feature = split.feature;
    nodes_[index].threshold = split.threshold;
    nodes_[index].left = l;
    nodes_[index].right = rgt;
    return index;
  }

  std::vector<int> candidate_features(const std::vector<std::size_t>& rows) {
    auto varies = [&](int f) {
      const double first = x_(rows.front(), f);
      return std::any_of(rows.begin(), rows.end(), [&](std::size_t r) { return x_(r, f) != first; });
    };
    std::vector<int> chosen;
    if (per_split_ >= features_.size()) {
      for (int f : features_) {
        if (varies(f)) chosen.push_back(f);
      }
      return chosen;
    }
    // Draw features in random order until enough non-constant ones are found.
    std::vector<int> order = features_;
    rng_.shuffle(std::span<int>(order));
    for (int f : order) {
      if (chosen.size() == per_split_) break;
      if (varies(f)) chosen.push_back(f);
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  }

  Split best_split(const std::vector<std::size_t>& rows, double total_w, double total_s) {
    Split best;
    const std::size_t n = rows.size();
    const std::size_t min_leaf = params_.min_samples_leaf;
    const bool regression = params_.criterion == SplitCriterion::SquaredError;
    const double parent_score =
        regression ? total_s * total_s / total_w
                   : total_w * binary_impurity(params_.criterion, total_s / total_w);

    std::vector<std::pair<double, std::size_t>> sorted(n);
    for (int f : candidate_features(rows)) {
      for (std::size_t i = 0; i < n; ++i) sorted[i] = {x_(rows[i], f), rows[i]};
      std::sort(sorted.begin(), sorted.end());

      double wl = 0.0;
      double sl = 0.0;
      for (std::size_t i = 1; i < n; ++i) {
        const std::size_t prev = sorted[i - 1].second;
        wl += w_(prev);
        sl += w_(prev) * y_(prev);
        if (i < min_leaf || n - i < min_leaf) continue;
        const double lo = sorted[i - 1].first;
        const double hi = sorted[i].first;
        if (!(lo < hi)) continue;

        const double wr = total_w - wl;
        const double sr = total_s - sl;
        double gain;
        if (regression) {
          gain = sl * sl / wl + sr * sr / wr - parent_score;
        } else {
          gain = parent_score - wl * binary_impurity(params_.criterion, sl / wl) -
                 wr * binary_impurity(params_.criterion, sr / wr);
        }
        const double tolerance = 1e-12 * (std::abs(gain) + std::abs(best.gain));
        if (best.feature < 0 || gain > best.gain + tolerance) {
          double mid = 0.5 * (lo + hi);
          if (!(mid < hi)) mid = lo;
          best.feature = f;
          best.threshold = mid;
          best.gain = gain;
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  const Vector& y_;
  const Vector& w_;
  const TreeParams& params_;
  Rng& rng_;
  std::vector<int> features_;
  std::size_t per_split_ = 0;
  std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTree DecisionTree::fit(const Matrix& x, const Vector& y, const Vector& weights,
                               const TreeParams& params, Rng& rng) {
  if (x.rows() != y.size() || y.size() != weights.size()) {
    throw ShapeError("tree fit: rows, targets and weights differ in length");
  }
  if (params.max_depth == 0) throw SpecError("max_depth must be >= 1 or -1 (unlimited)");
  std::vector<std::size_t> rows;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (weights(i) > 0.0) rows.push_back(static_cast<std::size_t>(i));
  }
  if (rows.empty()) throw ShapeError("tree fit: no rows with positive weight");
  Builder builder(x, y, weights, params, rng);
  return DecisionTree(builder.run(std::move(rows)));
}

int DecisionTree::leaf_of(const double* row) const {
  int node = 0;
  while (nodes_[node].feature >= 0) {
    const auto& n = nodes_[node];
    node = row[n.feature] <= n.threshold ? n.left : n.right;
  }
  return node;
}

Vector DecisionTree::predict(const Matrix& x) const {
  Vector out(x.rows());
  for (Eigen::Index r = 0; r < x.rows(); ++r) out(r) = predict_row(x.row(r).data());
  return out;
}

std::size_t DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<std::size_t> level(nodes_.size(), 0);
  std::size_t deepest = 0;
  // Children always follow their parent in storage order.
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (nodes_[i].feature >= 0) {
      level[nodes_[i].left] = level[i] + 1;
      level[nodes_[i].right] = level[i] + 1;
    }
  }
  return deepest;
}

std::size_t DecisionTree::leaf_count() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(),
                                                [](const TreeNode& n) { return n.feature < 0; }));
}

Json DecisionTree::to_json() const {
  std::vector<int> feature;
  std::vector<int> left;
  std::vector<int> right;
  std::vector<double> threshold;
  std::vector<double> value;
  for (const auto& n : nodes_) {
    feature.push_back(n.feature);
    left.push_back(n.left);
    right.push_back(n.right);
    threshold.push_back(n.threshold);
    value.push_back(n.value);
  }
  return Json{{"feature", feature}, {"threshold", threshold}, {"left", left},
              {"right", right}, {"value", value}};
}

DecisionTree DecisionTree::from_json(const Json& j) {
  const auto feature = j.at("feature").get<std::vector<int>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<int>>();
  const auto right = j.at("right").get<std::vector<int>>();
  const auto value = j.at("value").get<std::vector<double>>();
  std::vector<TreeNode> nodes(feature.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i] = TreeNode{feature.at(i), threshold.at(i), left.at(i), right.at(i), value.at(i)};
  }
  return DecisionTree(std::move(nodes));
}

std::unique_ptr<Estimator> fit_tree_estimator(const EstimatorSpec& spec, const Matrix& x,
                                              const Vector& y, FitNotes& notes) {
  const bool classify = spec.kind == EstimatorKind::DtClf;
  const TreeParams params = tree_params_from(spec, classify);
  Rng rng(tree_stream_seed(spec.seed, 0));
  auto tree = DecisionTree::fit(x, y, Vector::Ones(x.rows()), params, rng);
  notes["tree_depth"] = std::to_string(tree.depth());
  notes["tree_leaves"] = std::to_string(tree.leaf_count());
  return std::make_unique<TreeModel>(std::move(tree));
}

}  // namespace clad
