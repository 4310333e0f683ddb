#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ivnow/core/rng.hpp"

namespace ivnow::forest {

enum class FeatureSampling {
    sqrt_count,  // ceil(sqrt(f)) features per node, sampled without replacement
    all,         // every feature at every node (used by the exhaustive oracle)
};

struct ForestConfig {
    int n_trees = 1000;
    int max_depth = 10;
    int min_samples_split = 5;
    int min_samples_leaf = 1;
    std::uint64_t seed = 42;
    FeatureSampling feature_sampling = FeatureSampling::sqrt_count;
};

// The hyperparameter grid: 4 depths x 4 splits x 4 leaves = 64 configurations,
// 1000 trees each. Enumeration order is depth-major, then split, then leaf.
std::vector<ForestConfig> default_grid(std::uint64_t seed = 42,
                                       int n_trees = 1000);
std::vector<ForestConfig> make_grid(const std::vector<int>& max_depths,
                                    const std::vector<int>& min_splits,
                                    const std::vector<int>& min_leaves,
                                    std::uint64_t seed, int n_trees);

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int count = 0;
    int positives = 0;

    bool is_leaf() const { return feature < 0; }
    double positive_fraction() const {
        return static_cast<double>(positives) / static_cast<double>(count);
    }
};

struct Tree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    // Leaf positive-class fraction for one row (x <= threshold goes left).
    double predict(std::span<const double> row) const;
    int depth() const;
    int leaf_count() const;
};

// Row-major view over training data with binary labels.
struct DataView {
    const double* x = nullptr;
    const int* y = nullptr;
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;

    double value(std::size_t row, std::size_t col) const {
        return x[row * n_cols + col];
    }
};

struct Forest {
    ForestConfig config;
    std::size_t n_features = 0;
    std::vector<Tree> trees;

    // Mean over trees of each leaf's positive fraction; always in [0, 1].
    double predict_proba(std::span<const double> row) const;
};

// Single CART tree on the given rows (indices into data). Splits minimize
// weighted Gini impurity over midpoint thresholds; impurity ties go to the
// lowest feature index, then the lowest threshold. `rng` drives the per-node
// feature subsets.
Tree fit_tree(const DataView& data, std::span<const std::size_t> rows,
              const ForestConfig& config, Rng& rng);

// n_trees trees, each on a size-n bootstrap drawn from a per-tree RNG stream
// derived from (seed, tree index); identical for any thread count.
Forest fit_forest(const DataView& data, const ForestConfig& config,
                  int threads = 1);

// Versioned JSON artifact; round-trips losslessly.
std::string to_json(const Forest& forest,
                    const std::vector<std::string>& columns);
Forest from_json(const std::string& json_text, std::vector<std::string>* columns);

}  // namespace ivnow::forest
