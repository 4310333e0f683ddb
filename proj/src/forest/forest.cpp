#include "ivnow/forest/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ivnow/core/error.hpp"
#include "ivnow/core/parallel.hpp"
#include "ivnow/kernels/kernels.hpp"

namespace ivnow::forest {

std::vector<ForestConfig> make_grid(const std::vector<int>& max_depths,
                                    const std::vector<int>& min_splits,
                                    const std::vector<int>& min_leaves,
                                    std::uint64_t seed, int n_trees) {
    std::vector<ForestConfig> grid;
    grid.reserve(max_depths.size() * min_splits.size() * min_leaves.size());
    for (int depth : max_depths)
        for (int split : min_splits)
            for (int leaf : min_leaves) {
                ForestConfig c;
                c.n_trees = n_trees;
                c.max_depth = depth;
                c.min_samples_split = split;
                c.min_samples_leaf = leaf;
                c.seed = seed;
                grid.push_back(c);
            }
    return grid;
}

std::vector<ForestConfig> default_grid(std::uint64_t seed, int n_trees) {
    return make_grid({4, 6, 8, 10}, {5, 10, 15, 20}, {1, 3, 5, 8}, seed, n_trees);
}

double Tree::predict(std::span<const double> row) const {
    int idx = 0;
    while (!nodes[idx].is_leaf())
        idx = row[nodes[idx].feature] <= nodes[idx].threshold ? nodes[idx].left
                                                              : nodes[idx].right;
    return nodes[idx].positive_fraction();
}

int Tree::depth() const {
    // Node depth by walking the child links.
    std::vector<int> depth(nodes.size(), 0);
    int max_depth = 0;
    for (size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].is_leaf())
            continue;
        depth[nodes[i].left] = depth[i] + 1;
        depth[nodes[i].right] = depth[i] + 1;
        max_depth = std::max({max_depth, depth[nodes[i].left],
                              depth[nodes[i].right]});
    }
    return max_depth;
}

int Tree::leaf_count() const {
    int leaves = 0;
    for (const auto& n : nodes)
        leaves += n.is_leaf() ? 1 : 0;
    return leaves;
}

double Forest::predict_proba(std::span<const double> row) const {
    if (row.size() != n_features)
        raise(Err::schema_mismatch,
              "row has " + std::to_string(row.size()) + " features, model needs " +
                  std::to_string(n_features));
    double sum = 0.0;
    for (const auto& t : trees)
        sum += t.predict(row);
    return sum / static_cast<double>(trees.size());
}

namespace {

struct Workspace {
    std::vector<std::size_t> order;     // node rows sorted by feature value
    std::vector<double> values;         // sorted feature values
    std::vector<int> labels;            // labels in sorted order
    std::vector<double> cand_n_left;    // per-candidate left counts
    std::vector<double> cand_pos_left;  // per-candidate left positives
    std::vector<double> cand_score;
    std::vector<int> cand_boundary;     // boundary index i (split after i)
    std::vector<std::size_t> feature_pool;
};

struct BestSplit {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double score = 0.0;  // maximized; gini = (n - score) / n
};

class TreeBuilder {
public:
    TreeBuilder(const DataView& data, const ForestConfig& config, Rng& rng)
        : data_(data), config_(config), rng_(rng) {
        ws_.feature_pool.resize(data.n_cols);
    }

    Tree build(std::span<const std::size_t> rows) {
        Tree tree;
        std::vector<std::size_t> owned(rows.begin(), rows.end());
        grow(tree, owned, 0);
        return tree;
    }

private:
    int grow(Tree& tree, std::vector<std::size_t>& rows, int depth) {
        int positives = 0;
        for (std::size_t r : rows)
            positives += data_.y[r];
        const int n = static_cast<int>(rows.size());

        int node_idx = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back({});
        tree.nodes[node_idx].count = n;
        tree.nodes[node_idx].positives = positives;

        const bool pure = positives == 0 || positives == n;
        if (pure || depth >= config_.max_depth || n < config_.min_samples_split)
            return node_idx;

        BestSplit best = find_best_split(rows, positives);
        if (!best.found)
            return node_idx;

        std::vector<std::size_t> left, right;
        left.reserve(rows.size());
        right.reserve(rows.size());
        for (std::size_t r : rows) {
            if (data_.value(r, best.feature) <= best.threshold)
                left.push_back(r);
            else
                right.push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        tree.nodes[node_idx].feature = static_cast<int>(best.feature);
        tree.nodes[node_idx].threshold = best.threshold;
        int left_idx = grow(tree, left, depth + 1);
        tree.nodes[node_idx].left = left_idx;
        int right_idx = grow(tree, right, depth + 1);
        tree.nodes[node_idx].right = right_idx;
        return node_idx;
    }

    std::span<const std::size_t> sample_features() {
        auto& pool = ws_.feature_pool;
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        if (config_.feature_sampling == FeatureSampling::all)
            return {pool.data(), pool.size()};
        const std::size_t f = data_.n_cols;
        const std::size_t m = static_cast<std::size_t>(
            std::ceil(std::sqrt(static_cast<double>(f))));
        for (std::size_t i = 0; i < m; ++i) {
            std::size_t j = i + rng_.below(f - i);
            std::swap(pool[i], pool[j]);
        }
        // Ascending order keeps the lowest-feature-index tie rule meaningful.
        std::sort(pool.begin(), pool.begin() + m);
        return {pool.data(), m};
    }

    BestSplit find_best_split(const std::vector<std::size_t>& rows,
                              int positives) {
        const int n = static_cast<int>(rows.size());
        const int min_leaf = config_.min_samples_leaf;
        BestSplit best;

        for (std::size_t feature : sample_features()) {
            auto& order = ws_.order;
            order.assign(rows.begin(), rows.end());
            std::sort(order.begin(), order.end(),
                      [&](std::size_t a, std::size_t b) {
                          return data_.value(a, feature) < data_.value(b, feature);
                      });

            auto& values = ws_.values;
            auto& labels = ws_.labels;
            values.resize(order.size());
            labels.resize(order.size());
            for (std::size_t i = 0; i < order.size(); ++i) {
                values[i] = data_.value(order[i], feature);
                labels[i] = data_.y[order[i]];
            }

            // Candidates sit between consecutive distinct values with both
            // children at least min_samples_leaf.
            auto& cn = ws_.cand_n_left;
            auto& cp = ws_.cand_pos_left;
            auto& cb = ws_.cand_boundary;
            cn.clear();
            cp.clear();
            cb.clear();
            int pos_prefix = 0;
            for (int i = 0; i + 1 < n; ++i) {
                pos_prefix += labels[i];
                if (values[i] == values[i + 1])
                    continue;
                int n_left = i + 1;
                int n_right = n - n_left;
                if (n_left < min_leaf || n_right < min_leaf)
                    continue;
                cn.push_back(static_cast<double>(n_left));
                cp.push_back(static_cast<double>(pos_prefix));
                cb.push_back(i);
            }
            if (cn.empty())
                continue;

            auto& score = ws_.cand_score;
            score.resize(cn.size());
            kernels::active().split_scores(cn.data(), cp.data(), cn.size(),
                                           static_cast<double>(n),
                                           static_cast<double>(positives),
                                           score.data());

            // Strict improvement over features in ascending index order and
            // thresholds in ascending order implements the tie-break.
            for (std::size_t c = 0; c < score.size(); ++c) {
                if (!best.found || score[c] > best.score) {
                    best.found = true;
                    best.feature = feature;
                    best.threshold =
                        0.5 * (values[cb[c]] + values[cb[c] + 1]);
                    best.score = score[c];
                }
            }
        }
        return best;
    }

    const DataView& data_;
    const ForestConfig& config_;
    Rng& rng_;
    Workspace ws_;
};

}  // namespace

Tree fit_tree(const DataView& data, std::span<const std::size_t> rows,
              const ForestConfig& config, Rng& rng) {
    if (data.n_rows == 0 || rows.empty())
        raise(Err::empty_data, "cannot fit a tree on empty data");
    TreeBuilder builder(data, config, rng);
    return builder.build(rows);
}

Forest fit_forest(const DataView& data, const ForestConfig& config,
                  int threads) {
    if (data.n_rows == 0)
        raise(Err::empty_data, "cannot fit a forest on empty data");
    if (config.n_trees < 1)
        raise(Err::config_error, "n_trees must be >= 1");

    Forest forest;
    forest.config = config;
    forest.n_features = data.n_cols;
    forest.trees.resize(config.n_trees);

    const std::size_t n = data.n_rows;
    parallel_for(static_cast<std::size_t>(config.n_trees), threads,
                 [&](std::size_t tree_idx) {
                     Rng rng = Rng::stream(config.seed, tree_idx);
                     std::vector<std::size_t> bootstrap(n);
                     for (std::size_t i = 0; i < n; ++i)
                         bootstrap[i] = rng.below(n);
                     forest.trees[tree_idx] =
                         fit_tree(data, bootstrap, config, rng);
                 });
    return forest;
}

}  // namespace ivnow::forest
