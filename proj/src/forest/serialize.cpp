#include <json.hpp>

#include "ivnow/core/error.hpp"
#include "ivnow/forest/forest.hpp"

namespace ivnow::forest {

namespace {

constexpr const char* kFormatTag = "ivnow.forest.v1";

}  // namespace

std::string to_json(const Forest& forest,
                    const std::vector<std::string>& columns) {
    nlohmann::json doc;
    doc["format"] = kFormatTag;
    doc["config"] = {
        {"n_trees", forest.config.n_trees},
        {"max_depth", forest.config.max_depth},
        {"min_samples_split", forest.config.min_samples_split},
        {"min_samples_leaf", forest.config.min_samples_leaf},
        {"seed", forest.config.seed},
        {"feature_sampling",
         forest.config.feature_sampling == FeatureSampling::all ? "all" : "sqrt"},
    };
    doc["n_features"] = forest.n_features;
    doc["columns"] = columns;
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& tree : forest.trees) {
        nlohmann::json t;
        auto& feature = t["feature"] = nlohmann::json::array();
        auto& threshold = t["threshold"] = nlohmann::json::array();
        auto& left = t["left"] = nlohmann::json::array();
        auto& right = t["right"] = nlohmann::json::array();
        auto& count = t["count"] = nlohmann::json::array();
        auto& positives = t["positives"] = nlohmann::json::array();
        for (const auto& n : tree.nodes) {
            feature.push_back(n.feature);
            threshold.push_back(n.threshold);
            left.push_back(n.left);
            right.push_back(n.right);
            count.push_back(n.count);
            positives.push_back(n.positives);
        }
        trees.push_back(std::move(t));
    }
    doc["trees"] = std::move(trees);
    return doc.dump();
}

Forest from_json(const std::string& json_text,
                 std::vector<std::string>* columns) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        raise(Err::parse_error, std::string("forest artifact: ") + e.what());
    }
    if (!doc.contains("format") || doc["format"] != kFormatTag)
        raise(Err::parse_error, "forest artifact: unknown format tag");

    Forest forest;
    const auto& cfg = doc.at("config");
    forest.config.n_trees = cfg.at("n_trees").get<int>();
    forest.config.max_depth = cfg.at("max_depth").get<int>();
    forest.config.min_samples_split = cfg.at("min_samples_split").get<int>();
    forest.config.min_samples_leaf = cfg.at("min_samples_leaf").get<int>();
    forest.config.seed = cfg.at("seed").get<std::uint64_t>();
    forest.config.feature_sampling = cfg.at("feature_sampling") == "all"
                                         ? FeatureSampling::all
                                         : FeatureSampling::sqrt_count;
    forest.n_features = doc.at("n_features").get<std::size_t>();
    if (columns)
        *columns = doc.at("columns").get<std::vector<std::string>>();

    for (const auto& t : doc.at("trees")) {
        Tree tree;
        const auto& feature = t.at("feature");
        const auto& threshold = t.at("threshold");
        const auto& left = t.at("left");
        const auto& right = t.at("right");
        const auto& count = t.at("count");
        const auto& positives = t.at("positives");
        const std::size_t n = feature.size();
        if (threshold.size() != n || left.size() != n || right.size() != n ||
            count.size() != n || positives.size() != n)
            raise(Err::parse_error, "forest artifact: ragged tree arrays");
        tree.nodes.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            tree.nodes[i].feature = feature[i].get<int>();
            tree.nodes[i].threshold = threshold[i].get<double>();
            tree.nodes[i].left = left[i].get<int>();
            tree.nodes[i].right = right[i].get<int>();
            tree.nodes[i].count = count[i].get<int>();
            tree.nodes[i].positives = positives[i].get<int>();
        }
        forest.trees.push_back(std::move(tree));
    }
    if (forest.trees.size() != static_cast<std::size_t>(forest.config.n_trees))
        raise(Err::parse_error, "forest artifact: tree count mismatch");
    return forest;
}

}  // namespace ivnow::forest
