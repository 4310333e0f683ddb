#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ivnow/eval/plan.hpp"
#include "ivnow/features/features.hpp"
#include "ivnow/forest/forest.hpp"

namespace ivnow::eval {

struct StockInputs {
    std::string symbol;
    std::string sector;
    features::DatedSeries price;
    features::DatedSeries iv;
    features::SocialSeries social;
    // Mean daily dollar option volume; NaN when the input had no volume data.
    double liquidity = std::numeric_limits<double>::quiet_NaN();
};

struct AblationOptions {
    std::vector<int> scenarios = {1, 2, 3, 4, 5, 6, 7};
    std::vector<forest::ForestConfig> grid;  // empty -> default 64-config grid
    std::size_t initial_train = 504;
    std::size_t test_window = 40;
    std::size_t step = 40;
    std::uint64_t seed = 42;
    int threads = 0;  // 0 -> hardware concurrency
};

// One scored out-of-sample day under the best configuration.
struct DayPrediction {
    Date date;
    double score = 0.0;
    double dummy_score = 0.0;
    int label = 0;
    int fold = 0;
};

struct ConfigCell {
    int config_index = 0;
    std::vector<std::optional<double>> fold_auc;  // nullopt: single-class fold
    std::optional<double> mean_auc;               // over defined folds
};

struct ScenarioOutcome {
    int scenario = 0;
    int n_features = 0;
    int best_config = -1;  // index into the grid; -1 when nothing defined
    std::optional<double> model_auc;
    std::optional<double> dummy_auc;
    std::optional<double> improvement;  // model_auc - dummy_auc
    std::vector<ConfigCell> grid;
    std::vector<DayPrediction> days;  // best configuration's test days
};

struct StockOutcome {
    std::string symbol;
    std::string sector;
    std::size_t n_rows = 0;
    WalkForwardPlan plan;
    std::vector<std::optional<double>> dummy_fold_auc;  // shared by scenarios
    std::vector<ScenarioOutcome> scenarios;
    double median_daily_tweets = 0.0;
    double liquidity = std::numeric_limits<double>::quiet_NaN();
};

struct ScenarioMedians {
    int scenario = 0;
    int n_features = 0;
    std::optional<double> model_auc;
    std::optional<double> dummy_auc;
    std::optional<double> improvement;
    std::size_t n_stocks = 0;
};

struct BacktestReport {
    AblationOptions options;
    std::vector<forest::ForestConfig> grid;
    std::vector<StockOutcome> stocks;

    std::vector<ScenarioMedians> scenario_medians() const;
    // (sector, scenario) -> median improvement over that sector's stocks.
    std::map<std::pair<std::string, int>, std::optional<double>>
    sector_improvement_medians() const;
};

// Fits every (scenario, configuration, fold) cell for one stock: expanding
// walk-forward training, per-fold AUC, dummy baseline on identical folds, the
// best configuration by mean fold AUC (ties to the lowest grid index) and its
// per-day out-of-sample predictions.
StockOutcome run_stock(const StockInputs& inputs, const AblationOptions& options,
                       const std::vector<forest::ForestConfig>& grid);

BacktestReport run_ablation(const std::vector<StockInputs>& stocks,
                            const AblationOptions& options);

}  // namespace ivnow::eval
