#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ivnow/eval/ablation.hpp"
#include "ivnow/eval/metrics.hpp"
#include "ivnow/hmm/hmm.hpp"

namespace ivnow::eval {

// Per (stock, regime) slice of the out-of-sample predictions.
struct RegimeCell {
    int regime = 0;  // ordinal, 0 = lowest mean IV
    long days = 0;
    std::optional<double> mean_iv;
    std::optional<double> model_auc;  // nullopt when the slice is single-class
    std::optional<double> dummy_auc;
    std::optional<double> improvement;
};

struct StockRegimeRows {
    std::string symbol;
    std::string sector;
    long total_test_days = 0;
    std::vector<RegimeCell> cells;  // one per regime ordinal
};

struct RegimeRollup {
    int regime = 0;
    std::optional<double> median_days;
    std::optional<double> median_iv;
    std::optional<double> median_dummy_auc;
    std::optional<double> median_improvement;
    std::size_t n_stocks = 0;
};

struct RegimeReport {
    int scenario = 0;
    int n_states = 4;
    std::vector<StockRegimeRows> stocks;
    std::vector<RegimeRollup> rollups;  // one per regime
    // (sector, regime) -> median improvement.
    std::map<std::pair<std::string, int>, std::optional<double>>
        sector_medians;
};

// Groups each stock's out-of-sample (score, label) days by decoded regime and
// scores every slice: AUC, dummy AUC on the same days, improvement. Regime
// day counts partition the test days exactly; a test day missing from the
// regime path is an error. Single-class slices are flagged (nullopt) and
// excluded from the medians.
RegimeReport regime_report(
    const BacktestReport& backtest, int scenario,
    const std::map<std::string, hmm::RegimePath>& paths,
    const std::map<std::string, features::DatedSeries>& iv_series,
    int n_states = 4);

// Per-stock point for the liquidity / attention analysis.
struct StockPoint {
    std::string symbol;
    std::string sector;
    double liquidity = 0.0;
    double median_tweets = 0.0;
    double improvement = 0.0;
};

struct SectorMedianRow {
    std::string sector;
    std::size_t n_stocks = 0;
    std::optional<double> liquidity;
    std::optional<double> tweets;
    std::optional<double> improvement;
};

struct AttentionReport {
    CorrelationStats liquidity_vs_improvement;
    CorrelationStats tweets_vs_liquidity;
    std::vector<SectorMedianRow> sector_rows;  // box-plot-ready medians
};

// Pearson/Spearman correlations (two-sided p-values) for
// (liquidity, improvement) and (median tweets, liquidity), plus per-sector
// medians. Throws InsufficientStocks below 3 points.
AttentionReport liquidity_attention_stats(const std::vector<StockPoint>& points);

}  // namespace ivnow::eval
