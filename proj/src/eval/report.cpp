#include "ivnow/eval/report.hpp"

#include <algorithm>
#include <unordered_map>

#include "ivnow/core/error.hpp"

namespace ivnow::eval {

RegimeReport regime_report(
    const BacktestReport& backtest, int scenario,
    const std::map<std::string, hmm::RegimePath>& paths,
    const std::map<std::string, features::DatedSeries>& iv_series,
    int n_states) {
    RegimeReport report;
    report.scenario = scenario;
    report.n_states = n_states;

    std::map<std::pair<std::string, int>, std::vector<double>> sector_buckets;
    std::vector<std::vector<double>> days_per_regime(n_states);
    std::vector<std::vector<double>> iv_per_regime(n_states);
    std::vector<std::vector<double>> dummy_per_regime(n_states);
    std::vector<std::vector<double>> improvement_per_regime(n_states);

    for (const auto& stock : backtest.stocks) {
        const ScenarioOutcome* scen = nullptr;
        for (const auto& s : stock.scenarios)
            if (s.scenario == scenario)
                scen = &s;
        if (!scen)
            raise(Err::config_error,
                  "scenario " + std::to_string(scenario) +
                      " missing from backtest for " + stock.symbol);
        if (scen->days.empty())
            continue;

        auto path_it = paths.find(stock.symbol);
        if (path_it == paths.end())
            raise(Err::calendar_mismatch,
                  "no regime path for " + stock.symbol);
        std::unordered_map<std::int32_t, int> regime_by_date;
        for (const auto& p : path_it->second.points)
            regime_by_date[p.date.serial()] = p.ordinal;

        std::unordered_map<std::int32_t, double> iv_by_date;
        auto iv_it = iv_series.find(stock.symbol);
        if (iv_it != iv_series.end())
            for (size_t i = 0; i < iv_it->second.dates.size(); ++i)
                iv_by_date[iv_it->second.dates[i].serial()] =
                    iv_it->second.values[i];

        struct Slice {
            std::vector<double> scores, dummy, iv;
            std::vector<int> labels;
        };
        std::vector<Slice> slices(n_states);
        for (const auto& day : scen->days) {
            auto it = regime_by_date.find(day.date.serial());
            if (it == regime_by_date.end())
                raise(Err::calendar_mismatch,
                      stock.symbol + ": regime path does not cover test day " +
                          day.date.to_string());
            int regime = it->second;
            if (regime < 0 || regime >= n_states)
                raise(Err::calendar_mismatch,
                      stock.symbol + ": regime ordinal out of range");
            Slice& slice = slices[regime];
            slice.scores.push_back(day.score);
            slice.dummy.push_back(day.dummy_score);
            slice.labels.push_back(day.label);
            auto iv_val = iv_by_date.find(day.date.serial());
            if (iv_val != iv_by_date.end())
                slice.iv.push_back(iv_val->second);
        }

        StockRegimeRows rows;
        rows.symbol = stock.symbol;
        rows.sector = stock.sector;
        rows.total_test_days = static_cast<long>(scen->days.size());
        for (int r = 0; r < n_states; ++r) {
            const Slice& slice = slices[r];
            RegimeCell cell;
            cell.regime = r;
            cell.days = static_cast<long>(slice.labels.size());
            if (!slice.iv.empty()) {
                double sum = 0.0;
                for (double v : slice.iv)
                    sum += v;
                cell.mean_iv = sum / static_cast<double>(slice.iv.size());
            }
            if (!slice.labels.empty()) {
                cell.model_auc = auc(slice.scores, slice.labels);
                cell.dummy_auc = auc(slice.dummy, slice.labels);
                if (cell.model_auc && cell.dummy_auc)
                    cell.improvement = *cell.model_auc - *cell.dummy_auc;
            }
            days_per_regime[r].push_back(static_cast<double>(cell.days));
            if (cell.mean_iv)
                iv_per_regime[r].push_back(*cell.mean_iv);
            if (cell.dummy_auc)
                dummy_per_regime[r].push_back(*cell.dummy_auc);
            if (cell.improvement) {
                improvement_per_regime[r].push_back(*cell.improvement);
                sector_buckets[{stock.sector, r}].push_back(*cell.improvement);
            }
            rows.cells.push_back(cell);
        }
        report.stocks.push_back(std::move(rows));
    }

    for (int r = 0; r < n_states; ++r) {
        RegimeRollup rollup;
        rollup.regime = r;
        rollup.n_stocks = days_per_regime[r].size();
        rollup.median_days = median(std::move(days_per_regime[r]));
        rollup.median_iv = median(std::move(iv_per_regime[r]));
        rollup.median_dummy_auc = median(std::move(dummy_per_regime[r]));
        rollup.median_improvement = median(std::move(improvement_per_regime[r]));
        report.rollups.push_back(std::move(rollup));
    }
    for (auto& [key, values] : sector_buckets)
        report.sector_medians[key] = median(std::move(values));
    return report;
}

AttentionReport liquidity_attention_stats(
    const std::vector<StockPoint>& points) {
    if (points.size() < 3)
        raise(Err::insufficient_stocks,
              "need at least 3 stocks, got " + std::to_string(points.size()));
    std::vector<double> liquidity, tweets, improvement;
    liquidity.reserve(points.size());
    for (const auto& p : points) {
        liquidity.push_back(p.liquidity);
        tweets.push_back(p.median_tweets);
        improvement.push_back(p.improvement);
    }
    AttentionReport report;
    report.liquidity_vs_improvement = correlation(liquidity, improvement);
    report.tweets_vs_liquidity = correlation(tweets, liquidity);

    std::map<std::string, std::vector<const StockPoint*>> by_sector;
    for (const auto& p : points)
        by_sector[p.sector].push_back(&p);
    for (const auto& [sector, members] : by_sector) {
        SectorMedianRow row;
        row.sector = sector;
        row.n_stocks = members.size();
        std::vector<double> l, t, i;
        for (const auto* p : members) {
            l.push_back(p->liquidity);
            t.push_back(p->median_tweets);
            i.push_back(p->improvement);
        }
        row.liquidity = median(std::move(l));
        row.tweets = median(std::move(t));
        row.improvement = median(std::move(i));
        report.sector_rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace ivnow::eval
