#include "ivnow/eval/ablation.hpp"

#include <algorithm>

#include "ivnow/core/error.hpp"
#include "ivnow/core/parallel.hpp"
#include "ivnow/core/rng.hpp"
#include "ivnow/eval/metrics.hpp"

namespace ivnow::eval {

namespace {

forest::DataView train_view(const features::FeatureMatrix& m,
                            const Fold& fold) {
    forest::DataView v;
    v.x = m.values.data();
    v.y = m.targets.data();
    v.n_rows = fold.train_end;
    v.n_cols = m.cols();
    return v;
}

std::optional<double> mean_defined(
    const std::vector<std::optional<double>>& values) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& v : values) {
        if (v) {
            sum += *v;
            ++n;
        }
    }
    if (n == 0)
        return std::nullopt;
    return sum / static_cast<double>(n);
}

}  // namespace

StockOutcome run_stock(const StockInputs& inputs, const AblationOptions& options,
                       const std::vector<forest::ForestConfig>& grid) {
    StockOutcome out;
    out.symbol = inputs.symbol;
    out.sector = inputs.sector;
    out.liquidity = inputs.liquidity;

    // One matrix per scenario; all share dates and labels because every
    // scenario derives from the same underlying series.
    std::vector<features::FeatureMatrix> matrices;
    matrices.reserve(options.scenarios.size());
    for (int s : options.scenarios)
        matrices.push_back(features::build_matrix(inputs.price, inputs.iv,
                                                  inputs.social,
                                                  features::scenario(s)));
    for (size_t i = 1; i < matrices.size(); ++i)
        if (matrices[i].dates != matrices[0].dates ||
            matrices[i].targets != matrices[0].targets)
            raise(Err::calendar_mismatch,
                  inputs.symbol + ": scenario matrices disagree on rows");

    const auto& labels = matrices[0].targets;
    out.n_rows = matrices[0].rows();
    out.plan = make_plan(out.n_rows, options.initial_train, options.test_window,
                         options.step);
    const auto& folds = out.plan.folds;

    {
        std::vector<double> counts;
        counts.reserve(inputs.social.counts.size());
        for (double c : inputs.social.counts)
            counts.push_back(c);
        out.median_daily_tweets = median(std::move(counts)).value_or(0.0);
    }

    // Dummy baseline: per fold, scores drawn from the training positive rate;
    // independent of scenario and configuration by construction.
    std::vector<std::vector<double>> dummy_scores(folds.size());
    out.dummy_fold_auc.resize(folds.size());
    for (size_t f = 0; f < folds.size(); ++f) {
        const Fold& fold = folds[f];
        Rng rng = Rng::stream(options.seed,
                              hash_text(inputs.symbol) ^ hash_text("dummy"), f);
        std::span<const int> train_labels{labels.data(), fold.train_end};
        dummy_scores[f] = stratified_dummy(train_labels, fold.test_size(), rng);
        std::span<const int> test_labels{labels.data() + fold.test_begin,
                                         fold.test_size()};
        out.dummy_fold_auc[f] = auc(dummy_scores[f], test_labels);
    }

    // Every (scenario, config, fold) is an independent work item; each fits
    // one forest single-threaded and writes only its own slot.
    const size_t n_scen = options.scenarios.size();
    const size_t n_cfg = grid.size();
    const size_t n_fold = folds.size();
    struct CellScores {
        std::vector<double> scores;  // per test day
        std::optional<double> auc;
    };
    std::vector<CellScores> cells(n_scen * n_cfg * n_fold);

    parallel_for(cells.size(), options.threads, [&](size_t item) {
        const size_t s = item / (n_cfg * n_fold);
        const size_t c = (item / n_fold) % n_cfg;
        const size_t f = item % n_fold;
        const auto& m = matrices[s];
        const Fold& fold = folds[f];
        auto model = forest::fit_forest(train_view(m, fold), grid[c], 1);
        CellScores& cell = cells[item];
        cell.scores.resize(fold.test_size());
        for (size_t i = 0; i < fold.test_size(); ++i)
            cell.scores[i] = model.predict_proba(m.row(fold.test_begin + i));
        std::span<const int> test_labels{labels.data() + fold.test_begin,
                                         fold.test_size()};
        cell.auc = auc(cell.scores, test_labels);
    });

    std::optional<double> dummy_mean = mean_defined(out.dummy_fold_auc);

    for (size_t s = 0; s < n_scen; ++s) {
        ScenarioOutcome scen;
        scen.scenario = options.scenarios[s];
        scen.n_features = static_cast<int>(matrices[s].cols());
        scen.grid.resize(n_cfg);
        for (size_t c = 0; c < n_cfg; ++c) {
            ConfigCell& cell = scen.grid[c];
            cell.config_index = static_cast<int>(c);
            cell.fold_auc.resize(n_fold);
            for (size_t f = 0; f < n_fold; ++f)
                cell.fold_auc[f] = cells[(s * n_cfg + c) * n_fold + f].auc;
            cell.mean_auc = mean_defined(cell.fold_auc);
        }
        // Best configuration by mean fold AUC; ties keep the lowest index.
        for (size_t c = 0; c < n_cfg; ++c) {
            if (!scen.grid[c].mean_auc)
                continue;
            if (scen.best_config < 0 ||
                *scen.grid[c].mean_auc >
                    *scen.grid[scen.best_config].mean_auc)
                scen.best_config = static_cast<int>(c);
        }
        if (scen.best_config >= 0) {
            scen.model_auc = scen.grid[scen.best_config].mean_auc;
            scen.dummy_auc = dummy_mean;
            if (scen.model_auc && scen.dummy_auc)
                scen.improvement = *scen.model_auc - *scen.dummy_auc;
            for (size_t f = 0; f < n_fold; ++f) {
                const Fold& fold = folds[f];
                const auto& scores =
                    cells[(s * n_cfg + scen.best_config) * n_fold + f].scores;
                for (size_t i = 0; i < fold.test_size(); ++i) {
                    DayPrediction day;
                    day.date = matrices[s].dates[fold.test_begin + i];
                    day.score = scores[i];
                    day.dummy_score = dummy_scores[f][i];
                    day.label = labels[fold.test_begin + i];
                    day.fold = static_cast<int>(f);
                    scen.days.push_back(day);
                }
            }
        }
        out.scenarios.push_back(std::move(scen));
    }
    return out;
}

BacktestReport run_ablation(const std::vector<StockInputs>& stocks,
                            const AblationOptions& options) {
    if (stocks.empty())
        raise(Err::empty_data, "no stocks to backtest");
    for (int s : options.scenarios)
        features::scenario(s);  // validates 1..7

    BacktestReport report;
    report.options = options;
    report.grid = options.grid.empty() ? forest::default_grid(options.seed)
                                       : options.grid;
    report.stocks.reserve(stocks.size());
    for (const auto& stock : stocks)
        report.stocks.push_back(run_stock(stock, options, report.grid));
    return report;
}

std::vector<ScenarioMedians> BacktestReport::scenario_medians() const {
    std::vector<ScenarioMedians> out;
    for (size_t s = 0; s < options.scenarios.size(); ++s) {
        ScenarioMedians m;
        m.scenario = options.scenarios[s];
        std::vector<double> model, dummy, improvement;
        for (const auto& stock : stocks) {
            const auto& scen = stock.scenarios[s];
            m.n_features = scen.n_features;
            if (scen.model_auc)
                model.push_back(*scen.model_auc);
            if (scen.dummy_auc)
                dummy.push_back(*scen.dummy_auc);
            if (scen.improvement)
                improvement.push_back(*scen.improvement);
        }
        m.n_stocks = model.size();
        m.model_auc = median(std::move(model));
        m.dummy_auc = median(std::move(dummy));
        m.improvement = median(std::move(improvement));
        out.push_back(std::move(m));
    }
    return out;
}

std::map<std::pair<std::string, int>, std::optional<double>>
BacktestReport::sector_improvement_medians() const {
    std::map<std::pair<std::string, int>, std::vector<double>> buckets;
    for (const auto& stock : stocks)
        for (const auto& scen : stock.scenarios)
            if (scen.improvement)
                buckets[{stock.sector, scen.scenario}].push_back(
                    *scen.improvement);
    std::map<std::pair<std::string, int>, std::optional<double>> out;
    for (auto& [key, values] : buckets)
        out[key] = median(std::move(values));
    return out;
}

}  // namespace ivnow::eval
