#include "ivnow/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "ivnow/core/csv.hpp"
#include "ivnow/core/error.hpp"
#include "ivnow/eval/ablation.hpp"
#include "ivnow/eval/report.hpp"
#include "ivnow/eval/universe.hpp"
#include "ivnow/features/features.hpp"
#include "ivnow/io/config.hpp"
#include "ivnow/io/tables.hpp"
#include "ivnow/ivindex/ivindex.hpp"
#include "ivnow/sentiment/sentiment.hpp"
#include "ivnow/synth/synth.hpp"

namespace fs = std::filesystem;

namespace ivnow::cli {

namespace {

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out)
        raise(Err::config_error, "cannot write '" + path.string() + "'");
    return out;
}

std::string opt_str(const std::optional<double>& v) {
    return v ? fmt_double(*v) : std::string();
}

// symbol -> per-day social stats aggregated onto that symbol's calendar.
std::map<std::string, features::SocialSeries> build_social(
    const std::vector<sentiment::TweetRecord>& records,
    const std::map<std::string, features::DatedSeries>& prices,
    const sentiment::PolarityScorer* scorer,
    const std::set<std::string>& universe) {
    std::map<std::string, std::vector<sentiment::TweetRecord>> grouped;
    for (const auto& rec : records) {
        if (!universe.empty() && !universe.count(rec.symbol))
            raise(Err::unknown_symbol,
                  "tweet symbol '" + rec.symbol + "' not in configured universe");
        grouped[rec.symbol].push_back(rec);
    }
    std::map<std::string, features::SocialSeries> out;
    for (const auto& [symbol, price] : prices) {
        sentiment::TradingCalendar calendar(price.dates);
        auto it = grouped.find(symbol);
        static const std::vector<sentiment::TweetRecord> kEmpty;
        const auto& recs = it == grouped.end() ? kEmpty : it->second;
        auto stats = sentiment::aggregate_daily(recs, symbol, calendar, scorer);
        features::SocialSeries series;
        series.dates.reserve(stats.size());
        for (const auto& s : stats) {
            series.dates.push_back(s.date);
            series.counts.push_back(static_cast<double>(s.tweet_count));
            series.polarity.push_back(s.mean_polarity);
        }
        out.emplace(symbol, std::move(series));
    }
    return out;
}

std::map<std::string, features::DatedSeries> iv_from_chains(
    const io::ChainTable& table) {
    std::map<std::string, features::DatedSeries> out;
    for (const auto& [symbol, days] : table.chains) {
        features::DatedSeries series;
        for (const auto& [date, snapshot] : days) {
            auto point = ivindex::iv30(snapshot);
            series.dates.push_back(point.asof_date);
            series.values.push_back(point.iv);
        }
        out.emplace(symbol, std::move(series));
    }
    return out;
}

}  // namespace

void run_iv(const std::string& chains_path, const std::string& rates_path,
            double constant_rate, const std::string& out_path) {
    io::RateProvider rates =
        rates_path.empty()
            ? io::RateProvider(constant_rate)
            : io::RateProvider::from_file(rates_path, constant_rate);
    auto table = io::load_chains(chains_path, rates);
    if (table.chains.empty())
        raise(Err::no_expiries, chains_path + ": no option chains found");
    auto series = iv_from_chains(table);
    io::write_series(out_path, series, "iv");
}

void run_featurize(const std::string& prices_path, const std::string& iv_path,
                   const std::string& scores_path,
                   const std::string& tweets_path,
                   const std::string& lexicon_path,
                   const std::vector<int>& scenarios,
                   const std::string& out_dir) {
    auto prices = io::load_prices(prices_path);
    auto iv = io::load_iv_series(iv_path);

    std::vector<sentiment::TweetRecord> records;
    std::unique_ptr<sentiment::LexiconScorer> scorer;
    if (!scores_path.empty())
        records = io::load_scored_tweets(scores_path);
    else if (!tweets_path.empty()) {
        records = io::load_tweets_jsonl(tweets_path);
        if (lexicon_path.empty())
            raise(Err::config_error, "raw tweets need --lexicon");
        scorer = std::make_unique<sentiment::LexiconScorer>(
            io::load_lexicon(lexicon_path));
    }
    bool needs_tweets = false;
    for (int s : scenarios)
        needs_tweets |= features::scenario(s).uses_tweets();
    if (needs_tweets && scores_path.empty() && tweets_path.empty())
        raise(Err::config_error,
              "requested scenarios need tweet data (--scores or --tweets)");

    auto social = build_social(records, prices, scorer.get(), {});
    fs::create_directories(out_dir);
    for (const auto& [symbol, price] : prices) {
        auto iv_it = iv.find(symbol);
        if (iv_it == iv.end())
            raise(Err::calendar_mismatch, "no IV series for " + symbol);
        for (int s : scenarios) {
            auto matrix = features::build_matrix(price, iv_it->second,
                                                 social.at(symbol),
                                                 features::scenario(s));
            io::write_feature_matrix(
                (fs::path(out_dir) / (symbol + "_s" + std::to_string(s) +
                                      ".csv")).string(),
                matrix);
        }
    }
}

RunConfig RunConfig::from_file(const std::string& path) {
    auto cfg = io::FlatConfig::from_file(path);
    auto unknown = cfg.unknown_keys(
        {"prices", "chains", "iv", "rates", "risk_free_rate", "scores",
         "tweets", "lexicon", "universe", "liquidity", "out", "scenarios",
         "max_depth", "min_samples_split", "min_samples_leaf", "n_trees",
         "initial_train", "test_window", "step", "seed", "threads",
         "emit_features"});
    if (!unknown.empty()) {
        std::string joined;
        for (const auto& k : unknown)
            joined += (joined.empty() ? "" : ", ") + k;
        raise(Err::config_error, path + ": unknown keys: " + joined);
    }
    RunConfig rc;
    rc.prices = cfg.get_string("prices", "");
    rc.chains = cfg.get_string("chains", "");
    rc.iv = cfg.get_string("iv", "");
    rc.rates = cfg.get_string("rates", "");
    rc.risk_free_rate = cfg.get_double("risk_free_rate", 0.0);
    rc.scores = cfg.get_string("scores", "");
    rc.tweets = cfg.get_string("tweets", "");
    rc.lexicon = cfg.get_string("lexicon", "");
    rc.universe = cfg.get_string("universe", "");
    rc.liquidity = cfg.get_string("liquidity", "");
    rc.out = cfg.get_string("out", "");
    rc.scenarios = cfg.get_int_list("scenarios", rc.scenarios);
    rc.max_depth = cfg.get_int_list("max_depth", rc.max_depth);
    rc.min_samples_split =
        cfg.get_int_list("min_samples_split", rc.min_samples_split);
    rc.min_samples_leaf =
        cfg.get_int_list("min_samples_leaf", rc.min_samples_leaf);
    rc.n_trees = static_cast<int>(cfg.get_long("n_trees", rc.n_trees));
    rc.initial_train = cfg.get_long("initial_train", rc.initial_train);
    rc.test_window = cfg.get_long("test_window", rc.test_window);
    rc.step = cfg.get_long("step", rc.step);
    rc.seed = static_cast<std::uint64_t>(cfg.get_long("seed", 42));
    rc.threads = static_cast<int>(cfg.get_long("threads", 0));
    rc.emit_features = cfg.get_bool("emit_features", true);
    return rc;
}

void RunConfig::validate() const {
    std::vector<std::string> problems;
    auto need_file = [&](const std::string& path, const std::string& key) {
        if (!path.empty() && !fs::exists(path))
            problems.push_back(key + " file does not exist: " + path);
    };
    if (prices.empty())
        problems.push_back("prices is required");
    if (iv.empty() && chains.empty())
        problems.push_back("one of iv or chains is required");
    if (!iv.empty() && !chains.empty())
        problems.push_back("iv and chains are mutually exclusive");
    if (!scores.empty() && !tweets.empty())
        problems.push_back("scores and tweets are mutually exclusive");
    if (!tweets.empty() && lexicon.empty())
        problems.push_back("tweets (raw text) requires lexicon");
    if (out.empty())
        problems.push_back("out directory is required");
    bool needs_tweets = false;
    for (int s : scenarios) {
        if (s < 1 || s > 7)
            problems.push_back("scenario ids must be in 1..7");
        else
            needs_tweets |= features::ScenarioId{s}.uses_tweets();
    }
    if (scenarios.empty())
        problems.push_back("at least one scenario is required");
    if (needs_tweets && scores.empty() && tweets.empty())
        problems.push_back("requested scenarios need scores or tweets input");
    if (n_trees < 1)
        problems.push_back("n_trees must be >= 1");
    if (initial_train < 1 || test_window < 1 || step < 1)
        problems.push_back("initial_train, test_window, step must be >= 1");
    if (max_depth.empty() || min_samples_split.empty() ||
        min_samples_leaf.empty())
        problems.push_back("hyperparameter lists must be non-empty");
    need_file(prices, "prices");
    need_file(chains, "chains");
    need_file(iv, "iv");
    need_file(rates, "rates");
    need_file(scores, "scores");
    need_file(tweets, "tweets");
    need_file(lexicon, "lexicon");
    need_file(universe, "universe");
    need_file(liquidity, "liquidity");
    if (!problems.empty()) {
        std::string joined;
        for (const auto& p : problems)
            joined += "\n  - " + p;
        raise(Err::config_error, "invalid run config:" + joined);
    }
}

namespace {

void write_backtest_outputs(const RunConfig& config,
                            const eval::BacktestReport& report,
                            const std::map<std::string, features::DatedSeries>& iv,
                            const std::vector<eval::StockInputs>& inputs) {
    const fs::path out_dir(config.out);
    fs::create_directories(out_dir);

    io::write_series((out_dir / "iv_series.csv").string(), iv, "iv");

    if (config.emit_features) {
        fs::create_directories(out_dir / "features");
        for (const auto& stock : inputs)
            for (int s : config.scenarios) {
                auto matrix = features::build_matrix(stock.price, stock.iv,
                                                     stock.social,
                                                     features::scenario(s));
                io::write_feature_matrix(
                    (out_dir / "features" /
                     (stock.symbol + "_s" + std::to_string(s) + ".csv"))
                        .string(),
                    matrix);
            }
    }

    {
        auto out = open_out(out_dir / "grid_results.csv");
        out << "symbol,scenario,config_id,max_depth,min_samples_split,"
               "min_samples_leaf,fold,auc\n";
        for (const auto& stock : report.stocks)
            for (const auto& scen : stock.scenarios)
                for (const auto& cell : scen.grid) {
                    const auto& cfg = report.grid[cell.config_index];
                    for (size_t f = 0; f < cell.fold_auc.size(); ++f)
                        out << stock.symbol << "," << scen.scenario << ","
                            << cell.config_index << "," << cfg.max_depth << ","
                            << cfg.min_samples_split << ","
                            << cfg.min_samples_leaf << "," << f << ","
                            << opt_str(cell.fold_auc[f]) << "\n";
                }
    }

    {
        auto out = open_out(out_dir / "stock_scenarios.csv");
        out << "symbol,sector,scenario,n_features,best_config,model_auc,"
               "dummy_auc,improvement,n_test_days\n";
        for (const auto& stock : report.stocks)
            for (const auto& scen : stock.scenarios)
                out << stock.symbol << "," << stock.sector << ","
                    << scen.scenario << "," << scen.n_features << ","
                    << scen.best_config << "," << opt_str(scen.model_auc) << ","
                    << opt_str(scen.dummy_auc) << ","
                    << opt_str(scen.improvement) << "," << scen.days.size()
                    << "\n";
    }

    {
        auto out = open_out(out_dir / "scenario_medians.csv");
        out << "scenario,n_features,n_stocks,median_model_auc,"
               "median_dummy_auc,median_improvement\n";
        for (const auto& m : report.scenario_medians())
            out << m.scenario << "," << m.n_features << "," << m.n_stocks << ","
                << opt_str(m.model_auc) << "," << opt_str(m.dummy_auc) << ","
                << opt_str(m.improvement) << "\n";
    }

    {
        auto out = open_out(out_dir / "sector_improvement.csv");
        out << "sector,scenario,median_improvement\n";
        for (const auto& [key, value] : report.sector_improvement_medians())
            out << key.first << "," << key.second << "," << opt_str(value)
                << "\n";
    }

    {
        auto out = open_out(out_dir / "predictions.csv");
        out << "symbol,scenario,date,fold,score,dummy_score,label\n";
        for (const auto& stock : report.stocks)
            for (const auto& scen : stock.scenarios)
                for (const auto& day : scen.days)
                    out << stock.symbol << "," << scen.scenario << ","
                        << day.date.to_string() << "," << day.fold << ","
                        << fmt_double(day.score) << ","
                        << fmt_double(day.dummy_score) << "," << day.label
                        << "\n";
    }

    {
        auto out = open_out(out_dir / "stocks.csv");
        out << "symbol,sector,n_rows,n_folds,median_daily_tweets,liquidity\n";
        for (const auto& stock : report.stocks)
            out << stock.symbol << "," << stock.sector << "," << stock.n_rows
                << "," << stock.plan.folds.size() << ","
                << fmt_double(stock.median_daily_tweets) << ","
                << (std::isnan(stock.liquidity) ? std::string()
                                                : fmt_double(stock.liquidity))
                << "\n";
    }

    {
        nlohmann::json doc;
        doc["format"] = "ivnow.backtest.v1";
        doc["seed"] = config.seed;
        doc["scenarios"] = config.scenarios;
        doc["initial_train"] = config.initial_train;
        doc["test_window"] = config.test_window;
        doc["step"] = config.step;
        nlohmann::json grid = nlohmann::json::array();
        for (const auto& cfg : report.grid)
            grid.push_back({{"n_trees", cfg.n_trees},
                            {"max_depth", cfg.max_depth},
                            {"min_samples_split", cfg.min_samples_split},
                            {"min_samples_leaf", cfg.min_samples_leaf}});
        doc["grid"] = std::move(grid);
        nlohmann::json stocks = nlohmann::json::array();
        for (const auto& stock : report.stocks) {
            nlohmann::json s;
            s["symbol"] = stock.symbol;
            s["sector"] = stock.sector;
            s["n_rows"] = stock.n_rows;
            nlohmann::json folds = nlohmann::json::array();
            for (const auto& f : stock.plan.folds)
                folds.push_back({{"train_end", f.train_end},
                                 {"test_begin", f.test_begin},
                                 {"test_end", f.test_end}});
            s["folds"] = std::move(folds);
            nlohmann::json scens = nlohmann::json::array();
            for (const auto& scen : stock.scenarios) {
                nlohmann::json j;
                j["scenario"] = scen.scenario;
                j["n_features"] = scen.n_features;
                j["best_config"] = scen.best_config;
                if (scen.model_auc)
                    j["model_auc"] = *scen.model_auc;
                if (scen.dummy_auc)
                    j["dummy_auc"] = *scen.dummy_auc;
                if (scen.improvement)
                    j["improvement"] = *scen.improvement;
                nlohmann::json means = nlohmann::json::array();
                for (const auto& cell : scen.grid)
                    means.push_back(cell.mean_auc
                                        ? nlohmann::json(*cell.mean_auc)
                                        : nlohmann::json(nullptr));
                j["config_mean_auc"] = std::move(means);
                scens.push_back(std::move(j));
            }
            s["scenarios"] = std::move(scens);
            stocks.push_back(std::move(s));
        }
        doc["stocks"] = std::move(stocks);
        auto out = open_out(out_dir / "summary.json");
        out << doc.dump(2) << "\n";
    }
}

}  // namespace

void run_backtest(const RunConfig& config) {
    config.validate();

    const eval::SectorUniverse universe =
        config.universe.empty() ? eval::SectorUniverse::builtin()
                                : eval::SectorUniverse::load(config.universe);

    auto prices = io::load_prices(config.prices);
    if (prices.empty())
        raise(Err::empty_data, config.prices + ": no price rows");
    {
        std::string missing;
        for (const auto& [symbol, series] : prices)
            if (!universe.contains(symbol))
                missing += (missing.empty() ? "" : ", ") + symbol;
        if (!missing.empty())
            raise(Err::unknown_symbol,
                  "price symbols not in universe: " + missing);
    }

    std::map<std::string, features::DatedSeries> iv;
    std::map<std::string, double> liquidity;
    if (!config.iv.empty()) {
        iv = io::load_iv_series(config.iv);
    } else {
        io::RateProvider rates =
            config.rates.empty()
                ? io::RateProvider(config.risk_free_rate)
                : io::RateProvider::from_file(config.rates,
                                              config.risk_free_rate);
        auto table = io::load_chains(config.chains, rates);
        if (table.chains.empty())
            raise(Err::no_expiries, config.chains + ": no option chains found");
        iv = iv_from_chains(table);
        liquidity = table.liquidity;
    }
    if (!config.liquidity.empty())
        liquidity = io::load_liquidity(config.liquidity);

    std::vector<sentiment::TweetRecord> records;
    std::unique_ptr<sentiment::LexiconScorer> scorer;
    if (!config.scores.empty())
        records = io::load_scored_tweets(config.scores);
    else if (!config.tweets.empty()) {
        records = io::load_tweets_jsonl(config.tweets);
        scorer = std::make_unique<sentiment::LexiconScorer>(
            io::load_lexicon(config.lexicon));
    }
    std::set<std::string> universe_symbols;
    for (const auto& [symbol, sector] : universe.mapping())
        universe_symbols.insert(symbol);
    auto social = build_social(records, prices, scorer.get(), universe_symbols);

    std::vector<eval::StockInputs> inputs;
    for (const auto& [symbol, price] : prices) {
        eval::StockInputs stock;
        stock.symbol = symbol;
        stock.sector = *universe.sector_of(symbol);
        stock.price = price;
        auto iv_it = iv.find(symbol);
        if (iv_it == iv.end())
            raise(Err::calendar_mismatch, "no IV series for " + symbol);
        stock.iv = iv_it->second;
        stock.social = social.at(symbol);
        auto liq_it = liquidity.find(symbol);
        if (liq_it != liquidity.end())
            stock.liquidity = liq_it->second;
        inputs.push_back(std::move(stock));
    }

    eval::AblationOptions options;
    options.scenarios = config.scenarios;
    options.grid = forest::make_grid(config.max_depth, config.min_samples_split,
                                     config.min_samples_leaf, config.seed,
                                     config.n_trees);
    options.initial_train = static_cast<std::size_t>(config.initial_train);
    options.test_window = static_cast<std::size_t>(config.test_window);
    options.step = static_cast<std::size_t>(config.step);
    options.seed = config.seed;
    options.threads = config.threads;

    auto report = eval::run_ablation(inputs, options);
    write_backtest_outputs(config, report, iv, inputs);
}

void run_regimes(const RegimesArgs& args) {
    auto iv = io::load_iv_series(args.iv_path);
    if (iv.empty())
        raise(Err::empty_data, args.iv_path + ": no IV rows");
    std::vector<std::string> symbols = args.symbols;
    if (symbols.empty())
        for (const auto& [symbol, series] : iv)
            symbols.push_back(symbol);

    fs::create_directories(fs::path(args.out_dir) / "models");
    std::map<std::string, hmm::RegimePath> paths;
    for (const auto& symbol : symbols) {
        auto it = iv.find(symbol);
        if (it == iv.end())
            raise(Err::unknown_symbol, "no IV series for symbol " + symbol);
        const auto& series = it->second;
        std::vector<double> train;
        for (size_t i = 0; i < series.dates.size(); ++i)
            if (series.dates[i] <= args.train_end)
                train.push_back(series.values[i]);
        if (train.size() <= static_cast<size_t>(args.fit.n_states))
            raise(Err::too_few_observations,
                  symbol + ": only " + std::to_string(train.size()) +
                      " observations at or before " +
                      args.train_end.to_string());
        auto fit = hmm::fit_baum_welch(train, args.fit);
        paths[symbol] = hmm::assign_regimes(fit.model, series.dates,
                                            series.values, args.train_end);
        // Persist in canonical form: states relabeled by ascending mean.
        auto model = hmm::canonicalized(fit.model);
        auto out = open_out(fs::path(args.out_dir) / "models" /
                            (symbol + ".json"));
        out << hmm::to_json(model, args.fit, series.dates.front(),
                            args.train_end)
            << "\n";
    }
    io::write_regime_paths((fs::path(args.out_dir) / "regime_paths.csv").string(),
                           paths, args.fit.n_states);
}

namespace {

// Rebuilds the report slices run_report needs from a backtest directory.
eval::BacktestReport load_backtest_artifacts(const std::string& dir,
                                             int scenario) {
    eval::BacktestReport report;
    auto stocks_csv = read_csv((fs::path(dir) / "stocks.csv").string());
    int sym = stocks_csv.require_column("symbol");
    int sec = stocks_csv.require_column("sector");
    int tweets = stocks_csv.require_column("median_daily_tweets");
    int liq = stocks_csv.require_column("liquidity");
    std::map<std::string, size_t> index;
    for (const auto& [line_no, fields] : stocks_csv.rows) {
        eval::StockOutcome stock;
        stock.symbol = fields[sym];
        stock.sector = fields[sec];
        stock.median_daily_tweets =
            parse_double(fields[tweets], "stocks.csv");
        stock.liquidity = fields[liq].empty()
                              ? std::numeric_limits<double>::quiet_NaN()
                              : parse_double(fields[liq], "stocks.csv");
        index[stock.symbol] = report.stocks.size();
        report.stocks.push_back(std::move(stock));
    }

    auto scen_csv =
        read_csv((fs::path(dir) / "stock_scenarios.csv").string());
    int s_sym = scen_csv.require_column("symbol");
    int s_id = scen_csv.require_column("scenario");
    int s_feat = scen_csv.require_column("n_features");
    int s_model = scen_csv.require_column("model_auc");
    int s_dummy = scen_csv.require_column("dummy_auc");
    int s_improve = scen_csv.require_column("improvement");
    for (const auto& [line_no, fields] : scen_csv.rows) {
        int id = static_cast<int>(parse_long(fields[s_id], "stock_scenarios"));
        if (id != scenario)
            continue;
        auto it = index.find(fields[s_sym]);
        if (it == index.end())
            raise(Err::parse_error,
                  "stock_scenarios.csv references unknown symbol " +
                      fields[s_sym]);
        eval::ScenarioOutcome scen;
        scen.scenario = id;
        scen.n_features =
            static_cast<int>(parse_long(fields[s_feat], "stock_scenarios"));
        if (!fields[s_model].empty())
            scen.model_auc = parse_double(fields[s_model], "stock_scenarios");
        if (!fields[s_dummy].empty())
            scen.dummy_auc = parse_double(fields[s_dummy], "stock_scenarios");
        if (!fields[s_improve].empty())
            scen.improvement =
                parse_double(fields[s_improve], "stock_scenarios");
        report.stocks[it->second].scenarios.push_back(std::move(scen));
    }
    for (const auto& stock : report.stocks)
        if (stock.scenarios.empty())
            raise(Err::config_error,
                  "backtest has no scenario " + std::to_string(scenario) +
                      " rows for " + stock.symbol);

    auto pred_csv = read_csv((fs::path(dir) / "predictions.csv").string());
    int p_sym = pred_csv.require_column("symbol");
    int p_scen = pred_csv.require_column("scenario");
    int p_date = pred_csv.require_column("date");
    int p_fold = pred_csv.require_column("fold");
    int p_score = pred_csv.require_column("score");
    int p_dummy = pred_csv.require_column("dummy_score");
    int p_label = pred_csv.require_column("label");
    for (const auto& [line_no, fields] : pred_csv.rows) {
        int id = static_cast<int>(parse_long(fields[p_scen], "predictions"));
        if (id != scenario)
            continue;
        auto it = index.find(fields[p_sym]);
        if (it == index.end())
            continue;
        eval::DayPrediction day;
        day.date = Date::parse(fields[p_date]);
        day.fold = static_cast<int>(parse_long(fields[p_fold], "predictions"));
        day.score = parse_double(fields[p_score], "predictions");
        day.dummy_score = parse_double(fields[p_dummy], "predictions");
        day.label = static_cast<int>(parse_long(fields[p_label], "predictions"));
        report.stocks[it->second].scenarios[0].days.push_back(day);
    }
    return report;
}

}  // namespace

void run_report(const ReportArgs& args) {
    auto report = load_backtest_artifacts(args.backtest_dir, args.scenario);
    fs::create_directories(args.out_dir);

    if (!args.regimes_path.empty()) {
        auto paths = io::load_regime_paths(args.regimes_path);
        auto iv = io::load_iv_series(
            (fs::path(args.backtest_dir) / "iv_series.csv").string());
        auto regimes = eval::regime_report(report, args.scenario, paths, iv,
                                           args.n_states);

        {
            auto out = open_out(fs::path(args.out_dir) / "regime_frequency.csv");
            out << "regime,regime_name,n_stocks,median_days,median_iv,"
                   "median_dummy_auc,median_improvement\n";
            for (const auto& r : regimes.rollups)
                out << r.regime << ","
                    << hmm::regime_name(r.regime, args.n_states) << ","
                    << r.n_stocks << "," << opt_str(r.median_days) << ","
                    << opt_str(r.median_iv) << ","
                    << opt_str(r.median_dummy_auc) << ","
                    << opt_str(r.median_improvement) << "\n";
        }
        {
            auto out = open_out(fs::path(args.out_dir) / "stock_regimes.csv");
            out << "symbol,sector,regime,days,mean_iv,model_auc,dummy_auc,"
                   "improvement\n";
            for (const auto& stock : regimes.stocks)
                for (const auto& cell : stock.cells)
                    out << stock.symbol << "," << stock.sector << ","
                        << cell.regime << "," << cell.days << ","
                        << opt_str(cell.mean_iv) << ","
                        << opt_str(cell.model_auc) << ","
                        << opt_str(cell.dummy_auc) << ","
                        << opt_str(cell.improvement) << "\n";
        }
        {
            auto out = open_out(fs::path(args.out_dir) / "sector_regime.csv");
            out << "sector,regime,median_improvement\n";
            for (const auto& [key, value] : regimes.sector_medians)
                out << key.first << "," << key.second << "," << opt_str(value)
                    << "\n";
        }
    }

    // Liquidity / attention correlations over stocks with all three inputs.
    std::map<std::string, double> liquidity_override;
    if (!args.liquidity_path.empty())
        liquidity_override = io::load_liquidity(args.liquidity_path);
    std::vector<eval::StockPoint> points;
    for (const auto& stock : report.stocks) {
        double liq = stock.liquidity;
        auto it = liquidity_override.find(stock.symbol);
        if (it != liquidity_override.end())
            liq = it->second;
        const auto& scen = stock.scenarios[0];
        if (std::isnan(liq) || !scen.improvement)
            continue;
        eval::StockPoint p;
        p.symbol = stock.symbol;
        p.sector = stock.sector;
        p.liquidity = liq;
        p.median_tweets = stock.median_daily_tweets;
        p.improvement = *scen.improvement;
        points.push_back(std::move(p));
    }
    {
        auto out = open_out(fs::path(args.out_dir) / "correlations.csv");
        out << "pair,n,pearson,pearson_p,spearman,spearman_p\n";
        if (points.size() >= 3) {
            auto attention = eval::liquidity_attention_stats(points);
            auto row = [&](const char* name,
                           const eval::CorrelationStats& c) {
                out << name << "," << c.n << "," << fmt_double(c.pearson) << ","
                    << fmt_double(c.pearson_p) << "," << fmt_double(c.spearman)
                    << "," << fmt_double(c.spearman_p) << "\n";
            };
            row("liquidity_vs_improvement", attention.liquidity_vs_improvement);
            row("tweets_vs_liquidity", attention.tweets_vs_liquidity);
            auto sectors = open_out(fs::path(args.out_dir) /
                                    "sector_attention.csv");
            sectors << "sector,n_stocks,median_liquidity,median_tweets,"
                       "median_improvement\n";
            for (const auto& r : attention.sector_rows)
                sectors << r.sector << "," << r.n_stocks << ","
                        << opt_str(r.liquidity) << "," << opt_str(r.tweets)
                        << "," << opt_str(r.improvement) << "\n";
        }
    }
}

void run_synth(const std::string& spec_path, const std::string& out_dir,
               std::optional<std::uint64_t> seed_override) {
    auto spec = synth::SyntheticSpec::from_file(spec_path);
    if (seed_override)
        spec.seed = *seed_override;
    auto bundle = synth::generate(spec);
    synth::write_bundle(bundle, out_dir);
}

}  // namespace ivnow::cli
