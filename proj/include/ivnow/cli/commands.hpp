#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ivnow/hmm/hmm.hpp"

namespace ivnow::cli {

// Subcommand entry points. All throw ivnow::Error; main() maps the error
// kind to exit codes (2 input, 3 numeric).

void run_iv(const std::string& chains_path, const std::string& rates_path,
            double constant_rate, const std::string& out_path);

void run_featurize(const std::string& prices_path, const std::string& iv_path,
                   const std::string& scores_path,
                   const std::string& tweets_path,
                   const std::string& lexicon_path,
                   const std::vector<int>& scenarios,
                   const std::string& out_dir);

// Backtest run configuration, read from a flat key = value file. Every
// Table-style hyperparameter has an explicit key and defaults to the standard
// value; validation collects all problems before any compute starts.
struct RunConfig {
    std::string prices;
    std::string chains;
    std::string iv;
    std::string rates;
    double risk_free_rate = 0.0;
    std::string scores;
    std::string tweets;
    std::string lexicon;
    std::string universe;
    std::string liquidity;
    std::string out;
    std::vector<int> scenarios = {1, 2, 3, 4, 5, 6, 7};
    std::vector<int> max_depth = {4, 6, 8, 10};
    std::vector<int> min_samples_split = {5, 10, 15, 20};
    std::vector<int> min_samples_leaf = {1, 3, 5, 8};
    int n_trees = 1000;
    long initial_train = 504;
    long test_window = 40;
    long step = 40;
    std::uint64_t seed = 42;
    int threads = 0;
    bool emit_features = true;

    static RunConfig from_file(const std::string& path);
    void validate() const;  // throws one ConfigError listing every issue
};

void run_backtest(const RunConfig& config);

struct RegimesArgs {
    std::string iv_path;
    Date train_end;
    std::string out_dir;
    hmm::FitOptions fit;
    std::vector<std::string> symbols;  // empty: all symbols in the file
};

void run_regimes(const RegimesArgs& args);

struct ReportArgs {
    std::string backtest_dir;
    std::string regimes_path;  // regime paths CSV; empty skips regime tables
    std::string liquidity_path;  // optional override of backtest liquidity
    std::string out_dir;
    int scenario = 7;
    int n_states = 4;
};

void run_report(const ReportArgs& args);

void run_synth(const std::string& spec_path, const std::string& out_dir,
               std::optional<std::uint64_t> seed_override);

}  // namespace ivnow::cli
