#pragma once

#include <string>
#include <vector>

#include "ivnow/core/date.hpp"
#include "ivnow/ivindex/ivindex.hpp"

namespace ivnow::synth {

// Desk-scale synthetic market generator. Two IV processes:
//   walk    — geometric random walk in IV with a momentum coupling: the sign
//             of each day's move repeats the previous sign with probability
//             0.5 + signal_strength/2. signal_strength 0 makes moves iid, so
//             every feature is label-independent.
//   regimes — hidden-Markov regime switching: sticky states with Gaussian
//             IV levels per state; ground-truth states are persisted.
// Option chains are priced under a flat Black-Scholes vol equal to the day's
// IV, so running the 30-day index over them recovers the generated IV to
// within a fraction of a point.
struct SyntheticSpec {
    int n_stocks = 4;
    int n_days = 300;
    std::uint64_t seed = 42;
    Date start_date = Date::from_ymd(2013, 1, 2);

    std::string iv_process = "walk";  // walk | regimes
    double iv_start = 25.0;
    double iv_walk_sigma = 0.03;      // daily log-IV step stddev
    double signal_strength = 0.0;     // [0, 1): momentum coupling
    std::vector<double> regime_means = {18.6, 22.3, 26.7, 35.3};
    std::vector<double> regime_sigmas = {1.0, 1.2, 1.4, 1.8};
    double regime_self_prob = 0.98;

    double price_start = 100.0;
    double price_daily_vol = 0.02;

    double tweet_intensity = 20.0;  // mean tweets per day, scaled per stock
    double tweet_signal = 0.0;      // polarity coupling to the next IV move
    double polarity_noise = 0.3;

    std::vector<int> chain_expiry_days = {23, 37};
    double chain_spread_frac = 0.02;      // half-spread as fraction of mid
    double chain_strike_step_sds = 0.2;   // strike step in units of F*v*sqrt(T)
    double chain_width_sds = 4.0;
    double chain_base_volume = 500.0;
    bool emit_chains = true;  // liquidity.csv is computed either way

    static SyntheticSpec from_file(const std::string& path);
    void validate() const;  // collects every problem into one ConfigError
};

struct ScoredTweet {
    Timestamp ts;
    double score = 0.0;
};

struct ChainQuote {
    ivindex::OptionQuote quote;
    long volume = 0;
};

struct StockBundle {
    std::string symbol;
    std::string sector;
    double activity = 1.0;  // per-stock liquidity/attention scale
    std::vector<Date> dates;
    std::vector<double> price;
    std::vector<double> iv;        // ground-truth 30-day IV, pct points
    std::vector<int> regimes;      // regime mode only; else empty
    std::vector<ScoredTweet> tweets;
};

struct Bundle {
    SyntheticSpec spec;
    std::vector<StockBundle> stocks;
};

// n consecutive weekdays starting at or after `start`.
std::vector<Date> weekday_calendar(Date start, int n);

Bundle generate(const SyntheticSpec& spec);

// Flat-vol option chain for one (asof, forward, iv) day; both rights at every
// strike, volumes shaped by moneyness and the stock's activity scale.
std::vector<ChainQuote> make_chain(Date asof, double forward, double iv_points,
                                   const SyntheticSpec& spec, double activity);

// Writes prices.csv, iv.csv, chains.csv, scores.csv, universe.csv,
// truth_regimes.csv (regime mode) and truth.json under out_dir.
void write_bundle(const Bundle& bundle, const std::string& out_dir);

}  // namespace ivnow::synth
