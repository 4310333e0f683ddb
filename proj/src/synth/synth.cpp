#include "ivnow/synth/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "ivnow/core/csv.hpp"
#include "ivnow/core/error.hpp"
#include "ivnow/core/rng.hpp"
#include "ivnow/eval/universe.hpp"
#include "ivnow/io/config.hpp"

namespace ivnow::synth {

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Black-Scholes with r = 0, forward == spot.
double bs_call(double forward, double strike, double vol, double t) {
    double sd = vol * std::sqrt(t);
    double d1 = std::log(forward / strike) / sd + 0.5 * sd;
    double d2 = d1 - sd;
    return forward * norm_cdf(d1) - strike * norm_cdf(d2);
}

double bs_put(double forward, double strike, double vol, double t) {
    double sd = vol * std::sqrt(t);
    double d1 = std::log(forward / strike) / sd + 0.5 * sd;
    double d2 = d1 - sd;
    return strike * norm_cdf(-d2) - forward * norm_cdf(-d1);
}

double round_cents(double v) { return std::round(v * 100.0) / 100.0; }

std::string stock_symbol(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "SY%02d", index + 1);
    return buf;
}

}  // namespace

std::vector<Date> weekday_calendar(Date start, int n) {
    std::vector<Date> out;
    out.reserve(n);
    Date d = start;
    while (static_cast<int>(out.size()) < n) {
        if (!d.is_weekend())
            out.push_back(d);
        d = d + 1;
    }
    return out;
}

SyntheticSpec SyntheticSpec::from_file(const std::string& path) {
    auto cfg = io::FlatConfig::from_file(path);
    SyntheticSpec spec;
    auto unknown = cfg.unknown_keys(
        {"n_stocks", "n_days", "seed", "start_date", "iv_process", "iv_start",
         "iv_walk_sigma", "signal_strength", "regime_means", "regime_sigmas",
         "regime_self_prob", "price_start", "price_daily_vol",
         "tweet_intensity", "tweet_signal", "polarity_noise",
         "chain_expiry_days", "chain_spread_frac", "chain_strike_step_sds",
         "chain_width_sds", "chain_base_volume", "emit_chains"});
    if (!unknown.empty()) {
        std::string joined;
        for (const auto& k : unknown)
            joined += (joined.empty() ? "" : ", ") + k;
        raise(Err::config_error, path + ": unknown keys: " + joined);
    }
    spec.n_stocks = static_cast<int>(cfg.get_long("n_stocks", spec.n_stocks));
    spec.n_days = static_cast<int>(cfg.get_long("n_days", spec.n_days));
    spec.seed = static_cast<std::uint64_t>(cfg.get_long("seed", spec.seed));
    if (cfg.has("start_date"))
        spec.start_date = Date::parse(cfg.require_string("start_date"));
    spec.iv_process = cfg.get_string("iv_process", spec.iv_process);
    spec.iv_start = cfg.get_double("iv_start", spec.iv_start);
    spec.iv_walk_sigma = cfg.get_double("iv_walk_sigma", spec.iv_walk_sigma);
    spec.signal_strength =
        cfg.get_double("signal_strength", spec.signal_strength);
    spec.regime_means = cfg.get_double_list("regime_means", spec.regime_means);
    spec.regime_sigmas =
        cfg.get_double_list("regime_sigmas", spec.regime_sigmas);
    spec.regime_self_prob =
        cfg.get_double("regime_self_prob", spec.regime_self_prob);
    spec.price_start = cfg.get_double("price_start", spec.price_start);
    spec.price_daily_vol =
        cfg.get_double("price_daily_vol", spec.price_daily_vol);
    spec.tweet_intensity =
        cfg.get_double("tweet_intensity", spec.tweet_intensity);
    spec.tweet_signal = cfg.get_double("tweet_signal", spec.tweet_signal);
    spec.polarity_noise = cfg.get_double("polarity_noise", spec.polarity_noise);
    spec.chain_expiry_days =
        cfg.get_int_list("chain_expiry_days", spec.chain_expiry_days);
    spec.chain_spread_frac =
        cfg.get_double("chain_spread_frac", spec.chain_spread_frac);
    spec.chain_strike_step_sds =
        cfg.get_double("chain_strike_step_sds", spec.chain_strike_step_sds);
    spec.chain_width_sds =
        cfg.get_double("chain_width_sds", spec.chain_width_sds);
    spec.chain_base_volume =
        cfg.get_double("chain_base_volume", spec.chain_base_volume);
    spec.emit_chains = cfg.get_bool("emit_chains", spec.emit_chains);
    spec.validate();
    return spec;
}

void SyntheticSpec::validate() const {
    std::string problems;
    auto flag = [&](const std::string& msg) {
        if (!problems.empty())
            problems += "; ";
        problems += msg;
    };
    if (n_stocks < 1)
        flag("n_stocks must be >= 1");
    if (n_days < 3)
        flag("n_days must be >= 3");
    if (iv_process != "walk" && iv_process != "regimes")
        flag("iv_process must be walk or regimes");
    if (iv_start <= 0.0)
        flag("iv_start must be positive");
    if (iv_walk_sigma <= 0.0)
        flag("iv_walk_sigma must be positive");
    if (signal_strength < 0.0 || signal_strength >= 1.0)
        flag("signal_strength must be in [0, 1)");
    if (regime_means.empty() || regime_means.size() != regime_sigmas.size())
        flag("regime_means and regime_sigmas must be non-empty, equal length");
    for (double s : regime_sigmas)
        if (s <= 0.0)
            flag("regime_sigmas must be positive");
    if (regime_self_prob <= 0.0 || regime_self_prob >= 1.0)
        flag("regime_self_prob must be in (0, 1)");
    if (price_start <= 0.0)
        flag("price_start must be positive");
    if (price_daily_vol <= 0.0)
        flag("price_daily_vol must be positive");
    if (tweet_intensity < 0.0)
        flag("tweet_intensity must be >= 0");
    if (tweet_signal < 0.0 || tweet_signal > 1.0)
        flag("tweet_signal must be in [0, 1]");
    if (chain_expiry_days.size() < 1)
        flag("chain_expiry_days needs at least one expiry");
    for (int e : chain_expiry_days)
        if (e < 1)
            flag("chain expiries must be >= 1 day out");
    if (chain_spread_frac < 0.0 || chain_spread_frac >= 1.0)
        flag("chain_spread_frac must be in [0, 1)");
    if (chain_strike_step_sds <= 0.0 || chain_width_sds <= chain_strike_step_sds)
        flag("chain strike grid needs 0 < step < width");
    if (!problems.empty())
        raise(Err::config_error, "synthetic spec: " + problems);
}

std::vector<ChainQuote> make_chain(Date asof, double forward, double iv_points,
                                   const SyntheticSpec& spec, double activity) {
    std::vector<ChainQuote> out;
    const double vol = iv_points / 100.0;
    for (int expiry_days : spec.chain_expiry_days) {
        Date expiry = asof + expiry_days;
        double t = expiry_days / 365.0;
        double sd = forward * vol * std::sqrt(t);
        // Cent-rounded strikes must stay distinct.
        double step = std::max(0.01, spec.chain_strike_step_sds * sd);
        int half = static_cast<int>(std::ceil(spec.chain_width_sds /
                                              spec.chain_strike_step_sds));
        for (int k = -half; k <= half; ++k) {
            double strike = round_cents(forward + k * step);
            if (strike <= 0.0)
                continue;
            double call = bs_call(forward, strike, vol, t);
            double put = bs_put(forward, strike, vol, t);
            long volume = std::max<long>(
                1, std::lround(spec.chain_base_volume * activity *
                               std::exp(-0.1 * k * k)));
            for (auto [right, mid] :
                 {std::pair{ivindex::Right::call, call},
                  std::pair{ivindex::Right::put, put}}) {
                ChainQuote cq;
                cq.quote.expiry_date = expiry;
                cq.quote.strike = strike;
                cq.quote.right = right;
                cq.quote.bid = mid * (1.0 - spec.chain_spread_frac);
                cq.quote.ask = mid * (1.0 + spec.chain_spread_frac);
                cq.volume = volume;
                out.push_back(cq);
            }
        }
    }
    return out;
}

Bundle generate(const SyntheticSpec& spec) {
    spec.validate();
    Bundle bundle;
    bundle.spec = spec;
    auto calendar = weekday_calendar(spec.start_date, spec.n_days);
    auto sectors = eval::SectorUniverse::builtin().sectors();

    for (int i = 0; i < spec.n_stocks; ++i) {
        StockBundle stock;
        stock.symbol = stock_symbol(i);
        stock.sector = sectors[i % sectors.size()];
        stock.dates = calendar;

        Rng activity_rng = Rng::stream(spec.seed, hash_text(stock.symbol),
                                       hash_text("activity"));
        stock.activity = std::exp(activity_rng.uniform(-1.0, 1.0));

        // Price: geometric random walk.
        Rng price_rng =
            Rng::stream(spec.seed, hash_text(stock.symbol), hash_text("price"));
        stock.price.resize(spec.n_days);
        double p = spec.price_start;
        for (int t = 0; t < spec.n_days; ++t) {
            stock.price[t] = p;
            double g = price_rng.gauss();
            p *= std::exp(spec.price_daily_vol * g -
                          0.5 * spec.price_daily_vol * spec.price_daily_vol);
        }

        // IV.
        Rng iv_rng =
            Rng::stream(spec.seed, hash_text(stock.symbol), hash_text("iv"));
        stock.iv.resize(spec.n_days);
        if (spec.iv_process == "walk") {
            double w = 0.0;
            int prev_sign = iv_rng.bernoulli(0.5) ? 1 : -1;
            double repeat = 0.5 + 0.5 * spec.signal_strength;
            for (int t = 0; t < spec.n_days; ++t) {
                stock.iv[t] = spec.iv_start * std::exp(w);
                int sign = iv_rng.bernoulli(repeat) ? prev_sign : -prev_sign;
                double mag = std::abs(iv_rng.gauss()) * spec.iv_walk_sigma;
                w += sign * mag;
                prev_sign = sign;
            }
        } else {
            const int k = static_cast<int>(spec.regime_means.size());
            stock.regimes.resize(spec.n_days);
            int state = static_cast<int>(iv_rng.below(k));
            for (int t = 0; t < spec.n_days; ++t) {
                stock.regimes[t] = state;
                double v = spec.regime_means[state] +
                           spec.regime_sigmas[state] * iv_rng.gauss();
                stock.iv[t] = std::max(0.1, v);
                if (!iv_rng.bernoulli(spec.regime_self_prob) && k > 1) {
                    int hop = 1 + static_cast<int>(iv_rng.below(k - 1));
                    state = (state + hop) % k;
                }
            }
        }

        // Tweets: Poisson daily counts, polarity optionally leaking the next
        // IV move (the nowcasting coupling), stamped mid-session.
        Rng tweet_rng =
            Rng::stream(spec.seed, hash_text(stock.symbol), hash_text("tweets"));
        for (int t = 0; t < spec.n_days; ++t) {
            int count = tweet_rng.poisson(spec.tweet_intensity * stock.activity);
            double next_move = 0.0;
            if (t + 1 < spec.n_days)
                next_move = stock.iv[t + 1] > stock.iv[t] ? 1.0 : -1.0;
            for (int j = 0; j < count; ++j) {
                double raw = spec.tweet_signal * next_move +
                             spec.polarity_noise * tweet_rng.gauss();
                ScoredTweet tw;
                tw.ts = Timestamp{calendar[t], 12 * 3600};
                tw.score = std::clamp(raw, -0.999, 0.999);
                stock.tweets.push_back(tw);
            }
        }
        bundle.stocks.push_back(std::move(stock));
    }
    return bundle;
}

void write_bundle(const Bundle& bundle, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto path = [&](const char* name) { return (fs::path(out_dir) / name).string(); };

    std::ofstream prices(path("prices.csv"));
    std::ofstream iv(path("iv.csv"));
    std::ofstream scores(path("scores.csv"));
    std::ofstream universe(path("universe.csv"));
    std::ofstream liquidity(path("liquidity.csv"));
    if (!prices || !iv || !scores || !universe || !liquidity)
        raise(Err::config_error, "cannot write bundle under '" + out_dir + "'");

    prices << "symbol,date,adj_close\n";
    iv << "symbol,date,iv\n";
    scores << "symbol,ts,score\n";
    universe << "symbol,sector\n";
    liquidity << "symbol,liquidity\n";

    std::ofstream chains;
    if (bundle.spec.emit_chains) {
        chains.open(path("chains.csv"));
        chains << "symbol,asof_date,expiry_date,right,strike,bid,ask,volume\n";
    }

    const bool regime_mode = bundle.spec.iv_process == "regimes";
    std::ofstream truth_regimes;
    if (regime_mode) {
        truth_regimes.open(path("truth_regimes.csv"));
        truth_regimes << "symbol,date,regime\n";
    }

    for (const auto& stock : bundle.stocks) {
        universe << stock.symbol << "," << stock.sector << "\n";
        double dollar_volume_sum = 0.0;
        for (size_t t = 0; t < stock.dates.size(); ++t) {
            const std::string date = stock.dates[t].to_string();
            prices << stock.symbol << "," << date << ","
                   << fmt_double(stock.price[t]) << "\n";
            iv << stock.symbol << "," << date << "," << fmt_double(stock.iv[t])
               << "\n";
            if (regime_mode)
                truth_regimes << stock.symbol << "," << date << ","
                              << stock.regimes[t] << "\n";
            auto chain = make_chain(stock.dates[t], stock.price[t], stock.iv[t],
                                    bundle.spec, stock.activity);
            for (const auto& cq : chain) {
                dollar_volume_sum +=
                    static_cast<double>(cq.volume) * cq.quote.mid() * 100.0;
                if (bundle.spec.emit_chains)
                    chains << stock.symbol << "," << date << ","
                           << cq.quote.expiry_date.to_string() << ","
                           << (cq.quote.right == ivindex::Right::call ? "call"
                                                                      : "put")
                           << "," << fmt_double(cq.quote.strike) << ","
                           << fmt_double(cq.quote.bid) << ","
                           << fmt_double(cq.quote.ask) << "," << cq.volume
                           << "\n";
            }
        }
        liquidity << stock.symbol << ","
                  << fmt_double(dollar_volume_sum /
                                static_cast<double>(stock.dates.size()))
                  << "\n";
        for (const auto& tw : stock.tweets)
            scores << stock.symbol << "," << tw.ts.to_string() << ","
                   << fmt_double(tw.score) << "\n";
    }

    nlohmann::json truth;
    truth["format"] = "ivnow.synth.v1";
    truth["seed"] = bundle.spec.seed;
    truth["iv_process"] = bundle.spec.iv_process;
    truth["signal_strength"] = bundle.spec.signal_strength;
    truth["tweet_signal"] = bundle.spec.tweet_signal;
    truth["n_stocks"] = bundle.spec.n_stocks;
    truth["n_days"] = bundle.spec.n_days;
    truth["regime_means"] = bundle.spec.regime_means;
    truth["regime_sigmas"] = bundle.spec.regime_sigmas;
    nlohmann::json stocks = nlohmann::json::array();
    for (const auto& s : bundle.stocks)
        stocks.push_back({{"symbol", s.symbol},
                          {"sector", s.sector},
                          {"activity", s.activity},
                          {"n_tweets", s.tweets.size()}});
    truth["stocks"] = std::move(stocks);
    std::ofstream truth_out(path("truth.json"));
    truth_out << truth.dump(2) << "\n";
}

}  // namespace ivnow::synth
