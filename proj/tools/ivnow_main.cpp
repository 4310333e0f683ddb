#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ivnow/cli/commands.hpp"
#include "ivnow/core/error.hpp"
#include "ivnow/kernels/kernels.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ivnow: implied-volatility nowcasting toolkit"};
    app.require_subcommand(1);

    std::string kernel_lane = "auto";
    app.add_option("--kernel-lane", kernel_lane,
                   "compute kernel lane: auto|scalar|avx2")
        ->capture_default_str();

    // iv
    auto* iv = app.add_subcommand("iv",
                                  "compute the 30-day IV index from option "
                                  "chains");
    std::string iv_chains, iv_rates, iv_out;
    double iv_rate = 0.0;
    iv->add_option("--chains", iv_chains, "option chain CSV")->required();
    iv->add_option("--rates", iv_rates, "rate CSV date,rate");
    iv->add_option("--rate", iv_rate, "constant risk-free rate")
        ->capture_default_str();
    iv->add_option("--out", iv_out, "output IV CSV")->required();

    // featurize
    auto* feat = app.add_subcommand("featurize",
                                    "build per-stock feature matrices");
    std::string f_prices, f_iv, f_scores, f_tweets, f_lexicon, f_out;
    std::vector<int> f_scenarios{1, 2, 3, 4, 5, 6, 7};
    feat->add_option("--prices", f_prices, "price CSV")->required();
    feat->add_option("--iv", f_iv, "IV CSV")->required();
    feat->add_option("--scores", f_scores, "pre-scored tweet CSV");
    feat->add_option("--tweets", f_tweets, "raw tweet JSONL");
    feat->add_option("--lexicon", f_lexicon, "lexicon TSV for raw tweets");
    feat->add_option("--scenario", f_scenarios, "scenario ids (1..7)");
    feat->add_option("--out", f_out, "output directory")->required();

    // backtest
    auto* bt = app.add_subcommand("backtest",
                                  "walk-forward ablation study from a config "
                                  "file");
    std::string bt_config, bt_out;
    std::optional<std::uint64_t> bt_seed;
    std::optional<int> bt_threads;
    bt->add_option("--config", bt_config, "flat key = value run config")
        ->required();
    bt->add_option("--out", bt_out, "output directory (overrides config)");
    bt->add_option("--seed", bt_seed, "seed override");
    bt->add_option("--threads", bt_threads, "worker threads (0 = all cores)");

    // regimes
    auto* reg = app.add_subcommand("regimes",
                                   "fit IV regime models and decode paths");
    std::string r_iv, r_train_end, r_out;
    int r_states = 4, r_iters = 100;
    std::uint64_t r_seed = 42;
    std::vector<std::string> r_symbols;
    reg->add_option("--iv", r_iv, "IV CSV")->required();
    reg->add_option("--train-end", r_train_end,
                    "last in-sample date YYYY-MM-DD")
        ->required();
    reg->add_option("--states", r_states, "number of regimes")
        ->capture_default_str();
    reg->add_option("--iters", r_iters, "EM iterations")->capture_default_str();
    reg->add_option("--seed", r_seed, "seed recorded in artifacts")
        ->capture_default_str();
    reg->add_option("--symbol", r_symbols, "restrict to these symbols");
    reg->add_option("--out", r_out, "output directory")->required();

    // report
    auto* rep = app.add_subcommand("report",
                                   "regime and liquidity/attention tables "
                                   "from a backtest");
    ivnow::cli::ReportArgs report_args;
    rep->add_option("--backtest", report_args.backtest_dir,
                    "backtest output directory")
        ->required();
    rep->add_option("--regimes", report_args.regimes_path,
                    "regime paths CSV from the regimes command");
    rep->add_option("--liquidity", report_args.liquidity_path,
                    "optional liquidity CSV override");
    rep->add_option("--scenario", report_args.scenario,
                    "scenario to report on")
        ->capture_default_str();
    rep->add_option("--states", report_args.n_states, "number of regimes")
        ->capture_default_str();
    rep->add_option("--out", report_args.out_dir, "output directory")
        ->required();

    // synth
    auto* sy = app.add_subcommand("synth", "generate a synthetic data bundle");
    std::string s_spec, s_out;
    std::optional<std::uint64_t> s_seed;
    sy->add_option("--spec", s_spec, "flat key = value synthetic spec")
        ->required();
    sy->add_option("--seed", s_seed, "seed override");
    sy->add_option("--out", s_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        ivnow::kernels::set_lane(ivnow::kernels::parse_lane(kernel_lane));

        if (iv->parsed()) {
            ivnow::cli::run_iv(iv_chains, iv_rates, iv_rate, iv_out);
        } else if (feat->parsed()) {
            ivnow::cli::run_featurize(f_prices, f_iv, f_scores, f_tweets,
                                      f_lexicon, f_scenarios, f_out);
        } else if (bt->parsed()) {
            auto config = ivnow::cli::RunConfig::from_file(bt_config);
            if (!bt_out.empty())
                config.out = bt_out;
            if (bt_seed)
                config.seed = *bt_seed;
            if (bt_threads)
                config.threads = *bt_threads;
            ivnow::cli::run_backtest(config);
        } else if (reg->parsed()) {
            ivnow::cli::RegimesArgs args;
            args.iv_path = r_iv;
            args.train_end = ivnow::Date::parse(r_train_end);
            args.out_dir = r_out;
            args.fit.n_states = r_states;
            args.fit.n_iter = r_iters;
            args.fit.seed = r_seed;
            args.symbols = r_symbols;
            ivnow::cli::run_regimes(args);
        } else if (rep->parsed()) {
            ivnow::cli::run_report(report_args);
        } else if (sy->parsed()) {
            ivnow::cli::run_synth(s_spec, s_out, s_seed);
        }
    } catch (const ivnow::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ivnow::ErrorKind::input ? kExitInput : kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitOk;
}
