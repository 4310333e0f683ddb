#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ivnow/core/date.hpp"
#include "ivnow/features/features.hpp"
#include "ivnow/hmm/hmm.hpp"
#include "ivnow/ivindex/ivindex.hpp"
#include "ivnow/sentiment/sentiment.hpp"

namespace ivnow::io {

// Readers for the on-disk table formats. All are header-checked CSV (or
// JSONL for raw tweets) and report errors with file:line context.

// `symbol,date,<value>` keyed series, sorted by date per symbol.
std::map<std::string, features::DatedSeries> load_series(
    const std::string& path, const std::string& value_column);

inline std::map<std::string, features::DatedSeries> load_prices(
    const std::string& path) {
    return load_series(path, "adj_close");
}
inline std::map<std::string, features::DatedSeries> load_iv_series(
    const std::string& path) {
    return load_series(path, "iv");
}

// Rate file `date,rate`; lookup falls back to the constant default.
class RateProvider {
public:
    explicit RateProvider(double constant_rate = 0.0)
        : constant_(constant_rate) {}
    static RateProvider from_file(const std::string& path,
                                  double constant_rate = 0.0);
    double rate_on(Date d) const;

private:
    double constant_ = 0.0;
    std::map<std::int32_t, double> by_date_;
};

struct ChainTable {
    // symbol -> asof date -> snapshot.
    std::map<std::string, std::map<Date, ivindex::OptionChainSnapshot>> chains;
    // Mean daily dollar option volume per symbol; present only when the CSV
    // carries a volume column.
    std::map<std::string, double> liquidity;
    bool has_volume = false;
};

ChainTable load_chains(const std::string& path, const RateProvider& rates);

// Pre-scored tweets `symbol,ts,score`.
std::vector<sentiment::TweetRecord> load_scored_tweets(const std::string& path);

// Raw tweets, one JSON object per line: {"symbol":..,"ts":..,"text":..}.
std::vector<sentiment::TweetRecord> load_tweets_jsonl(const std::string& path);

// Lexicon TSV `token<TAB>valence`; extra columns are ignored.
std::unordered_map<std::string, double> load_lexicon(const std::string& path);

// `symbol,liquidity`.
std::map<std::string, double> load_liquidity(const std::string& path);

// Regime paths `symbol,date,regime,in_sample` (regime by name or ordinal).
std::map<std::string, hmm::RegimePath> load_regime_paths(
    const std::string& path);

// Writers.
void write_series(const std::string& path,
                  const std::map<std::string, features::DatedSeries>& series,
                  const std::string& value_column);
void write_feature_matrix(const std::string& path,
                          const features::FeatureMatrix& matrix);
void write_regime_paths(const std::string& path,
                        const std::map<std::string, hmm::RegimePath>& paths,
                        int n_states);

}  // namespace ivnow::io
