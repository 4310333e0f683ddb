#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ivnow/core/date.hpp"

namespace ivnow::sentiment {

struct TweetRecord {
    std::string symbol;
    Timestamp ts;
    std::optional<std::string> text;
    std::optional<double> precomputed_score;  // in [-1, 1]
};

struct DailySocialStats {
    std::string symbol;
    Date date;
    long tweet_count = 0;
    double mean_polarity = 0.0;  // 0 when tweet_count == 0
};

// Pluggable per-tweet polarity scorer. Records carrying a precomputed score
// bypass it entirely.
class PolarityScorer {
public:
    virtual ~PolarityScorer() = default;
    virtual double score(std::string_view text) const = 0;
};

// Lexicon- and rule-based scorer: sums matched token valences, flips the sign
// of a token whose three preceding tokens contain a negator, and squashes the
// total with v / sqrt(v^2 + 15).
class LexiconScorer : public PolarityScorer {
public:
    explicit LexiconScorer(std::unordered_map<std::string, double> lexicon);

    double score(std::string_view text) const override;

    static const std::vector<std::string>& default_negators();
    void set_negators(std::vector<std::string> negators);

    size_t lexicon_size() const { return lexicon_.size(); }

private:
    std::unordered_map<std::string, double> lexicon_;
    std::set<std::string, std::less<>> negators_;
};

std::vector<std::string> tokenize(std::string_view text);

// Trading calendar for end-of-day bucketing. Tweets stamped at or before the
// close of a trading day belong to that day; later ones roll forward to the
// next trading day. Tweets past the last close fall outside the span.
class TradingCalendar {
public:
    explicit TradingCalendar(std::vector<Date> trading_days,
                             int close_seconds = 16 * 3600);

    const std::vector<Date>& days() const { return days_; }
    int close_seconds() const { return close_seconds_; }
    bool contains(Date d) const;

    // Trading date whose session the instant precedes; nullopt if it lands
    // after the final close or the calendar is empty.
    std::optional<Date> bucket(const Timestamp& ts) const;

private:
    std::vector<Date> days_;
    int close_seconds_;
};

// Per-symbol daily aggregation over the full calendar; quiet days emit
// count 0 / polarity 0. Records whose symbol is not in `universe` raise
// UnknownSymbol (empty universe accepts everything). Records bucketing
// outside the calendar span are dropped.
std::vector<DailySocialStats> aggregate_daily(
    const std::vector<TweetRecord>& records, const std::string& symbol,
    const TradingCalendar& calendar, const PolarityScorer* scorer,
    const std::set<std::string>& universe = {});

}  // namespace ivnow::sentiment
