#pragma once

#include <span>
#include <string>
#include <vector>

#include "ivnow/core/date.hpp"

namespace ivnow::features {

// Exponential moving average, alpha = 2/(span+1), seeded with the first
// observation; output has the same length as the input.
std::vector<double> ema(std::span<const double> series, int span = 10);

// out[t] = in[t+1] - in[t], aligned to the later date. Throws SeriesTooShort
// for length < 2.
std::vector<double> first_diff(std::span<const double> series);

// y_t = 1 iff iv_{t+1} - iv_t > 0, else 0 (ties count as 0). One label per
// day except the last.
std::vector<int> label_targets(std::span<const double> iv);

// Canonical feature order; scenarios select a stable subset of these.
enum class Feature {
    price_diff,
    price_ema_dev,
    iv_level,
    iv_diff,
    iv_ema_dev,
    tweet_count,
    count_diff,
    count_ema_dev,
    polarity,
    polarity_diff,
    polarity_ema_dev,
};

const char* feature_name(Feature f);

struct ScenarioId {
    int id = 7;  // 1..7

    bool uses_price() const { return id == 1 || id == 2 || id == 6 || id == 7; }
    bool uses_iv() const { return id == 3 || id == 4 || id == 6 || id == 7; }
    bool uses_tweets() const { return id == 2 || id == 4 || id == 5 || id == 7; }

    std::vector<Feature> columns() const;
    int feature_count() const { return static_cast<int>(columns().size()); }
};

ScenarioId scenario(int id);  // validates 1..7

struct DatedSeries {
    std::vector<Date> dates;
    std::vector<double> values;
};

struct SocialSeries {
    std::vector<Date> dates;
    std::vector<double> counts;
    std::vector<double> polarity;
};

struct FeatureMatrix {
    std::vector<std::string> columns;
    std::vector<Date> dates;     // one per row, strictly ascending
    std::vector<double> values;  // row-major
    std::vector<int> targets;    // 0/1, one per row

    size_t rows() const { return dates.size(); }
    size_t cols() const { return columns.size(); }
    std::span<const double> row(size_t i) const {
        return {values.data() + i * cols(), cols()};
    }
};

// Builds the labeled per-day matrix for one scenario. The price series
// defines the trading calendar; the IV series must cover it exactly
// (CalendarMismatch otherwise) and social series are aligned by date with
// quiet days treated as count 0 / polarity 0. The first day (undefined
// diffs) and the last day (no next-day label) are dropped.
FeatureMatrix build_matrix(const DatedSeries& price, const DatedSeries& iv,
                           const SocialSeries& social, ScenarioId scenario);

}  // namespace ivnow::features
