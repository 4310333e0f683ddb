#include "ivnow/features/features.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ivnow/core/error.hpp"

namespace ivnow::features {

std::vector<double> ema(std::span<const double> series, int span) {
    if (series.empty())
        raise(Err::series_too_short, "ema needs a non-empty series");
    const double alpha = 2.0 / (span + 1.0);
    std::vector<double> out(series.size());
    out[0] = series[0];
    for (size_t i = 1; i < series.size(); ++i)
        out[i] = out[i - 1] + alpha * (series[i] - out[i - 1]);
    return out;
}

std::vector<double> first_diff(std::span<const double> series) {
    if (series.size() < 2)
        raise(Err::series_too_short, "first_diff needs at least 2 observations");
    std::vector<double> out(series.size() - 1);
    for (size_t i = 0; i + 1 < series.size(); ++i)
        out[i] = series[i + 1] - series[i];
    return out;
}

std::vector<int> label_targets(std::span<const double> iv) {
    if (iv.size() < 2)
        raise(Err::series_too_short, "label_targets needs at least 2 observations");
    std::vector<int> out(iv.size() - 1);
    for (size_t i = 0; i + 1 < iv.size(); ++i)
        out[i] = (iv[i + 1] - iv[i]) > 0.0 ? 1 : 0;
    return out;
}

const char* feature_name(Feature f) {
    switch (f) {
        case Feature::price_diff: return "price_diff";
        case Feature::price_ema_dev: return "price_ema_dev";
        case Feature::iv_level: return "iv_level";
        case Feature::iv_diff: return "iv_diff";
        case Feature::iv_ema_dev: return "iv_ema_dev";
        case Feature::tweet_count: return "tweet_count";
        case Feature::count_diff: return "count_diff";
        case Feature::count_ema_dev: return "count_ema_dev";
        case Feature::polarity: return "polarity";
        case Feature::polarity_diff: return "polarity_diff";
        case Feature::polarity_ema_dev: return "polarity_ema_dev";
    }
    return "?";
}

std::vector<Feature> ScenarioId::columns() const {
    std::vector<Feature> cols;
    if (uses_price()) {
        cols.push_back(Feature::price_diff);
        cols.push_back(Feature::price_ema_dev);
    }
    if (uses_iv()) {
        cols.push_back(Feature::iv_level);
        cols.push_back(Feature::iv_diff);
        cols.push_back(Feature::iv_ema_dev);
    }
    if (uses_tweets()) {
        cols.push_back(Feature::tweet_count);
        cols.push_back(Feature::count_diff);
        cols.push_back(Feature::count_ema_dev);
        cols.push_back(Feature::polarity);
        cols.push_back(Feature::polarity_diff);
        cols.push_back(Feature::polarity_ema_dev);
    }
    return cols;
}

ScenarioId scenario(int id) {
    if (id < 1 || id > 7)
        raise(Err::config_error,
              "scenario id must be in 1..7, got " + std::to_string(id));
    return ScenarioId{id};
}

namespace {

// value - EMA10(value), defined from the series start.
std::vector<double> ema_deviation(std::span<const double> series) {
    auto smoothed = ema(series, 10);
    std::vector<double> out(series.size());
    for (size_t i = 0; i < series.size(); ++i)
        out[i] = series[i] - smoothed[i];
    return out;
}

}  // namespace

FeatureMatrix build_matrix(const DatedSeries& price, const DatedSeries& iv,
                           const SocialSeries& social, ScenarioId scn) {
    const auto& calendar = price.dates;
    if (calendar.size() < 3)
        raise(Err::series_too_short,
              "need at least 3 trading days to emit one labeled row");
    if (!std::is_sorted(calendar.begin(), calendar.end()) ||
        std::adjacent_find(calendar.begin(), calendar.end()) != calendar.end())
        raise(Err::calendar_mismatch, "price dates must be strictly ascending");

    // IV must cover the price calendar exactly; extra IV dates (non-trading
    // days) are discarded.
    std::unordered_map<std::int32_t, double> iv_by_date;
    for (size_t i = 0; i < iv.dates.size(); ++i)
        iv_by_date[iv.dates[i].serial()] = iv.values[i];
    std::vector<double> iv_aligned(calendar.size());
    for (size_t i = 0; i < calendar.size(); ++i) {
        auto it = iv_by_date.find(calendar[i].serial());
        if (it == iv_by_date.end())
            raise(Err::calendar_mismatch,
                  "missing IV observation for trading day " +
                      calendar[i].to_string());
        iv_aligned[i] = it->second;
    }

    // Social series aligned by date; missing days are quiet days.
    std::unordered_map<std::int32_t, std::pair<double, double>> social_by_date;
    for (size_t i = 0; i < social.dates.size(); ++i)
        social_by_date[social.dates[i].serial()] = {social.counts[i],
                                                    social.polarity[i]};
    std::vector<double> counts(calendar.size(), 0.0);
    std::vector<double> polarity(calendar.size(), 0.0);
    for (size_t i = 0; i < calendar.size(); ++i) {
        auto it = social_by_date.find(calendar[i].serial());
        if (it != social_by_date.end()) {
            counts[i] = it->second.first;
            polarity[i] = it->second.second;
        }
    }

    const size_t n = calendar.size();
    auto price_d = first_diff(price.values);
    auto price_e = ema_deviation(price.values);
    auto iv_d = first_diff(iv_aligned);
    auto iv_e = ema_deviation(iv_aligned);
    auto cnt_d = first_diff(counts);
    auto cnt_e = ema_deviation(counts);
    auto pol_d = first_diff(polarity);
    auto pol_e = ema_deviation(polarity);
    auto labels = label_targets(iv_aligned);

    auto cols = scn.columns();
    FeatureMatrix m;
    m.columns.reserve(cols.size());
    for (Feature f : cols)
        m.columns.emplace_back(feature_name(f));

    // Row t uses end-of-day-t information only; the diff at t is
    // value_t - value_{t-1}. Rows run from t = 1 (first day with a diff) to
    // t = n - 2 (last day with a next-day label).
    for (size_t t = 1; t + 1 < n; ++t) {
        m.dates.push_back(calendar[t]);
        for (Feature f : cols) {
            double v = 0.0;
            switch (f) {
                case Feature::price_diff: v = price_d[t - 1]; break;
                case Feature::price_ema_dev: v = price_e[t]; break;
                case Feature::iv_level: v = iv_aligned[t]; break;
                case Feature::iv_diff: v = iv_d[t - 1]; break;
                case Feature::iv_ema_dev: v = iv_e[t]; break;
                case Feature::tweet_count: v = counts[t]; break;
                case Feature::count_diff: v = cnt_d[t - 1]; break;
                case Feature::count_ema_dev: v = cnt_e[t]; break;
                case Feature::polarity: v = polarity[t]; break;
                case Feature::polarity_diff: v = pol_d[t - 1]; break;
                case Feature::polarity_ema_dev: v = pol_e[t]; break;
            }
            if (!std::isfinite(v))
                raise(Err::numeric_failure,
                      std::string("non-finite feature ") + feature_name(f) +
                          " on " + calendar[t].to_string());
            m.values.push_back(v);
        }
        m.targets.push_back(labels[t]);
    }
    return m;
}

}  // namespace ivnow::features
