#include "ivnow/eval/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "ivnow/core/error.hpp"

namespace ivnow::eval {

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return values[a] < values[b];
    });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]])
            ++j;
        // 1-based ranks i+1 .. j+1 share the mean rank.
        double mean_rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            ranks[order[k]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

std::optional<double> auc(std::span<const double> scores,
                          std::span<const int> labels) {
    if (scores.size() != labels.size())
        raise(Err::schema_mismatch, "scores/labels length mismatch");
    std::size_t positives = 0;
    for (int y : labels)
        positives += y > 0 ? 1 : 0;
    const std::size_t negatives = labels.size() - positives;
    if (positives == 0 || negatives == 0)
        return std::nullopt;

    auto ranks = average_ranks(scores);
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] > 0)
            rank_sum += ranks[i];
    double p = static_cast<double>(positives);
    double u = rank_sum - p * (p + 1.0) / 2.0;
    return u / (p * static_cast<double>(negatives));
}

std::vector<double> stratified_dummy(std::span<const int> train_labels,
                                     std::size_t test_size, Rng& rng) {
    if (train_labels.empty())
        raise(Err::empty_data, "stratified dummy needs training labels");
    std::size_t positives = 0;
    for (int y : train_labels)
        positives += y > 0 ? 1 : 0;
    double rate =
        static_cast<double>(positives) / static_cast<double>(train_labels.size());
    std::vector<double> scores(test_size);
    for (auto& s : scores)
        s = rng.bernoulli(rate) ? 1.0 : 0.0;
    return scores;
}

namespace {

double pearson_r(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx;
        double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0)
        raise(Err::numeric_failure, "correlation of a constant series");
    return sxy / std::sqrt(sxx * syy);
}

double two_sided_p(double r, std::size_t n) {
    const double df = static_cast<double>(n) - 2.0;
    double denom = 1.0 - r * r;
    if (denom <= 0.0)
        return 0.0;
    double t = std::abs(r) * std::sqrt(df / denom);
    boost::math::students_t_distribution<double> dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, t));
}

}  // namespace

CorrelationStats correlation(std::span<const double> x,
                             std::span<const double> y) {
    if (x.size() != y.size())
        raise(Err::schema_mismatch, "correlation input length mismatch");
    if (x.size() < 3)
        raise(Err::insufficient_stocks,
              "need at least 3 points, got " + std::to_string(x.size()));
    CorrelationStats stats;
    stats.n = x.size();
    stats.pearson = pearson_r(x, y);
    stats.pearson_p = two_sided_p(stats.pearson, stats.n);
    auto rx = average_ranks(x);
    auto ry = average_ranks(y);
    stats.spearman = pearson_r(rx, ry);
    stats.spearman_p = two_sided_p(stats.spearman, stats.n);
    return stats;
}

std::optional<double> median(std::vector<double> values) {
    if (values.empty())
        return std::nullopt;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1)
        return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace ivnow::eval
