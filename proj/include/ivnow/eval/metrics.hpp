#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ivnow/core/rng.hpp"

namespace ivnow::eval {

// Mann-Whitney AUC: (concordant pairs + 0.5 * tied pairs) / (P * N).
// nullopt when the labels are single-class (undefined, excluded from
// aggregation upstream).
std::optional<double> auc(std::span<const double> scores,
                          std::span<const int> labels);

// Label-independent baseline: each test score is drawn 1 with probability
// equal to the training positive rate, else 0. Test labels are deliberately
// not a parameter.
std::vector<double> stratified_dummy(std::span<const int> train_labels,
                                     std::size_t test_size, Rng& rng);

struct CorrelationStats {
    double pearson = 0.0;
    double pearson_p = 1.0;
    double spearman = 0.0;
    double spearman_p = 1.0;
    std::size_t n = 0;
};

// Pearson and Spearman correlations with two-sided p-values from the
// t-approximation. Throws InsufficientStocks for n < 3 and NumericFailure
// when either series is constant.
CorrelationStats correlation(std::span<const double> x,
                             std::span<const double> y);

// Average ranks (1-based); ties share the mean rank.
std::vector<double> average_ranks(std::span<const double> values);

std::optional<double> median(std::vector<double> values);

}  // namespace ivnow::eval
