#pragma once

#include <cstddef>
#include <vector>

namespace ivnow::eval {

// Half-open index spans; train is always [0, train_end) (expanding window).
struct Fold {
    std::size_t train_begin = 0;
    std::size_t train_end = 0;
    std::size_t test_begin = 0;
    std::size_t test_end = 0;

    std::size_t train_size() const { return train_end - train_begin; }
    std::size_t test_size() const { return test_end - test_begin; }
};

struct WalkForwardPlan {
    std::size_t n_days = 0;
    std::size_t initial_train = 504;
    std::size_t test_window = 40;
    std::size_t step = 40;
    std::vector<Fold> folds;

    // Asserts max(train) < min(test) and in-range spans for every fold.
    void validate() const;
};

// Fold i trains on [0, initial_train + i*step) and tests on the next
// min(test_window, remaining) days; a final partial fold is included when at
// least one test day remains. Throws NotEnoughData when n_days <=
// initial_train.
WalkForwardPlan make_plan(std::size_t n_days, std::size_t initial_train = 504,
                          std::size_t test_window = 40, std::size_t step = 40);

}  // namespace ivnow::eval
