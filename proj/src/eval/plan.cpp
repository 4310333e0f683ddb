#include "ivnow/eval/plan.hpp"

#include <string>

#include "ivnow/core/error.hpp"

namespace ivnow::eval {

void WalkForwardPlan::validate() const {
    for (const auto& f : folds) {
        bool ok = f.train_begin == 0 && f.train_begin < f.train_end &&
                  f.train_end == f.test_begin && f.test_begin < f.test_end &&
                  f.test_end <= n_days;
        if (!ok)
            raise(Err::not_enough_data, "malformed walk-forward fold");
    }
}

WalkForwardPlan make_plan(std::size_t n_days, std::size_t initial_train,
                          std::size_t test_window, std::size_t step) {
    if (initial_train == 0 || test_window == 0 || step == 0)
        raise(Err::config_error,
              "walk-forward parameters must be positive");
    if (n_days <= initial_train)
        raise(Err::not_enough_data,
              "need more than " + std::to_string(initial_train) +
                  " days, got " + std::to_string(n_days));

    WalkForwardPlan plan;
    plan.n_days = n_days;
    plan.initial_train = initial_train;
    plan.test_window = test_window;
    plan.step = step;
    for (std::size_t train_end = initial_train; train_end < n_days;
         train_end += step) {
        Fold f;
        f.train_begin = 0;
        f.train_end = train_end;
        f.test_begin = train_end;
        f.test_end = std::min(train_end + test_window, n_days);
        plan.folds.push_back(f);
    }
    plan.validate();
    return plan;
}

}  // namespace ivnow::eval
