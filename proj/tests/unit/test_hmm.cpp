#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ivnow/core/error.hpp"
#include "ivnow/core/rng.hpp"
#include "ivnow/hmm/hmm.hpp"

using namespace ivnow;
using namespace ivnow::hmm;

namespace {

double log_gauss(double x, double mean, double var) {
    constexpr double kLogTwoPi = 1.8378770664093453;
    double d = x - mean;
    return -0.5 * (kLogTwoPi + std::log(var)) - d * d / (2.0 * var);
}

// Brute-force total likelihood: sum over all K^T state paths.
double brute_force_loglik(const GaussianHmm& m, const std::vector<double>& obs) {
    const int k = m.n_states;
    const size_t n = obs.size();
    std::vector<int> path(n, 0);
    double max_logp = -std::numeric_limits<double>::infinity();
    std::vector<double> logs;
    for (;;) {
        double logp = std::log(m.pi[path[0]]) +
                      log_gauss(obs[0], m.means[path[0]], m.variances[path[0]]);
        for (size_t t = 1; t < n; ++t)
            logp += std::log(m.a(path[t - 1], path[t])) +
                    log_gauss(obs[t], m.means[path[t]], m.variances[path[t]]);
        logs.push_back(logp);
        max_logp = std::max(max_logp, logp);
        size_t pos = 0;
        while (pos < n && ++path[pos] == k)
            path[pos++] = 0;
        if (pos == n)
            break;
    }
    double sum = 0.0;
    for (double l : logs)
        sum += std::exp(l - max_logp);
    return max_logp + std::log(sum);
}

// Brute-force best path log-probability (the value, not the path: exact ties
// between distinct paths are measure-zero under random parameters).
double brute_force_best_logp(const GaussianHmm& m,
                             const std::vector<double>& obs) {
    const int k = m.n_states;
    const size_t n = obs.size();
    std::vector<int> path(n, 0);
    double best = -std::numeric_limits<double>::infinity();
    for (;;) {
        double logp = std::log(m.pi[path[0]]) +
                      log_gauss(obs[0], m.means[path[0]], m.variances[path[0]]);
        for (size_t t = 1; t < n; ++t)
            logp += std::log(m.a(path[t - 1], path[t])) +
                    log_gauss(obs[t], m.means[path[t]], m.variances[path[t]]);
        best = std::max(best, logp);
        size_t pos = 0;
        while (pos < n && ++path[pos] == k)
            path[pos++] = 0;
        if (pos == n)
            break;
    }
    return best;
}

double path_logp(const GaussianHmm& m, const std::vector<double>& obs,
                 const std::vector<int>& path) {
    double logp = std::log(m.pi[path[0]]) +
                  log_gauss(obs[0], m.means[path[0]], m.variances[path[0]]);
    for (size_t t = 1; t < obs.size(); ++t)
        logp += std::log(m.a(path[t - 1], path[t])) +
                log_gauss(obs[t], m.means[path[t]], m.variances[path[t]]);
    return logp;
}

GaussianHmm random_model(Rng& rng, int k) {
    GaussianHmm m;
    m.n_states = k;
    m.pi.resize(k);
    m.transition.resize(k * k);
    m.means.resize(k);
    m.variances.resize(k);
    double pi_sum = 0.0;
    for (int i = 0; i < k; ++i) {
        m.pi[i] = 0.1 + rng.uniform01();
        pi_sum += m.pi[i];
    }
    for (auto& p : m.pi)
        p /= pi_sum;
    for (int i = 0; i < k; ++i) {
        double row = 0.0;
        for (int j = 0; j < k; ++j) {
            m.transition[i * k + j] = 0.1 + rng.uniform01();
            row += m.transition[i * k + j];
        }
        for (int j = 0; j < k; ++j)
            m.transition[i * k + j] /= row;
    }
    for (int i = 0; i < k; ++i) {
        m.means[i] = rng.uniform(10.0, 40.0);
        m.variances[i] = rng.uniform(0.5, 9.0);
    }
    return m;
}

GaussianHmm single_state_model(double mean, double var) {
    GaussianHmm m;
    m.n_states = 1;
    m.pi = {1.0};
    m.transition = {1.0};
    m.means = {mean};
    m.variances = {var};
    return m;
}

}  // namespace

TEST_CASE("single state log-likelihood is the sum of log densities") {
    auto m = single_state_model(20.0, 4.0);
    std::vector<double> obs = {18.0, 21.5, 20.0, 25.0};
    double expected = 0.0;
    for (double x : obs)
        expected += log_gauss(x, 20.0, 4.0);
    CHECK(log_likelihood(m, obs) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("identity transitions with concentrated pi follow one state") {
    GaussianHmm m;
    m.n_states = 2;
    m.pi = {0.0, 1.0};
    m.transition = {1.0, 0.0, 0.0, 1.0};
    m.means = {10.0, 30.0};
    m.variances = {2.0, 3.0};
    std::vector<double> obs = {28.0, 31.0, 29.5};
    double expected = 0.0;
    for (double x : obs)
        expected += log_gauss(x, 30.0, 3.0);
    CHECK(log_likelihood(m, obs) == doctest::Approx(expected).epsilon(1e-12));
    auto path = viterbi(m, obs);
    for (int s : path)
        CHECK(s == 1);
}

TEST_CASE("log-likelihood matches brute-force enumeration") {
    Rng rng(314);
    for (int trial = 0; trial < 100; ++trial) {
        int k = 2 + static_cast<int>(rng.below(2));      // 2 or 3 states
        size_t n = 1 + rng.below(8);                     // length <= 8
        auto m = random_model(rng, k);
        std::vector<double> obs(n);
        for (auto& x : obs)
            x = rng.uniform(5.0, 45.0);
        double fast = log_likelihood(m, obs);
        double brute = brute_force_loglik(m, obs);
        CHECK(fast == doctest::Approx(brute).epsilon(1e-8));
    }
}

TEST_CASE("viterbi attains the brute-force best path probability") {
    Rng rng(2718);
    for (int trial = 0; trial < 100; ++trial) {
        int k = 2 + static_cast<int>(rng.below(2));
        size_t n = 1 + rng.below(8);
        auto m = random_model(rng, k);
        std::vector<double> obs(n);
        for (auto& x : obs)
            x = rng.uniform(5.0, 45.0);
        auto path = viterbi(m, obs);
        double decoded = path_logp(m, obs, path);
        double best = brute_force_best_logp(m, obs);
        CHECK(decoded == doctest::Approx(best).epsilon(1e-8));
    }
}

TEST_CASE("viterbi ties break toward the lower state index") {
    // Two indistinguishable states: every path has equal probability.
    GaussianHmm m;
    m.n_states = 2;
    m.pi = {0.5, 0.5};
    m.transition = {0.5, 0.5, 0.5, 0.5};
    m.means = {20.0, 20.0};
    m.variances = {4.0, 4.0};
    std::vector<double> obs = {19.0, 21.0, 20.0};
    auto path = viterbi(m, obs);
    for (int s : path)
        CHECK(s == 0);
}

TEST_CASE("well-separated means decode by nearest mean") {
    GaussianHmm m;
    m.n_states = 2;
    m.pi = {0.5, 0.5};
    m.transition = {0.9, 0.1, 0.1, 0.9};
    m.means = {18.6, 35.3};
    m.variances = {1.0, 1.0};
    std::vector<double> obs = {18.0, 19.0, 35.0, 36.0, 18.5, 35.5};
    auto path = viterbi(m, obs);
    CHECK(path == std::vector<int>{0, 0, 1, 1, 0, 1});
}

TEST_CASE("degenerate variances are rejected") {
    auto m = single_state_model(20.0, 4.0);
    m.variances[0] = 0.0;
    std::vector<double> obs = {20.0};
    try {
        log_likelihood(m, obs);
        FAIL("expected DegenerateModel");
    } catch (const Error& e) {
        CHECK(e.code() == Err::degenerate_model);
    }
}

TEST_CASE("K=1 EM recovers sample moments") {
    Rng rng(11);
    std::vector<double> obs(400);
    for (auto& x : obs)
        x = 22.0 + 1.5 * rng.gauss();
    FitOptions opt;
    opt.n_states = 1;
    auto fit = fit_baum_welch(obs, opt);
    double mean = 0.0;
    for (double x : obs)
        mean += x;
    mean /= obs.size();
    double var = 0.0;
    for (double x : obs)
        var += (x - mean) * (x - mean);
    var /= obs.size();
    CHECK(fit.model.means[0] == doctest::Approx(mean).epsilon(1e-6));
    CHECK(fit.model.variances[0] == doctest::Approx(var).epsilon(1e-6));
}

TEST_CASE("EM log-likelihood is non-decreasing across 50 random fits") {
    Rng rng(555);
    for (int trial = 0; trial < 50; ++trial) {
        int k = 2 + static_cast<int>(rng.below(3));
        std::vector<double> obs(60 + rng.below(60));
        for (auto& x : obs)
            x = rng.uniform(10.0, 40.0);
        FitOptions opt;
        opt.n_states = k;
        opt.n_iter = 30;
        opt.tol = 0.0;  // run all iterations
        auto fit = fit_baum_welch(obs, opt);
        for (size_t i = 1; i < fit.loglik_per_iter.size(); ++i)
            CHECK(fit.loglik_per_iter[i] >=
                  fit.loglik_per_iter[i - 1] - 1e-8);
    }
}

TEST_CASE("EM updates keep rows stochastic and posteriors normalized") {
    Rng rng(77);
    std::vector<double> obs(300);
    for (auto& x : obs)
        x = (rng.bernoulli(0.5) ? 20.0 : 30.0) + rng.gauss();
    FitOptions opt;
    opt.n_states = 3;
    opt.n_iter = 25;
    auto fit = fit_baum_welch(obs, opt);
    const auto& m = fit.model;
    double pi_sum = 0.0;
    for (double p : m.pi)
        pi_sum += p;
    CHECK(pi_sum == doctest::Approx(1.0).epsilon(1e-9));
    for (int i = 0; i < m.n_states; ++i) {
        double row = 0.0;
        for (int j = 0; j < m.n_states; ++j)
            row += m.a(i, j);
        CHECK(row == doctest::Approx(1.0).epsilon(1e-9));
    }
    for (double v : m.variances)
        CHECK(v >= kVarianceFloor);
}

TEST_CASE("forward-backward posteriors sum to one at every step") {
    // Checked through the emission/likelihood machinery: with the fitted
    // model, gamma normalization is what makes pi sum to 1 after one EM pass;
    // verify directly on a tiny hand-rolled forward-backward.
    GaussianHmm m;
    m.n_states = 2;
    m.pi = {0.6, 0.4};
    m.transition = {0.7, 0.3, 0.2, 0.8};
    m.means = {15.0, 30.0};
    m.variances = {4.0, 9.0};
    std::vector<double> obs = {14.0, 16.0, 29.0, 31.0, 15.5};
    // gamma_t(k) proportional to alpha_t(k) beta_t(k); reproduce via the
    // brute-force path sum restricted to state k at time t.
    double total = brute_force_loglik(m, obs);
    for (size_t t = 0; t < obs.size(); ++t) {
        double gsum = 0.0;
        for (int s = 0; s < 2; ++s) {
            // P(Z_t = s | X) by enumeration.
            std::vector<int> path(obs.size(), 0);
            double acc = -std::numeric_limits<double>::infinity();
            std::vector<double> logs;
            for (;;) {
                if (path[t] == s)
                    logs.push_back(path_logp(m, obs, path));
                size_t pos = 0;
                while (pos < obs.size() && ++path[pos] == 2)
                    path[pos++] = 0;
                if (pos == obs.size())
                    break;
            }
            double mx = -std::numeric_limits<double>::infinity();
            for (double l : logs)
                mx = std::max(mx, l);
            double sum = 0.0;
            for (double l : logs)
                sum += std::exp(l - mx);
            acc = mx + std::log(sum);
            gsum += std::exp(acc - total);
        }
        CHECK(gsum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("too few observations raises") {
    std::vector<double> obs = {20.0, 21.0, 22.0};
    FitOptions opt;
    opt.n_states = 4;
    try {
        fit_baum_welch(obs, opt);
        FAIL("expected TooFewObservations");
    } catch (const Error& e) {
        CHECK(e.code() == Err::too_few_observations);
    }
}

TEST_CASE("regime ordinals are invariant under state permutation") {
    Rng rng(21);
    GaussianHmm m = random_model(rng, 4);
    m.means = {26.7, 18.6, 35.3, 22.3};  // deliberately unsorted
    std::vector<Date> dates;
    std::vector<double> obs;
    for (int i = 0; i < 40; ++i) {
        dates.push_back(Date(15706 + i));
        obs.push_back(rng.uniform(15.0, 40.0));
    }
    Date train_end = dates[29];
    auto base = assign_regimes(m, dates, obs, train_end);

    // Permute internal state indices.
    std::vector<int> perm = {2, 0, 3, 1};
    GaussianHmm p;
    p.n_states = 4;
    p.pi.resize(4);
    p.means.resize(4);
    p.variances.resize(4);
    p.transition.resize(16);
    for (int i = 0; i < 4; ++i) {
        p.pi[perm[i]] = m.pi[i];
        p.means[perm[i]] = m.means[i];
        p.variances[perm[i]] = m.variances[i];
        for (int j = 0; j < 4; ++j)
            p.transition[perm[i] * 4 + perm[j]] = m.a(i, j);
    }
    auto permuted = assign_regimes(p, dates, obs, train_end);
    REQUIRE(base.points.size() == permuted.points.size());
    for (size_t i = 0; i < base.points.size(); ++i) {
        CHECK(base.points[i].ordinal == permuted.points[i].ordinal);
        CHECK(base.points[i].in_sample == permuted.points[i].in_sample);
    }
    CHECK(base.points[29].in_sample);
    CHECK(!base.points[30].in_sample);
}

TEST_CASE("series inside one regime's high-density region decodes constant") {
    GaussianHmm m;
    m.n_states = 4;
    m.pi = {0.25, 0.25, 0.25, 0.25};
    m.transition.assign(16, 0.1 / 3);
    for (int i = 0; i < 4; ++i)
        m.transition[i * 4 + i] = 0.9;
    m.means = {18.6, 22.3, 26.7, 35.3};
    m.variances = {1.0, 1.0, 1.0, 1.0};
    std::vector<Date> dates;
    std::vector<double> obs;
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        dates.push_back(Date(15706 + i));
        obs.push_back(22.3 + 0.3 * rng.gauss());
    }
    auto path = assign_regimes(m, dates, obs, dates.back());
    for (const auto& p : path.points)
        CHECK(p.ordinal == 1);  // second-lowest mean
}

TEST_CASE("regime recovery on synthetic regime-switching data") {
    // Ground-truth generator: sticky 4-state chain with the reference means.
    Rng rng(42);
    const std::vector<double> means = {18.6, 22.3, 26.7, 35.3};
    const std::vector<double> sigmas = {1.0, 1.2, 1.4, 1.8};
    std::vector<double> obs;
    std::vector<int> truth;
    int state = 0;
    for (int t = 0; t < 2000; ++t) {
        truth.push_back(state);
        obs.push_back(means[state] + sigmas[state] * rng.gauss());
        if (!rng.bernoulli(0.98))
            state = (state + 1 + static_cast<int>(rng.below(3))) % 4;
    }
    FitOptions opt;
    opt.n_states = 4;
    opt.n_iter = 100;
    auto fit = fit_baum_welch(obs, opt);
    auto fitted_means = fit.model.means;
    std::sort(fitted_means.begin(), fitted_means.end());
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(fitted_means[i] - means[i]) / means[i] < 0.05);

    std::vector<Date> dates;
    for (int i = 0; i < 2000; ++i)
        dates.push_back(Date(15706 + i));
    auto path = assign_regimes(fit.model, dates, obs, dates.back());
    int correct = 0;
    for (size_t i = 0; i < truth.size(); ++i)
        correct += path.points[i].ordinal == truth[i] ? 1 : 0;
    CHECK(static_cast<double>(correct) / truth.size() >= 0.95);
}

TEST_CASE("canonicalized relabels states by ascending mean, same behaviour") {
    Rng rng(33);
    auto m = random_model(rng, 4);
    m.means = {30.0, 12.0, 24.0, 18.0};
    auto canon = canonicalized(m);
    CHECK(std::is_sorted(canon.means.begin(), canon.means.end()));
    std::vector<double> obs = {11.0, 19.0, 25.0, 31.0, 12.5};
    CHECK(log_likelihood(canon, obs) ==
          doctest::Approx(log_likelihood(m, obs)).epsilon(1e-12));
    std::vector<Date> dates;
    for (int i = 0; i < 5; ++i)
        dates.push_back(Date(15706 + i));
    auto a = assign_regimes(m, dates, obs, dates.back());
    auto b = assign_regimes(canon, dates, obs, dates.back());
    for (size_t i = 0; i < a.points.size(); ++i)
        CHECK(a.points[i].ordinal == b.points[i].ordinal);
}

TEST_CASE("hmm json artifact round-trips") {
    Rng rng(9);
    auto m = random_model(rng, 4);
    FitOptions opt;
    auto text = to_json(m, opt, Date::parse("2007-01-03"),
                        Date::parse("2012-12-31"));
    auto restored = from_json(text);
    CHECK(restored.n_states == m.n_states);
    for (int i = 0; i < 4; ++i) {
        CHECK(restored.means[i] == m.means[i]);
        CHECK(restored.variances[i] == m.variances[i]);
        CHECK(restored.pi[i] == m.pi[i]);
        for (int j = 0; j < 4; ++j)
            CHECK(restored.a(i, j) == m.a(i, j));
    }
}
