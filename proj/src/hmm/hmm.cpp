#include "ivnow/hmm/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ivnow/core/error.hpp"
#include "ivnow/kernels/kernels.hpp"

namespace ivnow::hmm {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogTwoPi = 1.8378770664093453;  // log(2*pi)

double logsumexp(std::span<const double> v) {
    double m = kNegInf;
    for (double x : v)
        m = std::max(m, x);
    if (m == kNegInf)
        return kNegInf;
    double sum = 0.0;
    for (double x : v)
        sum += std::exp(x - m);
    return m + std::log(sum);
}

}  // namespace

void GaussianHmm::validate() const {
    const int k = n_states;
    if (k < 1 || pi.size() != static_cast<size_t>(k) ||
        means.size() != static_cast<size_t>(k) ||
        variances.size() != static_cast<size_t>(k) ||
        transition.size() != static_cast<size_t>(k) * k)
        raise(Err::degenerate_model, "inconsistent parameter shapes");
    for (double v : variances)
        if (!(v > 0.0))
            raise(Err::degenerate_model, "non-positive emission variance");
    double pi_sum = std::accumulate(pi.begin(), pi.end(), 0.0);
    if (std::abs(pi_sum - 1.0) > 1e-6)
        raise(Err::degenerate_model, "initial distribution does not sum to 1");
    for (int i = 0; i < k; ++i) {
        double row = 0.0;
        for (int j = 0; j < k; ++j)
            row += a(i, j);
        if (std::abs(row - 1.0) > 1e-6)
            raise(Err::degenerate_model, "transition row does not sum to 1");
    }
}

std::vector<double> emission_loglik(const GaussianHmm& model,
                                    std::span<const double> obs) {
    const int k = model.n_states;
    const size_t n = obs.size();
    std::vector<double> out(static_cast<size_t>(k) * n);
    for (int s = 0; s < k; ++s) {
        double var = model.variances[s];
        double log_norm = -0.5 * (kLogTwoPi + std::log(var));
        double inv_two_var = 1.0 / (2.0 * var);
        kernels::active().gaussian_loglik(obs.data(), n, model.means[s],
                                          inv_two_var, log_norm,
                                          out.data() + static_cast<size_t>(s) * n);
    }
    return out;
}

double log_likelihood(const GaussianHmm& model, std::span<const double> obs) {
    if (obs.empty())
        raise(Err::empty_data, "log_likelihood needs observations");
    model.validate();
    const int k = model.n_states;
    const size_t n = obs.size();
    auto logb = emission_loglik(model, obs);

    std::vector<double> alpha(k), next(k), work(k);
    for (int s = 0; s < k; ++s)
        alpha[s] = (model.pi[s] > 0.0 ? std::log(model.pi[s]) : kNegInf) +
                   logb[static_cast<size_t>(s) * n];
    for (size_t t = 1; t < n; ++t) {
        for (int j = 0; j < k; ++j) {
            for (int i = 0; i < k; ++i) {
                double aij = model.a(i, j);
                work[i] = alpha[i] + (aij > 0.0 ? std::log(aij) : kNegInf);
            }
            next[j] = logsumexp(work) + logb[static_cast<size_t>(j) * n + t];
        }
        alpha.swap(next);
    }
    return logsumexp(alpha);
}

std::vector<int> viterbi(const GaussianHmm& model, std::span<const double> obs) {
    if (obs.empty())
        raise(Err::empty_data, "viterbi needs observations");
    model.validate();
    const int k = model.n_states;
    const size_t n = obs.size();
    auto logb = emission_loglik(model, obs);

    std::vector<double> delta(k), next(k);
    std::vector<int> backptr(n * k, 0);
    for (int s = 0; s < k; ++s)
        delta[s] = (model.pi[s] > 0.0 ? std::log(model.pi[s]) : kNegInf) +
                   logb[static_cast<size_t>(s) * n];
    for (size_t t = 1; t < n; ++t) {
        for (int j = 0; j < k; ++j) {
            int arg = 0;
            double best = kNegInf;
            for (int i = 0; i < k; ++i) {
                double aij = model.a(i, j);
                double cand = delta[i] + (aij > 0.0 ? std::log(aij) : kNegInf);
                if (cand > best) {  // strict: ties keep the lower index
                    best = cand;
                    arg = i;
                }
            }
            next[j] = best + logb[static_cast<size_t>(j) * n + t];
            backptr[t * k + j] = arg;
        }
        delta.swap(next);
    }
    int last = 0;
    double best = kNegInf;
    for (int s = 0; s < k; ++s) {
        if (delta[s] > best) {
            best = delta[s];
            last = s;
        }
    }
    std::vector<int> path(n);
    path[n - 1] = last;
    for (size_t t = n - 1; t > 0; --t)
        path[t - 1] = backptr[t * k + path[t]];
    return path;
}

namespace {

GaussianHmm quantile_init(std::span<const double> obs, int k) {
    std::vector<double> sorted(obs.begin(), obs.end());
    std::sort(sorted.begin(), sorted.end());
    const size_t n = sorted.size();

    GaussianHmm model;
    model.n_states = k;
    model.pi.assign(k, 1.0 / k);
    model.transition.assign(static_cast<size_t>(k) * k,
                            k > 1 ? 0.1 / (k - 1) : 0.0);
    for (int i = 0; i < k; ++i)
        model.transition[i * k + i] = k > 1 ? 0.9 : 1.0;

    double mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) /
                  static_cast<double>(n);
    double var = 0.0;
    for (double v : sorted)
        var += (v - mean) * (v - mean);
    var = std::max(var / static_cast<double>(n), kVarianceFloor);

    model.means.resize(k);
    model.variances.assign(k, var);
    for (int i = 0; i < k; ++i) {
        double q = (i + 0.5) / k;
        double pos = q * static_cast<double>(n - 1);
        size_t lo = static_cast<size_t>(pos);
        size_t hi = std::min(lo + 1, n - 1);
        double frac = pos - static_cast<double>(lo);
        model.means[i] = sorted[lo] + frac * (sorted[hi] - sorted[lo]);
    }
    return model;
}

}  // namespace

FitResult fit_baum_welch(std::span<const double> obs,
                         const FitOptions& options) {
    const int k = options.n_states;
    const size_t n = obs.size();
    if (n <= static_cast<size_t>(k))
        raise(Err::too_few_observations,
              "need more observations than states (" + std::to_string(n) +
                  " <= " + std::to_string(k) + ")");

    FitResult result;
    result.model = quantile_init(obs, k);
    GaussianHmm& model = result.model;

    std::vector<double> log_alpha(n * k), log_beta(n * k);
    std::vector<double> gamma(n * k), work(k);
    std::vector<double> log_pi(k), log_a(static_cast<size_t>(k) * k);

    double prev_ll = kNegInf;
    for (int iter = 0; iter < options.n_iter; ++iter) {
        auto logb = emission_loglik(model, obs);
        for (int s = 0; s < k; ++s)
            log_pi[s] = model.pi[s] > 0.0 ? std::log(model.pi[s]) : kNegInf;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                log_a[i * k + j] =
                    model.a(i, j) > 0.0 ? std::log(model.a(i, j)) : kNegInf;

        // Forward.
        for (int s = 0; s < k; ++s)
            log_alpha[s] = log_pi[s] + logb[static_cast<size_t>(s) * n];
        for (size_t t = 1; t < n; ++t) {
            for (int j = 0; j < k; ++j) {
                for (int i = 0; i < k; ++i)
                    work[i] = log_alpha[(t - 1) * k + i] + log_a[i * k + j];
                log_alpha[t * k + j] =
                    logsumexp(work) + logb[static_cast<size_t>(j) * n + t];
            }
        }
        double ll = logsumexp({log_alpha.data() + (n - 1) * k,
                               static_cast<size_t>(k)});
        result.loglik_per_iter.push_back(ll);
        result.iterations = iter + 1;
        if (!std::isfinite(ll))
            raise(Err::degenerate_model,
                  "log-likelihood diverged during EM");
        if (iter > 0 && ll - prev_ll < options.tol) {
            result.converged = true;
            break;
        }
        prev_ll = ll;

        // Backward.
        for (int s = 0; s < k; ++s)
            log_beta[(n - 1) * k + s] = 0.0;
        for (size_t t = n - 1; t > 0; --t) {
            for (int i = 0; i < k; ++i) {
                for (int j = 0; j < k; ++j)
                    work[j] = log_a[i * k + j] +
                              logb[static_cast<size_t>(j) * n + t] +
                              log_beta[t * k + j];
                log_beta[(t - 1) * k + i] = logsumexp(work);
            }
        }

        // Posteriors.
        for (size_t t = 0; t < n; ++t)
            for (int s = 0; s < k; ++s)
                gamma[t * k + s] =
                    std::exp(log_alpha[t * k + s] + log_beta[t * k + s] - ll);

        // Expected transition counts.
        std::vector<double> xi_sum(static_cast<size_t>(k) * k, 0.0);
        for (size_t t = 0; t + 1 < n; ++t)
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    xi_sum[i * k + j] += std::exp(
                        log_alpha[t * k + i] + log_a[i * k + j] +
                        logb[static_cast<size_t>(j) * n + t + 1] +
                        log_beta[(t + 1) * k + j] - ll);

        // M-step.
        for (int s = 0; s < k; ++s)
            model.pi[s] = gamma[s];
        {
            double pi_sum = std::accumulate(model.pi.begin(), model.pi.end(), 0.0);
            for (double& p : model.pi)
                p /= pi_sum;
        }
        for (int i = 0; i < k; ++i) {
            double row = 0.0;
            for (int j = 0; j < k; ++j)
                row += xi_sum[i * k + j];
            for (int j = 0; j < k; ++j)
                model.transition[i * k + j] =
                    row > 0.0 ? xi_sum[i * k + j] / row : (i == j ? 1.0 : 0.0);
        }
        for (int s = 0; s < k; ++s) {
            double weight = 0.0, mean_acc = 0.0;
            for (size_t t = 0; t < n; ++t) {
                weight += gamma[t * k + s];
                mean_acc += gamma[t * k + s] * obs[t];
            }
            double mean = weight > 0.0 ? mean_acc / weight : model.means[s];
            double var_acc = 0.0;
            for (size_t t = 0; t < n; ++t) {
                double d = obs[t] - mean;
                var_acc += gamma[t * k + s] * d * d;
            }
            model.means[s] = mean;
            model.variances[s] =
                std::max(weight > 0.0 ? var_acc / weight : model.variances[s],
                         kVarianceFloor);
        }
    }
    return result;
}

GaussianHmm canonicalized(const GaussianHmm& model) {
    const int k = model.n_states;
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return model.means[a] < model.means[b];
    });
    GaussianHmm out;
    out.n_states = k;
    out.pi.resize(k);
    out.means.resize(k);
    out.variances.resize(k);
    out.transition.resize(static_cast<size_t>(k) * k);
    for (int rank = 0; rank < k; ++rank) {
        int src = order[rank];
        out.pi[rank] = model.pi[src];
        out.means[rank] = model.means[src];
        out.variances[rank] = model.variances[src];
        for (int j = 0; j < k; ++j)
            out.transition[rank * k + j] = model.a(src, order[j]);
    }
    return out;
}

std::string regime_name(int ordinal, int n_states) {
    if (n_states == 4) {
        switch (ordinal) {
            case 0: return "low";
            case 1: return "medium";
            case 2: return "high";
            case 3: return "very_high";
        }
    }
    return "state" + std::to_string(ordinal);
}

RegimePath assign_regimes(const GaussianHmm& model,
                          std::span<const Date> dates,
                          std::span<const double> iv, Date train_end) {
    if (dates.size() != iv.size())
        raise(Err::calendar_mismatch, "regime dates/values length mismatch");
    auto states = viterbi(model, iv);

    // Rank states by fitted mean; equal means keep state-index order.
    const int k = model.n_states;
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return model.means[a] < model.means[b];
    });
    std::vector<int> ordinal_of(k);
    for (int rank = 0; rank < k; ++rank)
        ordinal_of[order[rank]] = rank;

    RegimePath path;
    path.points.reserve(dates.size());
    for (size_t t = 0; t < dates.size(); ++t)
        path.points.push_back(
            {dates[t], ordinal_of[states[t]], dates[t] <= train_end});
    return path;
}

}  // namespace ivnow::hmm
