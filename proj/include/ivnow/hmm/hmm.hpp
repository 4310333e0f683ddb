#pragma once

#include <span>
#include <string>
#include <vector>

#include "ivnow/core/date.hpp"

namespace ivnow::hmm {

// Gaussian-emission hidden Markov model over a scalar observable (here the
// daily IV level, in percentage points).
struct GaussianHmm {
    int n_states = 4;
    std::vector<double> pi;         // initial distribution, sums to 1
    std::vector<double> transition; // row-major K x K, rows sum to 1
    std::vector<double> means;
    std::vector<double> variances;  // floored at kVarianceFloor

    double a(int i, int j) const { return transition[i * n_states + j]; }
    void validate() const;  // throws DegenerateModel
};

constexpr double kVarianceFloor = 1e-6;

// Log-space emission matrix: out[k * n_obs + t] = log N(obs[t]; mean_k, var_k).
std::vector<double> emission_loglik(const GaussianHmm& model,
                                    std::span<const double> obs);

// Forward pass in log space; the total observation log-likelihood.
double log_likelihood(const GaussianHmm& model, std::span<const double> obs);

// Most probable state path (log-space Viterbi); ties prefer the lower state
// index at every step.
std::vector<int> viterbi(const GaussianHmm& model, std::span<const double> obs);

struct FitResult {
    GaussianHmm model;
    std::vector<double> loglik_per_iter;  // non-decreasing up to tolerance
    int iterations = 0;
    bool converged = false;
};

struct FitOptions {
    int n_states = 4;
    int n_iter = 100;
    double tol = 1e-6;
    std::uint64_t seed = 42;  // recorded in artifacts; init is quantile-based
};

// Baum-Welch EM from quantile-based initialization: means at the
// (i + 0.5)/K observation quantiles, variances at the sample variance,
// uniform pi, 0.9 self-transition mass. Stops at n_iter or when the
// log-likelihood gain drops below tol.
FitResult fit_baum_welch(std::span<const double> obs, const FitOptions& options);

// Same model with states relabeled by ascending mean (the persisted artifact
// form). Decoding results are unchanged by construction.
GaussianHmm canonicalized(const GaussianHmm& model);

// Ordinal regime labels: 0 = lowest fitted mean ... K-1 = highest.
struct RegimePoint {
    Date date;
    int ordinal = 0;
    bool in_sample = true;
};

struct RegimePath {
    std::vector<RegimePoint> points;
};

// Names the ordinal for the canonical four-regime setup.
std::string regime_name(int ordinal, int n_states);

// Viterbi-decodes the full series with a model fitted on data up to
// train_end; dates after train_end are flagged out-of-sample. State indices
// are mapped to ordinals by ascending fitted mean (stable under internal
// state permutation).
RegimePath assign_regimes(const GaussianHmm& model,
                          std::span<const Date> dates,
                          std::span<const double> iv, Date train_end);

std::string to_json(const GaussianHmm& model, const FitOptions& options,
                    Date train_start, Date train_end);
GaussianHmm from_json(const std::string& json_text);

}  // namespace ivnow::hmm
