#pragma once

#include <cstddef>
#include <string>

namespace ivnow::kernels {

// Data-parallel inner loops with one scalar reference implementation and one
// AVX2 variant, selected at runtime. Both lanes use only IEEE add/mul/div in
// the same per-element order, so their outputs are bit-identical; the
// equivalence tests assert exactly that. Everything downstream (forest
// training, HMM fitting, reports) is therefore byte-stable no matter which
// lane the host selects.

// Split-candidate score for binary CART. For candidate c with n_left[c]
// samples (pos_left[c] positive) going left out of (n_total, pos_total):
//
//   score[c] = (pl^2 + (nl-pl)^2)/nl + (pr^2 + (nr-pr)^2)/nr
//
// Maximizing score minimizes the weighted Gini impurity
//   gini = (n_total - score) / n_total.
// Counts are passed as doubles (they are small integers, exactly
// representable).
using SplitScoresFn = void (*)(const double* n_left, const double* pos_left,
                               std::size_t count, double n_total,
                               double pos_total, double* out_score);

// Gaussian log-density map: out[i] = log_norm - (x[i] - mean)^2 * inv_two_var.
using GaussianLoglikFn = void (*)(const double* x, std::size_t count,
                                  double mean, double inv_two_var,
                                  double log_norm, double* out);

struct KernelTable {
    const char* name;
    SplitScoresFn split_scores;
    GaussianLoglikFn gaussian_loglik;
};

enum class Lane { automatic, scalar, avx2 };

bool avx2_supported();

// Selects the lane; Lane::automatic picks the best supported one. Throws
// ConfigError for an unsupported explicit request. Not thread-safe against
// concurrent kernel use; select once at startup (tests do switch it between
// cases, single-threaded).
void set_lane(Lane lane);
Lane parse_lane(const std::string& name);

const KernelTable& active();

extern const KernelTable scalar_table;
#if defined(__x86_64__)
extern const KernelTable avx2_table;
#endif

}  // namespace ivnow::kernels
