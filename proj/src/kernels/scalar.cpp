#include "ivnow/kernels/kernels.hpp"

namespace ivnow::kernels {

namespace {

void split_scores_scalar(const double* n_left, const double* pos_left,
                         std::size_t count, double n_total, double pos_total,
                         double* out_score) {
    for (std::size_t i = 0; i < count; ++i) {
        double nl = n_left[i];
        double pl = pos_left[i];
        double nr = n_total - nl;
        double pr = pos_total - pl;
        double ql = nl - pl;
        double qr = nr - pr;
        out_score[i] = (pl * pl + ql * ql) / nl + (pr * pr + qr * qr) / nr;
    }
}

void gaussian_loglik_scalar(const double* x, std::size_t count, double mean,
                            double inv_two_var, double log_norm, double* out) {
    for (std::size_t i = 0; i < count; ++i) {
        double d = x[i] - mean;
        out[i] = log_norm - d * d * inv_two_var;
    }
}

}  // namespace

const KernelTable scalar_table = {"scalar", split_scores_scalar,
                                  gaussian_loglik_scalar};

}  // namespace ivnow::kernels
