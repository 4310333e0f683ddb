#if defined(__x86_64__)

#include <immintrin.h>

#include "ivnow/kernels/kernels.hpp"

// Compiled with -mavx2 for this translation unit only; callers must check
// avx2_supported() before dispatching here. Lane math mirrors scalar.cpp
// operation for operation: vaddpd/vmulpd/vdivpd are correctly rounded per
// lane, so results are bit-identical to the scalar reference.

namespace ivnow::kernels {

namespace {

void split_scores_avx2(const double* n_left, const double* pos_left,
                       std::size_t count, double n_total, double pos_total,
                       double* out_score) {
    const __m256d vn = _mm256_set1_pd(n_total);
    const __m256d vp = _mm256_set1_pd(pos_total);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256d nl = _mm256_loadu_pd(n_left + i);
        __m256d pl = _mm256_loadu_pd(pos_left + i);
        __m256d nr = _mm256_sub_pd(vn, nl);
        __m256d pr = _mm256_sub_pd(vp, pl);
        __m256d ql = _mm256_sub_pd(nl, pl);
        __m256d qr = _mm256_sub_pd(nr, pr);
        __m256d left = _mm256_div_pd(
            _mm256_add_pd(_mm256_mul_pd(pl, pl), _mm256_mul_pd(ql, ql)), nl);
        __m256d right = _mm256_div_pd(
            _mm256_add_pd(_mm256_mul_pd(pr, pr), _mm256_mul_pd(qr, qr)), nr);
        _mm256_storeu_pd(out_score + i, _mm256_add_pd(left, right));
    }
    for (; i < count; ++i) {
        double nl = n_left[i];
        double pl = pos_left[i];
        double nr = n_total - nl;
        double pr = pos_total - pl;
        double ql = nl - pl;
        double qr = nr - pr;
        out_score[i] = (pl * pl + ql * ql) / nl + (pr * pr + qr * qr) / nr;
    }
}

void gaussian_loglik_avx2(const double* x, std::size_t count, double mean,
                          double inv_two_var, double log_norm, double* out) {
    const __m256d vmean = _mm256_set1_pd(mean);
    const __m256d vinv = _mm256_set1_pd(inv_two_var);
    const __m256d vnorm = _mm256_set1_pd(log_norm);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vmean);
        __m256d q = _mm256_mul_pd(_mm256_mul_pd(d, d), vinv);
        _mm256_storeu_pd(out + i, _mm256_sub_pd(vnorm, q));
    }
    for (; i < count; ++i) {
        double d = x[i] - mean;
        out[i] = log_norm - d * d * inv_two_var;
    }
}

}  // namespace

const KernelTable avx2_table = {"avx2", split_scores_avx2, gaussian_loglik_avx2};

}  // namespace ivnow::kernels

#endif  // __x86_64__
