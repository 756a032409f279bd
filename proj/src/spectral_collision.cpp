#include "kinet/spectral_collision.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

namespace kinet {

SpectralCoefficients spectral_collision_direct(const SpectralCoefficients& c, const KernelModes& km) {
    if (!(c.modes == km.modes))
        throw grid_mismatch_error("spectral_collision_direct: mode boxes differ");
    const int N = c.modes.N;
    const int n1 = 2 * N + 1;
    const std::size_t M = c.modes.count();
    const bool have_hat = !km.beta_hat.empty();

    SpectralCoefficients q = c;
    std::fill(q.coeffs.begin(), q.coeffs.end(), cplx{});
    const cplx* f = c.coeffs.data();
    cplx* out = q.coeffs.data();

    for (int l1 = -N; l1 <= N; ++l1) {
        for (int l2 = -N; l2 <= N; ++l2) {
            const std::size_t l_idx = static_cast<std::size_t>(l1 + N) * n1 + (l2 + N);
            const cplx fl = f[l_idx];
            if (fl.real() == 0.0 && fl.imag() == 0.0) continue;
            const cplx* row = have_hat ? km.beta_hat.data() + l_idx * M : km.beta.data() + l_idx * M;
            const int m1_lo = std::max(-N, -N - l1), m1_hi = std::min(N, N - l1);
            const int m2_lo = std::max(-N, -N - l2), m2_hi = std::min(N, N - l2);
            for (int m1 = m1_lo; m1 <= m1_hi; ++m1) {
                const std::size_t m_base = static_cast<std::size_t>(m1 + N) * n1;
                const std::size_t k_base = static_cast<std::size_t>(l1 + m1 + N) * n1;
                for (int m2 = m2_lo; m2 <= m2_hi; ++m2) {
                    const std::size_t m_idx = m_base + (m2 + N);
                    const cplx w = have_hat ? row[m_idx] : row[m_idx] - km.diag[m_idx];
                    out[k_base + (l2 + m2 + N)] += w * fl * f[m_idx];
                }
            }
        }
    }
    return q;
}

namespace {

// smallest 2^a 3^b 5^c >= v (good FFT sizes)
int next_fft_size(int v) {
    int best = 1;
    while (best < v) best <<= 1;
    for (int f5 = 1; f5 <= best; f5 *= 5)
        for (int f3 = f5; f3 <= best; f3 *= 3) {
            int s = f3;
            while (s < v) s <<= 1;
            best = std::min(best, s);
        }
    return best;
}

// per-thread FFT workspace for the padded convolutions
struct ConvWorkspace {
    int N = -1, P = 0;
    fftw_complex *a = nullptr, *b = nullptr, *acc = nullptr;
    fftw_plan fwd_a = nullptr, fwd_b = nullptr, bwd = nullptr;

    void ensure(int N_) {
        if (N == N_) return;
        release();
        N = N_;
        // inputs occupy [0, 2N] per axis, so circular sums fold at k +- P;
        // the extraction window [N, 3N] stays alias-free for P >= 3N+1
        P = next_fft_size(3 * N + 1);
        const std::size_t total = static_cast<std::size_t>(P) * P;
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        a = fftw_alloc_complex(total);
        b = fftw_alloc_complex(total);
        acc = fftw_alloc_complex(total);
        int shape[2] = {P, P};
        fwd_a = fftw_plan_dft(2, shape, a, a, FFTW_FORWARD, FFTW_ESTIMATE);
        fwd_b = fftw_plan_dft(2, shape, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft(2, shape, acc, acc, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    void release() {
        if (N < 0) return;
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fftw_destroy_plan(fwd_a);
        fftw_destroy_plan(fwd_b);
        fftw_destroy_plan(bwd);
        fftw_free(a);
        fftw_free(b);
        fftw_free(acc);
        N = -1;
    }
    ~ConvWorkspace() { release(); }
};

thread_local ConvWorkspace tl_conv;

// scatter mode cube (2N+1)^2 into the padded P x P array at offset 0
inline void pad_product(const cplx* f, const cplx* weight, int n1, int P, fftw_complex* dst) {
    const std::size_t total = static_cast<std::size_t>(P) * P;
    std::fill(reinterpret_cast<double*>(dst), reinterpret_cast<double*>(dst) + 2 * total, 0.0);
    for (int i = 0; i < n1; ++i) {
        const cplx* fr = f + static_cast<std::size_t>(i) * n1;
        const cplx* wr = weight ? weight + static_cast<std::size_t>(i) * n1 : nullptr;
        fftw_complex* dr = dst + static_cast<std::size_t>(i) * P;
        for (int j = 0; j < n1; ++j) {
            const cplx v = wr ? fr[j] * wr[j] : fr[j];
            dr[j][0] = v.real();
            dr[j][1] = v.imag();
        }
    }
}

} // namespace

SpectralCoefficients spectral_collision_fast(const SpectralCoefficients& c, const SeparatedKernel& sk) {
    if (!(c.modes == sk.modes))
        throw grid_mismatch_error("spectral_collision_fast: mode boxes differ");
    const int N = c.modes.N;
    const int n1 = 2 * N + 1;
    const std::size_t M = c.modes.count();

    ConvWorkspace& ws = tl_conv;
    ws.ensure(N);
    const int P = ws.P;
    const std::size_t total = static_cast<std::size_t>(P) * P;

    std::vector<cplx> freq_acc(total, cplx{});

    auto accumulate_pair = [&](const cplx* wa, const cplx* wb, double sign) {
        pad_product(c.coeffs.data(), wa, n1, P, ws.a);
        pad_product(c.coeffs.data(), wb, n1, P, ws.b);
        fftw_execute(ws.fwd_a);
        fftw_execute(ws.fwd_b);
        const cplx* fa = reinterpret_cast<const cplx*>(ws.a);
        const cplx* fb = reinterpret_cast<const cplx*>(ws.b);
        for (std::size_t i = 0; i < total; ++i) freq_acc[i] += sign * (fa[i] * fb[i]);
    };

    for (int p = 0; p < sk.rank; ++p)
        accumulate_pair(sk.alpha.data() + static_cast<std::size_t>(p) * M,
                        sk.alpha_prime.data() + static_cast<std::size_t>(p) * M, 1.0);
    // exact loss term: conv(fhat, diag .* fhat)
    accumulate_pair(nullptr, sk.diag.data(), -1.0);

    std::copy(freq_acc.begin(), freq_acc.end(), reinterpret_cast<cplx*>(ws.acc));
    fftw_execute(ws.bwd);

    SpectralCoefficients q = c;
    const double scale = 1.0 / static_cast<double>(total);
    const cplx* res = reinterpret_cast<const cplx*>(ws.acc);
    for (int k1 = -N; k1 <= N; ++k1)
        for (int k2 = -N; k2 <= N; ++k2)
            q.coeffs[static_cast<std::size_t>(k1 + N) * n1 + (k2 + N)] =
                scale * res[static_cast<std::size_t>(k1 + 2 * N) * P + (k2 + 2 * N)];
    return q;
}

} // namespace kinet
