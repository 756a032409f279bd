#include "kinet/spectral_collision.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

extern "C" {
void zgemm_(const char*, const char*, const int*, const int*, const int*, const void*, const void*,
            const int*, const void*, const int*, const void*, void*, const int*);
void zgeqrf_(const int* m, const int* n, void* a, const int* lda, void* tau, void* work,
             const int* lwork, int* info);
void zungqr_(const int* m, const int* n, const int* k, void* a, const int* lda, const void* tau,
             void* work, const int* lwork, int* info);
void zgesvd_(const char* jobu, const char* jobvt, const int* m, const int* n, void* a,
             const int* lda, double* s, void* u, const int* ldu, void* vt, const int* ldvt,
             void* work, const int* lwork, double* rwork, int* info);
}

namespace kinet {

namespace {

// economy QR: A (M x T, column-major) -> Q (M x r), R (r x T), r = min(M,T)
void qr_economy(std::vector<cplx> a, int M, int T, std::vector<cplx>& Q, std::vector<cplx>& R) {
    const int r = std::min(M, T);
    std::vector<cplx> tau(r);
    int info = 0, lwork = -1;
    cplx wq;
    zgeqrf_(&M, &T, a.data(), &M, tau.data(), &wq, &lwork, &info);
    lwork = static_cast<int>(wq.real());
    std::vector<cplx> work(lwork);
    zgeqrf_(&M, &T, a.data(), &M, tau.data(), work.data(), &lwork, &info);
    if (info != 0) throw error("decompose_kernel: zgeqrf failed, info = " + std::to_string(info));

    R.assign(static_cast<std::size_t>(r) * T, cplx{});
    for (int j = 0; j < T; ++j)
        for (int i = 0; i <= std::min(j, r - 1); ++i)
            R[i + static_cast<std::size_t>(j) * r] = a[i + static_cast<std::size_t>(j) * M];

    lwork = -1;
    zungqr_(&M, &r, &r, a.data(), &M, tau.data(), &wq, &lwork, &info);
    lwork = static_cast<int>(wq.real());
    work.resize(lwork);
    zungqr_(&M, &r, &r, a.data(), &M, tau.data(), work.data(), &lwork, &info);
    if (info != 0) throw error("decompose_kernel: zungqr failed, info = " + std::to_string(info));
    Q.assign(a.begin(), a.begin() + static_cast<std::size_t>(M) * r);
}

} // namespace

SeparatedKernel decompose_kernel(const KernelModes& km, int A) {
    const int M = static_cast<int>(km.count());
    const int T = static_cast<int>(km.sep_terms);
    if (km.sep_f.empty() || km.sep_g.empty())
        throw error("decompose_kernel: kernel modes carry no separated factors");
    if (A < 1) throw invalid_parameter_error("decompose_kernel: rank must be >= 1");
    if (static_cast<std::size_t>(A) > km.max_rank())
        throw rank_exceeds_table_error("decompose_kernel: rank " + std::to_string(A) +
                                       " exceeds table rank " + std::to_string(km.max_rank()));

    // beta = F G^T with F, G of width T, so an SVD of the small coupling
    // matrix R_F R_G^T gives the optimal truncation without touching the
    // dense table.
    std::vector<cplx> QF, RF, QG, RG;
    qr_economy(km.sep_f, M, T, QF, RF);
    qr_economy(km.sep_g, M, T, QG, RG);
    const int r = std::min(M, T);

    std::vector<cplx> S(static_cast<std::size_t>(r) * r);
    const cplx one{1.0, 0.0}, zero{0.0, 0.0};
    zgemm_("N", "T", &r, &r, &T, &one, RF.data(), &r, RG.data(), &r, &zero, S.data(), &r);

    std::vector<double> sv(r);
    std::vector<cplx> U(static_cast<std::size_t>(r) * r), VT(static_cast<std::size_t>(r) * r);
    {
        int info = 0, lwork = -1;
        cplx wq;
        std::vector<double> rwork(5 * static_cast<std::size_t>(r));
        zgesvd_("S", "S", &r, &r, S.data(), &r, sv.data(), U.data(), &r, VT.data(), &r, &wq, &lwork,
                rwork.data(), &info);
        lwork = static_cast<int>(wq.real());
        std::vector<cplx> work(lwork);
        zgesvd_("S", "S", &r, &r, S.data(), &r, sv.data(), U.data(), &r, VT.data(), &r, work.data(),
                &lwork, rwork.data(), &info);
        if (info != 0) throw error("decompose_kernel: zgesvd failed, info = " + std::to_string(info));
    }

    SeparatedKernel sk;
    sk.modes = km.modes;
    sk.kernel = km.kernel;
    sk.trunc_radius = km.trunc_radius;
    sk.rank = A;
    sk.diag = km.diag;
    sk.singular_values = sv;

    // alpha = Q_F U(:,1:A) diag(sigma); alpha' = Q_G conj(V(:,1:A)) = Q_G VT(1:A,:)^T
    sk.alpha.assign(static_cast<std::size_t>(M) * A, cplx{});
    sk.alpha_prime.assign(static_cast<std::size_t>(M) * A, cplx{});
    zgemm_("N", "N", &M, &A, &r, &one, QF.data(), &M, U.data(), &r, &zero, sk.alpha.data(), &M);
    zgemm_("N", "T", &M, &A, &r, &one, QG.data(), &M, VT.data(), &r, &zero, sk.alpha_prime.data(),
           &M);
    for (int p = 0; p < A; ++p)
        for (int i = 0; i < M; ++i) sk.alpha[i + static_cast<std::size_t>(p) * M] *= sv[p];

    // exact max-norm reconstruction error over the stored table
    {
        const std::size_t Mu = static_cast<std::size_t>(M);
        std::vector<cplx> arow(static_cast<std::size_t>(A)), ap_rm(Mu * A);
        for (std::size_t m = 0; m < Mu; ++m)
            for (int p = 0; p < A; ++p)
                ap_rm[m * A + p] = sk.alpha_prime[m + static_cast<std::size_t>(p) * Mu];
        double err = 0.0;
        for (std::size_t l = 0; l < Mu; ++l) {
            for (int p = 0; p < A; ++p) arow[p] = sk.alpha[l + static_cast<std::size_t>(p) * Mu];
            const cplx* brow = km.beta.data() + l * Mu;
            for (std::size_t m = 0; m < Mu; ++m) {
                cplx acc{};
                const cplx* apm = ap_rm.data() + m * A;
                for (int p = 0; p < A; ++p) acc += arow[p] * apm[p];
                err = std::max(err, std::abs(brow[m] - acc));
            }
        }
        sk.reconstruction_error = err;
    }
    return sk;
}

} // namespace kinet
