#ifndef KINET_SPECTRAL_COLLISION_HPP
#define KINET_SPECTRAL_COLLISION_HPP

#include "kinet/kernel_modes.hpp"
#include "kinet/spectral.hpp"

namespace kinet {

// Direct evaluation of the spectral collision ODE right-hand side:
// Qhat_k = sum_{l+m=k, l,m in [-N,N]^2} beta_hat(l,m) fhat_l fhat_m.
// Theta((2N+1)^(2d)) double loop; the reference path for the fast evaluator.
SpectralCoefficients spectral_collision_direct(const SpectralCoefficients& c, const KernelModes& km);

// Rank-A separated form of the gain table, beta(l,m) ~ sum_p alpha_p(l)
// alpha'_p(m), from a truncated SVD of the table; the diagonal loss weight
// beta(m,m) is carried exactly alongside.  reconstruction_error is the exact
// max over the stored table of |beta - sum_p alpha alpha'|.
struct SeparatedKernel {
    ModeBox modes;
    KernelId kernel;
    double trunc_radius = 0.0;
    int rank = 0;
    std::vector<cplx> alpha;        // column-major count x rank: alpha[l + p*count]
    std::vector<cplx> alpha_prime;  // same layout over m
    std::vector<cplx> diag;         // beta(m,m)
    std::vector<double> singular_values;  // all of them, for rank studies
    double reconstruction_error = 0.0;

    std::size_t count() const { return modes.count(); }
};

SeparatedKernel decompose_kernel(const KernelModes& km, int A);

// Fast evaluation: A+1 zero-padded FFT convolutions (A gain terms plus the
// exact diagonal loss term), cost O(A N^d log N).  Agrees with the direct
// path up to reconstruction_error * |fhat|_1^2.
SpectralCoefficients spectral_collision_fast(const SpectralCoefficients& c, const SeparatedKernel& sk);

// Brute-force quadrature of the truncated collision integral on the mapped
// torus: for every node v the sum runs over all grid nodes v* and n_angle
// uniform scattering directions; post-collisional values are deposited by
// periodic bilinear interpolation (transpose-interpolation gain), which makes
// the mass defect exact to rounding.  The pair truncation |x|,|y| <= R
// matches the kernel-mode domain.  Cost Theta(n^(2d) n_angle); refuses
// n_per_dim > 24 unless force is set.
Distribution collision_quadrature_oracle(const Distribution& f, const KernelId& kernel, double R,
                                         int n_angle, bool force = false);

} // namespace kinet

#endif
