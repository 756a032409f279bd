#ifndef KINET_KERNEL_MODES_HPP
#define KINET_KERNEL_MODES_HPP

#include <string>
#include <vector>

#include "kinet/spectral.hpp"

namespace kinet {

// Collision kernel B(cos theta, g) in mapped velocity units:
//   maxwell: B = C (angle- and speed-independent)
//   vhs:     B = C * g^alpha (variable hard sphere)
struct KernelId {
    enum class Kind { maxwell, vhs };
    Kind kind = Kind::maxwell;
    double C = 1.0 / (2.0 * pi);
    double alpha = 0.0;

    static KernelId maxwell(double C = 1.0 / (2.0 * pi)) { return {Kind::maxwell, C, 0.0}; }
    static KernelId vhs(double C, double alpha) { return {Kind::vhs, C, alpha}; }
    std::string describe() const;
    bool operator==(const KernelId& o) const {
        return kind == o.kind && C == o.C && alpha == o.alpha;
    }
};

// Kernel-mode table beta(l,m) of the truncated collision operator, plus the
// diagonal beta(m,m) defining beta_hat(l,m) = beta(l,m) - beta(m,m).
//
// The delta constraint in the defining double-ball integral is resolved
// analytically in d=2: for x = r(cos phi, sin phi) the y-integral collapses
// to the line t * x_perp, leaving the smooth 3d integral
//   beta(l,m) = int_0^R dr int_0^2pi dphi int_-R^R dt
//               Btilde(r,t) e^{i r l.xhat(phi)} e^{i t m.xhat_perp(phi)}
// evaluated by Gauss-Legendre (r,t) x trapezoid (periodic phi).  For each
// angular node (and radial node when Btilde couples r and t) the integrand
// separates into an l-factor times an m-factor, so the table accumulates as
// a sum of outer products; those factors are kept (sep_f, sep_g) because the
// rank-A decomposition compresses them directly.
struct KernelModes {
    ModeBox modes;  // dim = 2
    KernelId kernel;
    double trunc_radius = 0.0;
    double level = 0.0;
    int n_phi = 0, n_r = 0, n_t = 0;

    std::vector<cplx> beta;      // count x count, index l_idx*count + m_idx
    std::vector<cplx> beta_hat;  // materialized when the table is small enough
    std::vector<cplx> diag;      // beta(m,m)

    // separated quadrature factors: beta = sep_f * sep_g^T, column-major
    // (count x sep_terms), beta[l,m] = sum_j sep_f[l + j*count] * sep_g[m + j*count]
    std::vector<cplx> sep_f, sep_g;
    std::size_t sep_terms = 0;

    double self_check_error = 0.0;  // max relative drift under level refinement

    std::size_t count() const { return modes.count(); }
    cplx beta_at(std::size_t l, std::size_t m) const { return beta[l * count() + m]; }
    cplx beta_hat_at(std::size_t l, std::size_t m) const { return beta[l * count() + m] - diag[m]; }
    std::size_t max_rank() const { return std::min(count(), sep_terms); }
};

// Builds (or loads from cache_dir, when non-empty) the kernel-mode table for
// the grid's mode box.  d = 2 only.  quadrature_level scales all resolutions;
// a sampled level-refinement self-check warns on stderr above 1e-6.
KernelModes compute_kernel_modes(const VelocityGrid& grid, const KernelId& kernel, double R,
                                 double quadrature_level = 2.0, const std::string& cache_dir = "");

// cache file name for a parameter set (content-addressed key)
std::string kernel_cache_filename(int N, const KernelId& kernel, double R, double level);

void write_kernel_modes(const KernelModes& km, const std::string& path);
KernelModes read_kernel_modes(const std::string& path);

} // namespace kinet

#endif
