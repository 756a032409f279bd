#ifndef KINET_SPECTRAL_HPP
#define KINET_SPECTRAL_HPP

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "kinet/velocity_grid.hpp"

#include <mutex>

namespace kinet {

using cplx = std::complex<double>;

namespace detail {
// FFTW's planner is not thread-safe; every planner interaction in the
// library takes this lock (plan execution on distinct buffers needs none).
std::mutex& fftw_plan_mutex();
}

// Fourier modes k in {-N,...,N}^dim with N = n_per_dim/2 - 1: the grid's DFT
// content minus the Nyquist sheet, so that the retained set is symmetric and
// Hermitian symmetry coeffs(-k) = conj(coeffs(k)) is exact for real data.
struct ModeBox {
    int dim = 0;
    int N = 0;

    int n1d() const { return 2 * N + 1; }
    std::size_t count() const {
        std::size_t c = 1;
        for (int a = 0; a < dim; ++a) c *= static_cast<std::size_t>(n1d());
        return c;
    }
    // flatten k (components in [-N, N]), row-major, axis 0 slowest
    std::size_t index(const int* k) const {
        std::size_t idx = 0;
        for (int a = 0; a < dim; ++a) idx = idx * static_cast<std::size_t>(n1d()) + static_cast<std::size_t>(k[a] + N);
        return idx;
    }
    void unflatten(std::size_t idx, int* k) const {
        for (int a = dim - 1; a >= 0; --a) {
            k[a] = static_cast<int>(idx % static_cast<std::size_t>(n1d())) - N;
            idx /= static_cast<std::size_t>(n1d());
        }
    }
    bool operator==(const ModeBox& o) const { return dim == o.dim && N == o.N; }
};

struct SpectralCoefficients {
    VelocityGrid grid;
    ModeBox modes;
    std::vector<cplx> coeffs;  // ModeBox flattening

    SpectralCoefficients() = default;
    explicit SpectralCoefficients(const VelocityGrid& g)
        : grid(g), modes{g.dim(), g.n_per_dim() / 2 - 1}, coeffs(modes.count(), cplx{0.0, 0.0}) {}

    cplx& at(const int* k) { return coeffs[modes.index(k)]; }
    cplx at(const int* k) const { return coeffs[modes.index(k)]; }

    double l1_norm() const;      // sum_k |coeff_k|
    double max_abs() const;
    // max over k of |coeffs(-k) - conj(coeffs(k))|
    double hermitian_defect() const;
};

// Scaled DFT of the grid samples after mapping [-L,L) to [-pi,pi):
// coeff_k = n^-d sum_j f_j exp(-i k.v~_j), exact for the retained modes.
SpectralCoefficients forward_transform(const Distribution& f);

// Trig-polynomial evaluation f_j = sum_k coeff_k exp(i k.v~_j) at the nodes.
// The imaginary residue (max |Im|) is returned through imag_residue when
// non-null; a diagnostic is printed once per call site if it exceeds 1e-10
// (Hermitian inputs stay below that).
Distribution inverse_transform(const SpectralCoefficients& c, double* imag_residue = nullptr);

} // namespace kinet

#endif
