#include "kinet/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <mutex>

namespace kinet {

double SpectralCoefficients::l1_norm() const {
    double s = 0.0;
    for (const cplx& c : coeffs) s += std::abs(c);
    return s;
}

double SpectralCoefficients::max_abs() const {
    double s = 0.0;
    for (const cplx& c : coeffs) s = std::max(s, std::abs(c));
    return s;
}

double SpectralCoefficients::hermitian_defect() const {
    double d = 0.0;
    int k[3] = {0, 0, 0}, mk[3] = {0, 0, 0};
    for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
        modes.unflatten(idx, k);
        for (int a = 0; a < modes.dim; ++a) mk[a] = -k[a];
        d = std::max(d, std::abs(coeffs[idx] - std::conj(coeffs[modes.index(mk)])));
    }
    return d;
}

namespace detail {
std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}
} // namespace detail

namespace {

struct FftBuffer {
    fftw_complex* data = nullptr;
    fftw_plan plan = nullptr;

    FftBuffer(int dim, int n, int sign) {
        std::size_t total = 1;
        int shape[3];
        for (int a = 0; a < dim; ++a) {
            shape[a] = n;
            total *= static_cast<std::size_t>(n);
        }
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        data = fftw_alloc_complex(total);
        plan = fftw_plan_dft(dim, shape, data, data, sign, FFTW_ESTIMATE);
    }
    ~FftBuffer() {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fftw_destroy_plan(plan);
        fftw_free(data);
    }
    FftBuffer(const FftBuffer&) = delete;
    FftBuffer& operator=(const FftBuffer&) = delete;
};

// parity (-1)^(k_0+...+k_{d-1}) accounting for the node offset -pi
inline double mode_parity(const int* k, int dim) {
    int s = 0;
    for (int a = 0; a < dim; ++a) s += k[a];
    return (s & 1) ? -1.0 : 1.0;
}

} // namespace

SpectralCoefficients forward_transform(const Distribution& f) {
    const VelocityGrid& g = f.grid;
    const int d = g.dim();
    const int n = g.n_per_dim();
    const std::size_t nn = g.node_count();

    FftBuffer buf(d, n, FFTW_FORWARD);
    for (std::size_t j = 0; j < nn; ++j) {
        buf.data[j][0] = f.values[j];
        buf.data[j][1] = 0.0;
    }
    fftw_execute(buf.plan);

    SpectralCoefficients out(g);
    const double scale = 1.0 / static_cast<double>(nn);
    int k[3] = {0, 0, 0};
    for (std::size_t idx = 0; idx < out.coeffs.size(); ++idx) {
        out.modes.unflatten(idx, k);
        // DFT bin of mode k: k mod n per axis
        std::size_t bin = 0;
        for (int a = 0; a < d; ++a) {
            const int ka = k[a] < 0 ? k[a] + n : k[a];
            bin = bin * static_cast<std::size_t>(n) + static_cast<std::size_t>(ka);
        }
        const double par = mode_parity(k, d) * scale;
        out.coeffs[idx] = cplx{buf.data[bin][0] * par, buf.data[bin][1] * par};
    }
    return out;
}

Distribution inverse_transform(const SpectralCoefficients& c, double* imag_residue) {
    const VelocityGrid& g = c.grid;
    const int d = g.dim();
    const int n = g.n_per_dim();
    const std::size_t nn = g.node_count();

    FftBuffer buf(d, n, FFTW_BACKWARD);
    for (std::size_t j = 0; j < nn; ++j) {
        buf.data[j][0] = 0.0;
        buf.data[j][1] = 0.0;
    }
    int k[3] = {0, 0, 0};
    for (std::size_t idx = 0; idx < c.coeffs.size(); ++idx) {
        c.modes.unflatten(idx, k);
        std::size_t bin = 0;
        for (int a = 0; a < d; ++a) {
            const int ka = k[a] < 0 ? k[a] + n : k[a];
            bin = bin * static_cast<std::size_t>(n) + static_cast<std::size_t>(ka);
        }
        const double par = mode_parity(k, d);
        buf.data[bin][0] = par * c.coeffs[idx].real();
        buf.data[bin][1] = par * c.coeffs[idx].imag();
    }
    fftw_execute(buf.plan);

    Distribution f(g);
    double imag_max = 0.0;
    for (std::size_t j = 0; j < nn; ++j) {
        f.values[j] = buf.data[j][0];
        imag_max = std::max(imag_max, std::abs(buf.data[j][1]));
    }
    if (imag_residue) *imag_residue = imag_max;
    if (imag_max > 1e-10 && !imag_residue)
        std::fprintf(stderr, "kinet: inverse_transform imaginary residue %.3e (non-Hermitian input?)\n",
                     imag_max);
    return f;
}

} // namespace kinet
