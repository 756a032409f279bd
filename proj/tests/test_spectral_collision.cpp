#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kinet/spectral_collision.hpp"
#include "kinet/time_integrators.hpp"

using namespace kinet;

namespace {

const double kR = dealias_lambda * pi;

SpectralCoefficients random_hermitian(const VelocityGrid& g, unsigned seed, double scale = 1.0) {
    SpectralCoefficients c(g);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int N = c.modes.N;
    int k[2], mk[2];
    for (k[0] = -N; k[0] <= N; ++k[0])
        for (k[1] = -N; k[1] <= N; ++k[1]) {
            mk[0] = -k[0];
            mk[1] = -k[1];
            const std::size_t i = c.modes.index(k), mi = c.modes.index(mk);
            if (i > mi) continue;
            if (i == mi)
                c.coeffs[i] = cplx{scale * u(rng), 0.0};
            else {
                const cplx v{scale * u(rng), scale * u(rng)};
                c.coeffs[i] = v;
                c.coeffs[mi] = std::conj(v);
            }
        }
    return c;
}

Distribution gaussian(const VelocityGrid& g, double T1, double T2, double u1, double u2,
                      double rho = 1.0) {
    Distribution f(g);
    const double pref = rho / (2.0 * pi * std::sqrt(T1 * T2));
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double d1 = g.node_component(j, 0) - u1, d2 = g.node_component(j, 1) - u2;
        f.values[j] = pref * std::exp(-0.5 * (d1 * d1 / T1 + d2 * d2 / T2));
    }
    return f;
}

double rel_l2(const Distribution& a, const Distribution& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a.values[j] - b.values[j];
        num += d * d;
        den += b.values[j] * b.values[j];
    }
    return std::sqrt(num / den);
}

} // namespace

TEST_CASE("direct evaluation: zero input, bilinear scaling, mass mode") {
    const VelocityGrid g = build_grid(2, 16, 8.0);
    const KernelModes km = compute_kernel_modes(g, KernelId::maxwell(), kR);

    const SpectralCoefficients zero(g);
    const SpectralCoefficients qz = spectral_collision_direct(zero, km);
    CHECK(qz.max_abs() == 0.0);

    const SpectralCoefficients c = random_hermitian(g, 17);
    SpectralCoefficients c3 = c;
    for (cplx& v : c3.coeffs) v *= 3.0;
    const SpectralCoefficients q1 = spectral_collision_direct(c, km);
    const SpectralCoefficients q9 = spectral_collision_direct(c3, km);
    double derr = 0.0;
    for (std::size_t i = 0; i < q1.coeffs.size(); ++i)
        derr = std::max(derr, std::abs(9.0 * q1.coeffs[i] - q9.coeffs[i]));
    CHECK(derr <= 1e-12 * 9.0 * q1.max_abs() + 1e-14);

    // k = 0 mode vanishes: exact mass conservation
    for (unsigned rep = 0; rep < 20; ++rep) {
        const SpectralCoefficients cr = random_hermitian(g, 100 + rep);
        const SpectralCoefficients qr = spectral_collision_direct(cr, km);
        int kzero[2] = {0, 0};
        const double l1 = cr.l1_norm();
        CHECK(std::abs(qr.at(kzero)) <= 1e-12 * l1 * l1);
    }

    // Hermitian symmetry propagates
    const SpectralCoefficients qh = spectral_collision_direct(random_hermitian(g, 3), km);
    CHECK(qh.hermitian_defect() <= 1e-10);

    const VelocityGrid g2 = build_grid(2, 8, 8.0);
    CHECK_THROWS_AS(spectral_collision_direct(SpectralCoefficients(g2), km), grid_mismatch_error);
}

TEST_CASE("decompose_kernel: certified errors, monotone in rank") {
    const VelocityGrid g = build_grid(2, 16, 8.0);
    const KernelModes km = compute_kernel_modes(g, KernelId::maxwell(), kR);
    double bmax = 0.0;
    for (const cplx& v : km.beta) bmax = std::max(bmax, std::abs(v));

    const SeparatedKernel full = decompose_kernel(km, static_cast<int>(km.max_rank()));
    CHECK(full.reconstruction_error <= 1e-10);

    double prev = 1e300;
    int smallest = -1;
    for (int A : {1, 2, 4, 8, 12, 16, 17, 24, 32}) {
        const SeparatedKernel sk = decompose_kernel(km, A);
        CHECK(sk.reconstruction_error <= prev + 1e-15);
        prev = sk.reconstruction_error;
        if (smallest < 0 && sk.reconstruction_error <= 1e-6 * bmax) smallest = A;
    }
    // regression constant from the first rank sweep of this table
    CHECK(smallest == 17);

    CHECK_THROWS_AS(decompose_kernel(km, 0), invalid_parameter_error);
    CHECK_THROWS_AS(decompose_kernel(km, static_cast<int>(km.max_rank()) + 1),
                    rank_exceeds_table_error);
}

TEST_CASE("fast evaluation agrees with direct within the certified bound") {
    const VelocityGrid g = build_grid(2, 16, 8.0);
    const KernelModes km = compute_kernel_modes(g, KernelId::maxwell(), kR);

    for (int A : {2, 6, 12, 17, static_cast<int>(km.max_rank())}) {
        const SeparatedKernel sk = decompose_kernel(km, A);
        for (unsigned rep = 0; rep < 5; ++rep) {
            const SpectralCoefficients c = random_hermitian(g, 1000 * A + rep, 0.5);
            const SpectralCoefficients qd = spectral_collision_direct(c, km);
            const SpectralCoefficients qf = spectral_collision_fast(c, sk);
            double diff = 0.0;
            for (std::size_t i = 0; i < qd.coeffs.size(); ++i)
                diff = std::max(diff, std::abs(qd.coeffs[i] - qf.coeffs[i]));
            const double l1 = c.l1_norm();
            if (static_cast<std::size_t>(A) == km.max_rank())
                CHECK(diff <= 1e-9);
            else
                CHECK(diff <= sk.reconstruction_error * l1 * l1);
        }
    }

    // zero stays zero
    const SeparatedKernel sk = decompose_kernel(km, 8);
    CHECK(spectral_collision_fast(SpectralCoefficients(g), sk).max_abs() == 0.0);
}

TEST_CASE("equilibrium residual shrinks with resolution") {
    double prev = 1e300;
    for (int n : {8, 16, 24}) {
        const VelocityGrid g = build_grid(2, n, 8.0);
        const KernelModes km = compute_kernel_modes(g, KernelId::maxwell(), kR);
        Moments m;
        m.density = 1.0;
        m.mean_velocity = {0.0, 0.0, 0.0};
        m.temperature = 1.0;
        const Distribution M = maxwellian(m, g);
        double residue = 0.0;
        const Distribution q =
            inverse_transform(spectral_collision_direct(forward_transform(M), km), &residue);
        const double rmax = q.max_abs();
        CHECK(rmax < prev);
        prev = rmax;
    }
    CHECK(prev < 2e-5);  // n = 24 is already deep in the spectral regime
}

TEST_CASE("quadrature oracle: equilibrium residual and exact mass balance") {
    const VelocityGrid g = build_grid(2, 16, 8.0);
    Moments m;
    m.density = 1.0;
    m.mean_velocity = {0.0, 0.0, 0.0};
    m.temperature = 1.0;
    const Distribution M = maxwellian(m, g);

    // equilibrium annihilates the integrand before discretization, so the
    // residual is pure quadrature error and shrinks under joint refinement
    double prev = 1e300;
    for (auto [n, na] : {std::pair{12, 16}, std::pair{16, 32}, std::pair{24, 64}}) {
        const VelocityGrid gn = build_grid(2, n, 8.0);
        const Distribution Mn = maxwellian(m, gn);
        const Distribution q = collision_quadrature_oracle(Mn, KernelId::maxwell(), kR, na);
        CHECK(std::abs(compute_density(q)) <= 1e-10);
        const double rmax = q.max_abs();
        CHECK(rmax < prev);
        prev = rmax;
    }
    CHECK(prev < 1e-3);

    // random data: mass balance is exact by construction
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Distribution f(g);
    for (double& v : f.values) v = u(rng);
    const Distribution qr = collision_quadrature_oracle(f, KernelId::maxwell(), kR, 16);
    CHECK(std::abs(compute_density(qr)) <= 1e-10 * compute_density(f));
}

TEST_CASE("oracle resource guard") {
    const VelocityGrid g = build_grid(2, 32, 8.0);
    const Distribution f(g, 0.1);
    CHECK_THROWS_AS(collision_quadrature_oracle(f, KernelId::maxwell(), kR, 8),
                    resource_guard_error);
    CHECK_NOTHROW(collision_quadrature_oracle(f, KernelId::maxwell(), kR, 4, true));
    CHECK_THROWS_AS(collision_quadrature_oracle(Distribution(build_grid(1, 8, 8.0), 1.0),
                                                KernelId::maxwell(), kR, 8),
                    unsupported_dimension_error);
    CHECK_THROWS_AS(collision_quadrature_oracle(Distribution(build_grid(2, 8, 8.0), 1.0),
                                                KernelId::maxwell(), kR, 7),
                    invalid_parameter_error);
}

TEST_CASE("mutual oracle: spectral direct vs quadrature oracle on a smooth Gaussian") {
    // both discretize the same truncated, periodized operator; the
    // discrepancy must shrink under joint refinement.  The anisotropy keeps
    // the collision signal well above the oracle's quadrature floor.
    const double T1 = 1.15 * 1.15, T2 = 0.45 * 0.45;
    double prev = 1e300;
    for (auto [n, na] : {std::pair{8, 16}, std::pair{12, 32}, std::pair{16, 64}}) {
        const VelocityGrid g = build_grid(2, n, pi);
        const Distribution f = gaussian(g, T1, T2, 0.15, -0.1);
        const KernelModes km = compute_kernel_modes(g, KernelId::maxwell(), kR);
        double residue = 0.0;
        const Distribution qs =
            inverse_transform(spectral_collision_direct(forward_transform(f), km), &residue);
        const Distribution qo = collision_quadrature_oracle(f, KernelId::maxwell(), kR, na);
        const double err = rel_l2(qs, qo);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev <= 5e-2);
}
