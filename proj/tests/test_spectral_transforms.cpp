#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kinet/spectral.hpp"

using namespace kinet;

namespace {

// random Hermitian-symmetric coefficient set (represents a real f)
SpectralCoefficients random_hermitian(const VelocityGrid& g, unsigned seed) {
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
            if (i == mi) {
                c.coeffs[i] = cplx{u(rng), 0.0};
            } else {
                const cplx v{u(rng), u(rng)};
                c.coeffs[i] = v;
                c.coeffs[mi] = std::conj(v);
            }
        }
    return c;
}

} // namespace

TEST_CASE("constant distribution transforms to a single mode") {
    const VelocityGrid g = build_grid(2, 16, 8.0);
    const SpectralCoefficients c = forward_transform(Distribution(g, 3.25));
    int k[2] = {0, 0};
    CHECK(std::abs(c.at(k) - cplx{3.25, 0.0}) < 1e-13);
    double off = 0.0;
    for (std::size_t i = 0; i < c.coeffs.size(); ++i)
        if (i != c.modes.index(k)) off = std::max(off, std::abs(c.coeffs[i]));
    CHECK(off < 1e-13);
}

TEST_CASE("cosine of the mapped coordinate gives two half modes") {
    const VelocityGrid g = build_grid(2, 16, 8.0);
    Distribution f(g);
    const double map = g.map_to_pi();
    for (std::size_t j = 0; j < f.size(); ++j) f.values[j] = std::cos(map * g.node_component(j, 0));
    const SpectralCoefficients c = forward_transform(f);
    int kp[2] = {1, 0}, km[2] = {-1, 0};
    CHECK(std::abs(c.at(kp) - cplx{0.5, 0.0}) < 1e-13);
    CHECK(std::abs(c.at(km) - cplx{0.5, 0.0}) < 1e-13);
}

TEST_CASE("round trips are identities") {
    const VelocityGrid g = build_grid(2, 16, 8.0);
    for (unsigned rep = 0; rep < 5; ++rep) {
        // coefficient -> grid -> coefficient
        const SpectralCoefficients c = random_hermitian(g, 10 + rep);
        double residue = 0.0;
        const Distribution f = inverse_transform(c, &residue);
        CHECK(residue < 1e-10);
        const SpectralCoefficients c2 = forward_transform(f);
        double cerr = 0.0;
        for (std::size_t i = 0; i < c.coeffs.size(); ++i)
            cerr = std::max(cerr, std::abs(c.coeffs[i] - c2.coeffs[i]));
        CHECK(cerr <= 1e-12);

        // grid -> coefficient -> grid on band-limited data
        const Distribution f2 = inverse_transform(c2, &residue);
        double gerr = 0.0;
        for (std::size_t j = 0; j < f.size(); ++j)
            gerr = std::max(gerr, std::abs(f.values[j] - f2.values[j]));
        CHECK(gerr <= 1e-12);
    }
}

TEST_CASE("forward transform of real data is Hermitian") {
    const VelocityGrid g = build_grid(2, 12, 6.0);
    Distribution f(g);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double& v : f.values) v = u(rng);
    CHECK(forward_transform(f).hermitian_defect() < 1e-14);
}

TEST_CASE("non-Hermitian input reports an imaginary residue") {
    const VelocityGrid g = build_grid(2, 8, 4.0);
    SpectralCoefficients c(g);
    int k[2] = {1, 0};
    c.coeffs[c.modes.index(k)] = cplx{1.0, 0.0};  // no conjugate partner
    double residue = 0.0;
    inverse_transform(c, &residue);
    CHECK(residue > 0.1);
}

TEST_CASE("1d transforms work as well") {
    const VelocityGrid g = build_grid(1, 16, 8.0);
    Distribution f(g);
    const double map = g.map_to_pi();
    for (std::size_t j = 0; j < f.size(); ++j)
        f.values[j] = 1.0 + std::sin(2.0 * map * g.node_component(j, 0));
    const SpectralCoefficients c = forward_transform(f);
    int k0[1] = {0}, k2[1] = {2};
    CHECK(std::abs(c.at(k0) - cplx{1.0, 0.0}) < 1e-13);
    CHECK(std::abs(c.at(k2) - cplx{0.0, -0.5}) < 1e-13);
    double residue = 0.0;
    const Distribution f2 = inverse_transform(c, &residue);
    for (std::size_t j = 0; j < f.size(); ++j) CHECK(f2.values[j] == doctest::Approx(f.values[j]).epsilon(1e-12));
}
