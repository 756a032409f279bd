#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "kinet/kernel_modes.hpp"
#include "support/slice_quadrature.hpp"

using namespace kinet;

namespace {
const double kR = dealias_lambda * pi;

double table_max(const KernelModes& km) {
    double m = 0.0;
    for (const cplx& v : km.beta) m = std::max(m, std::abs(v));
    return m;
}
} // namespace

TEST_CASE("beta(0,0) equals the analytic slice value 4R^2 for Btilde = 1/pi") {
    const VelocityGrid g = build_grid(2, 16, 8.0);
    const KernelModes km = compute_kernel_modes(g, KernelId::maxwell(1.0 / (2.0 * pi)), kR);
    int zero[2] = {0, 0};
    const std::size_t z = km.modes.index(zero);
    const cplx b00 = km.beta_at(z, z);
    CHECK(std::abs(b00 - cplx{4.0 * kR * kR, 0.0}) < 1e-10);

    // independent quadrature oracle must agree too
    const cplx oracle = kinet_test::beta_oracle_maxwell(1.0 / (2.0 * pi), kR, 0, 0, 0, 0);
    CHECK(std::abs(oracle - cplx{4.0 * kR * kR, 0.0}) < 1e-8);
    CHECK(std::abs(b00 - oracle) < 1e-8);
}

TEST_CASE("maxwell table matches the independent slice quadrature") {
    const VelocityGrid g = build_grid(2, 16, 8.0);
    const KernelModes km = compute_kernel_modes(g, KernelId::maxwell(), kR);
    const int N = km.modes.N;
    const int samples[][4] = {{1, 0, 0, 0},  {0, 0, 2, -1}, {3, 2, -1, 4},  {N, 0, 0, N},
                              {N, N, -N, N}, {-2, 5, 5, -2}, {N, -N, N, -N}, {1, 1, 1, 1}};
    for (const auto& s : samples) {
        int l[2] = {s[0], s[1]}, m[2] = {s[2], s[3]};
        const cplx got = km.beta_at(km.modes.index(l), km.modes.index(m));
        const cplx want = kinet_test::beta_oracle_maxwell(km.kernel.C, kR, s[0], s[1], s[2], s[3]);
        CHECK(std::abs(got - want) < 1e-8);
    }
    CHECK(km.self_check_error < 1e-6);
}

TEST_CASE("constant-kernel table symmetries") {
    const VelocityGrid g = build_grid(2, 16, 8.0);
    const KernelModes km = compute_kernel_modes(g, KernelId::maxwell(), kR);
    const std::size_t M = km.count();
    const double scale = table_max(km);

    double imag_max = 0.0, neg_sym = 0.0, swap_sym = 0.0;
    int l[2], m[2], nl[2], nm[2];
    for (std::size_t li = 0; li < M; ++li) {
        km.modes.unflatten(li, l);
        nl[0] = -l[0];
        nl[1] = -l[1];
        for (std::size_t mi = 0; mi < M; ++mi) {
            km.modes.unflatten(mi, m);
            nm[0] = -m[0];
            nm[1] = -m[1];
            const cplx b = km.beta_at(li, mi);
            imag_max = std::max(imag_max, std::abs(b.imag()));
            neg_sym = std::max(neg_sym,
                               std::abs(b - km.beta_at(km.modes.index(nl), km.modes.index(nm))));
            swap_sym = std::max(swap_sym, std::abs(b - km.beta_at(mi, li)));
        }
    }
    CHECK(imag_max <= 1e-12 * scale);     // real kernel -> real table
    CHECK(neg_sym <= 1e-12 * scale);      // beta(-l,-m) = beta(l,m)
    CHECK(swap_sym <= 1e-8 * scale);      // beta(m,l) = beta(l,m), quadrature-limited
}

TEST_CASE("mass-conservation structure: beta(l,-l) = beta(l,l)") {
    const VelocityGrid g = build_grid(2, 16, 8.0);
    const KernelModes km = compute_kernel_modes(g, KernelId::maxwell(), kR);
    const int N = km.modes.N;
    double defect = 0.0;
    for (int l1 = -N; l1 <= N; ++l1)
        for (int l2 = -N; l2 <= N; ++l2) {
            int l[2] = {l1, l2}, nl[2] = {-l1, -l2};
            defect = std::max(defect, std::abs(km.beta_at(km.modes.index(l), km.modes.index(nl)) -
                                               km.beta_at(km.modes.index(l), km.modes.index(l))));
        }
    CHECK(defect <= 1e-12 * table_max(km));
}

TEST_CASE("vhs table matches its oracle and stays real-symmetric") {
    const VelocityGrid g = build_grid(2, 8, 8.0);
    const KernelModes km = compute_kernel_modes(g, KernelId::vhs(1.0 / (2.0 * pi), 1.0), kR);
    CHECK(km.self_check_error < 1e-6);
    const int samples[][4] = {{0, 0, 0, 0}, {1, 0, 2, -1}, {3, -3, 1, 2}, {2, 2, -2, 2}};
    for (const auto& s : samples) {
        int l[2] = {s[0], s[1]}, m[2] = {s[2], s[3]};
        const cplx got = km.beta_at(km.modes.index(l), km.modes.index(m));
        const cplx want =
            kinet_test::beta_oracle_vhs(km.kernel.C, 1.0, kR, s[0], s[1], s[2], s[3]);
        CHECK(std::abs(got - want) < 1e-6);
    }
    double imag_max = 0.0;
    for (const cplx& v : km.beta) imag_max = std::max(imag_max, std::abs(v.imag()));
    CHECK(imag_max <= 1e-12 * table_max(km));
}

TEST_CASE("dimension and parameter guards") {
    CHECK_THROWS_AS(compute_kernel_modes(build_grid(1, 16, 8.0), KernelId::maxwell(), kR),
                    unsupported_dimension_error);
    CHECK_THROWS_AS(compute_kernel_modes(build_grid(2, 16, 8.0), KernelId::maxwell(), -1.0),
                    invalid_parameter_error);
    CHECK_THROWS_AS(compute_kernel_modes(build_grid(2, 16, 8.0), KernelId::maxwell(), kR, 0.5),
                    invalid_parameter_error);
}

TEST_CASE("disk cache round trip reproduces the table bit-exactly") {
    const std::string dir = "/tmp/kinet_test_cache";
    std::filesystem::remove_all(dir);
    const VelocityGrid g = build_grid(2, 8, 8.0);
    const KernelModes fresh = compute_kernel_modes(g, KernelId::maxwell(), kR, 2.0, dir);
    CHECK(std::filesystem::exists(dir + "/" + kernel_cache_filename(3, KernelId::maxwell(), kR, 2.0)));
    const KernelModes cached = compute_kernel_modes(g, KernelId::maxwell(), kR, 2.0, dir);
    REQUIRE(cached.beta.size() == fresh.beta.size());
    for (std::size_t i = 0; i < fresh.beta.size(); ++i) CHECK(cached.beta[i] == fresh.beta[i]);
    CHECK(cached.sep_terms == fresh.sep_terms);
    CHECK(cached.sep_f == fresh.sep_f);
    std::filesystem::remove_all(dir);
}
