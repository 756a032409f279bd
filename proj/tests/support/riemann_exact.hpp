#ifndef KINET_TESTS_RIEMANN_EXACT_HPP
#define KINET_TESTS_RIEMANN_EXACT_HPP

// Exact solver for the 1d compressible Euler Riemann problem (test oracle,
// independent of the finite-volume path it checks).

namespace kinet_test {

struct RiemannState {
    double rho, u, p;
};

// self-similar solution W(x/t) of the Riemann problem with left/right states
RiemannState riemann_exact_sample(const RiemannState& left, const RiemannState& right, double gamma,
                                  double xi /* = x/t */);

} // namespace kinet_test

#endif
