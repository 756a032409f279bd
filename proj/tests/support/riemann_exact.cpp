#include "support/riemann_exact.hpp"

#include <cmath>
#include <stdexcept>

namespace kinet_test {

namespace {

// Toro's pressure function for one side: f(p) and df/dp
void side_function(double p, const RiemannState& s, double gamma, double& f, double& df) {
    const double A = 2.0 / ((gamma + 1.0) * s.rho);
    const double B = (gamma - 1.0) / (gamma + 1.0) * s.p;
    const double a = std::sqrt(gamma * s.p / s.rho);
    if (p > s.p) {  // shock
        const double q = std::sqrt(A / (p + B));
        f = (p - s.p) * q;
        df = q * (1.0 - 0.5 * (p - s.p) / (p + B));
    } else {  // rarefaction
        const double pr = p / s.p;
        f = 2.0 * a / (gamma - 1.0) * (std::pow(pr, (gamma - 1.0) / (2.0 * gamma)) - 1.0);
        df = std::pow(pr, -(gamma + 1.0) / (2.0 * gamma)) / (s.rho * a);
    }
}

} // namespace

RiemannState riemann_exact_sample(const RiemannState& L, const RiemannState& R, double gamma,
                                  double xi) {
    const double aL = std::sqrt(gamma * L.p / L.rho);
    const double aR = std::sqrt(gamma * R.p / R.rho);
    const double du = R.u - L.u;

    // star-region pressure by Newton iteration from the PVRS guess
    double p = 0.5 * (L.p + R.p) - 0.125 * du * (L.rho + R.rho) * (aL + aR);
    p = std::max(p, 1e-10 * std::min(L.p, R.p));
    for (int it = 0; it < 100; ++it) {
        double fL, dfL, fR, dfR;
        side_function(p, L, gamma, fL, dfL);
        side_function(p, R, gamma, fR, dfR);
        const double g = fL + fR + du;
        const double dp = g / (dfL + dfR);
        p -= dp;
        if (p <= 0.0) p = 1e-12;
        if (std::abs(dp) < 1e-14 * p) break;
    }
    const double pstar = p;
    double fL, dfL, fR, dfR;
    side_function(pstar, L, gamma, fL, dfL);
    side_function(pstar, R, gamma, fR, dfR);
    const double ustar = 0.5 * (L.u + R.u) + 0.5 * (fR - fL);

    if (xi <= ustar) {  // left of the contact
        if (pstar > L.p) {  // left shock
            const double ms = (gamma + 1.0) / (2.0 * gamma) * pstar / L.p +
                              (gamma - 1.0) / (2.0 * gamma);
            const double sL = L.u - aL * std::sqrt(ms);
            if (xi <= sL) return L;
            const double r =
                L.rho * ((pstar / L.p + (gamma - 1.0) / (gamma + 1.0)) /
                         ((gamma - 1.0) / (gamma + 1.0) * pstar / L.p + 1.0));
            return {r, ustar, pstar};
        }
        // left rarefaction
        const double astar = aL * std::pow(pstar / L.p, (gamma - 1.0) / (2.0 * gamma));
        const double head = L.u - aL, tail = ustar - astar;
        if (xi <= head) return L;
        if (xi >= tail) {
            const double r = L.rho * std::pow(pstar / L.p, 1.0 / gamma);
            return {r, ustar, pstar};
        }
        const double u = 2.0 / (gamma + 1.0) * (aL + 0.5 * (gamma - 1.0) * L.u + xi);
        const double a = 2.0 / (gamma + 1.0) * (aL + 0.5 * (gamma - 1.0) * (L.u - xi));
        const double r = L.rho * std::pow(a / aL, 2.0 / (gamma - 1.0));
        return {r, u, r * a * a / gamma};
    }
    // right of the contact
    if (pstar > R.p) {  // right shock
        const double ms =
            (gamma + 1.0) / (2.0 * gamma) * pstar / R.p + (gamma - 1.0) / (2.0 * gamma);
        const double sR = R.u + aR * std::sqrt(ms);
        if (xi >= sR) return R;
        const double r = R.rho * ((pstar / R.p + (gamma - 1.0) / (gamma + 1.0)) /
                                  ((gamma - 1.0) / (gamma + 1.0) * pstar / R.p + 1.0));
        return {r, ustar, pstar};
    }
    // right rarefaction
    const double astar = aR * std::pow(pstar / R.p, (gamma - 1.0) / (2.0 * gamma));
    const double head = R.u + aR, tail = ustar + astar;
    if (xi >= head) return R;
    if (xi <= tail) {
        const double r = R.rho * std::pow(pstar / R.p, 1.0 / gamma);
        return {r, ustar, pstar};
    }
    const double u = 2.0 / (gamma + 1.0) * (-aR + 0.5 * (gamma - 1.0) * R.u + xi);
    const double a = 2.0 / (gamma + 1.0) * (aR - 0.5 * (gamma - 1.0) * (R.u - xi));
    const double r = R.rho * std::pow(a / aR, 2.0 / (gamma - 1.0));
    return {r, u, r * a * a / gamma};
}

} // namespace kinet_test
