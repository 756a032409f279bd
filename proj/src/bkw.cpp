#include "kinet/bkw.hpp"

#include <cmath>

namespace kinet {

Distribution bkw_distribution(const VelocityGrid& grid, double T, double K, double rho) {
    if (grid.dim() != 2)
        throw unsupported_dimension_error("bkw_distribution: only d = 2 is supported");
    if (!(T > 0.0) || !(rho > 0.0))
        throw invalid_parameter_error("bkw_distribution: rho and T must be positive");
    if (K < 0.5 || K > 1.0)
        throw invalid_parameter_error("bkw_distribution: K must lie in [1/2, 1] for nonnegativity");

    const double s = K * T;
    const double pref = rho / (2.0 * pi * s);
    const double c0 = (2.0 * K - 1.0) / K;
    const double c2 = (1.0 - K) / (2.0 * K * K * T);
    Distribution f(grid);
    for (std::size_t j = 0; j < f.size(); ++j) {
        double q = 0.0;
        for (int a = 0; a < 2; ++a) {
            const double v = grid.node_component(j, a);
            q += v * v;
        }
        f.values[j] = pref * std::exp(-q / (2.0 * s)) * (c0 + c2 * q);
    }
    return f;
}

double bkw_K_of_t(double t, double K0, double kernel_C, double rho) {
    const double lambda = 2.0 * pi * kernel_C * rho / 8.0;
    return 1.0 - (1.0 - K0) * std::exp(-lambda * t);
}

double bkw_fourth_moment(double T, double K, double rho) {
    return 8.0 * rho * T * T * K * (2.0 - K);
}

} // namespace kinet
