#ifndef KINET_BKW_HPP
#define KINET_BKW_HPP

#include "kinet/velocity_grid.hpp"

namespace kinet {

// Closed-form BKW relaxation family for 2d Maxwell molecules (rho = 1, u = 0,
// temperature T):
//   f(v; K) = 1/(2 pi K T) exp(-|v|^2/(2 K T)) [ (2K-1)/K + (1-K)/(2 K^2 T) |v|^2 ]
// Nonnegative for K in [1/2, 1]; K = 1 is the Maxwellian.  Under a constant
// kernel B = C the shape parameter relaxes as
//   K(t) = 1 - (1 - K0) exp(-2 pi C rho t / 8),
// and the fourth moment is 8 rho T^2 K (2 - K).
Distribution bkw_distribution(const VelocityGrid& grid, double T, double K, double rho = 1.0);

double bkw_K_of_t(double t, double K0, double kernel_C, double rho = 1.0);

double bkw_fourth_moment(double T, double K, double rho = 1.0);

} // namespace kinet

#endif
