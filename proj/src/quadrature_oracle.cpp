#include "kinet/spectral_collision.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace kinet {

namespace {

// Catmull-Rom deposit weights for fractional offset t over nodes -1,0,1,2;
// a partition of unity, so deposited mass is conserved to rounding.
inline void cr_weights(double t, double w[4]) {
    const double t2 = t * t, t3 = t2 * t;
    w[0] = 0.5 * (-t3 + 2.0 * t2 - t);
    w[1] = 0.5 * (3.0 * t3 - 5.0 * t2 + 2.0);
    w[2] = 0.5 * (-3.0 * t3 + 4.0 * t2 + t);
    w[3] = 0.5 * (t3 - t2);
}

} // namespace

Distribution collision_quadrature_oracle(const Distribution& f, const KernelId& kernel, double R,
                                         int n_angle, bool force) {
    const VelocityGrid& g = f.grid;
    if (g.dim() != 2)
        throw unsupported_dimension_error("collision_quadrature_oracle: only d = 2 is supported");
    if (g.n_per_dim() > 24 && !force)
        throw resource_guard_error("collision_quadrature_oracle: n_per_dim = " +
                                   std::to_string(g.n_per_dim()) +
                                   " exceeds the n <= 24 guard (pass force to override)");
    if (n_angle < 4 || n_angle % 2 != 0)
        throw invalid_parameter_error("collision_quadrature_oracle: n_angle must be even and >= 4");

    const int n = g.n_per_dim();
    const std::size_t nn = g.node_count();
    const double h = 2.0 * pi / n;  // mapped node spacing
    const double vol = h * h;
    const double R2 = R * R;

    std::vector<double> vx(nn), vy(nn);
    for (std::size_t j = 0; j < nn; ++j) {
        vx[j] = -pi + h * g.axis_index(j, 0);
        vy[j] = -pi + h * g.axis_index(j, 1);
    }

    Distribution q(g, 0.0);
    double* out = q.values.data();
    const double* fv = f.values.data();
    const double inv_h = 1.0 / h;
    const int half = n_angle / 2;
    std::vector<double> ca(n_angle), sa(n_angle);

    auto deposit = [&](std::size_t i, double w, double dx, double dy) {
        const double px = (vx[i] + dx + pi) * inv_h;
        const double py = (vy[i] + dy + pi) * inv_h;
        const double fx = std::floor(px), fy = std::floor(py);
        const double tx = px - fx, ty = py - fy;
        int ix = static_cast<int>(fx) % n;
        int iy = static_cast<int>(fy) % n;
        if (ix < 0) ix += n;
        if (iy < 0) iy += n;
        double wx[4], wy[4];
        cr_weights(tx, wx);
        cr_weights(ty, wy);
        const int jx[4] = {(ix + n - 1) % n, ix, (ix + 1) % n, (ix + 2) % n};
        const int jy[4] = {(iy + n - 1) % n, iy, (iy + 1) % n, (iy + 2) % n};
        for (int a1 = 0; a1 < 4; ++a1) {
            const double wrow = w * wx[a1];
            double* orow = out + static_cast<std::size_t>(jx[a1]) * n;
            for (int a2 = 0; a2 < 4; ++a2) orow[jy[a2]] += wrow * wy[a2];
        }
    };

    for (std::size_t i = 0; i < nn; ++i) {
        if (fv[i] == 0.0) continue;
        for (std::size_t j = 0; j < nn; ++j) {
            const double ff = fv[i] * fv[j];
            if (ff == 0.0) continue;
            // minimum-image relative velocity: the periodized operator pairs
            // each node with the nearest image of its partner (unique since
            // sqrt(2) R < pi)
            double gx = vx[i] - vx[j];
            double gy = vy[i] - vy[j];
            if (gx >= pi) gx -= 2.0 * pi;
            if (gx < -pi) gx += 2.0 * pi;
            if (gy >= pi) gy -= 2.0 * pi;
            if (gy < -pi) gy += 2.0 * pi;
            const double gn2 = gx * gx + gy * gy;
            if (gn2 == 0.0 || gn2 > 2.0 * R2) continue;  // no-op or fully truncated
            const double gn = std::sqrt(gn2);

            // scattering directions: uniform circle while every angle is
            // admissible, otherwise uniform nodes on the two arcs where both
            // x = v'* - v and y = v' - v stay inside B_R (exact arc weight)
            double wang;
            if (gn2 <= R2) {
                wang = 2.0 * pi / n_angle;
                for (int a = 0; a < half; ++a) {
                    const double phi = 2.0 * pi * a / n_angle;
                    ca[a] = std::cos(phi);
                    sa[a] = std::sin(phi);
                    ca[a + half] = -ca[a];
                    sa[a + half] = -sa[a];
                }
            } else {
                const double cmax = 2.0 * R2 / gn2 - 1.0;
                const double delta = std::asin(std::min(1.0, cmax));
                const double theta_g = std::atan2(gy, gx);
                wang = 4.0 * delta / n_angle;
                for (int a = 0; a < half; ++a) {
                    const double phi = theta_g + 0.5 * pi + delta * (2.0 * (a + 0.5) / half - 1.0);
                    ca[a] = std::cos(phi);
                    sa[a] = std::sin(phi);
                    ca[a + half] = -ca[a];
                    sa[a + half] = -sa[a];
                }
            }

            double bker = kernel.C;
            if (kernel.kind == KernelId::Kind::vhs) bker *= std::pow(gn, kernel.alpha);
            const double w = vol * bker * ff * wang;
            const double hx = 0.5 * gx, hy = 0.5 * gy, hg = 0.5 * gn;
            for (int a = 0; a < n_angle; ++a) {
                // y = v' - v; the mirrored deposit at v'* is covered by the
                // antipodal angle
                out[i] -= w;
                deposit(i, w, -hx + hg * ca[a], -hy + hg * sa[a]);
            }
        }
    }
    return q;
}

} // namespace kinet
