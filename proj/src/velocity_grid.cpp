#include "kinet/velocity_grid.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace kinet {

VelocityGrid::VelocityGrid(int dim, int n_per_dim, double half_width, double trunc_radius)
    : dim_(dim), n_(n_per_dim), half_width_(half_width), trunc_radius_(trunc_radius) {
    if (dim < 1 || dim > 3)
        throw invalid_parameter_error("VelocityGrid: dim must be 1, 2 or 3, got " + std::to_string(dim));
    if (n_per_dim < 4)
        throw invalid_parameter_error("VelocityGrid: n_per_dim must be >= 4, got " + std::to_string(n_per_dim));
    if (n_per_dim % 2 != 0)
        throw invalid_parameter_error("VelocityGrid: n_per_dim must be even, got " + std::to_string(n_per_dim));
    if (!(half_width > 0.0))
        throw invalid_parameter_error("VelocityGrid: half_width must be positive");
    if (!(trunc_radius > 0.0) || trunc_radius > pi + 1e-12)
        throw invalid_parameter_error("VelocityGrid: trunc_radius must lie in (0, pi] after mapping");
    node_count_ = 1;
    for (int a = 0; a < dim; ++a) node_count_ *= static_cast<std::size_t>(n_);
}

double VelocityGrid::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= spacing();
    return v;
}

int VelocityGrid::axis_index(std::size_t j, int axis) const {
    // row-major, axis 0 slowest
    std::size_t stride = 1;
    for (int a = dim_ - 1; a > axis; --a) stride *= static_cast<std::size_t>(n_);
    return static_cast<int>((j / stride) % static_cast<std::size_t>(n_));
}

std::array<double, 3> VelocityGrid::node(std::size_t j) const {
    std::array<double, 3> v{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a) v[a] = node_component(j, a);
    return v;
}

bool VelocityGrid::same_layout(const VelocityGrid& other) const {
    return dim_ == other.dim_ && n_ == other.n_ &&
           half_width_ == other.half_width_ && trunc_radius_ == other.trunc_radius_;
}

VelocityGrid build_grid(int dim, int n_per_dim, double half_width, double trunc_radius) {
    return VelocityGrid(dim, n_per_dim, half_width, trunc_radius);
}

VelocityGrid build_grid(int dim, int n_per_dim, double half_width) {
    return VelocityGrid(dim, n_per_dim, half_width, dealias_lambda * pi);
}

double Distribution::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values) m = std::min(m, v);
    return m;
}

double Distribution::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

bool Distribution::all_finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

double compute_density(const Distribution& f) {
    const double w = f.grid.cell_volume();
    double rho = 0.0;
    for (double v : f.values) rho += v;
    return w * rho;
}

Moments compute_moments(const Distribution& f, double rho_floor) {
    const VelocityGrid& g = f.grid;
    const int d = g.dim();
    const double w = g.cell_volume();

    double rho = 0.0;
    double mom[3] = {0.0, 0.0, 0.0};
    double e2 = 0.0;  // sum f |v|^2
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double fj = f.values[j];
        rho += fj;
        double v2 = 0.0;
        for (int a = 0; a < d; ++a) {
            const double va = g.node_component(j, a);
            mom[a] += fj * va;
            v2 += va * va;
        }
        e2 += fj * v2;
    }
    rho *= w;
    e2 *= w;

    Moments m;
    m.density = rho;
    if (rho <= rho_floor)
        throw degenerate_density_error("compute_moments: density " + std::to_string(rho) +
                                       " at or below floor; u and T undefined");
    double u2 = 0.0;
    for (int a = 0; a < d; ++a) {
        m.mean_velocity[a] = w * mom[a] / rho;
        u2 += m.mean_velocity[a] * m.mean_velocity[a];
    }
    // T = (1/(d rho)) * int |v-u|^2 f = (e2 - rho |u|^2) / (d rho)
    m.temperature = (e2 - rho * u2) / (d * rho);
    m.energy = 0.5 * d * rho * m.temperature + 0.5 * rho * u2;
    return m;
}

Distribution maxwellian(const Moments& m, const VelocityGrid& grid) {
    if (!(m.density > 0.0))
        throw invalid_moments_error("maxwellian: density must be positive");
    if (!(m.temperature > 0.0))
        throw invalid_moments_error("maxwellian: temperature must be positive");
    const int d = grid.dim();
    const double pref = m.density / std::pow(2.0 * pi * m.temperature, 0.5 * d);
    const double inv2T = 1.0 / (2.0 * m.temperature);

    Distribution f(grid);
    for (std::size_t j = 0; j < f.size(); ++j) {
        double q = 0.0;
        for (int a = 0; a < d; ++a) {
            const double dv = grid.node_component(j, a) - m.mean_velocity[a];
            q += dv * dv;
        }
        f.values[j] = pref * std::exp(-q * inv2T);
    }
    return f;
}

double entropy(const Distribution& f, double tol_neg) {
    const double w = f.grid.cell_volume();
    double h = 0.0;
    for (double v : f.values) {
        if (v < -tol_neg)
            throw negative_value_error("entropy: value " + std::to_string(v) +
                                       " below -tol_neg = " + std::to_string(-tol_neg));
        if (v > 0.0) h += v * std::log(v);
    }
    return w * h;
}

double fourth_moment(const Distribution& f) {
    const VelocityGrid& g = f.grid;
    const double w = g.cell_volume();
    double s = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        double v2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double va = g.node_component(j, a);
            v2 += va * va;
        }
        s += f.values[j] * v2 * v2;
    }
    return w * s;
}

double l1_distance(const Distribution& f, const Distribution& g) {
    if (!f.grid.same_layout(g.grid))
        throw grid_mismatch_error("l1_distance: grids differ");
    const double w = f.grid.cell_volume();
    double s = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) s += std::abs(f.values[j] - g.values[j]);
    return w * s;
}

double l2_norm(const Distribution& f) {
    const double w = f.grid.cell_volume();
    double s = 0.0;
    for (double v : f.values) s += v * v;
    return std::sqrt(w * s);
}

} // namespace kinet
