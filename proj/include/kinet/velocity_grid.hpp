#ifndef KINET_VELOCITY_GRID_HPP
#define KINET_VELOCITY_GRID_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "kinet/errors.hpp"

namespace kinet {

inline constexpr double pi = 3.14159265358979323846;

// Anti-aliasing support fraction: with the domain mapped to [-pi,pi]^d the
// default truncation radius is dealias_lambda * pi.
inline constexpr double dealias_lambda = 0.4530818393219729;  // 2/(3+sqrt(2))

// Uniform Cartesian velocity lattice on [-L, L)^d, half-open: the +L endpoint
// is dropped so the nodes support an aliasing-free discrete Fourier transform.
// Nodes are v_j = -L + j*h per axis, h = 2L/n, so -L is present and +L is not;
// the set is closed under v -> -v except for the unpaired -L sheet.
class VelocityGrid {
public:
    VelocityGrid() = default;
    VelocityGrid(int dim, int n_per_dim, double half_width, double trunc_radius);

    int dim() const { return dim_; }
    int n_per_dim() const { return n_; }
    double half_width() const { return half_width_; }
    double trunc_radius() const { return trunc_radius_; }
    double spacing() const { return 2.0 * half_width_ / n_; }
    double cell_volume() const;
    std::size_t node_count() const { return node_count_; }

    // velocity component a of node j (row-major flattening, axis 0 slowest)
    double node_component(std::size_t j, int axis) const {
        return -half_width_ + spacing() * axis_index(j, axis);
    }
    std::array<double, 3> node(std::size_t j) const;
    int axis_index(std::size_t j, int axis) const;

    // scale factor from velocity units to the mapped [-pi,pi) cube
    double map_to_pi() const { return pi / half_width_; }

    bool same_layout(const VelocityGrid& other) const;

private:
    int dim_ = 0;
    int n_ = 0;
    double half_width_ = 0.0;
    double trunc_radius_ = 0.0;
    std::size_t node_count_ = 0;
};

VelocityGrid build_grid(int dim, int n_per_dim, double half_width, double trunc_radius);

// build_grid with the default dealiasing truncation radius (mapped units)
VelocityGrid build_grid(int dim, int n_per_dim, double half_width);

// Real-valued samples over the grid nodes; the discrete f.  Values may dip
// negative mid-computation in spectral representations; min_value() feeds the
// negativity diagnostic.
struct Distribution {
    VelocityGrid grid;
    std::vector<double> values;

    Distribution() = default;
    explicit Distribution(const VelocityGrid& g, double fill = 0.0)
        : grid(g), values(g.node_count(), fill) {}

    double& operator[](std::size_t j) { return values[j]; }
    double operator[](std::size_t j) const { return values[j]; }
    std::size_t size() const { return values.size(); }

    double min_value() const;
    double max_abs() const;
    bool all_finite() const;
};

struct Moments {
    double density = 0.0;
    std::array<double, 3> mean_velocity{0.0, 0.0, 0.0};
    double temperature = 0.0;
    double energy = 0.0;  // E = d*rho*T/2 + rho*|u|^2/2
};

inline constexpr double default_rho_floor = 1e-12;

// Midpoint-rule moments (weight = cell volume).  u and T require
// rho > rho_floor; below it only density is defined and requesting the full
// set throws degenerate_density_error.
Moments compute_moments(const Distribution& f, double rho_floor = default_rho_floor);

// density only; never throws on vanishing f
double compute_density(const Distribution& f);

// Pointwise Maxwellian rho/(2 pi T)^(d/2) * exp(-|v-u|^2/(2T)) on grid nodes.
Distribution maxwellian(const Moments& m, const VelocityGrid& grid);

// Discrete H functional: sum_j w_j f_j log f_j with 0*log(0) = 0.  Values in
// (-tol_neg, 0) are treated as 0; anything below -tol_neg throws
// negative_value_error.
double entropy(const Distribution& f, double tol_neg = 1e-8);

// sum_j w_j f_j |v_j|^4 (used by relaxation benchmarks)
double fourth_moment(const Distribution& f);

// L1 norm of f - g (weighted by cell volume); grids must match.
double l1_distance(const Distribution& f, const Distribution& g);
double l2_norm(const Distribution& f);

} // namespace kinet

#endif
