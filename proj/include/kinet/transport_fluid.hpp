#ifndef KINET_TRANSPORT_FLUID_HPP
#define KINET_TRANSPORT_FLUID_HPP

#include <array>
#include <vector>

#include "kinet/time_integrators.hpp"
#include "kinet/velocity_grid.hpp"

namespace kinet {

struct SpatialMesh {
    enum class Bc { periodic, free_outflow };
    int n_cells = 0;
    double x_min = 0.0, x_max = 1.0;
    Bc bc = Bc::periodic;

    SpatialMesh() = default;
    SpatialMesh(int n, double x0, double x1, Bc b) : n_cells(n), x_min(x0), x_max(x1), bc(b) {
        if (n < 2) throw invalid_parameter_error("SpatialMesh: need at least 2 cells");
        if (!(x1 > x0)) throw invalid_parameter_error("SpatialMesh: x_max must exceed x_min");
    }
    double dx() const { return (x_max - x_min) / n_cells; }
    double center(int c) const { return x_min + (c + 0.5) * dx(); }
};

// 1d-in-space kinetic field: one Distribution per cell, shared velocity grid.
struct KineticField {
    SpatialMesh mesh;
    std::vector<Distribution> cells;

    KineticField() = default;
    KineticField(const SpatialMesh& m, const VelocityGrid& g)
        : mesh(m), cells(m.n_cells, Distribution(g)) {}
    const VelocityGrid& grid() const { return cells.front().grid; }
};

// First-order upwind transport of every velocity node, direction from the
// sign of its x-velocity component.  Requires dt max|v1| / dx <= 1.
KineticField advect(const KineticField& field, double dt);

enum class StepperKind { explicit_euler, explicit_rk4, penalized_imex, exponential };

// Lie splitting: upwind transport over dt, then the chosen collision stepper
// per cell (1/eps stiffness handled by the AP steppers).  Cells are
// independent; with n_threads > 1 they are processed in parallel over a
// static partition, so results are identical for any thread count.
KineticField split_step(const KineticField& field, double dt, const StiffProblem& p,
                        StepperKind stepper, int n_threads = 1);

// conserved variables u = (rho, rho w, E) per cell, p = (gamma - 1)(E - rho w^2/2)
struct FluidState {
    SpatialMesh mesh;
    double gamma = 2.0;
    std::vector<std::array<double, 3>> u;

    FluidState() = default;
    FluidState(const SpatialMesh& m, double g) : mesh(m), gamma(g), u(m.n_cells, {0.0, 0.0, 0.0}) {}
    double pressure(int c) const {
        const auto& s = u[c];
        return (gamma - 1.0) * (s[2] - 0.5 * s[1] * s[1] / s[0]);
    }
};

// First-order finite-volume step with an HLLC flux (Davis wave speeds);
// throws positivity_loss_error if density or pressure drop to zero.
FluidState euler_step(const FluidState& s, double dt);

double euler_max_wave_speed(const FluidState& s);

// per-cell kinetic moments -> fluid state with gamma = (d+2)/d
FluidState fluid_from_kinetic(const KineticField& field);

// per-cell Maxwellians from a fluid state (T = p / rho)
KineticField kinetic_from_fluid(const FluidState& s, const VelocityGrid& grid);

std::vector<Moments> moments_profile(const KineticField& field);

} // namespace kinet

#endif
