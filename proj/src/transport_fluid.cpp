#include "kinet/transport_fluid.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

namespace kinet {

KineticField advect(const KineticField& field, double dt) {
    const SpatialMesh& mesh = field.mesh;
    const VelocityGrid& g = field.grid();
    const double dx = mesh.dx();
    const int nc = mesh.n_cells;

    double vmax = 0.0;
    for (std::size_t j = 0; j < g.node_count(); ++j)
        vmax = std::max(vmax, std::abs(g.node_component(j, 0)));
    if (dt * vmax / dx > 1.0 + 1e-12)
        throw cfl_violation_error("advect: dt max|v1|/dx = " + std::to_string(dt * vmax / dx) +
                                  " exceeds 1");

    KineticField out = field;
    for (int c = 0; c < nc; ++c) {
        int cm = c - 1, cp = c + 1;
        if (mesh.bc == SpatialMesh::Bc::periodic) {
            cm = (c - 1 + nc) % nc;
            cp = (c + 1) % nc;
        } else {
            cm = std::max(cm, 0);
            cp = std::min(cp, nc - 1);
        }
        const std::vector<double>& fc = field.cells[c].values;
        const std::vector<double>& fm = field.cells[cm].values;
        const std::vector<double>& fp = field.cells[cp].values;
        std::vector<double>& oc = out.cells[c].values;
        for (std::size_t j = 0; j < g.node_count(); ++j) {
            const double v1 = g.node_component(j, 0);
            const double cfl = v1 * dt / dx;
            if (v1 >= 0.0)
                oc[j] = fc[j] - cfl * (fc[j] - fm[j]);
            else
                oc[j] = fc[j] - cfl * (fp[j] - fc[j]);
        }
    }
    return out;
}

KineticField split_step(const KineticField& field, double dt, const StiffProblem& p,
                        StepperKind stepper, int n_threads) {
    KineticField out = advect(field, dt);
    auto relax_range = [&](int lo, int hi) {
        for (int c = lo; c < hi; ++c) {
            Distribution& f = out.cells[c];
            switch (stepper) {
                case StepperKind::explicit_euler:
                    f = step_explicit(f, dt, p, ExplicitMethod::euler);
                    break;
                case StepperKind::explicit_rk4:
                    f = step_explicit(f, dt, p, ExplicitMethod::rk4);
                    break;
                case StepperKind::penalized_imex:
                    f = step_penalized_imex(f, dt, p);
                    break;
                case StepperKind::exponential:
                    f = step_exponential(f, dt, p);
                    break;
            }
        }
    };
    const int nc = field.mesh.n_cells;
    if (n_threads <= 1 || nc < 2 * n_threads) {
        relax_range(0, nc);
        return out;
    }
    // static partition: each cell is computed by exactly one thread
    std::vector<std::thread> workers;
    const int chunk = (nc + n_threads - 1) / n_threads;
    std::vector<std::exception_ptr> errors(n_threads);
    for (int t = 0; t < n_threads; ++t) {
        const int lo = t * chunk, hi = std::min(nc, lo + chunk);
        workers.emplace_back([&, lo, hi, t] {
            try {
                relax_range(lo, hi);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

double euler_max_wave_speed(const FluidState& s) {
    double smax = 0.0;
    for (int c = 0; c < s.mesh.n_cells; ++c) {
        const auto& u = s.u[c];
        const double w = u[1] / u[0];
        const double p = s.pressure(c);
        smax = std::max(smax, std::abs(w) + std::sqrt(s.gamma * p / u[0]));
    }
    return smax;
}

namespace {

std::array<double, 3> euler_flux(const std::array<double, 3>& u, double gamma) {
    const double rho = u[0];
    const double w = u[1] / rho;
    const double p = (gamma - 1.0) * (u[2] - 0.5 * rho * w * w);
    return {u[1], u[1] * w + p, (u[2] + p) * w};
}

} // namespace

FluidState euler_step(const FluidState& s, double dt) {
    const int nc = s.mesh.n_cells;
    const double dx = s.mesh.dx();

    for (int c = 0; c < nc; ++c) {
        if (!(s.u[c][0] > 0.0) || !(s.pressure(c) > 0.0))
            throw positivity_loss_error("euler_step: nonpositive density or pressure in cell " +
                                        std::to_string(c));
    }
    if (dt * euler_max_wave_speed(s) / dx > 1.0 + 1e-12)
        throw cfl_violation_error("euler_step: dt exceeds the CFL limit");

    auto cell = [&](int c) -> const std::array<double, 3>& {
        if (s.mesh.bc == SpatialMesh::Bc::periodic) return s.u[(c + nc) % nc];
        return s.u[std::clamp(c, 0, nc - 1)];
    };
    // HLLC flux with Davis wave-speed estimates
    auto hllc = [&](const std::array<double, 3>& ul, const std::array<double, 3>& ur) {
        const double gamma = s.gamma;
        const double rl = ul[0], wl = ul[1] / rl;
        const double pl = (gamma - 1.0) * (ul[2] - 0.5 * rl * wl * wl);
        const double rr = ur[0], wr = ur[1] / rr;
        const double pr = (gamma - 1.0) * (ur[2] - 0.5 * rr * wr * wr);
        const double al = std::sqrt(gamma * pl / rl), ar = std::sqrt(gamma * pr / rr);
        const double sl = std::min(wl - al, wr - ar);
        const double sr = std::max(wl + al, wr + ar);
        const double sm = (pr - pl + rl * wl * (sl - wl) - rr * wr * (sr - wr)) /
                          (rl * (sl - wl) - rr * (sr - wr));
        if (sl >= 0.0) return euler_flux(ul, gamma);
        if (sr <= 0.0) return euler_flux(ur, gamma);
        auto star_flux = [&](const std::array<double, 3>& u, double w, double p, double sk) {
            const auto f = euler_flux(u, gamma);
            const double r = u[0];
            const double coef = r * (sk - w) / (sk - sm);
            const std::array<double, 3> ustar{
                coef, coef * sm, coef * (u[2] / r + (sm - w) * (sm + p / (r * (sk - w))))};
            std::array<double, 3> out;
            for (int q = 0; q < 3; ++q) out[q] = f[q] + sk * (ustar[q] - u[q]);
            return out;
        };
        return sm >= 0.0 ? star_flux(ul, wl, pl, sl) : star_flux(ur, wr, pr, sr);
    };

    FluidState out = s;
    for (int c = 0; c < nc; ++c) {
        const auto fL = hllc(cell(c - 1), cell(c));
        const auto fR = hllc(cell(c), cell(c + 1));
        for (int q = 0; q < 3; ++q) out.u[c][q] = s.u[c][q] - dt / dx * (fR[q] - fL[q]);
    }
    for (int c = 0; c < nc; ++c) {
        if (!(out.u[c][0] > 0.0) || !(out.pressure(c) > 0.0))
            throw positivity_loss_error("euler_step: positivity lost in cell " + std::to_string(c));
    }
    return out;
}

FluidState fluid_from_kinetic(const KineticField& field) {
    const int d = field.grid().dim();
    FluidState s(field.mesh, (d + 2.0) / d);
    for (int c = 0; c < field.mesh.n_cells; ++c) {
        const Moments m = compute_moments(field.cells[c]);
        s.u[c] = {m.density, m.density * m.mean_velocity[0], m.energy};
    }
    return s;
}

KineticField kinetic_from_fluid(const FluidState& s, const VelocityGrid& grid) {
    KineticField field(s.mesh, grid);
    for (int c = 0; c < s.mesh.n_cells; ++c) {
        const auto& u = s.u[c];
        Moments m;
        m.density = u[0];
        m.mean_velocity = {u[1] / u[0], 0.0, 0.0};
        m.temperature = s.pressure(c) / u[0];  // p = rho T
        m.energy = u[2];
        field.cells[c] = maxwellian(m, grid);
    }
    return field;
}

std::vector<Moments> moments_profile(const KineticField& field) {
    std::vector<Moments> out;
    out.reserve(field.cells.size());
    for (const Distribution& f : field.cells) out.push_back(compute_moments(f));
    return out;
}

} // namespace kinet
