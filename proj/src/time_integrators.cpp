#include "kinet/time_integrators.hpp"

#include <cmath>
#include <limits>

namespace kinet {

Distribution SpectralDirectOperator::apply(const Distribution& f) const {
    double residue = 0.0;
    return inverse_transform(spectral_collision_direct(forward_transform(f), *km_), &residue);
}

Distribution SpectralFastOperator::apply(const Distribution& f) const {
    double residue = 0.0;
    return inverse_transform(spectral_collision_fast(forward_transform(f), *sk_), &residue);
}

Distribution BgkOperator::apply(const Distribution& f) const {
    const Moments m = compute_moments(f, rho_floor_);
    const Distribution M = maxwellian(m, f.grid);
    const double nu = mu_.mu(m.density);
    Distribution q(f.grid);
    for (std::size_t j = 0; j < f.size(); ++j) q.values[j] = nu * (M.values[j] - f.values[j]);
    return q;
}

namespace {

Distribution axpy(const Distribution& f, double a, const Distribution& g) {
    Distribution r = f;
    for (std::size_t j = 0; j < r.size(); ++j) r.values[j] += a * g.values[j];
    return r;
}

} // namespace

Distribution step_explicit(const Distribution& f, double dt, const StiffProblem& p,
                           ExplicitMethod method) {
    if (!(dt > 0.0)) throw invalid_parameter_error("step_explicit: dt must be positive");
    const double s = dt / p.epsilon;
    if (method == ExplicitMethod::euler) return axpy(f, s, p.collision->apply(f));

    const Distribution k1 = p.collision->apply(f);
    const Distribution k2 = p.collision->apply(axpy(f, 0.5 * s, k1));
    const Distribution k3 = p.collision->apply(axpy(f, 0.5 * s, k2));
    const Distribution k4 = p.collision->apply(axpy(f, s, k3));
    Distribution r = f;
    for (std::size_t j = 0; j < r.size(); ++j)
        r.values[j] += s / 6.0 * (k1.values[j] + 2.0 * k2.values[j] + 2.0 * k3.values[j] + k4.values[j]);
    return r;
}

Distribution step_penalized_imex(const Distribution& f, double dt, const StiffProblem& p) {
    if (!(dt > 0.0)) throw invalid_parameter_error("step_penalized_imex: dt must be positive");
    const Moments mom = compute_moments(f, p.rho_floor);
    const Distribution M = maxwellian(mom, f.grid);
    const double mu = p.mu.mu(mom.density);
    const Distribution Q = p.collision->apply(f);

    const double a = dt / p.epsilon;
    const double denom = 1.0 + a * mu;
    Distribution r = f;
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double expl = Q.values[j] - mu * (M.values[j] - f.values[j]);
        r.values[j] = (f.values[j] + a * expl + a * mu * M.values[j]) / denom;
    }
    return r;
}

Distribution step_exponential(const Distribution& f, double dt, const StiffProblem& p) {
    if (!(dt > 0.0)) throw invalid_parameter_error("step_exponential: dt must be positive");
    const Moments mom = compute_moments(f, p.rho_floor);
    const Distribution M = maxwellian(mom, f.grid);
    const double mu = p.mu.mu(mom.density);
    const Distribution Q = p.collision->apply(f);

    const double z = mu * dt / p.epsilon;
    const double ez = std::exp(-z);
    const double dw = dt / p.epsilon * ez;  // deviation weight (z/mu) e^-z, bounded in z
    Distribution r = f;
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double dev = Q.values[j] - mu * (M.values[j] - f.values[j]);
        r.values[j] = ez * f.values[j] + (1.0 - ez) * M.values[j] + dw * dev;
    }
    return r;
}

ApReport ap_diagnostic(const Distribution& f0, const ApDiagnosticConfig& cfg) {
    ApReport report;
    const double scale0 = std::max(1.0, f0.max_abs());
    const Moments mom0 = compute_moments(f0);
    const BgkOperator bgk(cfg.mu);

    for (double eps : cfg.epsilons) {
        ApCaseResult rc;
        rc.epsilon = eps;

        // algebraic projection factor on the BGK core
        {
            StiffProblem ps{eps, &bgk, cfg.mu, default_rho_floor};
            const Distribution f1 = step_penalized_imex(f0, cfg.dt, ps);
            const Distribution M0 = maxwellian(mom0, f0.grid);
            const double before = l1_distance(f0, M0);
            const double after = l1_distance(f1, M0);
            rc.bgk_projection_measured = before > 0.0 ? after / before : 0.0;
            rc.bgk_dist_one_step = after / mom0.density;
            const double mu = cfg.mu.mu(mom0.density);
            rc.bgk_projection_predicted = eps / (eps + mu * cfg.dt);
        }

        // real collision operator: one step, then cfg.n_steps with stability flag
        StiffProblem p{eps, cfg.collision, cfg.mu, default_rho_floor};
        Distribution f = step_penalized_imex(f0, cfg.dt, p);
        {
            const Moments m1 = compute_moments(f);
            rc.dist_one_step = l1_distance(f, maxwellian(m1, f.grid)) / m1.density;
        }
        bool stable = true;
        for (int s = 1; s < cfg.n_steps && stable; ++s) {
            f = step_penalized_imex(f, cfg.dt, p);
            stable = f.all_finite() && f.max_abs() <= cfg.blowup_factor * scale0;
        }
        rc.stable = stable && f.all_finite();
        rc.max_abs_final = f.max_abs();
        if (rc.stable) {
            const Moments mf = compute_moments(f);
            rc.dist_final = l1_distance(f, maxwellian(mf, f.grid)) / mf.density;
        }
        report.cases.push_back(rc);
    }

    // explicit probe at the smallest epsilon
    report.explicit_epsilon = cfg.epsilons.back();
    {
        StiffProblem p{report.explicit_epsilon, cfg.collision, cfg.mu, default_rho_floor};
        Distribution f = f0;
        report.explicit_unstable = false;
        for (int s = 0; s < cfg.n_steps; ++s) {
            f = step_explicit(f, cfg.dt, p, ExplicitMethod::rk4);
            report.explicit_steps_survived = s + 1;
            if (!f.all_finite() || f.max_abs() > cfg.blowup_factor * scale0) {
                report.explicit_unstable = true;
                break;
            }
        }
        report.explicit_max_abs = f.all_finite() ? f.max_abs() : std::numeric_limits<double>::infinity();
    }
    return report;
}

} // namespace kinet
