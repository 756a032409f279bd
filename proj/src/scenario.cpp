#include "kinet/scenario.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <random>

#include "kinet/bkw.hpp"
#include "kinet/distribution_io.hpp"
#include "kinet/transport_fluid.hpp"

namespace kinet {

namespace {

using ordered_json = nlohmann::ordered_json;

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw io_error("cannot open " + path + " for writing");
    os << text;
}

// ---- config builders --------------------------------------------------------

VelocityGrid grid_from(const ConfigMap& cfg) {
    const int dim = cfg.get_int("grid.dim", 2);
    const int n = cfg.get_int("grid.n");
    const double L = cfg.get_double("grid.half_width", pi);
    try {
        if (cfg.has("grid.trunc_radius"))
            return build_grid(dim, n, L, cfg.get_double("grid.trunc_radius"));
        return build_grid(dim, n, L);
    } catch (const invalid_parameter_error& e) {
        throw config_error("config: invalid [grid] section (grid.dim/grid.n/grid.half_width/"
                           "grid.trunc_radius): " +
                           std::string(e.what()));
    }
}

KernelId kernel_from(const ConfigMap& cfg, const VelocityGrid& grid) {
    const std::string type = cfg.get_string("kernel.type", "maxwell");
    const double C = cfg.get_double("kernel.C", 1.0 / (2.0 * pi));
    KernelId k;
    if (type == "maxwell") {
        k = KernelId::maxwell(C);
    } else if (type == "vhs") {
        k = KernelId::vhs(C, cfg.get_double("kernel.alpha"));
    } else {
        throw config_error("config: kernel.type must be maxwell or vhs, got '" + type + "'");
    }
    const std::string scaling = cfg.get_string("kernel.scaling", "mapped");
    if (scaling == "physical") {
        // mapped-operator constant reproducing the physical-units operator
        k.C *= std::pow(grid.half_width() / pi, grid.dim() + k.alpha);
    } else if (scaling != "mapped") {
        throw config_error("config: kernel.scaling must be mapped or physical");
    }
    return k;
}

unsigned long seed_from(const ConfigMap& cfg, const RunOptions& opt) {
    return opt.seed != 0 ? opt.seed
                         : static_cast<unsigned long>(cfg.get_int("scenario.seed", 12345));
}

Distribution initial_from(const ConfigMap& cfg, const VelocityGrid& grid, unsigned long seed) {
    const std::string type = cfg.get_string("initial.type", "gaussian");
    if (type == "bkw") {
        return bkw_distribution(grid, cfg.get_double("initial.T", 0.16),
                                cfg.get_double("initial.K0", 0.5),
                                cfg.get_double("initial.rho", 1.0));
    }
    if (type == "maxwellian") {
        Moments m;
        m.density = cfg.get_double("initial.rho", 1.0);
        m.mean_velocity = {cfg.get_double("initial.u1", 0.0), cfg.get_double("initial.u2", 0.0), 0.0};
        m.temperature = cfg.get_double("initial.T", 1.0);
        return maxwellian(m, grid);
    }
    if (type == "gaussian") {
        const double T1 = cfg.get_double("initial.T1", 1.3225);
        const double T2 = cfg.get_double("initial.T2", 0.2025);
        const double u1 = cfg.get_double("initial.u1", 0.15);
        const double u2 = cfg.get_double("initial.u2", -0.1);
        const double rho = cfg.get_double("initial.rho", 1.0);
        Distribution f(grid);
        for (std::size_t j = 0; j < f.size(); ++j) {
            const double d1 = grid.node_component(j, 0) - u1;
            const double d2 = grid.node_component(j, 1) - u2;
            f.values[j] = rho / (2.0 * pi * std::sqrt(T1 * T2)) *
                          std::exp(-0.5 * (d1 * d1 / T1 + d2 * d2 / T2));
        }
        return f;
    }
    if (type == "random") {
        // seeded smooth positive state: Maxwellian with random low-mode
        // trigonometric modulation
        Moments m;
        m.density = 1.0;
        m.mean_velocity = {0.0, 0.0, 0.0};
        m.temperature = cfg.get_double("initial.T", 1.0);
        Distribution f = maxwellian(m, grid);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-0.3, 0.3);
        const double a = u(rng), b = u(rng), c = u(rng);
        const double map = grid.map_to_pi();
        for (std::size_t j = 0; j < f.size(); ++j) {
            const double v1 = map * grid.node_component(j, 0), v2 = map * grid.node_component(j, 1);
            f.values[j] *= 1.0 + a * std::sin(v1) + b * std::cos(v2) + c * std::sin(v1 + v2);
        }
        return f;
    }
    throw config_error("config: initial.type '" + type + "' is not one of gaussian|bkw|maxwellian|random");
}

// quadrature-oracle evaluator: slow reference path, guarded by the n <= 24
// resource limit unless --force
class OracleOperator : public CollisionOperator {
public:
    OracleOperator(KernelId kernel, double R, int n_angle, bool force)
        : kernel_(kernel), R_(R), n_angle_(n_angle), force_(force) {}
    Distribution apply(const Distribution& f) const override {
        return collision_quadrature_oracle(f, kernel_, R_, n_angle_, force_);
    }

private:
    KernelId kernel_;
    double R_;
    int n_angle_;
    bool force_;
};

struct CollisionSetup {
    KernelModes km;
    SeparatedKernel sk;
    std::unique_ptr<CollisionOperator> op;
    std::string evaluator;
    int rank = 0;
};

CollisionSetup collision_from(const ConfigMap& cfg, const VelocityGrid& grid,
                              const RunOptions& opt) {
    CollisionSetup setup;
    setup.evaluator = cfg.get_string("collision.evaluator", "fast");
    const std::string cache =
        cfg.get_string("kernel.cache_dir", opt.out_dir + "/kernel_cache");
    const double level = cfg.get_double("kernel.quadrature_level", 2.0);
    const KernelId kernel = kernel_from(cfg, grid);
    if (setup.evaluator == "bgk") {
        setup.op = std::make_unique<BgkOperator>();
        return setup;
    }
    if (setup.evaluator == "oracle") {
        setup.op = std::make_unique<OracleOperator>(kernel, grid.trunc_radius(),
                                                    cfg.get_int("collision.n_angle", 32), opt.force);
        return setup;
    }
    setup.km = compute_kernel_modes(grid, kernel, grid.trunc_radius(), level, cache);
    if (setup.evaluator == "direct") {
        setup.op = std::make_unique<SpectralDirectOperator>(setup.km);
    } else if (setup.evaluator == "fast") {
        setup.rank = cfg.get_int("collision.rank", 24);
        if (setup.rank <= 0) setup.rank = static_cast<int>(setup.km.max_rank());
        setup.sk = decompose_kernel(setup.km, setup.rank);
        setup.op = std::make_unique<SpectralFastOperator>(setup.sk);
    } else {
        throw config_error("config: collision.evaluator must be fast, direct, bgk or oracle");
    }
    return setup;
}

StepperKind stepper_from(const std::string& name) {
    if (name == "euler") return StepperKind::explicit_euler;
    if (name == "rk4") return StepperKind::explicit_rk4;
    if (name == "imex") return StepperKind::penalized_imex;
    if (name == "exponential") return StepperKind::exponential;
    throw config_error("config: stepper.type '" + name + "' is not one of euler|rk4|imex|exponential");
}

Distribution apply_stepper(const Distribution& f, double dt, const StiffProblem& p,
                           StepperKind kind) {
    switch (kind) {
        case StepperKind::explicit_euler: return step_explicit(f, dt, p, ExplicitMethod::euler);
        case StepperKind::explicit_rk4: return step_explicit(f, dt, p, ExplicitMethod::rk4);
        case StepperKind::penalized_imex: return step_penalized_imex(f, dt, p);
        case StepperKind::exponential: return step_exponential(f, dt, p);
    }
    throw error("unreachable");
}

// ---- homogeneous relaxation / bkw verification ------------------------------

ScenarioResult run_homogeneous(const ConfigMap& cfg, const RunOptions& opt, bool bkw_mode) {
    const VelocityGrid grid = grid_from(cfg);
    const unsigned long seed = seed_from(cfg, opt);
    CollisionSetup collision = collision_from(cfg, grid, opt);
    const double dt = cfg.get_double("stepper.dt", 0.01);
    const double t_end = cfg.get_double("stepper.t_end", 5.0);
    const double eps = cfg.get_double("stepper.epsilon", 1.0);
    const StepperKind kind = stepper_from(cfg.get_string("stepper.type", "rk4"));
    const int cadence = cfg.get_int("output.cadence", 10);
    const double m4_tol = cfg.get_double("check.m4_tolerance", 1e-2);
    const double entropy_tol = cfg.get_double("check.entropy_increase_tolerance", 1e-8);

    if (bkw_mode && cfg.get_string("initial.type", "bkw") != "bkw")
        throw config_error("config: initial.type must be bkw for bkw-verification");
    const double bkw_T = cfg.get_double("initial.T", 0.16);
    const double bkw_K0 = cfg.get_double("initial.K0", 0.5);
    Distribution f =
        bkw_mode ? bkw_distribution(grid, bkw_T, bkw_K0) : initial_from(cfg, grid, seed);
    StiffProblem p{eps, collision.op.get(), MuRule::c_rho(cfg.get_double("stepper.mu_c", 1.0))};
    // analytic BKW rate uses the physical-units kernel constant
    const KernelId kmapped = kernel_from(cfg, grid);
    const double C_phys = kmapped.C / std::pow(grid.half_width() / pi, grid.dim() + kmapped.alpha);
    cfg.reject_unknown();

    const int steps = static_cast<int>(std::llround(t_end / dt));
    const Moments m0 = compute_moments(f);
    const double tol_neg = 1e-2 * f.max_abs();

    std::string moments_csv = "t,rho,u1,u2,T,E,M4,eq_distance\n";
    std::string entropy_csv = "t,H\n";
    double H_prev = std::numeric_limits<double>::infinity();
    double entropy_max_increase = 0.0;
    double max_rel_m4 = 0.0;
    double first_dist = 0.0, last_dist = 0.0, min_f = 0.0;

    const double t0 = now_ms();
    for (int s = 0; s <= steps; ++s) {
        const double t = s * dt;
        if (s % cadence == 0 || s == steps) {
            const Moments m = compute_moments(f);
            const double m4 = fourth_moment(f);
            const double dist = l1_distance(f, maxwellian(m, grid)) / m.density;
            if (s == 0) first_dist = dist;
            last_dist = dist;
            min_f = std::min(min_f, f.min_value());
            moments_csv += fmt(t) + "," + fmt(m.density) + "," + fmt(m.mean_velocity[0]) + "," +
                           fmt(m.mean_velocity[1]) + "," + fmt(m.temperature) + "," + fmt(m.energy) +
                           "," + fmt(m4) + "," + fmt(dist) + "\n";
            const double H = entropy(f, tol_neg);
            entropy_csv += fmt(t) + "," + fmt(H) + "\n";
            if (H > H_prev) entropy_max_increase = std::max(entropy_max_increase, (H - H_prev) / std::abs(H));
            H_prev = H;
            if (bkw_mode) {
                const double K = bkw_K_of_t(t, bkw_K0, C_phys);
                const double m4a = bkw_fourth_moment(bkw_T, K);
                max_rel_m4 = std::max(max_rel_m4, std::abs(m4 - m4a) / m4a);
            }
        }
        if (s < steps) f = apply_stepper(f, dt, p, kind);
    }
    const double elapsed = now_ms() - t0;

    const Moments mN = compute_moments(f);
    ScenarioResult result;
    result.metrics["mass_drift_rel"] = std::abs(mN.density - m0.density) / m0.density;
    result.metrics["momentum_drift_abs"] =
        std::abs(mN.density * mN.mean_velocity[0] - m0.density * m0.mean_velocity[0]) +
        std::abs(mN.density * mN.mean_velocity[1] - m0.density * m0.mean_velocity[1]);
    result.metrics["energy_drift_rel"] = std::abs(mN.energy - m0.energy) / m0.energy;
    result.metrics["entropy_max_increase_rel"] = entropy_max_increase;
    result.metrics["initial_eq_distance"] = first_dist;
    result.metrics["final_eq_distance"] = last_dist;
    result.metrics["min_f"] = min_f;
    if (bkw_mode) result.metrics["max_rel_m4_error"] = max_rel_m4;

    bool ok = entropy_max_increase <= entropy_tol;
    if (bkw_mode)
        ok = ok && max_rel_m4 <= m4_tol;
    else if (first_dist > 1e-10)
        ok = ok && last_dist <= 0.5 * first_dist;
    result.checks_passed = ok;

    ordered_json rep;
    rep["scenario"] = bkw_mode ? "bkw-verification" : "homogeneous-relaxation";
    rep["seed"] = seed;
    rep["grid"] = {{"n", grid.n_per_dim()}, {"half_width", grid.half_width()},
                   {"trunc_radius", grid.trunc_radius()}};
    rep["evaluator"] = collision.evaluator;
    if (collision.rank > 0) {
        rep["rank"] = collision.rank;
        rep["reconstruction_error"] = collision.sk.reconstruction_error;
    }
    for (const auto& [k, v] : result.metrics) rep[k] = v;
    rep["checks_passed"] = result.checks_passed;
    result.report_json = rep.dump(2) + "\n";

    write_text(opt.out_dir + "/moments.csv", moments_csv);
    write_text(opt.out_dir + "/entropy.csv", entropy_csv);
    write_distribution_binary(f, opt.out_dir + "/final_distribution.bin");
    write_distribution_csv(f, opt.out_dir + "/final_distribution.csv");
    write_text(opt.out_dir + "/report.json", result.report_json);
    write_text(opt.out_dir + "/timings.json",
               ordered_json{{"run_ms", elapsed}}.dump(2) + "\n");
    return result;
}

// ---- sod kinetic vs euler ----------------------------------------------------

ScenarioResult run_sod(const ConfigMap& cfg, const RunOptions& opt) {
    const VelocityGrid grid = grid_from(cfg);
    CollisionSetup collision = collision_from(cfg, grid, opt);
    const double eps = cfg.get_double("stepper.epsilon", 1e-6);
    const StepperKind kind = stepper_from(cfg.get_string("stepper.type", "imex"));
    const double t_end = cfg.get_double("stepper.t_end", 0.1);
    const int n_cells = cfg.get_int("transport.n_cells", 200);
    const double cfl = cfg.get_double("transport.cfl", 0.45);
    const double tol = cfg.get_double("check.l1_tolerance", 0.02);
    const unsigned long seed = seed_from(cfg, opt);
    const int d = grid.dim();
    const double gamma = (d + 2.0) / d;

    const double rho_l = cfg.get_double("transport.rho_left", 1.0);
    const double p_l = cfg.get_double("transport.p_left", 1.0);
    const double rho_r = cfg.get_double("transport.rho_right", 0.125);
    const double p_r = cfg.get_double("transport.p_right", 0.1);
    cfg.reject_unknown();

    const SpatialMesh mesh(n_cells, 0.0, 1.0, SpatialMesh::Bc::free_outflow);
    FluidState fluid(mesh, gamma);
    for (int c = 0; c < n_cells; ++c) {
        const double x = mesh.center(c);
        const double rho = x < 0.5 ? rho_l : rho_r;
        const double prs = x < 0.5 ? p_l : p_r;
        fluid.u[c] = {rho, 0.0, prs / (gamma - 1.0)};
    }

    const double t0 = now_ms();
    // kinetic run
    KineticField kf = kinetic_from_fluid(fluid, grid);
    StiffProblem p{eps, collision.op.get(), MuRule::c_rho(cfg.get_double("stepper.mu_c", 1.0))};
    double vmax = 0.0;
    for (std::size_t j = 0; j < grid.node_count(); ++j)
        vmax = std::max(vmax, std::abs(grid.node_component(j, 0)));
    int kinetic_steps = 0;
    for (double t = 0.0; t < t_end;) {
        double dt = cfl * mesh.dx() / vmax;
        dt = std::min(dt, t_end - t);
        kf = split_step(kf, dt, p, kind, opt.threads);
        t += dt;
        ++kinetic_steps;
    }
    const double t_kinetic = now_ms() - t0;

    // Euler reference on the same mesh
    FluidState euler = fluid;
    int euler_steps = 0;
    for (double t = 0.0; t < t_end;) {
        double dt = cfl * mesh.dx() / euler_max_wave_speed(euler);
        dt = std::min(dt, t_end - t);
        euler = euler_step(euler, dt);
        t += dt;
        ++euler_steps;
    }
    const double t_euler = now_ms() - t0 - t_kinetic;

    const FluidState kin_moments = fluid_from_kinetic(kf);
    double l1 = 0.0, norm = 0.0;
    std::string profiles = "x,rho_kinetic,w_kinetic,T_kinetic,p_kinetic,rho_euler,w_euler,p_euler\n";
    for (int c = 0; c < n_cells; ++c) {
        const auto& uk = kin_moments.u[c];
        const double wk = uk[1] / uk[0];
        const double pk = kin_moments.pressure(c);
        profiles += fmt(mesh.center(c)) + "," + fmt(uk[0]) + "," + fmt(wk) + "," +
                    fmt(pk / uk[0]) + "," + fmt(pk) + "," + fmt(euler.u[c][0]) + "," +
                    fmt(euler.u[c][1] / euler.u[c][0]) + "," + fmt(euler.pressure(c)) + "\n";
        l1 += std::abs(uk[0] - euler.u[c][0]) * mesh.dx();
        norm += euler.u[c][0] * mesh.dx();
    }

    ScenarioResult result;
    result.metrics["l1_density_rel"] = l1 / norm;
    result.metrics["kinetic_steps"] = kinetic_steps;
    result.metrics["euler_steps"] = euler_steps;
    result.checks_passed = l1 / norm <= tol;

    ordered_json rep;
    rep["scenario"] = "sod-kinetic";
    rep["seed"] = seed;
    rep["grid"] = {{"n", grid.n_per_dim()}, {"half_width", grid.half_width()}};
    rep["n_cells"] = n_cells;
    rep["epsilon"] = eps;
    rep["gamma"] = gamma;
    for (const auto& [k, v] : result.metrics) rep[k] = v;
    rep["checks_passed"] = result.checks_passed;
    result.report_json = rep.dump(2) + "\n";

    write_text(opt.out_dir + "/profiles.csv", profiles);
    write_text(opt.out_dir + "/report.json", result.report_json);
    write_text(opt.out_dir + "/timings.json",
               ordered_json{{"kinetic_ms", t_kinetic}, {"euler_ms", t_euler}}.dump(2) + "\n");
    return result;
}

// ---- kernel-mode build / benchmark -------------------------------------------

ScenarioResult run_kernel_build(const ConfigMap& cfg, const RunOptions& opt) {
    const VelocityGrid grid = grid_from(cfg);
    const KernelId kernel = kernel_from(cfg, grid);
    const double level = cfg.get_double("kernel.quadrature_level", 2.0);
    const std::string cache = cfg.get_string("kernel.cache_dir", opt.out_dir + "/kernel_cache");
    const bool benchmark = cfg.get_bool("benchmark.enabled", false);
    const int bench_rank = cfg.get_int("benchmark.rank", 8);
    const int bench_reps = cfg.get_int("benchmark.reps", 20);
    const std::string rank_sweep = cfg.get_string("decompose.ranks", "");
    const bool bench_direct = cfg.get_bool("benchmark.direct", true);
    const unsigned long seed = seed_from(cfg, opt);
    cfg.reject_unknown();

    const double t0 = now_ms();
    const KernelModes km = compute_kernel_modes(grid, kernel, grid.trunc_radius(), level, cache);
    const double t_build = now_ms() - t0;

    double beta_max = 0.0;
    for (const cplx& v : km.beta) beta_max = std::max(beta_max, std::abs(v));

    ScenarioResult result;
    result.metrics["self_check_error"] = km.self_check_error;
    result.metrics["beta_max"] = beta_max;
    result.metrics["sep_terms"] = static_cast<double>(km.sep_terms);

    ordered_json rep;
    rep["scenario"] = "kernel-mode-build";
    rep["seed"] = seed;
    rep["grid"] = {{"n", grid.n_per_dim()}, {"half_width", grid.half_width()},
                   {"trunc_radius", grid.trunc_radius()}};
    rep["kernel"] = kernel.describe();
    rep["quadrature_level"] = level;
    rep["n_phi"] = km.n_phi;
    rep["self_check_error"] = km.self_check_error;
    rep["beta_max"] = beta_max;
    rep["sep_terms"] = km.sep_terms;

    if (!rank_sweep.empty()) {
        ordered_json sweep = ordered_json::array();
        std::istringstream ss(rank_sweep);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            const int A = std::stoi(tok);
            const SeparatedKernel sk = decompose_kernel(km, A);
            sweep.push_back({{"rank", A}, {"reconstruction_error", sk.reconstruction_error}});
        }
        rep["rank_sweep"] = sweep;
    }

    ordered_json timings;
    timings["build_ms"] = t_build;
    if (benchmark) {
        const SeparatedKernel sk = decompose_kernel(km, bench_rank);
        SpectralCoefficients c(grid);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (cplx& v : c.coeffs) v = cplx{u(rng), u(rng)};
        // warmup + best-of-reps
        spectral_collision_fast(c, sk);
        double fast_best = 1e300;
        for (int r = 0; r < bench_reps; ++r) {
            const double a = now_ms();
            spectral_collision_fast(c, sk);
            fast_best = std::min(fast_best, now_ms() - a);
        }
        timings["fast_ms"] = fast_best;
        timings["rank"] = bench_rank;
        if (bench_direct) {
            spectral_collision_direct(c, km);
            double direct_best = 1e300;
            for (int r = 0; r < std::max(3, bench_reps / 4); ++r) {
                const double a = now_ms();
                spectral_collision_direct(c, km);
                direct_best = std::min(direct_best, now_ms() - a);
            }
            timings["direct_ms"] = direct_best;
            result.metrics["speedup"] = direct_best / fast_best;
        }
        result.metrics["fast_ms"] = fast_best;
    }

    result.checks_passed = km.self_check_error <= 1e-6;
    rep["checks_passed"] = result.checks_passed;
    result.report_json = rep.dump(2) + "\n";
    write_text(opt.out_dir + "/report.json", result.report_json);
    write_text(opt.out_dir + "/timings.json", timings.dump(2) + "\n");
    return result;
}

// ---- convergence studies ------------------------------------------------------

std::vector<int> parse_int_list(const std::string& text, const std::vector<int>& fallback) {
    if (text.empty()) return fallback;
    std::vector<int> out;
    std::istringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoi(tok));
    return out;
}

ScenarioResult run_convergence(const ConfigMap& cfg, const RunOptions& opt) {
    const std::string study = cfg.get_string("study.type", "spectral-self");
    const unsigned long seed = seed_from(cfg, opt);

    ordered_json rep;
    rep["scenario"] = "convergence-study";
    rep["seed"] = seed;
    rep["study"] = study;
    ScenarioResult result;
    std::string table_csv;

    if (study == "spectral-self") {
        const std::vector<int> ns = parse_int_list(cfg.get_string("study.n_list", ""), {8, 16, 24, 32});
        const double sigma = cfg.get_double("study.sigma", 0.45);
        const double aniso = cfg.get_double("study.anisotropy", 0.7);
        const std::string cache = cfg.get_string("kernel.cache_dir", opt.out_dir + "/kernel_cache");
        const double level = cfg.get_double("kernel.quadrature_level", 2.0);
        cfg.reject_unknown();

        // reference: finest grid's coefficients
        const int n_ref = ns.back();
        std::map<int, SpectralCoefficients> results;
        for (int n : ns) {
            const VelocityGrid g = build_grid(2, n, pi);
            Distribution f(g);
            const double T1 = sigma * sigma, T2 = aniso * aniso * sigma * sigma;
            for (std::size_t j = 0; j < f.size(); ++j) {
                const double v1 = g.node_component(j, 0), v2 = g.node_component(j, 1);
                f.values[j] = std::exp(-0.5 * (v1 * v1 / T1 + v2 * v2 / T2));
            }
            const KernelModes km = compute_kernel_modes(g, KernelId::maxwell(), g.trunc_radius(),
                                                        level, cache);
            results.emplace(n, spectral_collision_direct(forward_transform(f), km));
        }
        table_csv = "n,error,observed_order\n";
        ordered_json rows = ordered_json::array();
        double prev_err = 0.0;
        int prev_n = 0;
        std::vector<double> orders;
        for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
            const int n = ns[i];
            const SpectralCoefficients& q = results.at(n);
            const SpectralCoefficients& ref = results.at(n_ref);
            double err = 0.0;
            int k[2];
            for (std::size_t idx = 0; idx < q.coeffs.size(); ++idx) {
                q.modes.unflatten(idx, k);
                err = std::max(err, std::abs(q.coeffs[idx] - ref.at(k)));
            }
            double order = 0.0;
            if (prev_n > 0 && err > 0.0) order = std::log(prev_err / err) / std::log(double(n) / prev_n);
            orders.push_back(order);
            rows.push_back({{"n", n}, {"error", err}, {"observed_order", order}});
            table_csv += std::to_string(n) + "," + fmt(err) + "," + fmt(order) + "\n";
            prev_err = err;
            prev_n = n;
        }
        rep["rows"] = rows;
        // superalgebraic signature: observed order increases with n
        bool increasing = true;
        for (std::size_t i = 2; i < orders.size(); ++i)
            if (orders[i] <= orders[i - 1]) increasing = false;
        result.checks_passed = increasing;
        result.metrics["final_order"] = orders.empty() ? 0.0 : orders.back();
    } else if (study == "dvm-vs-spectral") {
        const std::vector<int> ns = parse_int_list(cfg.get_string("study.n_list", ""), {8, 12, 16});
        const double S = cfg.get_double("study.cross_section", 1.0);
        const std::string cache = cfg.get_string("kernel.cache_dir", opt.out_dir + "/kernel_cache");
        const double level = cfg.get_double("kernel.quadrature_level", 2.0);
        cfg.reject_unknown();

        // the lattice sum carries no cell-volume weight, so uniform-weight DVM
        // approximates the VHS alpha=1 operator with B = S |g| / (2 pi h^2);
        // compare both on the same L=pi grids
        table_csv = "n,rel_l2_vs_spectral,observed_order\n";
        ordered_json rows = ordered_json::array();
        double prev_err = 0.0;
        int prev_n = 0;
        for (int n : ns) {
            const VelocityGrid g = build_grid(2, n, pi);
            Distribution f(g);
            for (std::size_t j = 0; j < f.size(); ++j) {
                const double v1 = g.node_component(j, 0) - 0.2, v2 = g.node_component(j, 1);
                f.values[j] = std::exp(-0.5 * (v1 * v1 / 0.36 + v2 * v2 / 0.2));
            }
            const CollisionTable table = enumerate_collisions(g, S);
            const Distribution q_dvm = dvm_collision(f, table);
            const double h = g.spacing();
            const KernelModes km = compute_kernel_modes(
                g, KernelId::vhs(S / (2.0 * pi * h * h), 1.0), g.trunc_radius(), level, cache);
            double residue = 0.0;
            const Distribution q_sp =
                inverse_transform(spectral_collision_direct(forward_transform(f), km), &residue);
            double num = 0.0, den = 0.0;
            for (std::size_t j = 0; j < f.size(); ++j) {
                const double d = q_dvm.values[j] - q_sp.values[j];
                num += d * d;
                den += q_sp.values[j] * q_sp.values[j];
            }
            const double err = std::sqrt(num / den);
            double order = 0.0;
            if (prev_n > 0) order = std::log(prev_err / err) / std::log(double(n) / prev_n);
            rows.push_back({{"n", n}, {"rel_l2_vs_spectral", err}, {"observed_order", order}});
            table_csv += std::to_string(n) + "," + fmt(err) + "," + fmt(order) + "\n";
            prev_err = err;
            prev_n = n;
        }
        rep["rows"] = rows;
        rep["note"] = "observed order reported, not asserted";
        result.checks_passed = true;
        result.metrics["final_rel_l2"] = prev_err;
    } else if (study == "transport") {
        const std::vector<int> cells = parse_int_list(cfg.get_string("study.n_list", ""), {32, 64, 128, 256});
        cfg.reject_unknown();
        // advect a smooth profile at a single velocity node and compare with
        // the exact shift
        table_csv = "n_cells,l1_error,observed_order\n";
        ordered_json rows = ordered_json::array();
        const VelocityGrid g = build_grid(2, 4, 2.0);
        std::size_t node = 0;
        for (std::size_t j = 0; j < g.node_count(); ++j)
            if (g.node_component(j, 0) > g.node_component(node, 0)) node = j;
        const double v1 = g.node_component(node, 0);
        double prev_err = 0.0;
        int prev_n = 0;
        std::vector<double> orders;
        for (int nc : cells) {
            KineticField field(SpatialMesh(nc, 0.0, 1.0, SpatialMesh::Bc::periodic), g);
            for (int c = 0; c < nc; ++c)
                field.cells[c].values[node] = 1.0 + std::sin(2.0 * pi * field.mesh.center(c));
            const double t_end = 0.25;
            const double dt0 = 0.5 * field.mesh.dx() / v1;
            int steps = static_cast<int>(std::ceil(t_end / dt0));
            const double dt = t_end / steps;
            for (int s = 0; s < steps; ++s) field = advect(field, dt);
            double err = 0.0;
            for (int c = 0; c < nc; ++c) {
                const double exact = 1.0 + std::sin(2.0 * pi * (field.mesh.center(c) - v1 * t_end));
                err += std::abs(field.cells[c].values[node] - exact) * field.mesh.dx();
            }
            double order = 0.0;
            if (prev_n > 0) order = std::log(prev_err / err) / std::log(double(nc) / prev_n);
            if (prev_n > 0) orders.push_back(order);
            rows.push_back({{"n_cells", nc}, {"l1_error", err}, {"observed_order", order}});
            table_csv += std::to_string(nc) + "," + fmt(err) + "," + fmt(order) + "\n";
            prev_err = err;
            prev_n = nc;
        }
        rep["rows"] = rows;
        bool first_order = !orders.empty();
        for (double o : orders) first_order = first_order && o > 0.7 && o < 1.3;
        result.checks_passed = first_order;
        result.metrics["final_order"] = orders.empty() ? 0.0 : orders.back();
    } else {
        throw config_error("config: study.type '" + study +
                           "' is not one of spectral-self|dvm-vs-spectral|transport");
    }

    rep["checks_passed"] = result.checks_passed;
    result.report_json = rep.dump(2) + "\n";
    write_text(opt.out_dir + "/report.json", result.report_json);
    write_text(opt.out_dir + "/table.csv", table_csv);
    return result;
}

// ---- ap sweep -----------------------------------------------------------------

ScenarioResult run_ap_sweep(const ConfigMap& cfg, const RunOptions& opt) {
    const VelocityGrid grid = grid_from(cfg);
    const unsigned long seed = seed_from(cfg, opt);
    CollisionSetup collision = collision_from(cfg, grid, opt);
    ApDiagnosticConfig diag;
    diag.collision = collision.op.get();
    diag.dt = cfg.get_double("stepper.dt", 0.1);
    diag.n_steps = cfg.get_int("stepper.n_steps", 10);
    diag.mu = MuRule::c_rho(cfg.get_double("stepper.mu_c", 1.0));
    const double dist_tol = cfg.get_double("check.eq_distance_tolerance", 1e-6);
    const Distribution f0 = initial_from(cfg, grid, seed);
    cfg.reject_unknown();

    const double t0 = now_ms();
    const ApReport ap = ap_diagnostic(f0, diag);
    const double elapsed = now_ms() - t0;

    ScenarioResult result;
    ordered_json rep;
    rep["scenario"] = "ap-sweep";
    rep["seed"] = seed;
    rep["grid"] = {{"n", grid.n_per_dim()}, {"half_width", grid.half_width()}};
    rep["dt"] = diag.dt;
    ordered_json cases = ordered_json::array();
    bool all_stable = true;
    for (const ApCaseResult& c : ap.cases) {
        cases.push_back({{"epsilon", c.epsilon},
                         {"stable", c.stable},
                         {"bgk_projection_measured", c.bgk_projection_measured},
                         {"bgk_projection_predicted", c.bgk_projection_predicted},
                         {"bgk_dist_one_step", c.bgk_dist_one_step},
                         {"dist_one_step", c.dist_one_step},
                         {"dist_final", c.dist_final}});
        all_stable = all_stable && c.stable;
    }
    rep["cases"] = cases;
    rep["explicit_epsilon"] = ap.explicit_epsilon;
    rep["explicit_unstable"] = ap.explicit_unstable;
    rep["explicit_steps_survived"] = ap.explicit_steps_survived;

    const double smallest_dist = ap.cases.back().bgk_dist_one_step;
    result.metrics["bgk_dist_one_step_smallest_eps"] = smallest_dist;
    result.metrics["all_imex_stable"] = all_stable ? 1.0 : 0.0;
    result.metrics["explicit_unstable"] = ap.explicit_unstable ? 1.0 : 0.0;
    result.checks_passed = all_stable && ap.explicit_unstable && smallest_dist <= dist_tol;
    rep["checks_passed"] = result.checks_passed;
    result.report_json = rep.dump(2) + "\n";
    write_text(opt.out_dir + "/report.json", result.report_json);
    write_text(opt.out_dir + "/timings.json", ordered_json{{"run_ms", elapsed}}.dump(2) + "\n");
    return result;
}

} // namespace

ScenarioResult run_scenario(const ConfigMap& cfg, const RunOptions& opt) {
    std::filesystem::create_directories(opt.out_dir);
    const std::string kind = cfg.get_string("scenario.kind");
    if (kind == "homogeneous-relaxation") return run_homogeneous(cfg, opt, false);
    if (kind == "bkw-verification") return run_homogeneous(cfg, opt, true);
    if (kind == "sod-kinetic") return run_sod(cfg, opt);
    if (kind == "kernel-mode-build") return run_kernel_build(cfg, opt);
    if (kind == "convergence-study") return run_convergence(cfg, opt);
    if (kind == "ap-sweep") return run_ap_sweep(cfg, opt);
    throw config_error("config: scenario.kind '" + kind +
                       "' is not one of homogeneous-relaxation|bkw-verification|sod-kinetic|"
                       "kernel-mode-build|convergence-study|ap-sweep");
}

} // namespace kinet
