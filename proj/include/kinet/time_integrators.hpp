#ifndef KINET_TIME_INTEGRATORS_HPP
#define KINET_TIME_INTEGRATORS_HPP

#include <vector>

#include "kinet/dvm.hpp"
#include "kinet/spectral_collision.hpp"
#include "kinet/velocity_grid.hpp"

namespace kinet {

// Collision right-hand side Q(f,f) as a pure state-to-state map.
struct CollisionOperator {
    virtual ~CollisionOperator() = default;
    virtual Distribution apply(const Distribution& f) const = 0;
};

class SpectralDirectOperator : public CollisionOperator {
public:
    explicit SpectralDirectOperator(const KernelModes& km) : km_(&km) {}
    Distribution apply(const Distribution& f) const override;

private:
    const KernelModes* km_;
};

class SpectralFastOperator : public CollisionOperator {
public:
    explicit SpectralFastOperator(const SeparatedKernel& sk) : sk_(&sk) {}
    Distribution apply(const Distribution& f) const override;

private:
    const SeparatedKernel* sk_;
};

class DvmOperator : public CollisionOperator {
public:
    explicit DvmOperator(const CollisionTable& table) : table_(&table) {}
    Distribution apply(const Distribution& f) const override { return dvm_collision(f, *table_); }

private:
    const CollisionTable* table_;
};

class ZeroOperator : public CollisionOperator {
public:
    Distribution apply(const Distribution& f) const override { return Distribution(f.grid, 0.0); }
};

// Penalization strength: fixed value or mu = c * rho, floored away from zero.
struct MuRule {
    enum class Kind { fixed, c_rho };
    Kind kind = Kind::c_rho;
    double value = 1.0;
    double floor = 1e-12;

    double mu(double rho) const {
        const double m = kind == Kind::fixed ? value : value * rho;
        return m > floor ? m : floor;
    }
    static MuRule fixed(double v) { return {Kind::fixed, v, 1e-12}; }
    static MuRule c_rho(double c = 1.0) { return {Kind::c_rho, c, 1e-12}; }
};

// BGK relaxation surrogate mu(rho) (M[f] - f); the linear core the penalized
// schemes are exact on, usable anywhere a CollisionOperator is.
class BgkOperator : public CollisionOperator {
public:
    explicit BgkOperator(MuRule mu = MuRule::c_rho(), double rho_floor = default_rho_floor)
        : mu_(mu), rho_floor_(rho_floor) {}
    Distribution apply(const Distribution& f) const override;

private:
    MuRule mu_;
    double rho_floor_;
};

// df/dt = Q(f,f)/epsilon with the chosen collision evaluator and BGK
// penalization rule.
struct StiffProblem {
    double epsilon = 1.0;
    const CollisionOperator* collision = nullptr;
    MuRule mu = MuRule::c_rho();
    double rho_floor = default_rho_floor;
};

enum class ExplicitMethod { euler, rk4 };

// Explicit step (forward Euler or RK4); stability requires dt <~ epsilon.
Distribution step_explicit(const Distribution& f, double dt, const StiffProblem& p,
                           ExplicitMethod method = ExplicitMethod::rk4);

// First-order penalized IMEX step, implicit in L(f) = mu (M[f] - f), explicit
// in Q - L; the implicit solve is closed-form because the right-hand side
// conserves moments, hence M[f'] = M[f]:
//   f' = [f + (dt/eps)(Q(f,f) - mu(M - f)) + (dt mu/eps) M] / (1 + dt mu/eps)
Distribution step_penalized_imex(const Distribution& f, double dt, const StiffProblem& p);

// Exponential relaxation step.  With z = mu dt / eps and the deviation
// D = Q(f,f) - mu(M - f) frozen at the step start,
//   f' = e^-z f + (1 - e^-z) M + (dt/eps) e^-z D.
// Exact whenever Q = L (BGK core, any dt), first-order consistent in general,
// and the deviation weight (z/mu) e^-z stays bounded for all eps, so the
// eps -> 0 limit is exactly M[f].
Distribution step_exponential(const Distribution& f, double dt, const StiffProblem& p);

// --- AP diagnostic ----------------------------------------------------------

struct ApCaseResult {
    double epsilon = 0.0;
    bool stable = false;
    // one penalized-IMEX step on the BGK core: measured ||f1-M||/||f0-M||
    // against the algebraic factor eps/(eps + mu dt)
    double bgk_projection_measured = 0.0;
    double bgk_projection_predicted = 0.0;
    double bgk_dist_one_step = 0.0;  // ||f1 - M||_1 / rho on the BGK core
    double dist_one_step = 0.0;  // ||f1 - M[f1]||_1 / rho with the real operator
    double dist_final = 0.0;     // after n_steps
    double max_abs_final = 0.0;
};

struct ApReport {
    std::vector<ApCaseResult> cases;
    double explicit_epsilon = 0.0;
    bool explicit_unstable = false;
    double explicit_max_abs = 0.0;
    int explicit_steps_survived = 0;
};

struct ApDiagnosticConfig {
    const CollisionOperator* collision = nullptr;
    MuRule mu = MuRule::c_rho();
    double dt = 0.1;
    int n_steps = 10;
    std::vector<double> epsilons{1.0, 1e-2, 1e-4, 1e-6, 1e-8};
    double blowup_factor = 1e6;
};

// Runs the same dt across the epsilon sweep (homogeneous setting): penalized
// IMEX stability flags and equilibrium distances, plus an explicit-RK probe at
// the smallest epsilon with a blowup detector.
ApReport ap_diagnostic(const Distribution& f0, const ApDiagnosticConfig& cfg);

} // namespace kinet

#endif
