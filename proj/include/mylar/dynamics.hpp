#pragma once

// Gyroscope on the balloon: configuration (u, v, psi), point mass m carrying
// a planar rotator with moment of inertia I. Kinetic energy
//   T = m r^2 / (2 cosh 2u) (u'^2 + v'^2) + I/2 (psi' + tanh 2u v')^2.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "mylar/errors.hpp"
#include "mylar/geometry.hpp"
#include "mylar/potential.hpp"

namespace mylar {

/// Canonical coordinates and conjugate momenta.
struct PhasePoint {
    double u = 0.0;
    double v = 0.0;
    double psi = 0.0;
    double p_u = 0.0;
    double p_v = 0.0;
    double p_psi = 0.0;
};

/// Coordinates with their time derivatives.
struct VelocityPoint {
    double u = 0.0;
    double v = 0.0;
    double psi = 0.0;
    double du = 0.0;
    double dv = 0.0;
    double dpsi = 0.0;
};

/// Time derivatives of a PhasePoint along the Hamiltonian flow.
struct PhaseRates {
    double du = 0.0;
    double dv = 0.0;
    double dpsi = 0.0;
    double dp_u = 0.0;
    double dp_v = 0.0;
    double dp_psi = 0.0;
};

/// Scalar entries of the antisymmetric 2x2 angular velocity matrices.
struct AngularVelocitySplit {
    double omega_total = 0.0;
    double omega_drift = 0.0;
    double omega_relative = 0.0;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Kinetic metric G_ij with T = (m/2) G_ij q'^i q'^j, its inverse and sqrt(det G).
struct ConfigMetric {
    Matrix3 g{};
    Matrix3 g_inv{};
    double sqrt_det = 0.0;
};

namespace dynamics {

inline double kinetic_energy(const VelocityPoint& s, const BalloonParams& params) {
    params.validate();
    const double c = std::cosh(2.0 * s.u);
    const double spin = s.dpsi + std::tanh(2.0 * s.u) * s.dv;
    return params.mr2() / (2.0 * c) * (s.du * s.du + s.dv * s.dv) + 0.5 * params.inertia * spin * spin;
}

inline double det3(const Matrix3& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

inline ConfigMetric config_metric(double u, const BalloonParams& params) {
    params.validate();
    const double r2 = params.r * params.r;
    const double c = std::cosh(2.0 * u);
    const double s = std::sinh(2.0 * u);
    const double t = std::tanh(2.0 * u);
    const double sech = 1.0 / c;
    const double eps = params.inertia / params.mr2();

    ConfigMetric out;
    out.g = {{{r2 * sech, 0.0, 0.0},
              {0.0, r2 * (sech + eps * t * t), r2 * eps * t},
              {0.0, r2 * eps * t, r2 * eps}}};
    out.g_inv = {{{c / r2, 0.0, 0.0},
                  {0.0, c / r2, -s / r2},
                  {0.0, -s / r2, (s * t + 1.0 / eps) / r2}}};
    out.sqrt_det = std::sqrt(det3(out.g));
    return out;
}

inline PhasePoint legendre(const VelocityPoint& s, const BalloonParams& params) {
    params.validate();
    const double k = params.mr2() / std::cosh(2.0 * s.u);
    const double t = std::tanh(2.0 * s.u);
    const double I = params.inertia;
    return {s.u,
            s.v,
            s.psi,
            k * s.du,
            (k + I * t * t) * s.dv + I * t * s.dpsi,
            I * (s.dpsi + t * s.dv)};
}

inline VelocityPoint legendre_inverse(const PhasePoint& p, const BalloonParams& params) {
    params.validate();
    const double c = std::cosh(2.0 * p.u);
    const double s = std::sinh(2.0 * p.u);
    const double t = std::tanh(2.0 * p.u);
    const double mr2 = params.mr2();
    // psi' written without the 1/sinh(2u) factor so that u = 0 is regular.
    return {p.u,
            p.v,
            p.psi,
            c * p.p_u / mr2,
            c * (p.p_v - t * p.p_psi) / mr2,
            p.p_psi / params.inertia + s * (t * p.p_psi - p.p_v) / mr2};
}

inline double hamiltonian(const PhasePoint& p, const PotentialModel& model, const BalloonParams& params) {
    params.validate();
    const double c = std::cosh(2.0 * p.u);
    const double t = std::tanh(2.0 * p.u);
    const double mr2 = params.mr2();
    const double kinetic =
        c / (2.0 * mr2) *
        (p.p_u * p.p_u + p.p_v * p.p_v - 2.0 * t * p.p_v * p.p_psi +
         (mr2 / (params.inertia * c) + t * t) * p.p_psi * p.p_psi);
    return kinetic + potential_eval(p.u, model);
}

/// Right-hand side of Hamilton's equations; v and psi are cyclic.
inline PhaseRates hamilton_rates(const PhasePoint& p, const PotentialModel& model,
                                 const BalloonParams& params) {
    const VelocityPoint vel = legendre_inverse(p, params);
    const double c = std::cosh(2.0 * p.u);
    const double s = std::sinh(2.0 * p.u);
    const double mr2 = params.mr2();
    // d/du of the kinetic term; uses d(sinh tanh)/du = 2 sinh (1 + sech^2).
    const double dT_du = (s * (p.p_u * p.p_u + p.p_v * p.p_v + p.p_psi * p.p_psi * (1.0 + 1.0 / (c * c))) -
                          2.0 * c * p.p_v * p.p_psi) /
                         mr2;
    return {vel.du, vel.dv, vel.dpsi, -(dT_du + potential_derivative(p.u, model)), 0.0, 0.0};
}

inline AngularVelocitySplit omega_split(const VelocityPoint& s, const BalloonParams& params) {
    params.validate();
    const double drift = std::tanh(2.0 * s.u) * s.dv;
    return {drift + s.dpsi, drift, s.dpsi};
}

}  // namespace dynamics

struct IntegratorControls {
    double rel_tol = 1e-12;
    double abs_tol = 1e-12;
    double initial_step = 1e-3;
    /// Steps shorter than this abort the run.
    double min_step = 1e-14;
    /// Spacing of output samples; 0 emits one sample per accepted step.
    double sample_interval = 0.0;
    std::size_t max_steps = 50'000'000;
};

/// Worst relative deviations seen at accepted steps.
struct DriftMonitor {
    double energy0 = 0.0;
    double max_energy_drift = 0.0;
    double max_pv_drift = 0.0;
    double max_ppsi_drift = 0.0;
};

struct TrajectorySample {
    double t = 0.0;
    PhasePoint state;
    /// Accumulated integral of p_u du since t = 0.
    double action_u = 0.0;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    DriftMonitor drift;
    std::size_t steps = 0;
};

struct LibrationResult {
    std::size_t librations = 0;
    /// Mean libration period.
    double period = 0.0;
    /// Integral of p_u du over the first complete libration.
    double first_action = 0.0;
    double mean_action = 0.0;
    /// Times where p_u changes sign from - to + (left turning points).
    std::vector<double> crossing_times;
    DriftMonitor drift;
    PhasePoint final_state;
    std::size_t steps = 0;
};

namespace dynamics {
namespace detail {

// Phase point plus the running integral of p_u du = p_u u' dt.
using State = std::array<double, 7>;

inline State pack(const PhasePoint& p) { return {p.u, p.v, p.psi, p.p_u, p.p_v, p.p_psi, 0.0}; }
inline PhasePoint unpack(const State& x) { return {x[0], x[1], x[2], x[3], x[4], x[5]}; }

struct CanonicalSystem {
    const PotentialModel* model;
    const BalloonParams* params;

    void operator()(const State& x, State& dxdt, double /*t*/) const {
        const PhasePoint p = unpack(x);
        const PhaseRates r = hamilton_rates(p, *model, *params);
        dxdt = {r.du, r.dv, r.dpsi, r.dp_u, r.dp_v, r.dp_psi, p.p_u * r.du};
    }
};

inline auto make_stepper(const IntegratorControls& controls) {
    namespace ode = boost::numeric::odeint;
    return ode::make_dense_output(controls.abs_tol, controls.rel_tol, ode::runge_kutta_dopri5<State>());
}

inline void check_controls(const IntegratorControls& controls) {
    if (!(controls.rel_tol > 0.0 && controls.abs_tol > 0.0 && controls.initial_step > 0.0 &&
          controls.min_step > 0.0 && controls.sample_interval >= 0.0))
        throw ParameterError("integrator controls must be positive");
}

inline void check_start(const PhasePoint& p) {
    for (double x : {p.u, p.v, p.psi, p.p_u, p.p_v, p.p_psi})
        if (!std::isfinite(x)) throw DomainError("trajectory start state is not finite");
}

inline double relative(double value, double ref) { return std::abs(value - ref) / std::max(std::abs(ref), 1.0); }

class Monitor {
public:
    Monitor(const PhasePoint& start, const PotentialModel& model, const BalloonParams& params)
        : model_(model), params_(params), start_(start) {
        drift_.energy0 = hamiltonian(start, model, params);
    }

    void observe(const State& x) {
        for (double xi : x)
            if (!std::isfinite(xi)) throw IntegrationError("non-finite state during integration");
        const PhasePoint p = unpack(x);
        drift_.max_energy_drift =
            std::max(drift_.max_energy_drift, relative(hamiltonian(p, model_, params_), drift_.energy0));
        drift_.max_pv_drift = std::max(drift_.max_pv_drift, relative(p.p_v, start_.p_v));
        drift_.max_ppsi_drift = std::max(drift_.max_ppsi_drift, relative(p.p_psi, start_.p_psi));
    }

    const DriftMonitor& drift() const { return drift_; }

private:
    const PotentialModel& model_;
    const BalloonParams& params_;
    PhasePoint start_;
    DriftMonitor drift_;
};

// Advances one accepted step, translating odeint failures.
template <class Stepper>
std::pair<double, double> advance(Stepper& stepper, const CanonicalSystem& sys, const IntegratorControls& controls) {
    std::pair<double, double> span;
    try {
        span = stepper.do_step(sys);
    } catch (const boost::numeric::odeint::odeint_error& e) {
        throw IntegrationError(std::string("integrator failure: ") + e.what());
    }
    if (stepper.current_time_step() < controls.min_step && span.second - span.first < controls.min_step)
        throw IntegrationError("step size underflow; the trajectory diverges");
    return span;
}

}  // namespace detail

/// Integrates Hamilton's equations with an adaptive Dormand-Prince 5(4) scheme.
inline Trajectory integrate_trajectory(const PhasePoint& start, const PotentialModel& model,
                                       const BalloonParams& params, double t_end,
                                       const IntegratorControls& controls = {}) {
    params.validate();
    validate_model(model);
    detail::check_controls(controls);
    detail::check_start(start);
    if (!(std::isfinite(t_end) && t_end > 0.0)) throw DomainError("t_end must be > 0");

    const detail::CanonicalSystem sys{&model, &params};
    auto stepper = detail::make_stepper(controls);
    stepper.initialize(detail::pack(start), 0.0, std::min(controls.initial_step, t_end));
    detail::Monitor monitor(start, model, params);

    Trajectory out;
    out.samples.push_back({0.0, start, 0.0});
    double next_sample = controls.sample_interval;
    detail::State x{};
    while (stepper.current_time() < t_end) {
        if (++out.steps > controls.max_steps) throw IntegrationError("maximum number of steps exceeded");
        const auto [t0, t1] = detail::advance(stepper, sys, controls);
        monitor.observe(stepper.current_state());
        if (controls.sample_interval > 0.0) {
            while (next_sample <= t1 && next_sample < t_end) {
                stepper.calc_state(next_sample, x);
                out.samples.push_back({next_sample, detail::unpack(x), x[6]});
                next_sample = controls.sample_interval * static_cast<double>(out.samples.size());
            }
        } else if (t1 < t_end) {
            const auto& cur = stepper.current_state();
            out.samples.push_back({t1, detail::unpack(cur), cur[6]});
        }
        (void)t0;
    }
    stepper.calc_state(t_end, x);
    out.samples.push_back({t_end, detail::unpack(x), x[6]});
    out.drift = monitor.drift();
    return out;
}

/// Integrates until `count` complete u-librations have elapsed, each delimited
/// by p_u crossing zero upwards (a left turning point).
inline LibrationResult integrate_librations(const PhasePoint& start, const PotentialModel& model,
                                            const BalloonParams& params, std::size_t count, double max_time,
                                            const IntegratorControls& controls = {}) {
    params.validate();
    validate_model(model);
    detail::check_controls(controls);
    detail::check_start(start);
    if (count == 0) throw DomainError("libration count must be >= 1");
    if (!(max_time > 0.0)) throw DomainError("max_time must be > 0");

    const detail::CanonicalSystem sys{&model, &params};
    auto stepper = detail::make_stepper(controls);
    stepper.initialize(detail::pack(start), 0.0, controls.initial_step);
    detail::Monitor monitor(start, model, params);

    LibrationResult out;
    std::vector<double> crossing_actions;
    detail::State prev = detail::pack(start);
    detail::State x{};
    while (out.crossing_times.size() < count + 1) {
        if (stepper.current_time() > max_time)
            throw IntegrationError("no complete libration within the time limit");
        if (++out.steps > controls.max_steps) throw IntegrationError("maximum number of steps exceeded");
        const auto [t0, t1] = detail::advance(stepper, sys, controls);
        const detail::State cur = stepper.current_state();
        monitor.observe(cur);
        if (prev[3] <= 0.0 && cur[3] > 0.0) {
            double lo = t0, hi = t1;
            if (prev[3] < 0.0) {
                for (int it = 0; it < 200 && hi - lo > 4e-16 * std::max(1.0, hi); ++it) {
                    const double mid = 0.5 * (lo + hi);
                    stepper.calc_state(mid, x);
                    (x[3] <= 0.0 ? lo : hi) = mid;
                }
            }
            stepper.calc_state(lo, x);
            out.crossing_times.push_back(lo);
            crossing_actions.push_back(x[6]);
        }
        prev = cur;
    }
    out.librations = count;
    out.period = (out.crossing_times.back() - out.crossing_times.front()) / static_cast<double>(count);
    out.first_action = crossing_actions[1] - crossing_actions[0];
    out.mean_action = (crossing_actions.back() - crossing_actions.front()) / static_cast<double>(count);
    out.final_state = detail::unpack(stepper.current_state());
    out.drift = monitor.drift();
    return out;
}

}  // namespace dynamics
}  // namespace mylar
