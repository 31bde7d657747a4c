#pragma once

// Mylar balloon in conformal coordinates (u, v):
//   x = r cos v / sqrt(cosh 2u),  y = r sin v / sqrt(cosh 2u),
//   z = sqrt(2) r [E(phi, 1/sqrt 2) - F(phi, 1/sqrt 2) / 2],
//   phi = asin(sqrt(2) sinh u / sqrt(cosh 2u)).
// The metric is conformal, g = r^2 / cosh(2u) (du^2 + dv^2).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "mylar/errors.hpp"
#include "mylar/specfun.hpp"

namespace mylar {

/// Balloon radius r, rotator mass m and scalar moment of inertia I.
struct BalloonParams {
    double r = 1.0;
    double m = 1.0;
    double inertia = 1.0;

    void validate() const {
        if (!(std::isfinite(r) && r > 0.0)) throw ParameterError("balloon radius r must be > 0");
        if (!(std::isfinite(m) && m > 0.0)) throw ParameterError("mass m must be > 0");
        if (!(std::isfinite(inertia) && inertia > 0.0))
            throw ParameterError("moment of inertia I must be > 0");
    }

    /// m r^2, the recurring combination in the kinetic term.
    double mr2() const { return m * r * r; }
};

struct SurfacePoint {
    double u = 0.0;
    double v = 0.0;
};

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Embedding evaluations saturate at |u| = 40; cosh(80) is still representable.
inline constexpr double kMaxConformalU = 40.0;

/// v reduced to [0, 2pi).
inline double wrap_angle(double angle) {
    const double two_pi = 2.0 * std::numbers::pi;
    double w = std::fmod(angle, two_pi);
    if (w < 0.0) w += two_pi;
    return w == two_pi ? 0.0 : w;
}

namespace geometry {

inline double clamp_u(double u) { return std::clamp(u, -kMaxConformalU, kMaxConformalU); }

/// Elliptic amplitude of the z-coordinate, asin(sqrt(2) sinh u / sqrt(cosh 2u)).
/// Uses cosh 2u = 1 + 2 sinh^2 u so the ratio never exceeds 1.
inline double profile_amplitude(double u) {
    const double w = std::numbers::sqrt2 * std::sinh(clamp_u(u));
    return std::asin(std::clamp(w / std::sqrt(1.0 + w * w), -1.0, 1.0));
}

/// Height of the profile curve; odd and increasing in u.
inline double profile_height(double u, const BalloonParams& params) {
    const double phi = profile_amplitude(u);
    const double k = std::numbers::sqrt2 / 2.0;
    return std::numbers::sqrt2 * params.r *
           (specfun::ellip_e(phi, k) - 0.5 * specfun::ellip_f(phi, k));
}

inline Point3 embed(const SurfacePoint& p, const BalloonParams& params) {
    params.validate();
    if (!std::isfinite(p.u) || !std::isfinite(p.v)) throw DomainError("embed: non-finite coordinate");
    const double u = clamp_u(p.u);
    const double rho = params.r / std::sqrt(std::cosh(2.0 * u));
    return {rho * std::cos(p.v), rho * std::sin(p.v), profile_height(u, params)};
}

/// Coefficients of a diagonal quadratic form  a du^2 + b dv^2.
struct FormCoefficients {
    double du2 = 0.0;
    double dv2 = 0.0;
};

struct FundamentalForms {
    FormCoefficients first;
    FormCoefficients second;
};

inline FundamentalForms fundamental_forms(const SurfacePoint& p, const BalloonParams& params) {
    params.validate();
    const double c = std::cosh(2.0 * p.u);
    const double first = params.r * params.r / c;
    const double second = params.r / std::pow(c, 1.5);
    return {{first, first}, {2.0 * second, second}};
}

/// Diagonal metric; the off-diagonal components vanish identically.
struct MetricData {
    double g_uu = 0.0;
    double g_vv = 0.0;
    double ginv_uu = 0.0;
    double ginv_vv = 0.0;
};

inline MetricData metric(double u, const BalloonParams& params) {
    params.validate();
    const double c = std::cosh(2.0 * u);
    const double r2 = params.r * params.r;
    return {r2 / c, r2 / c, c / r2, c / r2};
}

struct HolonomicConnection {
    double u_uu = 0.0;  // Gamma^u_uu
    double u_vv = 0.0;  // Gamma^u_vv
    double v_uv = 0.0;  // Gamma^v_uv
    double v_vu = 0.0;  // Gamma^v_vu
};

struct TeleparallelConnection {
    double u_uu = 0.0;  // Gamma[E]^u_uu
    double v_vu = 0.0;  // Gamma[E]^v_vu
};

struct AholonomicConnection {
    double u_vv = 0.0;  // Gamma^u_vv in the orthonormal frame
    double v_uv = 0.0;  // Gamma^v_uv in the orthonormal frame
};

/// Non-zero connection components; every other component is zero.
struct ConnectionData {
    HolonomicConnection holonomic;
    TeleparallelConnection teleparallel;
    AholonomicConnection aholonomic;
};

inline ConnectionData connections(double u, const BalloonParams& params) {
    params.validate();
    const double t = std::tanh(2.0 * u);
    const double ahol = std::sinh(2.0 * u) / (params.r * std::sqrt(std::cosh(2.0 * u)));
    return {{-t, t, -t, -t}, {-t, -t}, {ahol, -ahol}};
}

/// Orthonormal frame E_A = (sqrt(cosh 2u)/r) d/dq^A and its dual coframe.
struct Frame {
    std::array<double, 2> e_u{};
    std::array<double, 2> e_v{};
    std::array<double, 2> co_u{};
    std::array<double, 2> co_v{};
};

inline Frame frame(double u, const BalloonParams& params) {
    params.validate();
    const double scale = std::sqrt(std::cosh(2.0 * u)) / params.r;
    return {{scale, 0.0}, {0.0, scale}, {1.0 / scale, 0.0}, {0.0, 1.0 / scale}};
}

/// Gaussian curvature det II / det I = 2 / (r^2 cosh 2u).
inline double gauss_curvature(double u, const BalloonParams& params) {
    params.validate();
    return 2.0 / (params.r * params.r * std::cosh(2.0 * u));
}

}  // namespace geometry
}  // namespace mylar
