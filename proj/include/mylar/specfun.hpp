#pragma once

// Incomplete elliptic integrals of the first and second kind, evaluated
// through Carlson's symmetric forms R_F and R_D (duplication theorem).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mylar/errors.hpp"

namespace mylar::specfun {

/// Amplitude/modulus pair; valid for 0 <= k <= 1 and |phi| <= pi/2.
struct EllipticArgs {
    double phi = 0.0;
    double k = 0.0;
};

namespace detail {

// Slack on |phi| <= pi/2 so that asin(1) and std::numbers::pi / 2 are accepted.
inline constexpr double kAmplitudeSlack = 8.0 * std::numeric_limits<double>::epsilon();

inline void check_args(const EllipticArgs& a, const char* who) {
    if (!std::isfinite(a.phi) || !std::isfinite(a.k))
        throw DomainError(std::string(who) + ": non-finite argument");
    if (a.k < 0.0 || a.k > 1.0)
        throw DomainError(std::string(who) + ": modulus k outside [0, 1]");
    if (std::abs(a.phi) > std::numbers::pi / 2 + kAmplitudeSlack)
        throw DomainError(std::string(who) + ": amplitude outside [-pi/2, pi/2]");
}

}  // namespace detail

/// Carlson's R_F(x, y, z); at most one argument may vanish.
inline double carlson_rf(double x, double y, double z) {
    if (x < 0.0 || y < 0.0 || z < 0.0)
        throw DomainError("carlson_rf: negative argument");
    if ((x == 0.0) + (y == 0.0) + (z == 0.0) > 1)
        throw DomainError("carlson_rf: more than one zero argument (divergent)");

    const double a0 = (x + y + z) / 3.0;
    const double eps = std::numeric_limits<double>::epsilon() / 2.0;
    const double q = std::pow(3.0 * eps, -1.0 / 6.0) *
                     std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
    double a = a0, xm = x, ym = y, zm = z;
    double pow4 = 1.0;
    while (pow4 * q >= std::abs(a)) {
        const double sx = std::sqrt(xm), sy = std::sqrt(ym), sz = std::sqrt(zm);
        const double lambda = sx * sy + sy * sz + sz * sx;
        a = 0.25 * (a + lambda);
        xm = 0.25 * (xm + lambda);
        ym = 0.25 * (ym + lambda);
        zm = 0.25 * (zm + lambda);
        pow4 *= 0.25;
    }
    const double X = (a0 - x) * pow4 / a;
    const double Y = (a0 - y) * pow4 / a;
    const double Z = -X - Y;
    const double e2 = X * Y - Z * Z;
    const double e3 = X * Y * Z;
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / std::sqrt(a);
}

/// Carlson's R_D(x, y, z); x, y >= 0 with x + y > 0, z > 0.
inline double carlson_rd(double x, double y, double z) {
    if (x < 0.0 || y < 0.0 || z <= 0.0 || x + y == 0.0)
        throw DomainError("carlson_rd: argument outside domain");

    const double a0 = (x + y + 3.0 * z) / 5.0;
    const double eps = std::numeric_limits<double>::epsilon() / 2.0;
    const double q = std::pow(eps / 4.0, -1.0 / 6.0) *
                     std::max({std::abs(a0 - x), std::abs(a0 - y), std::abs(a0 - z)});
    double a = a0, xm = x, ym = y, zm = z;
    double pow4 = 1.0;
    double sum = 0.0;
    while (pow4 * q >= std::abs(a)) {
        const double sx = std::sqrt(xm), sy = std::sqrt(ym), sz = std::sqrt(zm);
        const double lambda = sx * sy + sy * sz + sz * sx;
        sum += pow4 / (sz * (zm + lambda));
        a = 0.25 * (a + lambda);
        xm = 0.25 * (xm + lambda);
        ym = 0.25 * (ym + lambda);
        zm = 0.25 * (zm + lambda);
        pow4 *= 0.25;
    }
    const double X = (a0 - x) * pow4 / a;
    const double Y = (a0 - y) * pow4 / a;
    const double Z = -(X + Y) / 3.0;
    const double xy = X * Y;
    const double z2 = Z * Z;
    const double e2 = xy - 6.0 * z2;
    const double e3 = (3.0 * xy - 8.0 * z2) * Z;
    const double e4 = 3.0 * (xy - z2) * z2;
    const double e5 = xy * z2 * Z;
    const double series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0 -
                          9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0;
    return pow4 * series / (a * std::sqrt(a)) + 3.0 * sum;
}

/// F(phi, k) = integral_0^phi dtheta / sqrt(1 - k^2 sin^2 theta).
/// Throws DomainError at the logarithmic singularity k = 1, |phi| = pi/2.
inline double ellip_f(const EllipticArgs& args) {
    detail::check_args(args, "ellip_f");
    if (args.phi == 0.0) return 0.0;
    const double s = std::sin(args.phi);
    const double c = std::cos(args.phi);
    const double c2 = c * c;
    const double delta2 = std::max(0.0, 1.0 - args.k * args.k * s * s);
    if (args.k == 1.0 && std::abs(args.phi) >= std::numbers::pi / 2)
        throw DomainError("ellip_f: divergent at k = 1, |phi| = pi/2");
    if (c2 == 0.0 && delta2 == 0.0)
        throw DomainError("ellip_f: divergent at k = 1, |phi| = pi/2");
    return s * carlson_rf(c2, delta2, 1.0);
}

/// E(phi, k) = integral_0^phi sqrt(1 - k^2 sin^2 theta) dtheta.
inline double ellip_e(const EllipticArgs& args) {
    detail::check_args(args, "ellip_e");
    if (args.phi == 0.0) return 0.0;
    const double s = std::sin(args.phi);
    // The integrand reduces to |cos theta|.
    if (args.k == 1.0) return s;
    const double c = std::cos(args.phi);
    const double k2 = args.k * args.k;
    const double c2 = c * c;
    const double delta2 = 1.0 - k2 * s * s;
    const double rf = carlson_rf(c2, delta2, 1.0);
    if (k2 == 0.0) return s * rf;
    return s * rf - k2 * s * s * s * carlson_rd(c2, delta2, 1.0) / 3.0;
}

inline double ellip_f(double phi, double k) { return ellip_f(EllipticArgs{phi, k}); }
inline double ellip_e(double phi, double k) { return ellip_e(EllipticArgs{phi, k}); }

}  // namespace mylar::specfun
