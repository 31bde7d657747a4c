#pragma once

// Separated Hamilton-Jacobi problem for the u-degree of freedom. With
// p_v = l and p_psi = s conserved,
//   p_u^2 = R(u) = 2 m r^2 (E - V) / cosh 2u - l^2 + 2 tanh(2u) l s
//                 - (m r^2 / (I cosh 2u) + tanh^2 2u) s^2,
// and J_u = 2 * integral of sqrt(R) between the turning points.
//
// In x = tanh u the radicand becomes R = P(x) / (1 + x^2)^2 with P a quartic
// (geodetic), sextic (harmonic) or octic (anharmonic) polynomial. Residues of
// f(z) = -sqrt(P(z)) / ((1 - z)(1 + z)(i - z)(i + z)) at 1, -1, i, -i and
// infinity give the closed-form relations between J_u, J_v and J_psi.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mylar/errors.hpp"
#include "mylar/geometry.hpp"
#include "mylar/potential.hpp"
#include "mylar/quadrature.hpp"

namespace mylar {

/// Energy E and the cyclic momenta l = p_v, s = p_psi.
struct MotionConstants {
    double energy = 0.0;
    double l = 0.0;
    double s = 0.0;
};

struct ActionTriple {
    double J_u = 0.0;
    double J_v = 0.0;
    double J_psi = 0.0;
};

struct CyclicActions {
    double J_v = 0.0;
    double J_psi = 0.0;
};

/// Allowed u-interval; degenerate when the radicand only touches zero.
struct TurningPoints {
    double u_min = 0.0;
    double u_max = 0.0;
    bool degenerate = false;
};

struct QuadratureOptions {
    double rel_tol = 1e-13;
    double abs_tol = 1e-15;
    /// Point inside the intended well when the radicand has several.
    std::optional<double> seed;
};

struct ActionQuadrature {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t order = 0;
    bool converged = true;
    TurningPoints turning;
};

/// Numerator polynomial of the radicand in x = tanh u, highest degree first
/// (the a, b, c, ... ordering of the residue formulas).
struct RadicandPoly {
    std::vector<double> coefficients;

    int degree() const { return static_cast<int>(coefficients.size()) - 1; }

    template <class T>
    T eval(T x) const {
        T acc = T(0);
        for (double c : coefficients) acc = acc * x + c;
        return acc;
    }
};

/// Residues of f at its five poles.
struct ResidueSet {
    std::complex<double> at_plus_one;
    std::complex<double> at_minus_one;
    std::complex<double> at_plus_i;
    std::complex<double> at_minus_i;
    std::complex<double> at_infinity;

    std::complex<double> sum() const { return at_plus_one + at_minus_one + at_plus_i + at_minus_i + at_infinity; }
};

/// Closed-form prediction: J_u = offset + |J_psi| - (|J_psi - J_v| + |J_psi + J_v|) / 2.
struct ClosedFormAction {
    double value = 0.0;
    double offset = 0.0;
    bool negative = false;
};

enum class Region { I, II, III, IV, V, VI };

struct RegionLabel {
    Region region = Region::I;
    std::string_view name;
    std::string_view conditions;
    std::string_view relation;
};

namespace action {

inline double radicand_u(double u, const MotionConstants& c, const PotentialModel& model,
                         const BalloonParams& params) {
    const double ch = std::cosh(2.0 * u);
    const double mr2 = params.mr2();
    // -l^2 + 2 t l s - t^2 s^2 = -(l - t s)^2, with 1 -+ tanh(2u) formed without
    // cancellation so that R keeps its sign near the poles when l = +-s.
    const double e = std::exp(-4.0 * std::abs(u));
    const double one_minus_abs_t = 2.0 * e / (1.0 + e);
    const double gap = u >= 0.0 ? (c.l - c.s) + c.s * one_minus_abs_t : (c.l + c.s) - c.s * one_minus_abs_t;
    return 2.0 * mr2 / ch * (c.energy - potential_eval(u, model)) - gap * gap - mr2 / (params.inertia * ch) * c.s * c.s;
}

/// Magnitude of the terms entering the radicand, for relative tolerances.
inline double radicand_scale(const MotionConstants& c, const PotentialModel& model, const BalloonParams& params) {
    const double mr2 = params.mr2();
    return std::max({1.0, 2.0 * mr2 * (std::abs(c.energy) + potential_scale(model)), c.l * c.l,
                     c.s * c.s * (1.0 + mr2 / params.inertia), 2.0 * std::abs(c.l * c.s)});
}

namespace detail {

// Symmetric grid on [-40, 40]: log-spaced from 1e-6 plus uniform 0.01 steps on [-10, 10].
inline const std::vector<double>& search_grid() {
    static const std::vector<double> grid = [] {
        std::vector<double> g;
        const int n_log = 1500;
        const double lo = 1e-6, hi = kMaxConformalU;
        for (int k = 0; k < n_log; ++k) {
            const double u = lo * std::pow(hi / lo, static_cast<double>(k) / (n_log - 1));
            g.push_back(u);
            g.push_back(-u);
        }
        for (int k = 1; k <= 1000; ++k) {
            g.push_back(0.01 * k);
            g.push_back(-0.01 * k);
        }
        g.push_back(0.0);
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
        return g;
    }();
    return grid;
}

// Zero tolerance: bisect down to adjacent doubles.
inline constexpr double kTurningPointTol = 0.0;
inline constexpr double kDegenerateTol = 1e-10;

}  // namespace detail

inline TurningPoints turning_points(const MotionConstants& c, const PotentialModel& model,
                                    const BalloonParams& params, std::optional<double> seed = std::nullopt) {
    params.validate();
    validate_model(model);
    if (!(std::isfinite(c.energy) && std::isfinite(c.l) && std::isfinite(c.s)))
        throw DomainError("motion constants must be finite");

    const auto& grid = detail::search_grid();
    const std::size_t n = grid.size();
    const auto R = [&](double u) { return radicand_u(u, c, model, params); };
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = R(grid[i]);

    std::vector<TurningPoints> wells;
    std::optional<TurningPoints> touching;
    for (std::size_t i = 0; i < n; ++i) {
        if (f[i] > 0.0) {
            std::size_t j = i;
            while (j + 1 < n && f[j + 1] > 0.0) ++j;
            if (i == 0 || j == n - 1)
                throw UnboundedMotion("allowed region reaches |u| = 40 (motion extends to a pole)");
            wells.push_back({quadrature::bisect(R, grid[i - 1], grid[i], detail::kTurningPointTol),
                             quadrature::bisect(R, grid[j], grid[j + 1], detail::kTurningPointTol), false});
            i = j;
            continue;
        }
        // A negative local maximum can hide a well narrower than the grid spacing.
        if (i == 0 || i == n - 1 || !(f[i] > f[i - 1] && f[i] >= f[i + 1])) continue;
        const double u_star = quadrature::golden_max(R, grid[i - 1], grid[i + 1], 1e-14);
        const double r_star = R(u_star);
        if (r_star > 0.0) {
            wells.push_back({quadrature::bisect(R, grid[i - 1], u_star, detail::kTurningPointTol),
                             quadrature::bisect(R, u_star, grid[i + 1], detail::kTurningPointTol), false});
        } else if (r_star >= -detail::kDegenerateTol * radicand_scale(c, model, params)) {
            if (!touching || r_star > R(touching->u_min)) touching = TurningPoints{u_star, u_star, true};
        }
    }

    if (wells.empty()) {
        if (touching) return *touching;
        throw NoClassicalMotion("radicand is negative for all u: no classical motion");
    }
    if (seed) {
        for (const auto& w : wells)
            if (*seed >= w.u_min && *seed <= w.u_max) return w;
        throw NoClassicalMotion("seed u0 is not inside a classically allowed interval");
    }
    if (wells.size() > 1)
        throw MultipleWells("radicand is positive on " + std::to_string(wells.size()) +
                                " disjoint intervals; pass a seed u0 to select one",
                            static_cast<int>(wells.size()));
    return wells.front();
}

/// J_u = 2 * integral of sqrt(R), with u = u_min + (u_max - u_min) sin^2(theta)
/// removing the square-root endpoint behaviour before Gauss-Legendre.
inline ActionQuadrature action_ju_quadrature(const MotionConstants& c, const PotentialModel& model,
                                             const BalloonParams& params, const QuadratureOptions& opts = {}) {
    ActionQuadrature out;
    out.turning = turning_points(c, model, params, opts.seed);
    if (out.turning.degenerate) return out;
    const double u0 = out.turning.u_min;
    const double width = out.turning.u_max - out.turning.u_min;
    const auto integrand = [&](double theta) {
        const double sn = std::sin(theta), cs = std::cos(theta);
        const double u = u0 + width * sn * sn;
        return std::sqrt(std::max(0.0, radicand_u(u, c, model, params))) * 2.0 * width * sn * cs;
    };
    const auto q = quadrature::integrate_gauss_legendre(integrand, 0.0, std::numbers::pi / 2, opts.rel_tol,
                                                        opts.abs_tol);
    out.value = 2.0 * q.value;
    out.error_estimate = 2.0 * q.error_estimate;
    out.order = q.order;
    out.converged = q.converged;
    return out;
}

/// Libration period T = 2 * integral of m r^2 / (cosh(2u) sqrt(R)) du, same substitution.
inline double libration_period(const MotionConstants& c, const PotentialModel& model, const BalloonParams& params,
                               std::optional<double> seed = std::nullopt) {
    const TurningPoints tp = turning_points(c, model, params, seed);
    if (tp.degenerate) throw NoClassicalMotion("degenerate orbit has no libration");
    const double width = tp.u_max - tp.u_min;
    const auto R = [&](double u) { return radicand_u(u, c, model, params); };
    const double h = 1e-3 * width;
    const double slope_a = std::abs(R(tp.u_min + h) - R(tp.u_min - h)) / (2.0 * h);
    const double slope_b = std::abs(R(tp.u_max + h) - R(tp.u_max - h)) / (2.0 * h);
    const auto integrand = [&](double theta) {
        const double sn = std::sin(theta), cs = std::cos(theta);
        const double u = tp.u_min + width * sn * sn;
        double rad = radicand_u(u, c, model, params);
        // Within rounding of an endpoint R may come out non-positive; use the
        // linear behaviour there instead.
        if (rad <= 0.0) rad = sn * sn < 0.5 ? slope_a * width * sn * sn : slope_b * width * cs * cs;
        return params.mr2() / (std::cosh(2.0 * u) * std::sqrt(rad)) * 2.0 * width * sn * cs;
    };
    return 2.0 * quadrature::integrate_gauss_legendre(integrand, 0.0, std::numbers::pi / 2, 1e-12).value;
}

inline CyclicActions actions_cyclic(const MotionConstants& c) {
    return {2.0 * std::numbers::pi * c.l, 2.0 * std::numbers::pi * c.s};
}

inline RadicandPoly poly_coefficients(const MotionConstants& c, const PotentialModel& model,
                                      const BalloonParams& params) {
    params.validate();
    const double mr2 = params.mr2();
    const double A = mr2 * (2.0 * c.energy - c.s * c.s / params.inertia);
    const double B = c.s;
    const double C = c.l;
    const double bc4 = 4.0 * B * C;
    const double quad = -4.0 * B * B - 2.0 * C * C;
    return std::visit(
        overloaded{[&](const Geodetic&) { return RadicandPoly{{-A - C * C, bc4, quad, bc4, A - C * C}}; },
                   [&](const Harmonic& h) {
                       const double k = h.kappa * mr2;
                       return RadicandPoly{{k, 0.0, -A - C * C, bc4, -k + quad, bc4, A - C * C}};
                   },
                   [&](const Anharmonic& an) {
                       const double a = 2.0 * an.alpha * mr2, b = 2.0 * an.beta * mr2;
                       const double g = 2.0 * an.gamma * mr2, d = 2.0 * an.delta * mr2;
                       return RadicandPoly{
                           {a, b, g, d, -a - A - C * C, -b + bc4, -g + quad, -d + bc4, A - C * C}};
                   }},
        model);
}

inline int expected_degree(const PotentialModel& model) {
    return std::visit(overloaded{[](const Geodetic&) { return 4; }, [](const Harmonic&) { return 6; },
                                 [](const Anharmonic&) { return 8; }},
                      model);
}

namespace detail {

inline void require_positive_alpha(const PotentialModel& model) {
    if (const auto* an = std::get_if<Anharmonic>(&model); an && !(an->alpha > 0.0))
        throw DomainError("anharmonic closed forms require alpha > 0");
}

}  // namespace detail

/// Residues evaluated from the polynomial: -(i/4) sqrt|P(+-1)| at +-1,
/// (i/4) sqrt|P(+-i)| at +-i; the residue at infinity depends on the degree.
inline ResidueSet residues(const PotentialModel& model, const RadicandPoly& poly) {
    validate_model(model);
    detail::require_positive_alpha(model);
    if (poly.degree() != expected_degree(model))
        throw DomainError("radicand degree does not match the potential model");
    using namespace std::complex_literals;
    const std::complex<double> iu(0.0, 1.0);
    ResidueSet res;
    res.at_plus_one = -0.25i * std::sqrt(std::abs(poly.eval(1.0)));
    res.at_minus_one = -0.25i * std::sqrt(std::abs(poly.eval(-1.0)));
    res.at_plus_i = 0.25i * std::sqrt(std::abs(poly.eval(iu)));
    res.at_minus_i = 0.25i * std::sqrt(std::abs(poly.eval(-iu)));
    const double lead = poly.coefficients[0];
    res.at_infinity = std::visit(
        overloaded{[](const Geodetic&) { return std::complex<double>(0.0); },
                   [&](const Harmonic&) { return std::complex<double>(0.0, std::sqrt(std::abs(lead))); },
                   [&](const Anharmonic&) {
                       const double next = poly.coefficients[1];
                       return std::complex<double>(0.0, 0.5 * std::abs(next) / std::sqrt(std::abs(lead)));
                   }},
        model);
    return res;
}

/// J_u-level offset: 0, 2 pi sqrt(kappa m r^2) or pi |beta| sqrt(2 m r^2 / alpha).
inline double closed_form_offset(const PotentialModel& model, const BalloonParams& params) {
    detail::require_positive_alpha(model);
    const double mr2 = params.mr2();
    return std::visit(
        overloaded{[](const Geodetic&) { return 0.0; },
                   [&](const Harmonic& h) { return 2.0 * std::numbers::pi * std::sqrt(h.kappa * mr2); },
                   [&](const Anharmonic& a) {
                       return std::numbers::pi * std::abs(a.beta) * std::sqrt(2.0 * mr2 / a.alpha);
                   }},
        model);
}

/// Residues written directly in the action variables.
inline ResidueSet residues_closed_form(const PotentialModel& model, double J_v, double J_psi,
                                       const BalloonParams& params) {
    validate_model(model);
    const double inv4pi = 1.0 / (4.0 * std::numbers::pi);
    ResidueSet res;
    res.at_plus_one = {0.0, -inv4pi * std::abs(J_psi - J_v)};
    res.at_minus_one = {0.0, -inv4pi * std::abs(J_psi + J_v)};
    res.at_plus_i = {0.0, inv4pi * std::abs(J_psi)};
    res.at_minus_i = res.at_plus_i;
    res.at_infinity = {0.0, closed_form_offset(model, params) / (2.0 * std::numbers::pi)};
    return res;
}

/// Contour integral around the cut from the residue sum: -2 pi i sum(Res).
inline std::complex<double> contour_integral(const ResidueSet& res) {
    return std::complex<double>(0.0, -2.0 * std::numbers::pi) * res.sum();
}

/// J_u implied by a residue set (real part of the contour integral).
inline double ju_from_residues(const ResidueSet& res) { return contour_integral(res).real(); }

inline ClosedFormAction closed_form_ju(const PotentialModel& model, double J_v, double J_psi,
                                       const BalloonParams& params) {
    params.validate();
    validate_model(model);
    ClosedFormAction out;
    out.offset = closed_form_offset(model, params);
    out.value = out.offset + std::abs(J_psi) - 0.5 * (std::abs(J_psi - J_v) + std::abs(J_psi + J_v));
    out.negative = out.value < 0.0;
    return out;
}

inline std::string_view region_name(Region r) {
    switch (r) {
        case Region::I: return "i";
        case Region::II: return "ii";
        case Region::III: return "iii";
        case Region::IV: return "iv";
        case Region::V: return "v";
        case Region::VI: return "vi";
    }
    return "?";
}

/// Region from the signs of J_psi, J_psi - J_v and J_psi + J_v.
inline RegionLabel classify_region(double J_v, double J_psi) {
    if (!std::isfinite(J_v) || !std::isfinite(J_psi)) throw DomainError("actions must be finite");
    if (J_psi == 0.0 || J_psi == J_v || J_psi == -J_v)
        throw BoundaryError("(J_v, J_psi) lies on a region boundary (J_psi = 0 or J_psi = +-J_v)");
    const bool pos = J_psi > 0.0;
    const bool above_v = J_psi > J_v;
    const bool above_minus_v = J_psi > -J_v;
    if (pos && above_v && above_minus_v)
        return {Region::I, "i", "(J_psi > 0) && (J_psi > J_v) && (J_psi > -J_v)", "J_u = offset"};
    if (pos && !above_v && above_minus_v)
        return {Region::II, "ii", "(J_psi > 0) && (J_psi < J_v) && (J_psi > -J_v)", "J_u + J_v - J_psi = offset"};
    if (!pos && !above_v && above_minus_v)
        return {Region::III, "iii", "(J_psi < 0) && (J_psi < J_v) && (J_psi > -J_v)", "J_u + J_v + J_psi = offset"};
    if (pos && above_v && !above_minus_v)
        return {Region::IV, "iv", "(J_psi > 0) && (J_psi > J_v) && (J_psi < -J_v)", "J_u - J_v - J_psi = offset"};
    if (!pos && above_v && !above_minus_v)
        return {Region::V, "v", "(J_psi < 0) && (J_psi > J_v) && (J_psi < -J_v)", "J_u - J_v + J_psi = offset"};
    // The two remaining sign patterns are empty sets.
    return {Region::VI, "vi", "(J_psi < 0) && (J_psi < J_v) && (J_psi < -J_v)", "J_u = offset"};
}

/// Left-hand side of the degeneracy relation of a region.
inline double region_relation_lhs(Region r, double J_u, double J_v, double J_psi) {
    switch (r) {
        case Region::I:
        case Region::VI: return J_u;
        case Region::II: return J_u + J_v - J_psi;
        case Region::III: return J_u + J_v + J_psi;
        case Region::IV: return J_u - J_v - J_psi;
        case Region::V: return J_u - J_v + J_psi;
    }
    return J_u;
}

/// Balloon radius with pi r^2 / 2 = N.
inline double quantized_radius(std::int64_t N) {
    if (N < 1) throw DomainError("quantum number N must be a positive integer");
    return std::sqrt(2.0 * static_cast<double>(N) / std::numbers::pi);
}

}  // namespace action
}  // namespace mylar
