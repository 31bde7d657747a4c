#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mylar::quadrature {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Newton iteration on P_n from the Tricomi initial guesses.
inline GaussLegendreRule make_gauss_legendre(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Gauss-Legendre order must be positive");
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double dk = static_cast<double>(k);
                const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = dn * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                // refresh derivative at the converged node
                p0 = 1.0;
                p1 = x;
                for (std::size_t k = 2; k <= n; ++k) {
                    const double dk = static_cast<double>(k);
                    const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
                    p0 = p1;
                    p1 = p2;
                }
                if (n == 1) p0 = 1.0;
                dp = dn * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

/// Orders 8, 16, ..., 1024, built once.
inline const std::vector<GaussLegendreRule>& gauss_legendre_ladder() {
    static const std::vector<GaussLegendreRule> ladder = [] {
        std::vector<GaussLegendreRule> rules;
        for (std::size_t n = 8; n <= 1024; n *= 2) rules.push_back(make_gauss_legendre(n));
        return rules;
    }();
    return ladder;
}

template <class F>
double apply_rule(const GaussLegendreRule& rule, F&& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

struct QuadratureResult {
    double value = 0.0;
    /// |difference| between the last two orders of the ladder.
    double error_estimate = 0.0;
    std::size_t order = 0;
    bool converged = false;
};

/// Doubles the Gauss-Legendre order until successive values agree to
/// max(abs_tol, rel_tol |value|).
template <class F>
QuadratureResult integrate_gauss_legendre(F&& f, double a, double b, double rel_tol, double abs_tol = 0.0) {
    const auto& ladder = gauss_legendre_ladder();
    QuadratureResult res;
    double prev = apply_rule(ladder.front(), f, a, b);
    res.value = prev;
    res.order = ladder.front().nodes.size();
    res.error_estimate = std::abs(prev);
    for (std::size_t i = 1; i < ladder.size(); ++i) {
        const double cur = apply_rule(ladder[i], f, a, b);
        res.value = cur;
        res.order = ladder[i].nodes.size();
        res.error_estimate = std::abs(cur - prev);
        if (res.error_estimate <= std::max(abs_tol, rel_tol * std::abs(cur))) {
            res.converged = true;
            break;
        }
        prev = cur;
    }
    return res;
}

/// Bisection for a sign change of f on [a, b]; f(a) and f(b) must differ in sign.
template <class F>
double bisect(F&& f, double a, double b, double x_tol) {
    double fa = f(a);
    for (int it = 0; it < 400 && std::abs(b - a) > x_tol; ++it) {
        const double mid = 0.5 * (a + b);
        if (mid == a || mid == b) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

/// Golden-section maximisation on [a, b]; returns the abscissa.
template <class F>
double golden_max(F&& f, double a, double b, double x_tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 300 && std::abs(b - a) > x_tol; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace mylar::quadrature
