#pragma once

#include <cmath>
#include <string>
#include <type_traits>
#include <variant>

#include "mylar/errors.hpp"

namespace mylar {

/// V = 0.
struct Geodetic {};

/// V = (kappa/2) tanh^2 u, kappa > 0.
struct Harmonic {
    double kappa = 1.0;
};

/// V = alpha x^4 + beta x^3 + gamma x^2 + delta x with x = tanh u.
/// alpha = 0 is tolerated for evaluation; closed forms need alpha > 0.
struct Anharmonic {
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
};

using PotentialModel = std::variant<Geodetic, Harmonic, Anharmonic>;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline std::string model_name(const PotentialModel& model) {
    return std::visit(overloaded{[](const Geodetic&) { return std::string("geodetic"); },
                                 [](const Harmonic&) { return std::string("harmonic"); },
                                 [](const Anharmonic&) { return std::string("anharmonic"); }},
                      model);
}

/// Checks parameter finiteness and kappa > 0; alpha is checked by the closed forms.
inline void validate_model(const PotentialModel& model) {
    std::visit(overloaded{[](const Geodetic&) {},
                          [](const Harmonic& h) {
                              if (!(std::isfinite(h.kappa) && h.kappa > 0.0))
                                  throw ParameterError("harmonic potential requires kappa > 0");
                          },
                          [](const Anharmonic& a) {
                              if (!(std::isfinite(a.alpha) && std::isfinite(a.beta) &&
                                    std::isfinite(a.gamma) && std::isfinite(a.delta)))
                                  throw ParameterError("anharmonic coefficients must be finite");
                          }},
                 model);
}

/// Potential as a function of x = tanh u.
inline double potential_of_x(double x, const PotentialModel& model) {
    return std::visit(
        overloaded{[](const Geodetic&) { return 0.0; },
                   [x](const Harmonic& h) { return 0.5 * h.kappa * x * x; },
                   [x](const Anharmonic& a) {
                       return ((a.alpha * x + a.beta) * x + a.gamma) * x * x + a.delta * x;
                   }},
        model);
}

inline double potential_eval(double u, const PotentialModel& model) {
    return potential_of_x(std::tanh(u), model);
}

/// dV/du = dV/dx (1 - x^2).
inline double potential_derivative(double u, const PotentialModel& model) {
    const double x = std::tanh(u);
    const double dvdx = std::visit(
        overloaded{[](const Geodetic&) { return 0.0; },
                   [x](const Harmonic& h) { return h.kappa * x; },
                   [x](const Anharmonic& a) {
                       return ((4.0 * a.alpha * x + 3.0 * a.beta) * x + 2.0 * a.gamma) * x + a.delta;
                   }},
        model);
    return dvdx * (1.0 - x * x);
}

/// Supremum of V over the real line, used for scale estimates.
inline double potential_scale(const PotentialModel& model) {
    return std::visit(overloaded{[](const Geodetic&) { return 0.0; },
                                 [](const Harmonic& h) { return 0.5 * std::abs(h.kappa); },
                                 [](const Anharmonic& a) {
                                     return std::abs(a.alpha) + std::abs(a.beta) + std::abs(a.gamma) +
                                            std::abs(a.delta);
                                 }},
                      model);
}

}  // namespace mylar
