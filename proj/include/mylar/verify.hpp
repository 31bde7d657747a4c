#pragma once

// Harness confronting the residue closed forms with direct quadrature of J_u
// and with actions measured on integrated trajectories.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mylar/action.hpp"
#include "mylar/dynamics.hpp"

namespace mylar {

/// Linearly spaced grid; count == 1 yields just `min`.
struct Grid {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 1;

    double at(std::size_t i) const {
        if (count == 1) return min;
        return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
};

struct SweepSpec {
    PotentialModel model = Geodetic{};
    BalloonParams params;
    Grid energy;
    Grid l;
    Grid s;
    QuadratureOptions quadrature;

    void validate() const {
        params.validate();
        validate_model(model);
        if (const auto* an = std::get_if<Anharmonic>(&model); an && !(an->alpha > 0.0))
            throw ParameterError("anharmonic sweeps require alpha > 0");
        for (const Grid* g : {&energy, &l, &s}) {
            if (g->count < 1) throw ParameterError("grid counts must be >= 1");
            if (!std::isfinite(g->min) || !std::isfinite(g->max)) throw ParameterError("grid bounds must be finite");
        }
        if (!(quadrature.rel_tol > 0.0) || !(quadrature.abs_tol > 0.0))
            throw ParameterError("quadrature tolerances must be > 0");
    }

    std::size_t size() const { return energy.count * l.count * s.count; }
};

enum class RowStatus { Ok, NoClassicalMotion, MultipleWells, UnboundedMotion };

inline std::string_view status_name(RowStatus s) {
    switch (s) {
        case RowStatus::Ok: return "ok";
        case RowStatus::NoClassicalMotion: return "no_classical_motion";
        case RowStatus::MultipleWells: return "multiple_wells";
        case RowStatus::UnboundedMotion: return "unbounded_motion";
    }
    return "?";
}

struct ComparisonRow {
    MotionConstants constants;
    double J_v = 0.0;
    double J_psi = 0.0;
    std::optional<Region> region;  // empty on a boundary
    std::optional<double> ju_quadrature;
    double ju_closed_form = 0.0;
    bool closed_form_negative = false;
    /// J_u rebuilt from the residues of the radicand polynomial.
    double ju_from_residues = 0.0;
    double offset_term = 0.0;
    std::optional<double> delta;  // quadrature - closed form
    std::optional<double> relative_delta;
    RowStatus status = RowStatus::Ok;

    bool admissible() const { return status == RowStatus::Ok; }
};

namespace verify {

inline ComparisonRow evaluate_point(const MotionConstants& c, const SweepSpec& spec) {
    ComparisonRow row;
    row.constants = c;
    const CyclicActions cyc = action::actions_cyclic(c);
    row.J_v = cyc.J_v;
    row.J_psi = cyc.J_psi;
    try {
        row.region = action::classify_region(row.J_v, row.J_psi).region;
    } catch (const BoundaryError&) {
        row.region.reset();
    }
    const ClosedFormAction cf = action::closed_form_ju(spec.model, row.J_v, row.J_psi, spec.params);
    row.ju_closed_form = cf.value;
    row.closed_form_negative = cf.negative;
    row.offset_term = cf.offset;
    row.ju_from_residues =
        action::ju_from_residues(action::residues(spec.model, action::poly_coefficients(c, spec.model, spec.params)));
    try {
        row.ju_quadrature = action::action_ju_quadrature(c, spec.model, spec.params, spec.quadrature).value;
    } catch (const MultipleWells&) {
        row.status = RowStatus::MultipleWells;
    } catch (const UnboundedMotion&) {
        row.status = RowStatus::UnboundedMotion;
    } catch (const NoClassicalMotion&) {
        row.status = RowStatus::NoClassicalMotion;
    }
    if (row.ju_quadrature) {
        row.delta = *row.ju_quadrature - row.ju_closed_form;
        const double denom = std::max(std::abs(*row.ju_quadrature), std::abs(row.ju_closed_form));
        row.relative_delta = denom > 0.0 ? std::abs(*row.delta) / denom : 0.0;
    }
    return row;
}

/// One row per grid point, ordered E-major, then l, then s.
inline std::vector<ComparisonRow> run_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<ComparisonRow> rows;
    rows.reserve(spec.size());
    for (std::size_t ie = 0; ie < spec.energy.count; ++ie)
        for (std::size_t il = 0; il < spec.l.count; ++il)
            for (std::size_t is = 0; is < spec.s.count; ++is)
                rows.push_back(evaluate_point({spec.energy.at(ie), spec.l.at(il), spec.s.at(is)}, spec));
    return rows;
}

struct SweepSummary {
    std::string model;
    std::size_t grid_size = 0;
    std::size_t n_admissible = 0;
    std::optional<double> max_delta;
    std::optional<double> min_delta;
};

inline SweepSummary summarize(const SweepSpec& spec, const std::vector<ComparisonRow>& rows) {
    SweepSummary out;
    out.model = model_name(spec.model);
    out.grid_size = spec.size();
    for (const auto& row : rows) {
        if (!row.admissible()) continue;
        ++out.n_admissible;
        if (row.delta) {
            out.max_delta = out.max_delta ? std::max(*out.max_delta, *row.delta) : *row.delta;
            out.min_delta = out.min_delta ? std::min(*out.min_delta, *row.delta) : *row.delta;
        }
    }
    return out;
}

/// Fixed 12-significant-digit scientific formatting.
inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.11e", x);
    return buf;
}

inline std::string format_optional(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

inline constexpr const char* kSweepCsvHeader =
    "E,l,s,J_v,J_psi,region,Ju_quadrature,Ju_closed_form,delta,offset_term,rel_delta,status";

inline void write_sweep_csv(std::ostream& os, const std::vector<ComparisonRow>& rows) {
    os << kSweepCsvHeader << '\n';
    for (const auto& row : rows) {
        os << format_number(row.constants.energy) << ',' << format_number(row.constants.l) << ','
           << format_number(row.constants.s) << ',' << format_number(row.J_v) << ',' << format_number(row.J_psi)
           << ',' << (row.region ? action::region_name(*row.region) : std::string_view("boundary")) << ','
           << format_optional(row.ju_quadrature) << ',' << format_number(row.ju_closed_form) << ','
           << format_optional(row.delta) << ',' << format_number(row.offset_term) << ','
           << format_optional(row.relative_delta) << ',' << status_name(row.status) << '\n';
    }
}

struct ActionCheckOptions {
    IntegratorControls integrator;
    QuadratureOptions quadrature;
};

struct ActionCheckReport {
    double ju_quadrature = 0.0;
    double ju_trajectory = 0.0;
    double relative_deviation = 0.0;
    /// Measured libration period; 0 for a degenerate orbit.
    double period = 0.0;
    bool degenerate = false;
    TurningPoints turning;
    DriftMonitor drift;
};

/// Starts at the left turning point with p_u = 0, integrates one full
/// u-libration, and compares the accumulated integral of p_u du to quadrature.
inline ActionCheckReport trajectory_action_check(const MotionConstants& c, const PotentialModel& model,
                                                 const BalloonParams& params, const ActionCheckOptions& opts = {}) {
    ActionCheckReport rep;
    const ActionQuadrature q = action::action_ju_quadrature(c, model, params, opts.quadrature);
    rep.turning = q.turning;
    rep.ju_quadrature = q.value;
    const PhasePoint start{q.turning.u_min, 0.0, 0.0, 0.0, c.l, c.s};
    if (q.turning.degenerate) {
        // Resting on the minimum of the effective potential: p_u stays zero.
        const Trajectory tr = dynamics::integrate_trajectory(start, model, params, 1.0, opts.integrator);
        rep.degenerate = true;
        rep.ju_trajectory = std::abs(tr.samples.back().action_u);
        rep.relative_deviation = std::abs(rep.ju_trajectory - rep.ju_quadrature);
        rep.drift = tr.drift;
        return rep;
    }
    const double period_estimate = action::libration_period(c, model, params, opts.quadrature.seed);
    const LibrationResult lib =
        dynamics::integrate_librations(start, model, params, 1, 10.0 * period_estimate + 1.0, opts.integrator);
    rep.ju_trajectory = lib.first_action;
    rep.period = lib.period;
    rep.drift = lib.drift;
    rep.relative_deviation =
        std::abs(rep.ju_trajectory - rep.ju_quadrature) / std::max(std::abs(rep.ju_quadrature), 1e-300);
    return rep;
}

}  // namespace verify
}  // namespace mylar
