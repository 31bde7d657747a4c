// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mylar/mylar.hpp"
#include "oracles.hpp"

using namespace mylar;

namespace {

const double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// Undo the max(|ref|, 1) floor of the drift monitor.
double strict_relative(double floored, double ref) {
    return floored * std::max(std::abs(ref), 1.0) / std::max(std::abs(ref), 1e-300);
}

Outcome elliptic() {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double phi = -1.55 + 3.1 * i / 19.0;
        for (int j = 0; j < 20; ++j) {
            const double k = j / 19.0;
            const double f_ref = oracle::gauss_kronrod(
                [k](double t) { return 1.0 / std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); }, 0.0, phi, 1e-15);
            const double e_ref = oracle::gauss_kronrod(
                [k](double t) { return std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); }, 0.0, phi, 1e-15);
            worst = std::max({worst, rel(specfun::ellip_f(phi, k), f_ref), rel(specfun::ellip_e(phi, k), e_ref)});
        }
    }
    const double k = std::numbers::sqrt2 / 2.0;
    const auto agm = oracle::agm_complete(k);
    const double dk = rel(specfun::ellip_f(kPi / 2, k), agm.K);
    const double de = rel(specfun::ellip_e(kPi / 2, k), agm.E);
    const bool frozen = std::abs(agm.K - 1.8540746773) < 1e-10 && std::abs(agm.E - 1.3506438810) < 1e-10;
    return {worst <= 1e-12 && dk <= 1e-12 && de <= 1e-12 && frozen,
            "grid max rel " + fmt("%.2e", worst) + ", K " + fmt("%.10f", specfun::ellip_f(kPi / 2, k)) + ", E " +
                fmt("%.10f", specfun::ellip_e(kPi / 2, k))};
}

Outcome geometry_checks() {
    const BalloonParams params{1.3, 1.0, 1.0};
    double christoffel = 0.0;
    const double h = 1e-5;
    for (double u = -2.0; u <= 2.0; u += 0.1) {
        const auto g = [&](double x) { return geometry::metric(x, params).g_uu; };
        const double dg = (g(u + h) - g(u - h)) / (2.0 * h);
        // Conformal diagonal metric: G^u_uu = G^v_uv = g'/(2g), G^u_vv = -g'/(2g).
        const double lc = dg / (2.0 * g(u));
        const auto c = geometry::connections(u, params);
        christoffel = std::max({christoffel, std::abs(c.holonomic.u_uu - lc), std::abs(c.holonomic.u_vv + lc),
                                std::abs(c.holonomic.v_uv - lc), std::abs(c.holonomic.v_vu - lc)});
    }
    double brioschi = 0.0;
    const auto g = [&](double x) { return geometry::metric(x, params).g_uu; };
    for (double u = -1.0; u <= 1.0; u += 0.25)
        brioschi = std::max(brioschi, rel(oracle::brioschi_diagonal(g, g, u, 1e-4), geometry::gauss_curvature(u, params)));
    const double total = 2.0 * kPi * oracle::gauss_kronrod(
                                         [&](double u) {
                                             const auto m = geometry::metric(u, params);
                                             return geometry::gauss_curvature(u, params) * std::sqrt(m.g_uu * m.g_vv);
                                         },
                                         -20.0, 20.0, 1e-13);
    const double gb = std::abs(total - 4.0 * kPi);
    return {christoffel <= 1e-8 && brioschi <= 1e-6 && gb <= 1e-4,
            "Christoffel " + fmt("%.1e", christoffel) + ", Brioschi rel " + fmt("%.1e", brioschi) +
                ", |intK dA - 4pi| " + fmt("%.1e", gb)};
}

Outcome legendre_duality() {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(-1.0, 1.0), pos(0.3, 2.0);
    double roundtrip = 0.0, energy = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const BalloonParams params{pos(rng), pos(rng), pos(rng)};
        const PotentialModel models[] = {Geodetic{}, Harmonic{pos(rng)}, Anharmonic{pos(rng), uni(rng), uni(rng), uni(rng)}};
        const VelocityPoint v{2.0 * uni(rng), 3.0 * uni(rng), 3.0 * uni(rng), uni(rng), uni(rng), uni(rng)};
        const PhasePoint p = dynamics::legendre(v, params);
        const VelocityPoint back = dynamics::legendre_inverse(p, params);
        const double scale = 1.0 + std::abs(v.du) + std::abs(v.dv) + std::abs(v.dpsi);
        roundtrip = std::max({roundtrip, std::abs(back.du - v.du) / scale, std::abs(back.dv - v.dv) / scale,
                              std::abs(back.dpsi - v.dpsi) / scale});
        const auto& model = models[n % 3];
        const double T = dynamics::kinetic_energy(v, params);
        const double expected = T + potential_eval(v.u, model);
        energy = std::max(energy, std::abs(dynamics::hamiltonian(p, model, params) - expected) /
                                      std::max(1.0, std::abs(expected)));
    }
    return {roundtrip <= 1e-12 && energy <= 1e-12,
            "round trip " + fmt("%.1e", roundtrip) + ", H - (T + V) " + fmt("%.1e", energy)};
}

// Random single-well start at the left turning point.
std::optional<std::pair<PhasePoint, MotionConstants>> random_start(std::mt19937_64& rng, const PotentialModel& model,
                                                                   const BalloonParams& params) {
    std::uniform_real_distribution<double> e(1.0, 3.0), ls(0.3, 1.0), sgn(-1.0, 1.0);
    const MotionConstants c{e(rng), ls(rng) * (sgn(rng) < 0 ? -1.0 : 1.0), 0.5 * sgn(rng)};
    try {
        const auto tp = action::turning_points(c, model, params);
        if (tp.degenerate) return std::nullopt;
        return std::make_pair(PhasePoint{tp.u_min, 0.0, 0.0, 0.0, c.l, c.s}, c);
    } catch (const NumericError&) {
        return std::nullopt;
    }
}

Outcome conservation() {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> pos(0.5, 1.5), small(-0.2, 0.2);
    double worst_h = 0.0, worst_pv = 0.0, worst_ppsi = 0.0;
    int runs = 0;
    for (int which = 0; which < 3; ++which) {
        for (int n = 0; n < 10;) {
            const BalloonParams params{pos(rng), pos(rng), pos(rng)};
            PotentialModel model = Geodetic{};
            if (which == 1) model = Harmonic{pos(rng)};
            if (which == 2) model = Anharmonic{pos(rng), small(rng), small(rng), small(rng)};
            const auto start = random_start(rng, model, params);
            if (!start) continue;
            const double period = action::libration_period(start->second, model, params);
            const auto lib = dynamics::integrate_librations(start->first, model, params, 100, 110.0 * period);
            worst_h = std::max(worst_h, strict_relative(lib.drift.max_energy_drift, lib.drift.energy0));
            worst_pv = std::max(worst_pv, strict_relative(lib.drift.max_pv_drift, start->first.p_v));
            worst_ppsi = std::max(worst_ppsi, strict_relative(lib.drift.max_ppsi_drift, start->first.p_psi));
            ++n;
            ++runs;
        }
    }
    return {worst_h <= 1e-8 && worst_pv <= 1e-10 && worst_ppsi <= 1e-10,
            std::to_string(runs) + " runs x 100 librations; H " + fmt("%.1e", worst_h) + ", p_v " +
                fmt("%.1e", worst_pv) + ", p_psi " + fmt("%.1e", worst_ppsi)};
}

Outcome action_pipelines() {
    struct Point {
        PotentialModel model;
        BalloonParams params;
        MotionConstants c;
    };
    const std::vector<Point> points = {
        {Geodetic{}, {1.0, 1.0, 1.0}, {1.0, 1.0, 0.0}},       {Geodetic{}, {1.2, 0.8, 0.5}, {2.0, 0.7, 0.3}},
        {Geodetic{}, {0.9, 1.3, 0.7}, {1.5, -0.6, 0.4}},      {Geodetic{}, {1.0, 1.0, 2.0}, {3.0, 1.1, -0.5}},
        {Geodetic{}, {1.5, 0.6, 1.0}, {0.8, 0.9, 0.1}},       {Harmonic{1.0}, {1.0, 1.0, 1.0}, {3.0, 0.7, 0.4}},
        {Harmonic{0.5}, {1.1, 0.9, 0.6}, {2.0, 0.5, 0.0}},    {Harmonic{2.0}, {0.8, 1.2, 1.0}, {4.0, -0.8, 0.6}},
        {Harmonic{1.5}, {1.3, 1.0, 0.4}, {2.5, 1.0, -0.2}},   {Harmonic{0.7}, {1.0, 0.7, 1.5}, {1.8, 0.3, 0.5}},
    };
    double worst = 0.0;
    for (const auto& pt : points)
        worst = std::max(worst, verify::trajectory_action_check(pt.c, pt.model, pt.params).relative_deviation);
    return {worst <= 1e-6, "10 points, max relative deviation " + fmt("%.2e", worst)};
}

Outcome radicand_poly() {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> xs(-0.999, 0.999);
    const BalloonParams params{1.2, 0.9, 0.5};
    const MotionConstants c{2.5, 0.4, -0.3};
    const PotentialModel models[] = {Geodetic{}, Harmonic{0.8}, Anharmonic{0.6, -0.4, 0.3, 0.2}};
    double worst = 0.0;
    int positive = 0;
    for (const auto& model : models) {
        const RadicandPoly poly = action::poly_coefficients(c, model, params);
        for (int n = 0; n < 50; ++n) {
            const double x = xs(rng);
            const double R = action::radicand_u(std::atanh(x), c, model, params);
            const double P = poly.eval(x);
            const double x2 = x * x;
            if (R > 0.0 && P > 0.0) {
                // sqrt(R) du with u = artanh x against sqrt(P) / (1 - x^4) dx.
                worst = std::max(worst, rel(std::sqrt(R) / (1.0 - x2), std::sqrt(P) / (1.0 - x2 * x2)));
                ++positive;
            } else {
                worst = std::max(worst, rel(R * (1.0 + x2) * (1.0 + x2), P));
            }
        }
    }
    return {worst <= 1e-10, "150 points (" + std::to_string(positive) + " inside the well), max rel " + fmt("%.1e", worst)};
}

Outcome closed_form_algebra() {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> d(-5.0, 5.0), pos(0.1, 3.0);
    double worst = 0.0;
    for (int n = 0; n < 100; ++n) {
        const BalloonParams params{pos(rng), pos(rng), pos(rng)};
        const double J_v = d(rng), J_psi = d(rng);
        const MotionConstants c{pos(rng), J_v / (2.0 * kPi), J_psi / (2.0 * kPi)};
        const PotentialModel models[] = {Geodetic{}, Harmonic{pos(rng)}, Anharmonic{pos(rng), d(rng), d(rng), d(rng)}};
        for (const auto& model : models) {
            const double composed =
                action::ju_from_residues(action::residues(model, action::poly_coefficients(c, model, params)));
            const double rhs = action::closed_form_ju(model, J_v, J_psi, params).value;
            worst = std::max(worst, std::abs(composed - rhs) / (1.0 + std::abs(rhs)));
        }
    }
    bool relations = true;
    int seen = 0;
    const PotentialModel models[] = {Geodetic{}, Harmonic{1.0}, Anharmonic{2.0, 1.0, 0.0, 0.0}};
    for (const auto& model : models) {
        bool hit[6] = {};
        for (int jv = -6; jv <= 6; ++jv) {
            for (int jp = -6; jp <= 6; ++jp) {
                if (jp == 0 || jp == jv || jp == -jv) continue;
                const auto label = action::classify_region(jv, jp);
                const auto cf = action::closed_form_ju(model, jv, jp, {1.0, 1.0, 1.0});
                hit[static_cast<int>(label.region)] = true;
                relations = relations && action::region_relation_lhs(label.region, cf.value, jv, jp) == cf.offset;
            }
        }
        for (bool h : hit) seen += h;
    }
    return {worst <= 1e-12 && relations && seen == 18,
            "300 compositions, max dev " + fmt("%.1e", worst) + "; region relations " +
                (relations ? "exact" : "violated") + " (" + std::to_string(seen) + "/18 region-model pairs)"};
}

Outcome degeneracy_report() {
    SweepSpec spec;
    spec.model = Geodetic{};
    spec.params = {1.0, 1.0, 1.0};
    spec.energy = {1.0, 10.0, 10};
    spec.l = {0.8, 0.8, 1};
    spec.s = {0.3, 0.3, 1};
    const auto rows = verify::run_sweep(spec);
    std::ostringstream a, b;
    verify::write_sweep_csv(a, rows);
    verify::write_sweep_csv(b, verify::run_sweep(spec));
    bool constant = true, increasing = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].ju_quadrature) return {false, "row " + std::to_string(i) + " not admissible"};
        constant = constant && rows[i].ju_closed_form == rows[0].ju_closed_form;
        if (i > 0) increasing = increasing && *rows[i].ju_quadrature > *rows[i - 1].ju_quadrature;
    }
    const auto summary = verify::summarize(spec, rows);
    return {rows.size() == 10 && constant && increasing && a.str() == b.str(),
            "closed form " + fmt("%.6f", rows[0].ju_closed_form) + " on all rows, quadrature " +
                fmt("%.6f", *rows.front().ju_quadrature) + " -> " + fmt("%.6f", *rows.back().ju_quadrature) +
                ", delta in [" + fmt("%.3f", *summary.min_delta) + ", " + fmt("%.3f", *summary.max_delta) + "]" +
                (a.str() == b.str() ? ", rerun identical" : ", rerun differs")};
}

Outcome quantization() {
    double worst = 0.0, worst_cf = 0.0;
    for (std::int64_t N = 1; N <= 100; ++N) {
        const double r = action::quantized_radius(N);
        worst = std::max(worst, std::abs(kPi * r * r / 2.0 - static_cast<double>(N)));
        for (double kappa : {0.5, 1.3}) {
            const double m = 0.7;
            const auto cf = action::closed_form_ju(Harmonic{kappa}, 1.0, 2.5, {r, m, 1.0});
            worst_cf = std::max(worst_cf, rel(cf.value, 2.0 * std::sqrt(2.0 * kPi * kappa * m * static_cast<double>(N))));
        }
    }
    return {worst <= 1e-12 && worst_cf <= 1e-12,
            "pi r^2/2 - N " + fmt("%.1e", worst) + ", region i closed form rel " + fmt("%.1e", worst_cf)};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {"elliptic integrals vs AGM / adaptive quadrature", 1.0, elliptic},
        {"geometry cross-checks (Christoffel, Brioschi, Gauss-Bonnet)", 5.0, geometry_checks},
        {"Legendre duality", 1.0, legendre_duality},
        {"conservation over 100 librations", 60.0, conservation},
        {"trajectory action vs quadrature", 60.0, action_pipelines},
        {"radicand / polynomial consistency", 1.0, radicand_poly},
        {"closed-form residue algebra and region relations", 1.0, closed_form_algebra},
        {"degeneracy-structure sweep report", 30.0, degeneracy_report},
        {"radius quantization", 1.0, quantization},
    };
    int failures = 0;
    int index = 0;
    for (const auto& c : criteria) {
        ++index;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = out.pass && in_time;
        failures += !pass;
        std::printf("[%s] criterion %d: %s | %s | %.3f s (budget %.0f s)%s\n", pass ? "PASS" : "FAIL", index, c.name,
                    out.detail.c_str(), secs, c.budget_s, in_time ? "" : " OVER BUDGET");
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
