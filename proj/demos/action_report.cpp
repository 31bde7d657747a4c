// Prints J_u by quadrature, by one integrated libration and by the residue
// closed form for a few (E, l, s) points on the unit balloon.

#include <cstdio>

#include "mylar/mylar.hpp"

int main() {
    using namespace mylar;
    const BalloonParams params{1.0, 1.0, 1.0};
    const PotentialModel models[] = {Geodetic{}, Harmonic{1.0}};
    const MotionConstants points[] = {{1.0, 1.0, 0.0}, {2.0, 0.7, 0.3}, {4.0, -0.5, 0.6}};

    std::printf("%-10s %6s %6s %6s %14s %14s %14s %6s\n", "model", "E", "l", "s", "J_u quad", "J_u orbit",
                "J_u closed", "region");
    for (const auto& model : models) {
        for (const auto& c : points) {
            const auto check = verify::trajectory_action_check(c, model, params);
            const auto cyc = action::actions_cyclic(c);
            const auto cf = action::closed_form_ju(model, cyc.J_v, cyc.J_psi, params);
            std::string region = "-";
            try {
                region = action::classify_region(cyc.J_v, cyc.J_psi).name;
            } catch (const BoundaryError&) {
            }
            std::printf("%-10s %6.2f %6.2f %6.2f %14.9f %14.9f %14.9f %6s\n", model_name(model).c_str(), c.energy, c.l,
                        c.s, check.ju_quadrature, check.ju_trajectory, cf.value, region.c_str());
        }
    }
}
