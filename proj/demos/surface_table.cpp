#include <cstdio>

#include "mylar/geometry.hpp"

// Profile and curvature of the unit balloon along a meridian.
int main() {
    const mylar::BalloonParams params{1.0, 1.0, 1.0};
    std::printf("%8s %12s %12s %12s\n", "u", "rho", "z", "K");
    for (int i = -12; i <= 12; ++i) {
        const double u = 0.25 * i;
        const auto p = mylar::geometry::embed({u, 0.0}, params);
        std::printf("%8.2f %12.8f %12.8f %12.8f\n", u, p.x, p.z, mylar::geometry::gauss_curvature(u, params));
    }
}
