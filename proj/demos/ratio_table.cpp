// Prints the S->D / S->P amplitude ratio for an atom on the beam axis as the
// opening angle grows, with and without the longitudinal field component.
// The longitudinal term triples the ratio at every angle; in the paraxial
// limit the two columns approach 3/sqrt(2) = 2.1213 and 1/sqrt(2) = 0.7071.

#include <twistpol/twistpol.hpp>

#include <cstdio>

int main() {
    using namespace twistpol;

    std::printf("# S->D / S->P amplitude ratio on axis (b = 0)\n");
    std::printf("# %-10s %-14s %-14s %s\n", "theta_k", "with A_z", "without A_z", "factor");
    for (double theta : {1e-4, 1e-3, 1e-2, 0.05, 0.1, 0.2, 0.4, 0.8, 1.2}) {
        const double with_az = sd_amplitude_ratio(theta, 0.0, true);
        const double without_az = sd_amplitude_ratio(theta, 0.0, false);
        std::printf("  %-10g %-14.10f %-14.10f %.10f\n", theta, with_az, without_az,
                    with_az / without_az);
    }
    std::printf("# paraxial limits: %.10f / %.10f\n", sd_ratio_paraxial_full,
                sd_ratio_paraxial_transverse);
    return 0;
}
