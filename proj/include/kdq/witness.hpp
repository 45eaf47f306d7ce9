#pragma once

#include "kdq/dynamics.hpp"
#include "kdq/kdq.hpp"
#include "kdq/model.hpp"

#include <vector>

namespace kdq {

// Closed form of Im[g_p(u) - conj(g_p(-u))] for real u (the real part vanishes):
//   4 sinh(beta w0) sin(phi0 - phi1) sin(u w1) sin(u w2)
//     * [2 cos(phi2) Im(z s) + sin(phi2) (Im z^2 - Im s^2)]
double imag_witness_closed_form(const ModeFrames& fr, double beta, const ModePropagator& prop, double u);

// Same quantity divided by g_p(0), safe for large beta * w0.
double normalized_imag_witness(const ModeFrames& fr, double beta, const ModePropagator& prop, double u);

struct WitnessReport {
    double max_imag_witness = 0.0; // sup over modes and u of |witness| / g_p(0)
    double mu4_real = 0.0;
    double mu4_imag_abs = 0.0;
    bool nonclassical_imag = false;
    bool nonclassical_negativity = false;
};

inline constexpr double kImagWitnessThreshold = 1e-8;
inline constexpr double kNegativityThreshold = 1e-10;

// 64 uniform points in (0, 2].
std::vector<double> default_u_samples();

WitnessReport scan_nonclassicality(const ModelSpec& spec, const MomentumGrid& grid, const PropagatorSet& props,
                                   const std::vector<double>& u_samples);

} // namespace kdq
