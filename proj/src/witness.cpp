#include "kdq/witness.hpp"

#include "kdq/error.hpp"

#include <algorithm>
#include <cmath>

namespace kdq {

namespace {

double amplitude_term(const ModeFrames& fr, const ModePropagator& prop) {
    const cplx z = prop.z;
    const cplx s = prop.s;
    return 2.0 * std::cos(fr.f2.phi) * (z * s).imag()
         + std::sin(fr.f2.phi) * ((z * z).imag() - (s * s).imag());
}

} // namespace

double imag_witness_closed_form(const ModeFrames& fr, double beta, const ModePropagator& prop, double u) {
    return 4.0 * std::sinh(beta * fr.f0.omega) * std::sin(fr.f0.phi - fr.f1.phi)
         * std::sin(u * fr.f1.omega) * std::sin(u * fr.f2.omega) * amplitude_term(fr, prop);
}

double normalized_imag_witness(const ModeFrames& fr, double beta, const ModePropagator& prop, double u) {
    // sinh(x) / (2 (1 + cosh x)) = tanh(x / 2) / 2
    const double x = beta * fr.f0.omega;
    return 2.0 * std::tanh(0.5 * x) * std::sin(fr.f0.phi - fr.f1.phi)
         * std::sin(u * fr.f1.omega) * std::sin(u * fr.f2.omega) * amplitude_term(fr, prop);
}

std::vector<double> default_u_samples() {
    std::vector<double> u(64);
    for (int k = 0; k < 64; ++k) u[k] = 2.0 * (k + 1) / 64.0;
    return u;
}

WitnessReport scan_nonclassicality(const ModelSpec& spec, const MomentumGrid& grid, const PropagatorSet& props,
                                   const std::vector<double>& u_samples) {
    if (u_samples.empty()) throw Error(ErrorKind::ConfigError, "witness scan needs at least one u sample");
    if (props.size() != grid.size()) {
        throw Error(ErrorKind::MomentumMismatch, "propagator set does not cover the grid");
    }
    WitnessReport rep;
    for (std::size_t i = 0; i < props.size(); ++i) {
        const auto fr = mode_frames(spec, grid.nodes()[i].p);
        for (double u : u_samples) {
            rep.max_imag_witness = std::max(rep.max_imag_witness,
                                            std::abs(normalized_imag_witness(fr, spec.beta, props[i], u)));
        }
    }
    const auto mom = work_moments(spec, grid, props, Scheme::KDQ);
    rep.mu4_real = mom.fourth_central.real();
    rep.mu4_imag_abs = std::abs(mom.fourth_central.imag());
    rep.nonclassical_imag = rep.max_imag_witness > kImagWitnessThreshold;
    rep.nonclassical_negativity = rep.mu4_real < -kNegativityThreshold;
    return rep;
}

} // namespace kdq
