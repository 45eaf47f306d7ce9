#pragma once

#include "kdq/model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace kdq {

using cplx = std::complex<double>;

// U = [[z, -conj(s)], [s, conj(z)]] in the (c_p, c^dag_{-p}) basis.
struct ModePropagator {
    double p = 0.0;
    cplx z{1.0, 0.0};
    cplx s{0.0, 0.0};

    Eigen::Matrix2cd matrix() const;
    double unitarity_defect() const { return std::abs(std::norm(z) + std::norm(s) - 1.0); }
};

struct RampIntegratorConfig {
    double rel_tol = 1e-13;
    double abs_tol = 1e-15;
    long max_steps = 10'000'000;

    void validate() const;
};

inline constexpr double kDegeneratePairing = 1e-14;

ModePropagator sudden_propagator(double p);

// Integrates i d/dt (z, s) = hmat(p, h(t)) (z, s) from (1, 0) over the ramp duration.
// Falls back to the pure-phase solution when the pairing D_p vanishes at this p.
ModePropagator ramp_propagator(const ModelSpec& spec, double p, const RampIntegratorConfig& cfg = {});

ModePropagator mode_propagator(const ModelSpec& spec, double p, const RampIntegratorConfig& cfg = {});

using PropagatorSet = std::vector<ModePropagator>;

// One propagator per grid node, same order as grid.nodes().
PropagatorSet build_propagators(const ModelSpec& spec, const MomentumGrid& grid,
                                const RampIntegratorConfig& cfg = {});

// |v_plus(to)^T U v_plus(from)|^2. Throws Error(MomentumMismatch) if the momenta differ.
double transition_probability(const ModePropagator& prop, const ModeFrame& from, const ModeFrame& to);

} // namespace kdq
