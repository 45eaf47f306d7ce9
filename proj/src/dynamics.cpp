#include "kdq/dynamics.hpp"

#include "kdq/error.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <string>

namespace kdq {

namespace odeint = boost::numeric::odeint;

Eigen::Matrix2cd ModePropagator::matrix() const {
    Eigen::Matrix2cd u;
    u << z, -std::conj(s), s, std::conj(z);
    return u;
}

void RampIntegratorConfig::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw Error(ErrorKind::ConfigError, "ODE tolerances must be > 0");
    }
    if (max_steps <= 0) throw Error(ErrorKind::ConfigError, "ODE max_steps must be > 0");
}

ModePropagator sudden_propagator(double p) {
    return ModePropagator{p, {1.0, 0.0}, {0.0, 0.0}};
}

namespace {

using State = std::array<double, 4>; // Re z, Im z, Re s, Im s

struct LzsmSystem {
    double h1;
    double rate;
    double tp; // T_p
    double c;  // off-diagonal of hmat, -2 D_p

    void operator()(const State& x, State& dxdt, double t) const {
        const double a = 2.0 * (h1 + rate * t - tp);
        // d/dt (z, s) = -i hmat (z, s)
        dxdt[0] = a * x[1] + c * x[3];
        dxdt[1] = -(a * x[0] + c * x[2]);
        dxdt[2] = c * x[1] - a * x[3];
        dxdt[3] = -(c * x[0] - a * x[2]);
    }
};

} // namespace

ModePropagator ramp_propagator(const ModelSpec& spec, double p, const RampIntegratorConfig& cfg) {
    const auto* ramp = std::get_if<LinearRamp>(&spec.protocol);
    if (!ramp) throw Error(ErrorKind::ConfigError, "ramp_propagator needs a LinearRamp protocol");
    cfg.validate();

    const double dh = spec.h2 - spec.h1;
    if (dh == 0.0) return sudden_propagator(p);
    const double duration = std::abs(dh) / ramp->delta;
    const double rate = std::copysign(ramp->delta, dh);
    const auto [tp, dp] = fourier_couplings(spec, p);

    if (std::abs(dp) < kDegeneratePairing) {
        const double phase = 2.0 * duration * (0.5 * (spec.h1 + spec.h2) - tp);
        return ModePropagator{p, std::polar(1.0, -phase), {0.0, 0.0}};
    }

    LzsmSystem sys{spec.h1, rate, tp, -2.0 * dp};
    auto stepper = odeint::make_controlled(cfg.abs_tol, cfg.rel_tol,
                                           odeint::runge_kutta_fehlberg78<State>());
    State x{1.0, 0.0, 0.0, 0.0};
    double t = 0.0;
    // Rough initial step from the largest instantaneous frequency.
    const double wmax = 2.0 * (std::max(std::abs(spec.h1), std::abs(spec.h2)) + std::abs(tp) + std::abs(dp));
    double dt = std::min(duration, 0.1 / std::max(wmax, 1.0));
    long attempts = 0;
    while (t < duration) {
        if (++attempts > cfg.max_steps) {
            throw Error(ErrorKind::IntegrationFailure,
                        "step budget exhausted at p = " + std::to_string(p));
        }
        const bool last = t + dt >= duration;
        if (last) dt = duration - t;
        const double t_before = t;
        if (stepper.try_step(sys, x, t, dt) == odeint::success) {
            if (last) t = duration;
        } else if (t_before + dt == t_before) {
            throw Error(ErrorKind::IntegrationFailure, "step size underflow at p = " + std::to_string(p));
        }
    }
    return ModePropagator{p, {x[0], x[1]}, {x[2], x[3]}};
}

ModePropagator mode_propagator(const ModelSpec& spec, double p, const RampIntegratorConfig& cfg) {
    if (spec.is_quench()) return sudden_propagator(p);
    return ramp_propagator(spec, p, cfg);
}

PropagatorSet build_propagators(const ModelSpec& spec, const MomentumGrid& grid,
                                const RampIntegratorConfig& cfg) {
    PropagatorSet props;
    props.reserve(grid.size());
    for (const auto& node : grid.nodes()) props.push_back(mode_propagator(spec, node.p, cfg));
    return props;
}

double transition_probability(const ModePropagator& prop, const ModeFrame& from, const ModeFrame& to) {
    if (std::abs(prop.p - from.p) > 1e-12 || std::abs(prop.p - to.p) > 1e-12) {
        throw Error(ErrorKind::MomentumMismatch, "propagator and frames refer to different momenta");
    }
    const Eigen::Vector2d a = from.v_plus();
    const Eigen::Vector2d b = to.v_plus();
    // b^T U a with U = [[z, -s*], [s, z*]]
    const cplx amp = b[0] * (prop.z * a[0] - std::conj(prop.s) * a[1])
                   + b[1] * (prop.s * a[0] + std::conj(prop.z) * a[1]);
    return std::norm(amp);
}

} // namespace kdq
