#include "kdq/observables.hpp"

#include "kdq/error.hpp"
#include "kdq/kdq.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kdq {

namespace {

struct ModeTerms {
    double tanh_half; // tanh(beta w0 / 2)
    double x;         // beta w0
    double w1;
    double w2;
    double q01;
    double q02;
    double q12;
};

ModeTerms mode_terms(const ModelSpec& spec, const ModePropagator& prop) {
    const auto fr = mode_frames(spec, prop.p);
    ModeTerms t;
    t.x = spec.beta * fr.f0.omega;
    t.tanh_half = std::tanh(0.5 * t.x);
    t.w1 = fr.f1.omega;
    t.w2 = fr.f2.omega;
    t.q01 = overlap_q(fr.f0.phi, fr.f1.phi);
    t.q02 = 2.0 * transition_probability(prop, fr.f0, fr.f2) - 1.0;
    t.q12 = 2.0 * transition_probability(prop, fr.f1, fr.f2) - 1.0;
    return t;
}

void check_cover(const MomentumGrid& grid, const PropagatorSet& props) {
    if (props.size() != grid.size()) {
        throw Error(ErrorKind::MomentumMismatch, "propagator set does not cover the grid");
    }
}

template <class F>
double integrate(const ModelSpec& spec, const MomentumGrid& grid, const PropagatorSet& props, F&& f) {
    check_cover(grid, props);
    double acc = 0.0;
    for (std::size_t i = 0; i < props.size(); ++i) {
        acc += grid.nodes()[i].weight * f(mode_terms(spec, props[i]));
    }
    return acc / (2.0 * std::numbers::pi);
}

} // namespace

double mean_work_density(const ModelSpec& spec, const MomentumGrid& grid, const PropagatorSet& props) {
    return integrate(spec, grid, props, [](const ModeTerms& t) {
        return t.tanh_half * (t.w1 * t.q01 - t.w2 * t.q02);
    });
}

double dephased_mean_work_density(const ModelSpec& spec, const MomentumGrid& grid,
                                  const PropagatorSet& props) {
    return integrate(spec, grid, props, [](const ModeTerms& t) {
        return t.tanh_half * (t.w1 * t.q01 - t.w2 * t.q12 * t.q01);
    });
}

double extraction_enhancement(const ModelSpec& spec, const MomentumGrid& grid, const PropagatorSet& props) {
    return integrate(spec, grid, props, [](const ModeTerms& t) {
        return t.tanh_half * t.w2 * (t.q01 * t.q12 - t.q02);
    });
}

double mode_coherence_entropy(double x, double q01) {
    constexpr double kLogFloor = 1e-300;
    const double p = std::clamp(0.5 * (1.0 + q01), 0.0, 1.0);
    const double em = std::exp(-x);
    const double em2 = em * em;
    const double norm = (1.0 + em) * (1.0 + em);
    // A, B and Z scaled by exp(-x)
    const double a = p + (1.0 - p) * em2;
    const double b = p * em2 + (1.0 - p);
    const double mixed = (a * (x + std::log(std::max(a, kLogFloor)))
                          + b * (x + std::log(std::max(b, kLogFloor)))) / norm;
    // relative entropy is non-negative; only round-off can push it below zero
    return std::max(0.0, x * std::tanh(0.5 * x) - mixed);
}

double coherence_entropy_density(const ModelSpec& spec, const MomentumGrid& grid) {
    double acc = 0.0;
    for (const auto& node : grid.nodes()) {
        const auto f0 = mode_frame(spec, node.p, spec.h0);
        const auto f1 = mode_frame(spec, node.p, spec.h1);
        acc += node.weight * mode_coherence_entropy(spec.beta * f0.omega, overlap_q(f0.phi, f1.phi));
    }
    return acc / std::numbers::pi;
}

ObservableSet compute_observables(const ModelSpec& spec, const MomentumGrid& grid, const PropagatorSet& props) {
    check_cover(grid, props);
    double mean = 0.0, deph = 0.0, enh = 0.0, ent = 0.0, qbar = 0.0;
    for (std::size_t i = 0; i < props.size(); ++i) {
        const double w = grid.nodes()[i].weight;
        const auto t = mode_terms(spec, props[i]);
        mean += w * t.tanh_half * (t.w1 * t.q01 - t.w2 * t.q02);
        deph += w * t.tanh_half * (t.w1 * t.q01 - t.w2 * t.q12 * t.q01);
        enh += w * t.tanh_half * t.w2 * (t.q01 * t.q12 - t.q02);
        ent += w * mode_coherence_entropy(t.x, t.q01);
        qbar += w * t.q01;
    }
    const double two_pi = 2.0 * std::numbers::pi;
    return {mean / two_pi, deph / two_pi, enh / two_pi, ent / std::numbers::pi, qbar / std::numbers::pi};
}

} // namespace kdq
