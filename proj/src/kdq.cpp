#include "kdq/kdq.hpp"

#include "kdq/error.hpp"
#include "kdq/fock.hpp"

#include <cmath>
#include <numbers>

namespace kdq {

namespace {

using Eigen::Matrix2cd;
using Eigen::Matrix2d;

void check_same_p(const ModeFrames& fr, const ModePropagator& prop) {
    if (std::abs(fr.f0.p - prop.p) > 1e-12 || std::abs(fr.f1.p - prop.p) > 1e-12
        || std::abs(fr.f2.p - prop.p) > 1e-12) {
        throw Error(ErrorKind::MomentumMismatch, "frames and propagator refer to different momenta");
    }
}

Matrix2d unit_h(const ModeFrame& f) { return f.hmat / f.omega; }

// exp(-i u h1) and exp(i u U^dag h2 U) for unit-normalised generators.
struct Evolution {
    Matrix2cd b;
    Matrix2cd c;
};

Evolution evolution(const ModeFrames& fr, const ModePropagator& prop, cplx u) {
    const cplx i(0.0, 1.0);
    const Matrix2cd id = Matrix2cd::Identity();
    const Matrix2cd um = prop.matrix();
    const Matrix2cd k = um.adjoint() * unit_h(fr.f2).cast<cplx>() * um;
    const cplx a1 = u * fr.f1.omega;
    const cplx a2 = u * fr.f2.omega;
    return {std::cos(a1) * id - i * std::sin(a1) * unit_h(fr.f1).cast<cplx>(),
            std::cos(a2) * id + i * std::sin(a2) * k};
}

// (I - tanh(x) hhat0), optionally dephased in the eigenbasis of h1.
Matrix2d thermal_factor(const ModeFrames& fr, double beta, Scheme scheme) {
    const double th = std::tanh(beta * fr.f0.omega);
    Matrix2d a = Matrix2d::Identity() - th * unit_h(fr.f0);
    if (scheme == Scheme::TPM) {
        const Eigen::Vector2d vp = fr.f1.v_plus();
        const Eigen::Vector2d vm = fr.f1.v_minus();
        const Matrix2d pp = vp * vp.transpose();
        const Matrix2d pm = vm * vm.transpose();
        a = pp * a * pp + pm * a * pm;
    }
    return a;
}

} // namespace

ModeFrames mode_frames(const ModelSpec& spec, double p) {
    return {mode_frame(spec, p, spec.h0), mode_frame(spec, p, spec.h1), mode_frame(spec, p, spec.h2)};
}

cplx mode_char_factor(const ModeFrames& fr, double beta, const ModePropagator& prop, cplx u) {
    check_same_p(fr, prop);
    const double x = beta * fr.f0.omega;
    // exp(-beta h0) = cosh(x) I - sinh(x) hhat0
    const Matrix2d e0 = std::cosh(x) * Matrix2d::Identity() - std::sinh(x) * unit_h(fr.f0);
    const auto ev = evolution(fr, prop, u);
    return 2.0 + (e0.cast<cplx>() * ev.b * ev.c).trace();
}

double mode_char_norm(const ModeFrames& fr, double beta) {
    return 2.0 * (1.0 + std::cosh(beta * fr.f0.omega));
}

cplx mode_char_ratio(const ModeFrames& fr, double beta, const ModePropagator& prop, cplx u,
                     Scheme scheme) {
    check_same_p(fr, prop);
    const double sech = 1.0 / std::cosh(beta * fr.f0.omega);
    const auto ev = evolution(fr, prop, u);
    const cplx tr = (thermal_factor(fr, beta, scheme).cast<cplx>() * ev.b * ev.c).trace();
    return (2.0 * sech + tr) / (2.0 * sech + 2.0);
}

cplx KDQDistribution::total() const {
    cplx acc = 0.0;
    for (const auto& o : outcomes) acc += o.q;
    return acc;
}

std::array<cplx, 3> KDQDistribution::initial_marginal() const {
    std::array<cplx, 3> out{};
    for (std::size_t i = 0; i < outcomes.size(); ++i) out[i / 3] += outcomes[i].q;
    return out;
}

std::array<cplx, 3> KDQDistribution::final_marginal() const {
    std::array<cplx, 3> out{};
    for (std::size_t i = 0; i < outcomes.size(); ++i) out[i % 3] += outcomes[i].q;
    return out;
}

cplx KDQDistribution::raw_moment(int k) const {
    cplx acc = 0.0;
    for (const auto& o : outcomes) acc += o.q * std::pow(o.w, k);
    return acc;
}

KDQDistribution mode_kdq_distribution(const ModeFrames& fr, double beta, const ModePropagator& prop,
                                      Scheme scheme) {
    check_same_p(fr, prop);
    using fock::Matrix4cd;
    const Matrix4cd rho = fock::thermal_state(fr.f0, beta);
    const auto pi1 = fock::level_projectors(fr.f1);
    const auto pi2 = fock::level_projectors(fr.f2);
    const Matrix4cd u = fock::induced_unitary(prop);
    const Matrix4cd ud = u.adjoint();

    const double e1[3] = {-fr.f1.omega, 0.0, fr.f1.omega};
    const double e2[3] = {-fr.f2.omega, 0.0, fr.f2.omega};

    KDQDistribution d;
    d.p = fr.p();
    d.outcomes.reserve(9);
    for (int n = 0; n < 3; ++n) {
        const Matrix4cd inner = scheme == Scheme::KDQ ? Matrix4cd(pi1[n] * rho) : Matrix4cd(pi1[n] * rho * pi1[n]);
        const Matrix4cd x = u * inner * ud;
        for (int m = 0; m < 3; ++m) {
            // Tr[X Pi2] without forming the product
            const cplx q = (x.transpose().cwiseProduct(pi2[m])).sum();
            d.outcomes.push_back({e1[n], e2[m], e2[m] - e1[n], q});
        }
    }
    return d;
}

cplx tracked_log_ratio(const ModeFrames& fr, double beta, const ModePropagator& prop, cplx u,
                       Scheme scheme) {
    constexpr double kMaxPhaseStep = 0.5 * std::numbers::pi;
    constexpr double kTiny = 1e-300;
    cplx prev = 1.0;
    cplx acc = 0.0;
    double t = 0.0;
    double dt = 1.0;
    while (t < 1.0) {
        if (t + dt > 1.0) dt = 1.0 - t;
        const cplx r = mode_char_ratio(fr, beta, prop, (t + dt) * u, scheme);
        if (!(std::abs(r) >= kTiny)) {
            throw Error(ErrorKind::BranchTrackingFailure,
                        "g_p(u)/g_p(0) vanishes along the path at p = " + std::to_string(fr.p()));
        }
        const cplx step = std::log(r / prev);
        if (std::abs(step.imag()) > kMaxPhaseStep) {
            dt *= 0.5;
            if (dt < 1e-14) {
                throw Error(ErrorKind::BranchTrackingFailure,
                            "phase step cannot be resolved at p = " + std::to_string(fr.p()));
            }
            continue;
        }
        acc += step;
        prev = r;
        t += dt;
        dt *= 2.0;
    }
    return acc;
}

cplx char_function(const ModelSpec& spec, const MomentumGrid& grid, const PropagatorSet& props,
                   cplx u, Scheme scheme) {
    if (props.size() != grid.size()) {
        throw Error(ErrorKind::MomentumMismatch, "propagator set does not cover the grid");
    }
    const auto& nodes = grid.nodes();
    if (grid.kind() == GridKind::FiniteChain) {
        cplx prod = 1.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            prod *= mode_char_ratio(mode_frames(spec, nodes[i].p), spec.beta, props[i], u, scheme);
        }
        return prod;
    }
    cplx logsum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        logsum += nodes[i].weight
                * tracked_log_ratio(mode_frames(spec, nodes[i].p), spec.beta, props[i], u, scheme);
    }
    return std::exp(logsum / (2.0 * std::numbers::pi));
}

std::array<cplx, 4> cumulants_from_moments(const std::array<cplx, 4>& m) {
    const cplx m1 = m[0], m2 = m[1], m3 = m[2], m4 = m[3];
    return {
        m1,
        m2 - m1 * m1,
        m3 - 3.0 * m2 * m1 + 2.0 * m1 * m1 * m1,
        m4 - 4.0 * m3 * m1 - 3.0 * m2 * m2 + 12.0 * m2 * m1 * m1 - 6.0 * m1 * m1 * m1 * m1,
    };
}

WorkMoments work_moments(const ModelSpec& spec, const MomentumGrid& grid, const PropagatorSet& props,
                         Scheme scheme) {
    if (props.size() != grid.size()) {
        throw Error(ErrorKind::MomentumMismatch, "propagator set does not cover the grid");
    }
    WorkMoments out;
    out.mode_cumulants.reserve(grid.size());
    std::array<cplx, 4> dens{};
    const auto& nodes = grid.nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto d = mode_kdq_distribution(mode_frames(spec, nodes[i].p), spec.beta, props[i], scheme);
        std::array<cplx, 4> raw{};
        for (const auto& o : d.outcomes) {
            const double w2 = o.w * o.w;
            raw[0] += o.q * o.w;
            raw[1] += o.q * w2;
            raw[2] += o.q * w2 * o.w;
            raw[3] += o.q * w2 * w2;
        }
        const auto k = cumulants_from_moments(raw);
        const double scale = nodes[i].weight / (2.0 * std::numbers::pi);
        for (int j = 0; j < 4; ++j) dens[j] += scale * k[j];
        out.mode_cumulants.push_back(k);
    }
    out.mean_complex = dens[0];
    out.mean = dens[0].real();
    out.variance = dens[1];
    out.third_cumulant = dens[2];
    out.fourth_cumulant = dens[3];
    out.fourth_central = dens[3] + 3.0 * dens[1] * dens[1];
    return out;
}

} // namespace kdq
