#pragma once

#include "kdq/dynamics.hpp"
#include "kdq/model.hpp"

#include <array>
#include <complex>
#include <vector>

namespace kdq {

enum class Scheme { KDQ, TPM };

// Frames of one momentum at the three fields h0 (state), h1 (start), h2 (end).
struct ModeFrames {
    ModeFrame f0, f1, f2;

    double p() const noexcept { return f0.p; }
};

ModeFrames mode_frames(const ModelSpec& spec, double p);

// g_p(u) = 2 + tr(exp(-beta h0) exp(-i u h1) exp(i u U^dag h2 U)).
cplx mode_char_factor(const ModeFrames& fr, double beta, const ModePropagator& prop, cplx u);

// g_p(0) = 2 (1 + cosh(beta omega0)).
double mode_char_norm(const ModeFrames& fr, double beta);

// g_p(u) / g_p(0), evaluated without forming cosh(beta omega0). For TPM the thermal
// factor is dephased in the eigenbasis of h1.
cplx mode_char_ratio(const ModeFrames& fr, double beta, const ModePropagator& prop, cplx u,
                     Scheme scheme = Scheme::KDQ);

struct KdqOutcome {
    double e1;
    double e2;
    double w;
    cplx q;
};

// Nine outcomes ordered (e1, e2) over (-omega, 0, +omega) x (-omega, 0, +omega).
// q = Tr[U Pi1 rho U^dag Pi2] for KDQ and Tr[U Pi1 rho Pi1 U^dag Pi2] for TPM, so that
// g_p(u) / g_p(0) = sum conj(q) exp(i u w).
struct KDQDistribution {
    double p = 0.0;
    std::vector<KdqOutcome> outcomes;

    cplx total() const;
    // Marginal over e2 for each e1 level, and over e1 for each e2 level.
    std::array<cplx, 3> initial_marginal() const;
    std::array<cplx, 3> final_marginal() const;
    cplx raw_moment(int k) const;
};

KDQDistribution mode_kdq_distribution(const ModeFrames& fr, double beta, const ModePropagator& prop,
                                      Scheme scheme);

// FiniteChain grids: prod_p g_p(u)/g_p(0). Gauss grids: the work-density generating
// function exp[(1/2pi) int_0^pi log(g_p(u)/g_p(0)) dp], with the log continued from u = 0.
cplx char_function(const ModelSpec& spec, const MomentumGrid& grid, const PropagatorSet& props,
                   cplx u, Scheme scheme = Scheme::KDQ);

// Continuous log of g_p(u)/g_p(0) along the segment [0, u].
// Throws Error(BranchTrackingFailure) if the ratio drops below 1e-300 on the way.
cplx tracked_log_ratio(const ModeFrames& fr, double beta, const ModePropagator& prop, cplx u,
                       Scheme scheme);

// Densities per site: sum over modes of weight / (2 pi) times the mode cumulant.
struct WorkMoments {
    double mean = 0.0;
    cplx mean_complex;
    cplx variance;
    cplx third_cumulant;
    cplx fourth_cumulant;
    cplx fourth_central; // kappa4 + 3 kappa2^2
    std::vector<std::array<cplx, 4>> mode_cumulants;
};

std::array<cplx, 4> cumulants_from_moments(const std::array<cplx, 4>& raw);

WorkMoments work_moments(const ModelSpec& spec, const MomentumGrid& grid, const PropagatorSet& props,
                         Scheme scheme = Scheme::KDQ);

} // namespace kdq
