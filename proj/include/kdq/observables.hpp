#pragma once

#include "kdq/dynamics.hpp"
#include "kdq/model.hpp"

namespace kdq {

// Work density: int dp/2pi tanh(beta w0/2) (w1 Q01 - w2 Q02).
double mean_work_density(const ModelSpec& spec, const MomentumGrid& grid, const PropagatorSet& props);

// Same with rho0 dephased in the eigenbasis of H(h1): Q02 -> Q12 Q01.
double dephased_mean_work_density(const ModelSpec& spec, const MomentumGrid& grid,
                                  const PropagatorSet& props);

// int dp/2pi tanh(beta w0/2) w2 (Q01 Q12 - Q02) = mean - dephased mean.
double extraction_enhancement(const ModelSpec& spec, const MomentumGrid& grid, const PropagatorSet& props);

// Per-mode S[Delta1(rho_p)] - S[rho_p] in nats.
double mode_coherence_entropy(double x, double q01);

// (1/pi) int_0^pi of the per-mode relative entropy of coherence.
double coherence_entropy_density(const ModelSpec& spec, const MomentumGrid& grid);

struct ObservableSet {
    double mean_w = 0.0;
    double mean_w_dephased = 0.0;
    double enhancement = 0.0;
    double coherence_entropy = 0.0;
    double qbar01 = 0.0;
};

// All observables in one pass over the grid.
ObservableSet compute_observables(const ModelSpec& spec, const MomentumGrid& grid, const PropagatorSet& props);

} // namespace kdq
