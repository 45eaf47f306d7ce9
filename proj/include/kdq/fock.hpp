// Four-state Fock space of one momentum pair, basis
// { |0>, c^dag_p |0>, c^dag_{-p} |0>, c^dag_p c^dag_{-p} |0> }.
// Quadratic forms Psi^dag M Psi only couple |0> and |pp> (the even block) and are
// diagonal on the singly occupied states.

#pragma once

#include "kdq/dynamics.hpp"
#include "kdq/model.hpp"

#include <Eigen/Dense>

#include <array>

namespace kdq::fock {

using Matrix4cd = Eigen::Matrix4cd;

// Psi^dag M Psi with Psi = (c_p, c^dag_{-p}).
Matrix4cd quadratic_form(const Eigen::Matrix2cd& m);

// Places `even` on the (|0>, |pp>) block and `odd` on both singly occupied states.
Matrix4cd block(const Eigen::Matrix2cd& even, cplx odd);

Matrix4cd mode_hamiltonian(const ModeFrame& f);

// exp(-beta H) / Z in an overflow-safe form.
Matrix4cd thermal_state(const ModeFrame& f0, double beta);

// Eigenprojectors for the levels (-omega, 0, +omega); the two zero states share one projector.
// Throws Error(ProjectorError) if the projectors fail idempotence, completeness or the
// eigen-equation by more than 1e-10.
std::array<Matrix4cd, 3> level_projectors(const ModeFrame& f);

// Many-body evolution induced by the single-particle 2x2 propagator.
Matrix4cd induced_unitary(const ModePropagator& prop);

} // namespace kdq::fock
