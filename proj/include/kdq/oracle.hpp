// Brute-force many-body reference: real-space fermion Hamiltonians on the full
// 2^L occupation basis, no momentum decomposition.
//
//   H(h) = - sum_j sum_r [ T(r) (c^dag_j c_{j+r} + h.c.) + D(r) (c^dag_j c^dag_{j+r} + h.c.) ]
//          + h sum_j (2 n_j - 1)
//
// with antiperiodic wrap c_{j+L} = -c_j.

#pragma once

#include "kdq/kdq.hpp"
#include "kdq/model.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace kdq {

inline constexpr int kMaxDenseSites = 12;

using SparseMatrixd = Eigen::SparseMatrix<double>;

// Throws Error(DimensionTooLarge) unless L is even with 4 <= L <= 12.
void check_dense_size(int L);

// Field-independent part (hopping and pairing) and the diagonal of sum_j (2 n_j - 1).
SparseMatrixd dense_coupling_part(const ModelSpec& spec, int L);
Eigen::VectorXd dense_field_diagonal(int L);
SparseMatrixd dense_hamiltonian(const ModelSpec& spec, int L, double h);

// Sorted multiset { sum_p s_p omega_p(h) : s_p in {-1, 0, 0, +1} } over FiniteChain(L).
std::vector<double> momentum_many_body_spectrum(const ModelSpec& spec, int L, double h);

// Cluster labels for ascending eigenvalues. Gaps <= tol merge; a gap in (tol, 10 tol)
// throws Error(DegeneracyClusteringAmbiguous).
std::vector<int> cluster_levels(const Eigen::VectorXd& sorted, double tol = 1e-8);

struct DenseSystem {
    int L = 0;
    ModelSpec spec;
    SparseMatrixd H0, H1, H2;
    Eigen::MatrixXd rho0;
    Eigen::MatrixXcd U;

    Eigen::VectorXd e0, e1, e2;   // ascending spectra
    Eigen::MatrixXd v1, v2;       // eigenvectors of H1, H2
    std::vector<int> cluster1;    // level cluster of each H1 eigenvector
    std::vector<int> cluster2;
    int ramp_steps = 0;           // Taylor steps used for U (0 for a quench)
};

DenseSystem build_dense(const ModelSpec& spec, int L);

// Tr[rho e^{-iuH1} U^dag e^{iuH2} U], rho = rho0 (KDQ) or its H1-dephased form (TPM).
cplx dense_char_function(const DenseSystem& sys, cplx u, Scheme scheme = Scheme::KDQ);
std::vector<cplx> dense_char_function(const DenseSystem& sys, const std::vector<cplx>& us,
                                      Scheme scheme = Scheme::KDQ);

// Joint weights on level clusters: q(m, n) = Tr[U Pi1_n rho U^dag Pi2_m] (rho dephased for TPM).
struct DenseJoint {
    std::vector<double> e1; // cluster energies of H1
    std::vector<double> e2; // cluster energies of H2
    Eigen::MatrixXcd q;     // rows: H2 clusters, cols: H1 clusters
};

DenseJoint dense_joint_distribution(const DenseSystem& sys, Scheme scheme = Scheme::KDQ);

// Tr[U rho0 U^dag H2] - Tr[rho0 H1]
double dense_mean_work(const DenseSystem& sys);

// S[Delta1(rho0)] - S[rho0]
double dense_coherence_entropy(const DenseSystem& sys);

} // namespace kdq
