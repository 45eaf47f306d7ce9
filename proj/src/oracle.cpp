#include "kdq/oracle.hpp"

#include "kdq/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace kdq {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

using State = unsigned;

// Fermionic sign from the occupied sites below `site`.
double jw_sign(State s, int site) {
    return (std::popcount(s & ((State{1} << site) - 1)) % 2) ? -1.0 : 1.0;
}

// c_k |s>; returns false if the result vanishes.
bool annihilate(State& s, int k, double& amp) {
    if (!((s >> k) & 1U)) return false;
    amp *= jw_sign(s, k);
    s ^= State{1} << k;
    return true;
}

bool create(State& s, int k, double& amp) {
    if ((s >> k) & 1U) return false;
    amp *= jw_sign(s, k);
    s |= State{1} << k;
    return true;
}

struct Op {
    bool dagger;
    int site;
};

// Applies op2 op1 (op1 first) to |s> and records <s'| coef op2 op1 |s>.
void push_term(std::vector<Eigen::Triplet<double>>& trip, State s, double coef, Op op2, Op op1) {
    double amp = coef;
    State t = s;
    if (!(op1.dagger ? create(t, op1.site, amp) : annihilate(t, op1.site, amp))) return;
    if (!(op2.dagger ? create(t, op2.site, amp) : annihilate(t, op2.site, amp))) return;
    trip.emplace_back(static_cast<int>(t), static_cast<int>(s), amp);
}

double entropy_of(const VectorXd& lambda) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda[i] > 0.0) s -= lambda[i] * std::log(lambda[i]);
    }
    return s;
}

// H = hc + h diag(b) is linear in h, so the Taylor recursion
//   Y_{k+1} = -i dt/(k+1) (H(t0) Y_k + rate dt diag(b) Y_{k-1})
// is exact for each step of length dt.
MatrixXcd taylor_evolve(const SparseMatrixd& hc, const VectorXd& b, double h1, double rate,
                        double duration, int steps) {
    const Eigen::Index n = hc.rows();
    const double dt = duration / steps;
    MatrixXd yr = MatrixXd::Identity(n, n);
    MatrixXd yi = MatrixXd::Zero(n, n);
    for (int step = 0; step < steps; ++step) {
        const double hcur = h1 + rate * dt * step;
        MatrixXd pr = MatrixXd::Zero(n, n), pi = MatrixXd::Zero(n, n);
        MatrixXd cr = yr, ci = yi;
        MatrixXd sr = yr, si = yi;
        for (int k = 0; k < 200; ++k) {
            MatrixXd xr = hc * cr;
            MatrixXd xi = hc * ci;
            xr.noalias() += (hcur * b).asDiagonal() * cr;
            xi.noalias() += (hcur * b).asDiagonal() * ci;
            if (k > 0) {
                xr.noalias() += (rate * dt * b).asDiagonal() * pr;
                xi.noalias() += (rate * dt * b).asDiagonal() * pi;
            }
            const double f = dt / (k + 1);
            pr.swap(cr);
            pi.swap(ci);
            // -i (xr + i xi) = xi - i xr
            cr = f * xi;
            ci = -f * xr;
            sr += cr;
            si += ci;
            const double mag = std::max(cr.cwiseAbs().maxCoeff(), ci.cwiseAbs().maxCoeff());
            const double prev = std::max(pr.cwiseAbs().maxCoeff(), pi.cwiseAbs().maxCoeff());
            if (k >= 2 && mag < 1e-17 && prev < 1e-16) break;
        }
        yr.swap(sr);
        yi.swap(si);
    }
    MatrixXcd u(n, n);
    u.real() = yr;
    u.imag() = yi;
    return u;
}

double gershgorin_bound(const SparseMatrixd& m) {
    VectorXd rows = VectorXd::Zero(m.rows());
    for (int k = 0; k < m.outerSize(); ++k) {
        for (SparseMatrixd::InnerIterator it(m, k); it; ++it) rows[it.row()] += std::abs(it.value());
    }
    return rows.size() ? rows.maxCoeff() : 0.0;
}

std::pair<MatrixXcd, int> ramp_unitary(const ModelSpec& spec, int L, double delta) {
    const double dh = spec.h2 - spec.h1;
    const double duration = std::abs(dh) / delta;
    const double rate = std::copysign(delta, dh);
    const SparseMatrixd hc = dense_coupling_part(spec, L);
    const VectorXd b = dense_field_diagonal(L);
    const double norm = gershgorin_bound(hc) + L * std::max(std::abs(spec.h1), std::abs(spec.h2));
    int steps = std::max(1, static_cast<int>(std::ceil(norm * duration / 2.0)));
    MatrixXcd u = taylor_evolve(hc, b, spec.h1, rate, duration, steps);
    while (steps < (1 << 14)) {
        MatrixXcd finer = taylor_evolve(hc, b, spec.h1, rate, duration, 2 * steps);
        const double change = (finer - u).cwiseAbs().maxCoeff();
        steps *= 2;
        u.swap(finer);
        if (change < 1e-11) return {u, steps};
    }
    throw Error(ErrorKind::IntegrationFailure, "dense ramp evolution did not converge");
}

} // namespace

void check_dense_size(int L) {
    if (L % 2 != 0 || L < 4 || L > kMaxDenseSites) {
        throw Error(ErrorKind::DimensionTooLarge,
                    "dense oracle needs even L in [4, " + std::to_string(kMaxDenseSites) + "], got "
                        + std::to_string(L));
    }
}

SparseMatrixd dense_coupling_part(const ModelSpec& spec, int L) {
    check_dense_size(L);
    if (static_cast<int>(spec.hopping.size()) >= L || static_cast<int>(spec.pairing.size()) >= L) {
        throw Error(ErrorKind::ConfigError, "coupling range must be shorter than the chain");
    }
    const State dim = State{1} << L;
    std::vector<Eigen::Triplet<double>> trip;
    for (State s = 0; s < dim; ++s) {
        for (int j = 0; j < L; ++j) {
            for (std::size_t ri = 0; ri < spec.hopping.size(); ++ri) {
                const int r = static_cast<int>(ri) + 1;
                int k = j + r;
                double bc = 1.0;
                if (k >= L) {
                    k -= L;
                    bc = -1.0;
                }
                const double t = -spec.hopping[ri] * bc;
                const double d = -spec.pairing[ri] * bc;
                if (t != 0.0) {
                    push_term(trip, s, t, {true, j}, {false, k});  // c^dag_j c_k
                    push_term(trip, s, t, {true, k}, {false, j});  // c^dag_k c_j
                }
                if (d != 0.0) {
                    push_term(trip, s, d, {true, j}, {true, k});   // c^dag_j c^dag_k
                    push_term(trip, s, d, {false, k}, {false, j}); // c_k c_j
                }
            }
        }
    }
    SparseMatrixd h(dim, dim);
    h.setFromTriplets(trip.begin(), trip.end());
    h.prune(0.0);
    return h;
}

VectorXd dense_field_diagonal(int L) {
    check_dense_size(L);
    const State dim = State{1} << L;
    VectorXd b(dim);
    for (State s = 0; s < dim; ++s) b[s] = 2.0 * std::popcount(s) - L;
    return b;
}

SparseMatrixd dense_hamiltonian(const ModelSpec& spec, int L, double h) {
    SparseMatrixd m = dense_coupling_part(spec, L);
    SparseMatrixd diag(m.rows(), m.cols());
    diag.setIdentity();
    diag = diag * (dense_field_diagonal(L) * h).asDiagonal();
    return m + diag;
}

std::vector<double> momentum_many_body_spectrum(const ModelSpec& spec, int L, double h) {
    const auto grid = MomentumGrid::finite_chain(L);
    std::vector<double> levels{0.0};
    for (const auto& node : grid.nodes()) {
        const double w = mode_frame(spec, node.p, h).omega;
        std::vector<double> next;
        next.reserve(levels.size() * 4);
        for (double e : levels) {
            next.push_back(e - w);
            next.push_back(e);
            next.push_back(e);
            next.push_back(e + w);
        }
        levels.swap(next);
    }
    std::sort(levels.begin(), levels.end());
    return levels;
}

std::vector<int> cluster_levels(const VectorXd& sorted, double tol) {
    std::vector<int> label(sorted.size(), 0);
    int current = 0;
    for (Eigen::Index i = 1; i < sorted.size(); ++i) {
        const double gap = sorted[i] - sorted[i - 1];
        if (gap > tol && gap < 10.0 * tol) {
            throw Error(ErrorKind::DegeneracyClusteringAmbiguous,
                        "eigenvalue gap " + std::to_string(gap) + " is neither degenerate nor resolved");
        }
        if (gap > tol) ++current;
        label[i] = current;
    }
    return label;
}

DenseSystem build_dense(const ModelSpec& spec, int L) {
    check_dense_size(L);
    spec.validate();
    DenseSystem sys;
    sys.L = L;
    sys.spec = spec;
    sys.H0 = dense_hamiltonian(spec, L, spec.h0);
    sys.H1 = dense_hamiltonian(spec, L, spec.h1);
    sys.H2 = dense_hamiltonian(spec, L, spec.h2);

    Eigen::SelfAdjointEigenSolver<MatrixXd> es0(MatrixXd(sys.H0));
    Eigen::SelfAdjointEigenSolver<MatrixXd> es1(MatrixXd(sys.H1));
    Eigen::SelfAdjointEigenSolver<MatrixXd> es2(MatrixXd(sys.H2));
    sys.e0 = es0.eigenvalues();
    sys.e1 = es1.eigenvalues();
    sys.e2 = es2.eigenvalues();
    sys.v1 = es1.eigenvectors();
    sys.v2 = es2.eigenvectors();
    sys.cluster1 = cluster_levels(sys.e1);
    sys.cluster2 = cluster_levels(sys.e2);

    VectorXd lambda = (-spec.beta * (sys.e0.array() - sys.e0.minCoeff())).exp();
    lambda /= lambda.sum();
    sys.rho0 = es0.eigenvectors() * lambda.asDiagonal() * es0.eigenvectors().transpose();

    if (const auto* ramp = std::get_if<LinearRamp>(&spec.protocol); ramp && spec.h1 != spec.h2) {
        auto [u, steps] = ramp_unitary(spec, L, ramp->delta);
        sys.U = std::move(u);
        sys.ramp_steps = steps;
    } else {
        sys.U = MatrixXcd::Identity(sys.H0.rows(), sys.H0.cols());
    }
    return sys;
}

namespace {

// rho0 in the H1 eigenbasis, dephased across level clusters for TPM.
MatrixXd state_in_h1_basis(const DenseSystem& sys, Scheme scheme) {
    MatrixXd r = sys.v1.transpose() * sys.rho0 * sys.v1;
    if (scheme == Scheme::TPM) {
        for (Eigen::Index a = 0; a < r.rows(); ++a) {
            for (Eigen::Index c = 0; c < r.cols(); ++c) {
                if (sys.cluster1[a] != sys.cluster1[c]) r(a, c) = 0.0;
            }
        }
    }
    return r;
}

// K(b, a) = Tr[U rho |a><a| U^dag |b><b|] with a, b eigenvectors of H1, H2.
MatrixXcd transition_kernel(const DenseSystem& sys, Scheme scheme) {
    const MatrixXcd w = sys.v2.transpose().cast<cplx>() * sys.U * sys.v1.cast<cplx>();
    const MatrixXd r = state_in_h1_basis(sys, scheme);
    const MatrixXcd wr = w * r.cast<cplx>();
    return wr.cwiseProduct(w.conjugate());
}

} // namespace

std::vector<cplx> dense_char_function(const DenseSystem& sys, const std::vector<cplx>& us, Scheme scheme) {
    const MatrixXcd k = transition_kernel(sys, scheme);
    const cplx i(0.0, 1.0);
    std::vector<cplx> out;
    out.reserve(us.size());
    Eigen::VectorXcd d1(sys.e1.size()), d2(sys.e2.size());
    for (const cplx u : us) {
        for (Eigen::Index a = 0; a < d1.size(); ++a) d1[a] = std::exp(-i * u * sys.e1[a]);
        for (Eigen::Index b = 0; b < d2.size(); ++b) d2[b] = std::exp(i * u * sys.e2[b]);
        out.push_back(d2.transpose() * k * d1);
    }
    return out;
}

cplx dense_char_function(const DenseSystem& sys, cplx u, Scheme scheme) {
    return dense_char_function(sys, std::vector<cplx>{u}, scheme).front();
}

DenseJoint dense_joint_distribution(const DenseSystem& sys, Scheme scheme) {
    const MatrixXcd k = transition_kernel(sys, scheme);
    DenseJoint out;
    const int n1 = sys.cluster1.back() + 1;
    const int n2 = sys.cluster2.back() + 1;
    out.e1.assign(n1, 0.0);
    out.e2.assign(n2, 0.0);
    std::vector<int> c1(n1, 0), c2(n2, 0);
    for (Eigen::Index a = 0; a < sys.e1.size(); ++a) {
        out.e1[sys.cluster1[a]] += sys.e1[a];
        ++c1[sys.cluster1[a]];
    }
    for (Eigen::Index b = 0; b < sys.e2.size(); ++b) {
        out.e2[sys.cluster2[b]] += sys.e2[b];
        ++c2[sys.cluster2[b]];
    }
    for (int n = 0; n < n1; ++n) out.e1[n] /= c1[n];
    for (int m = 0; m < n2; ++m) out.e2[m] /= c2[m];
    out.q = MatrixXcd::Zero(n2, n1);
    for (Eigen::Index b = 0; b < k.rows(); ++b) {
        for (Eigen::Index a = 0; a < k.cols(); ++a) {
            out.q(sys.cluster2[b], sys.cluster1[a]) += std::conj(k(b, a));
        }
    }
    return out;
}

double dense_mean_work(const DenseSystem& sys) {
    const MatrixXcd evolved = sys.U * sys.rho0.cast<cplx>() * sys.U.adjoint();
    double final_energy = 0.0;
    double initial_energy = 0.0;
    for (int k = 0; k < sys.H2.outerSize(); ++k) {
        for (SparseMatrixd::InnerIterator it(sys.H2, k); it; ++it) {
            final_energy += (evolved(it.col(), it.row()) * it.value()).real();
        }
    }
    for (int k = 0; k < sys.H1.outerSize(); ++k) {
        for (SparseMatrixd::InnerIterator it(sys.H1, k); it; ++it) {
            initial_energy += sys.rho0(it.col(), it.row()) * it.value();
        }
    }
    return final_energy - initial_energy;
}

double dense_coherence_entropy(const DenseSystem& sys) {
    VectorXd lambda = (-sys.spec.beta * (sys.e0.array() - sys.e0.minCoeff())).exp();
    lambda /= lambda.sum();
    const double s_rho = entropy_of(lambda);

    const MatrixXd r = state_in_h1_basis(sys, Scheme::TPM);
    double s_deph = 0.0;
    Eigen::Index start = 0;
    const Eigen::Index n = r.rows();
    while (start < n) {
        Eigen::Index stop = start + 1;
        while (stop < n && sys.cluster1[stop] == sys.cluster1[start]) ++stop;
        const MatrixXd blk = r.block(start, start, stop - start, stop - start);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(blk, Eigen::EigenvaluesOnly);
        s_deph += entropy_of(es.eigenvalues());
        start = stop;
    }
    return s_deph - s_rho;
}

} // namespace kdq
