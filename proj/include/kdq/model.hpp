// Translation-invariant quadratic fermionic chains in momentum space.
//
// Each momentum pair (p, -p) with 0 < p < pi carries a 2x2 Bogoliubov-de Gennes
// block acting on Psi_p = (c_p, c^dag_{-p}):
//
//     hmat(p, h) = [[ 2(h - T_p), -2 D_p ],
//                   [ -2 D_p,    -2(h - T_p) ]]
//
// with T_p = sum_r T(r) cos(p r) and D_p = sum_r D(r) sin(p r). The transverse-field
// Ising chain (J = 1) is hopping = pairing = {1}.

#pragma once

#include <Eigen/Dense>

#include <variant>
#include <vector>

namespace kdq {

struct SuddenQuench {};

// Linear field ramp h(t) = h1 + rate * t. `delta` is the ramp speed (> 0); the sign
// of the rate follows h2 - h1 and the duration is |h2 - h1| / delta.
struct LinearRamp {
    double delta = 1.0;
};

using Protocol = std::variant<SuddenQuench, LinearRamp>;

struct ModelSpec {
    std::vector<double> hopping{1.0}; // T(r), r = 1, 2, ...
    std::vector<double> pairing{1.0}; // D(r), r = 1, 2, ...
    double beta = 1.0;
    double h0 = 0.0; // field defining the initial thermal state
    double h1 = 0.0; // field at the start of the work protocol
    double h2 = 0.0; // field at the end of the work protocol
    Protocol protocol = SuddenQuench{};

    static ModelSpec ising(double beta, double h0, double h1, double h2,
                           Protocol protocol = SuddenQuench{});

    // Throws Error(ConfigError) on violated invariants.
    void validate() const;

    bool is_quench() const noexcept { return std::holds_alternative<SuddenQuench>(protocol); }
};

struct FourierCouplings {
    double hopping; // T_p
    double pairing; // D_p
};

FourierCouplings fourier_couplings(const ModelSpec& spec, double p);

// Per-mode frame at field h. `phi` is the Bogoliubov angle on the [0, 2 pi) branch:
// cos(phi) * omega = 2 (h - T_p), sin(phi) * omega = 2 D_p.
struct ModeFrame {
    double p = 0.0;
    double h = 0.0;
    double omega = 0.0;
    double phi = 0.0;
    Eigen::Matrix2d hmat = Eigen::Matrix2d::Zero();

    // Eigenvectors of hmat for +omega and -omega.
    Eigen::Vector2d v_plus() const;
    Eigen::Vector2d v_minus() const;
};

inline constexpr double kGapEpsilon = 1e-12;

// Throws Error(GaplessMode) when omega < kGapEpsilon.
ModeFrame mode_frame(const ModelSpec& spec, double p, double h);

// Overlap parameter Q = 2P - 1 between two eigenbases without intermediate dynamics.
inline double overlap_q(double phi_i, double phi_j) { return std::cos(phi_i - phi_j); }

enum class GridKind { GaussLegendre, FiniteChain };

struct GridNode {
    double p;
    double weight;
};

// Quadrature nodes on (0, pi). Weights sum to pi for both kinds.
class MomentumGrid {
public:
    static MomentumGrid gauss_legendre(int n);
    // Antiperiodic momenta p = pi (2m - 1) / L, m = 1..L/2, each with weight 2 pi / L.
    static MomentumGrid finite_chain(int L);

    const std::vector<GridNode>& nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    GridKind kind() const noexcept { return kind_; }
    // Node count for GaussLegendre, chain length for FiniteChain.
    int parameter() const noexcept { return parameter_; }

private:
    MomentumGrid(GridKind kind, int parameter, std::vector<GridNode> nodes)
        : kind_(kind), parameter_(parameter), nodes_(std::move(nodes)) {}

    GridKind kind_;
    int parameter_;
    std::vector<GridNode> nodes_;
};

inline constexpr int kDefaultGaussNodes = 2048;

// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
    std::vector<double> x;
    std::vector<double> w;
};
QuadratureRule gauss_legendre_rule(int n);

// (1/pi) * integral over (0, pi) of cos(phi_p(h_i) - phi_p(h_j)).
double mean_overlap_qbar(const ModelSpec& spec, const MomentumGrid& grid, double h_i, double h_j);

} // namespace kdq
