#include "kdq/model.hpp"

#include "kdq/error.hpp"

#include <cmath>
#include <stdexcept>
#include <numbers>
#include <string>

namespace kdq {

ModelSpec ModelSpec::ising(double beta, double h0, double h1, double h2, Protocol protocol) {
    ModelSpec spec;
    spec.beta = beta;
    spec.h0 = h0;
    spec.h1 = h1;
    spec.h2 = h2;
    spec.protocol = protocol;
    return spec;
}

void ModelSpec::validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw Error(ErrorKind::ConfigError, "beta must be finite and > 0");
    }
    if (hopping.size() != pairing.size()) {
        throw Error(ErrorKind::ConfigError, "hopping and pairing must have the same length");
    }
    if (hopping.empty()) {
        throw Error(ErrorKind::ConfigError, "at least one coupling range is required");
    }
    for (std::size_t r = 0; r < hopping.size(); ++r) {
        if (!std::isfinite(hopping[r]) || !std::isfinite(pairing[r])) {
            throw Error(ErrorKind::ConfigError, "couplings must be finite");
        }
    }
    if (!std::isfinite(h0) || !std::isfinite(h1) || !std::isfinite(h2)) {
        throw Error(ErrorKind::ConfigError, "fields must be finite");
    }
    if (const auto* ramp = std::get_if<LinearRamp>(&protocol)) {
        if (!(ramp->delta > 0.0) || !std::isfinite(ramp->delta)) {
            throw Error(ErrorKind::ConfigError, "ramp delta must be finite and > 0");
        }
    }
}

FourierCouplings fourier_couplings(const ModelSpec& spec, double p) {
    FourierCouplings out{0.0, 0.0};
    for (std::size_t i = 0; i < spec.hopping.size(); ++i) {
        const double r = static_cast<double>(i + 1);
        out.hopping += spec.hopping[i] * std::cos(p * r);
        out.pairing += spec.pairing[i] * std::sin(p * r);
    }
    return out;
}

Eigen::Vector2d ModeFrame::v_plus() const {
    return {std::cos(0.5 * phi), -std::sin(0.5 * phi)};
}

Eigen::Vector2d ModeFrame::v_minus() const {
    return {std::sin(0.5 * phi), std::cos(0.5 * phi)};
}

ModeFrame mode_frame(const ModelSpec& spec, double p, double h) {
    if (!(p >= 0.0 && p <= std::numbers::pi)) {
        throw std::invalid_argument("mode_frame: momentum outside [0, pi]");
    }
    const auto [tp, dp] = fourier_couplings(spec, p);
    const double diag = 2.0 * (h - tp);
    const double off = 2.0 * dp;

    ModeFrame f;
    f.p = p;
    f.h = h;
    f.omega = std::hypot(diag, off);
    if (f.omega < kGapEpsilon) {
        throw Error(ErrorKind::GaplessMode,
                    "omega vanishes at p = " + std::to_string(p) + ", h = " + std::to_string(h));
    }
    f.phi = std::atan2(off, diag);
    if (f.phi < 0.0) f.phi += 2.0 * std::numbers::pi;
    f.hmat << diag, -off, -off, -diag;
    return f;
}

QuadratureRule gauss_legendre_rule(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre_rule: n must be >= 1");
    QuadratureRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            if (n == 1) { p1 = x; p0 = 1.0; }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Re-evaluate the derivative at the converged node.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        if (n == 1) { p1 = x; p0 = 1.0; }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.x[i] = -x;
        rule.x[n - 1 - i] = x;
        rule.w[i] = w;
        rule.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.x[n / 2] = 0.0;
    return rule;
}

MomentumGrid MomentumGrid::gauss_legendre(int n) {
    if (n < 1) throw Error(ErrorKind::ConfigError, "Gauss-Legendre grid needs n >= 1");
    const auto rule = gauss_legendre_rule(n);
    const double half_pi = 0.5 * std::numbers::pi;
    std::vector<GridNode> nodes(n);
    for (int i = 0; i < n; ++i) {
        nodes[i] = {half_pi * (rule.x[i] + 1.0), half_pi * rule.w[i]};
    }
    return MomentumGrid(GridKind::GaussLegendre, n, std::move(nodes));
}

MomentumGrid MomentumGrid::finite_chain(int L) {
    if (L < 2 || L % 2 != 0) {
        throw Error(ErrorKind::ConfigError, "finite chain length must be even and >= 2");
    }
    std::vector<GridNode> nodes(L / 2);
    const double weight = 2.0 * std::numbers::pi / L;
    for (int m = 1; m <= L / 2; ++m) {
        nodes[m - 1] = {std::numbers::pi * (2.0 * m - 1.0) / L, weight};
    }
    return MomentumGrid(GridKind::FiniteChain, L, std::move(nodes));
}

double mean_overlap_qbar(const ModelSpec& spec, const MomentumGrid& grid, double h_i, double h_j) {
    double acc = 0.0;
    for (const auto& node : grid.nodes()) {
        const auto fi = mode_frame(spec, node.p, h_i);
        const auto fj = mode_frame(spec, node.p, h_j);
        acc += node.weight * overlap_q(fi.phi, fj.phi);
    }
    return acc / std::numbers::pi;
}

} // namespace kdq
