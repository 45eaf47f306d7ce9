#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kdq/error.hpp"
#include "kdq/kdq.hpp"
#include "kdq/observables.hpp"
#include "support/oracles.hpp"

#include <Eigen/Eigenvalues>

#include <numbers>

using namespace kdq;
using kdq::testing::PairFock;
using kdq::testing::Rng;
constexpr double pi = std::numbers::pi;

namespace {

const MomentumGrid& grid() {
    static const auto g = MomentumGrid::gauss_legendre(kDefaultGaussNodes);
    return g;
}

double von_neumann(const Eigen::Matrix4cd& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
    double s = 0.0;
    for (int k = 0; k < 4; ++k) {
        const double l = es.eigenvalues()[k];
        if (l > 1e-300) s -= l * std::log(l);
    }
    return s;
}

// S[Delta1(rho)] - S[rho] for one mode pair, from the 4x4 Fock matrices.
double oracle_mode_entropy(const PairFock& f, double p, double beta, double h0, double h1) {
    const Eigen::Matrix4cd hm0 = f.quad(kdq::testing::ising_block(p, h0).cast<cplx>());
    const Eigen::Matrix4cd hm1 = f.quad(kdq::testing::ising_block(p, h1).cast<cplx>());
    const Eigen::Matrix4cd e = (-beta * hm0).exp();
    const Eigen::Matrix4cd rho = e / e.trace();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(hm1);
    Eigen::Matrix4cd deph = Eigen::Matrix4cd::Zero();
    for (int k = 0; k < 4; ++k) {
        const Eigen::Vector4cd v = es.eigenvectors().col(k);
        deph += (v.adjoint() * rho * v)(0, 0) * v * v.adjoint();
    }
    return von_neumann(deph) - von_neumann(rho);
}

} // namespace

TEST_CASE("no work without a quench") {
    const auto spec = ModelSpec::ising(15.0, 1.7, 0.4, 0.4);
    const auto props = build_propagators(spec, grid());
    CHECK(std::abs(mean_work_density(spec, grid(), props)) < 1e-14);
    CHECK(std::abs(dephased_mean_work_density(spec, grid(), props)) < 1e-14);
}

TEST_CASE("mean work is odd in h0 for quenches") {
    auto a = ModelSpec::ising(15.0, 0.7, 1.3, 0.5);
    auto b = ModelSpec::ising(15.0, -0.7, 1.3, 0.5);
    const auto pa = build_propagators(a, grid());
    CHECK(std::abs(mean_work_density(a, grid(), pa) + mean_work_density(b, grid(), pa)) <= 1e-10);
    CHECK(std::abs(mean_work_density(a, grid(), pa)) > 1e-3);
}

TEST_CASE("commuting case matches the TPM mean") {
    for (double h1 : {-1.8, -0.6, 0.2, 0.9, 1.4, 2.0}) {
        const auto spec = ModelSpec::ising(15.0, h1, h1, 0.5);
        const auto props = build_propagators(spec, grid());
        const double tpm = work_moments(spec, grid(), props, Scheme::TPM).mean;
        CHECK(std::abs(mean_work_density(spec, grid(), props) - tpm) <= 1e-9);
        CHECK(std::abs(dephased_mean_work_density(spec, grid(), props) - tpm) <= 1e-9);
        CHECK(std::abs(extraction_enhancement(spec, grid(), props)) <= 1e-12);
    }
}

TEST_CASE("dephased mean agrees with the TPM distribution") {
    const ModelSpec cases[] = {
        ModelSpec::ising(15.0, 2.0, 0.0, 0.5),
        ModelSpec::ising(3.0, -1.4, 1.6, 0.5),
        ModelSpec::ising(15.0, 2.0, -2.0, 0.5, LinearRamp{4.0}),
        ModelSpec::ising(1.0, 0.3, -0.7, 1.8, LinearRamp{1.5}),
    };
    for (const auto& spec : cases) {
        const auto props = build_propagators(spec, grid());
        const double tpm = work_moments(spec, grid(), props, Scheme::TPM).mean;
        CHECK(std::abs(dephased_mean_work_density(spec, grid(), props) - tpm) <= 1e-9);
        const double kdq_mean = work_moments(spec, grid(), props, Scheme::KDQ).mean;
        CHECK(std::abs(mean_work_density(spec, grid(), props) - kdq_mean) <= 1e-9);
    }
}

TEST_CASE("dephased work vanishes at the orthogonal points") {
    for (auto [h0, h1] : {std::pair{1.0, -1.0}, std::pair{-1.0, 1.0}}) {
        const auto spec = ModelSpec::ising(15.0, h0, h1, 0.5);
        const auto props = build_propagators(spec, grid());
        CHECK(std::abs(dephased_mean_work_density(spec, grid(), props)) < 1e-12);
    }
}

TEST_CASE("property: enhancement is the difference of the two means") {
    Rng rng(51);
    for (int t = 0; t < 12; ++t) {
        ModelSpec spec = ModelSpec::ising(rng.uniform(0.5, 20.0), rng.field(), rng.field(), rng.field());
        if (t % 2) spec.protocol = LinearRamp{rng.uniform(1.0, 8.0)};
        const auto g = MomentumGrid::gauss_legendre(256);
        const auto props = build_propagators(spec, g);
        const double diff = mean_work_density(spec, g, props) - dephased_mean_work_density(spec, g, props);
        CHECK(std::abs(extraction_enhancement(spec, g, props) - diff) <= 1e-12);
    }
}

TEST_CASE("one-pass observables agree with the individual functions") {
    const auto spec = ModelSpec::ising(15.0, 1.6, -1.2, 0.5, LinearRamp{4.0});
    const auto g = MomentumGrid::gauss_legendre(300);
    const auto props = build_propagators(spec, g);
    const auto o = compute_observables(spec, g, props);
    CHECK(std::abs(o.mean_w - mean_work_density(spec, g, props)) < 1e-13);
    CHECK(std::abs(o.mean_w_dephased - dephased_mean_work_density(spec, g, props)) < 1e-13);
    CHECK(std::abs(o.enhancement - extraction_enhancement(spec, g, props)) < 1e-13);
    CHECK(std::abs(o.coherence_entropy - coherence_entropy_density(spec, g)) < 1e-13);
    CHECK(std::abs(o.qbar01 - mean_overlap_qbar(spec, g, spec.h0, spec.h1)) < 1e-13);
    CHECK_THROWS_AS(compute_observables(spec, g, PropagatorSet(3)), Error);
}

TEST_CASE("property: per-mode coherence entropy against the Fock oracle") {
    const PairFock f;
    Rng rng(52);
    for (int t = 0; t < 60; ++t) {
        const double p = rng.uniform(0.05, pi - 0.05);
        const double beta = rng.uniform(0.05, 4.0);
        const double h0 = rng.field(), h1 = rng.field();
        const auto spec = ModelSpec::ising(beta, h0, h1, 0.0);
        const auto f0 = mode_frame(spec, p, h0), f1 = mode_frame(spec, p, h1);
        const double got = mode_coherence_entropy(beta * f0.omega, overlap_q(f0.phi, f1.phi));
        CHECK(std::abs(got - oracle_mode_entropy(f, p, beta, h0, h1)) < 1e-11);
        CHECK(got >= -1e-15);
        CHECK(got <= std::log(2.0) + 1e-12);
    }
}

TEST_CASE("per-mode coherence entropy limits") {
    CHECK(std::abs(mode_coherence_entropy(3.0, 1.0)) < 1e-15);
    CHECK(std::abs(mode_coherence_entropy(0.0, 0.3)) < 1e-15);
    CHECK(std::abs(mode_coherence_entropy(800.0, 0.0) - std::log(2.0)) < 1e-12);
    CHECK(std::isfinite(mode_coherence_entropy(1e5, -1.0)));
}

TEST_CASE("coherence entropy density") {
    const auto same = ModelSpec::ising(15.0, 0.8, 0.8, 0.5);
    CHECK(std::abs(coherence_entropy_density(same, grid())) < 1e-14);
    Rng rng(53);
    for (int t = 0; t < 10; ++t) {
        const auto hot = ModelSpec::ising(1e-6, rng.uniform(-2, 2), rng.uniform(-2, 2), 0.5);
        CHECK(coherence_entropy_density(hot, grid()) <= 1e-5);
    }
    const auto orth = ModelSpec::ising(1e-6, 1.0, -1.0, 0.5);
    CHECK(coherence_entropy_density(orth, grid()) <= 1e-5);
}

namespace {

struct Peak {
    double value = -1.0;
    double h0 = 0.0;
    double h1 = 0.0;
};

Peak scan_entropy(double beta) {
    const auto g = MomentumGrid::gauss_legendre(512);
    Peak best;
    for (int i = 0; i <= 40; ++i) {
        for (int j = 0; j <= 40; ++j) {
            const double h0 = -2.0 + 0.1 * i, h1 = -2.0 + 0.1 * j;
            const double s = coherence_entropy_density(ModelSpec::ising(beta, h0, h1, 0.5), g);
            CHECK(s >= 0.0);
            if (s > best.value) best = {s, h0, h1};
        }
    }
    return best;
}

} // namespace

TEST_CASE("coherence entropy peaks at opposite critical points at low temperature") {
    const auto peak = scan_entropy(15.0);
    CHECK(std::abs(std::abs(peak.h0) - 1.0) < 1e-9);
    CHECK(std::abs(peak.h0 + peak.h1) < 1e-9);
}

TEST_CASE("coherence entropy peak at beta = 1") {
    // h1 stays at the critical point opposite to h0, while h0 moves out to about 1.7
    const auto peak = scan_entropy(1.0);
    CHECK(std::abs(std::abs(peak.h1) - 1.0) < 1e-9);
    CHECK(peak.h0 * peak.h1 < 0.0);
    CHECK(std::abs(std::abs(peak.h0) - 1.7) < 0.15);
}

TEST_CASE("slow ramps away from criticality suppress the enhancement") {
    const std::array<std::pair<double, double>, 3> ramps{{{0.2, 0.5}, {1.8, 1.3}, {-1.7, -1.2}}};
    for (auto [h1, h2] : ramps) {
        CAPTURE(h1);
        const auto fast = ModelSpec::ising(15.0, 2.0, h1, h2, LinearRamp{4.0});
        const auto slow = ModelSpec::ising(15.0, 2.0, h1, h2, LinearRamp{0.5});
        const double e_fast = extraction_enhancement(fast, grid(), build_propagators(fast, grid()));
        const double e_slow = extraction_enhancement(slow, grid(), build_propagators(slow, grid()));
        CHECK(std::abs(e_slow) < std::abs(e_fast));
    }
}
