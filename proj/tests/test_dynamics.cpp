#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kdq/dynamics.hpp"
#include "kdq/error.hpp"
#include "kdq/model.hpp"
#include "support/oracles.hpp"

#include <numbers>

using namespace kdq;
using kdq::testing::Rng;
constexpr double pi = std::numbers::pi;

TEST_CASE("sudden propagator is the identity") {
    for (double p : {0.3, pi / 2}) {
        const auto u = sudden_propagator(p);
        CHECK(u.z == cplx(1.0, 0.0));
        CHECK(u.s == cplx(0.0, 0.0));
        CHECK(u.p == p);
    }
    const auto m = sudden_propagator(1.0).matrix();
    CHECK((m - Eigen::Matrix2cd::Identity()).norm() == 0.0);
}

TEST_CASE("zero-duration ramp") {
    const auto spec = ModelSpec::ising(1.0, 0.0, 0.8, 0.8, LinearRamp{4.0});
    const auto u = ramp_propagator(spec, 1.1);
    CHECK(u.z == cplx(1.0, 0.0));
    CHECK(u.s == cplx(0.0, 0.0));
}

TEST_CASE("ramp matches an independent Taylor integrator") {
    const auto spec = ModelSpec::ising(15.0, 0.0, 2.0, 0.5, LinearRamp{4.0});
    const auto u = ramp_propagator(spec, pi / 2);
    const Eigen::Matrix2cd ref = kdq::testing::reference_ramp(pi / 2, 2.0, 0.5, 4.0);
    CHECK(std::abs(u.z - ref(0, 0)) < 1e-8);
    CHECK(std::abs(u.s - ref(1, 0)) < 1e-8);
    // the second column is fixed by the particle-hole structure
    CHECK(std::abs(ref(0, 1) + std::conj(ref(1, 0))) < 1e-10);
    CHECK(std::abs(ref(1, 1) - std::conj(ref(0, 0))) < 1e-10);
}

TEST_CASE("property: ramps agree with the Taylor oracle") {
    Rng rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const double h1 = rng.uniform(-2.5, 2.5), h2 = rng.uniform(-2.5, 2.5);
        const double delta = rng.uniform(0.5, 10.0);
        const double p = rng.uniform(0.05, pi - 0.05);
        const auto spec = ModelSpec::ising(1.0, 0.0, h1, h2, LinearRamp{delta});
        const auto u = ramp_propagator(spec, p);
        const Eigen::Matrix2cd ref = kdq::testing::reference_ramp(p, h1, h2, delta, 800);
        CHECK(std::abs(u.z - ref(0, 0)) < 1e-8);
        CHECK(std::abs(u.s - ref(1, 0)) < 1e-8);
    }
}

TEST_CASE("property: unitarity on random modes") {
    Rng rng(22);
    double worst = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
        ModelSpec spec = ModelSpec::ising(1.0, 0.0, rng.uniform(-3, 3), rng.uniform(-3, 3),
                                          LinearRamp{rng.uniform(0.2, 50.0)});
        if (trial % 3 == 0) {
            spec.hopping = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
            spec.pairing = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        }
        const auto u = ramp_propagator(spec, rng.uniform(0.01, pi - 0.01));
        worst = std::max(worst, u.unitarity_defect());
        const Eigen::Matrix2cd m = u.matrix();
        CHECK((m.adjoint() * m - Eigen::Matrix2cd::Identity()).norm() < 1e-9);
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("near-sudden ramp approaches the identity") {
    const auto spec = ModelSpec::ising(1.0, 0.0, 2.0, 0.5, LinearRamp{1e6});
    for (double p : {0.2, 1.0, 2.5}) {
        const auto u = ramp_propagator(spec, p);
        CHECK(std::hypot(std::abs(u.z - 1.0), std::abs(u.s)) <= 1e-4);
    }
}

TEST_CASE("sudden limit is approached monotonically in delta") {
    const auto frame = [](double h, double p) { return mode_frame(ModelSpec::ising(1, 0, 0, 0), p, h); };
    for (double p : {0.4, 1.3, 2.6}) {
        double prev = 1e300;
        for (double delta : {1e2, 1e3, 1e4}) {
            const auto spec = ModelSpec::ising(1.0, 0.0, 2.0, -0.5, LinearRamp{delta});
            const auto u = ramp_propagator(spec, p);
            const double pr = transition_probability(u, frame(2.0, p), frame(-0.5, p));
            const double pq = transition_probability(sudden_propagator(p), frame(2.0, p), frame(-0.5, p));
            const double gap = std::abs(pr - pq);
            CHECK(gap < prev);
            prev = gap;
        }
    }
}

TEST_CASE("degenerate pairing falls back to the phase solution") {
    ModelSpec spec = ModelSpec::ising(1.0, 0.0, 1.5, -0.5, LinearRamp{2.0});
    spec.pairing = {0.0};
    const double p = 0.9;
    const auto u = ramp_propagator(spec, p);
    CHECK(std::abs(u.s) == 0.0);
    // i dz/dt = 2 (h(t) - cos p) z with h linear in t
    const double duration = 2.0 / 2.0;
    const cplx expected = std::exp(cplx(0, -2.0 * duration * ((1.5 - 0.5) / 2 - std::cos(p))));
    CHECK(std::abs(u.z - expected) < 1e-13);
}

TEST_CASE("transition probabilities") {
    const auto ising = ModelSpec::ising(1, 0, 0, 0);
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const double p = rng.uniform(0.05, pi - 0.05);
        const auto fi = mode_frame(ising, p, rng.field());
        const auto fj = mode_frame(ising, p, rng.field());
        const auto id = sudden_propagator(p);
        const double expect = std::pow(std::cos((fi.phi - fj.phi) / 2), 2);
        CHECK(std::abs(transition_probability(id, fi, fj) - expect) < 1e-13);
        CHECK(std::abs(2 * transition_probability(id, fi, fj) - 1 - overlap_q(fi.phi, fj.phi)) < 1e-13);
    }
    const double p = 0.7;
    auto f = mode_frame(ising, p, 0.3);
    CHECK(transition_probability(sudden_propagator(p), f, f) == doctest::Approx(1.0).epsilon(1e-14));
    auto g = f;
    g.phi = f.phi + pi;
    CHECK(std::abs(transition_probability(sudden_propagator(p), f, g)) < 1e-14);

    const auto other = mode_frame(ising, 0.8, 0.3);
    CHECK_THROWS_AS(transition_probability(sudden_propagator(p), f, other), Error);
}

TEST_CASE("property: ramp transitions are bistochastic") {
    Rng rng(24);
    for (int trial = 0; trial < 60; ++trial) {
        const double p = rng.uniform(0.05, pi - 0.05);
        const double h1 = rng.field(), h2 = rng.field();
        const auto spec = ModelSpec::ising(1.0, 0.0, h1, h2, LinearRamp{rng.uniform(0.5, 8.0)});
        const auto u = ramp_propagator(spec, p);
        const auto f1 = mode_frame(spec, p, h1);
        const auto f2 = mode_frame(spec, p, h2);
        const Eigen::Matrix2cd m = u.matrix();
        const Eigen::Vector2cd in[2] = {f1.v_plus().cast<cplx>(), f1.v_minus().cast<cplx>()};
        const Eigen::Vector2cd out[2] = {f2.v_plus().cast<cplx>(), f2.v_minus().cast<cplx>()};
        Eigen::Matrix2d t;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) t(b, a) = std::norm(out[b].dot(m * in[a]));
        CHECK(std::abs(t(0, 0) - transition_probability(u, f1, f2)) < 1e-12);
        for (int k = 0; k < 2; ++k) {
            CHECK(std::abs(t.row(k).sum() - 1.0) < 1e-10);
            CHECK(std::abs(t.col(k).sum() - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("propagator sets are deterministic and ordered like the grid") {
    const auto spec = ModelSpec::ising(1.0, 0.0, -1.5, 0.7, LinearRamp{3.0});
    const auto grid = MomentumGrid::gauss_legendre(64);
    const auto a = build_propagators(spec, grid);
    const auto b = build_propagators(spec, grid);
    REQUIRE(a.size() == grid.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].p == grid.nodes()[i].p);
        CHECK(a[i].z == b[i].z);
        CHECK(a[i].s == b[i].s);
    }
    const auto q = build_propagators(ModelSpec::ising(1.0, 0.0, -1.5, 0.7), grid);
    for (const auto& u : q) CHECK(u.z == cplx(1.0));
}

TEST_CASE("integrator configuration is validated") {
    RampIntegratorConfig cfg;
    cfg.rel_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.max_steps = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.max_steps = 5;
    const auto spec = ModelSpec::ising(1.0, 0.0, 2.0, -2.0, LinearRamp{0.01});
    try {
        ramp_propagator(spec, 1.0, cfg);
        FAIL("expected IntegrationFailure");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::IntegrationFailure);
    }
}
