#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kdq/config.hpp"
#include "kdq/error.hpp"
#include "kdq/model.hpp"
#include "support/oracles.hpp"

#include <Eigen/Eigenvalues>

#include <numbers>

using namespace kdq;
using kdq::testing::Rng;
constexpr double pi = std::numbers::pi;

TEST_CASE("fourier couplings") {
    const auto ising = ModelSpec::ising(1.0, 0, 0, 0);
    auto c = fourier_couplings(ising, pi / 2);
    CHECK(c.hopping == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(c.pairing == doctest::Approx(1.0).epsilon(1e-15));
    c = fourier_couplings(ising, 1e-9);
    CHECK(c.hopping == doctest::Approx(1.0));
    CHECK(std::abs(c.pairing) < 1e-8);

    ModelSpec spec;
    spec.hopping = {0.5, 0.25};
    spec.pairing = {1.0, 0.0};
    c = fourier_couplings(spec, pi / 3);
    CHECK(std::abs(c.hopping - 0.125) < 1e-15);
    CHECK(std::abs(c.pairing - std::sqrt(3.0) / 2) < 1e-15);
}

TEST_CASE("mode frame special values") {
    const auto ising = ModelSpec::ising(1.0, 0, 0, 0);
    CHECK(mode_frame(ising, pi, 1.0).omega == doctest::Approx(4.0));
    for (double p : {0.1, 0.7, 1.3, 2.2, 3.0}) {
        CHECK(std::abs(mode_frame(ising, p, 1.0).phi - (pi / 2 - p / 2)) < 1e-13);
        CHECK(std::abs(mode_frame(ising, p, 0.0).phi - (pi - p)) < 1e-13);
        // at h = -1 the continuous branch is pi - p/2
        CHECK(std::abs(mode_frame(ising, p, -1.0).phi - (pi - p / 2)) < 1e-13);
    }
}

TEST_CASE("gapless mode is reported") {
    const auto ising = ModelSpec::ising(1.0, 0, 0, 0);
    CHECK_THROWS_AS(mode_frame(ising, 0.0, 1.0), Error);
    try {
        mode_frame(ising, pi, -1.0);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::GaplessMode);
    }
}

TEST_CASE("property: hmat is traceless, symmetric, with eigenvalues +-omega") {
    Rng rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        ModelSpec spec;
        const int range = rng.integer(1, 3);
        spec.hopping.assign(range, 0.0);
        spec.pairing.assign(range, 0.0);
        for (int r = 0; r < range; ++r) {
            spec.hopping[r] = rng.uniform(-1.5, 1.5);
            spec.pairing[r] = rng.uniform(-1.5, 1.5);
        }
        const double p = rng.uniform(0.01, pi - 0.01);
        const double h = rng.uniform(-2.5, 2.5);
        const auto f = mode_frame(spec, p, h);
        CHECK(std::abs(f.hmat.trace()) < 1e-15);
        CHECK(f.hmat(0, 1) == f.hmat(1, 0));
        // characteristic polynomial lambda^2 - omega^2 = -det
        CHECK(std::abs(-f.hmat.determinant() - f.omega * f.omega) < 1e-12 * std::max(1.0, f.omega * f.omega));
        const Eigen::Vector2d vp = f.v_plus(), vm = f.v_minus();
        CHECK((f.hmat * vp - f.omega * vp).norm() < 1e-12 * std::max(1.0, f.omega));
        CHECK((f.hmat * vm + f.omega * vm).norm() < 1e-12 * std::max(1.0, f.omega));
        CHECK(std::abs(std::cos(f.phi) * f.omega - f.hmat(0, 0)) < 1e-12);
        CHECK(f.phi >= 0.0);
        CHECK(f.phi < 2 * pi);
    }
}

TEST_CASE("property: Ising angle agrees with an eigensolver") {
    Rng rng(12);
    const auto ising = ModelSpec::ising(1.0, 0, 0, 0);
    for (int trial = 0; trial < 200; ++trial) {
        const double p = rng.uniform(0.01, pi - 0.01);
        const double h = rng.uniform(-3, 3);
        const double ref = kdq::testing::reference_phi(p, h);
        const double got = mode_frame(ising, p, h).phi;
        CHECK(std::abs(std::remainder(got - ref, 2 * pi)) < 1e-10);
    }
}

TEST_CASE("Bogoliubov angle limits at the zone edges") {
    const auto ising = ModelSpec::ising(1.0, 0, 0, 0);
    for (double h : {1.5, 2.0, 3.0}) CHECK(std::abs(mode_frame(ising, 1e-6, h).phi - 0.0) < 1e-4);
    for (double h : {0.5, 0.0, -0.5, -2.0}) CHECK(std::abs(mode_frame(ising, 1e-6, h).phi - pi) < 1e-4);
    for (double h : {-0.5, 0.0, 0.5, 2.0}) {
        const double phi = mode_frame(ising, pi - 1e-6, h).phi;
        CHECK(std::min(phi, 2 * pi - phi) < 1e-4);
    }
    for (double h : {-1.5, -2.0}) CHECK(std::abs(mode_frame(ising, pi - 1e-6, h).phi - pi) < 1e-4);
}

TEST_CASE("overlap parameter") {
    CHECK(overlap_q(0.4, 0.4) == 1.0);
    CHECK(overlap_q(0.3, 0.3 + pi) == doctest::Approx(-1.0));
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const double a = rng.uniform(0, 2 * pi), b = rng.uniform(0, 2 * pi);
        CHECK(overlap_q(a, b) == overlap_q(b, a));
    }
    const auto ising = ModelSpec::ising(1.0, 0, 0, 0);
    for (double p : {0.2, 1.0, 2.9}) {
        CHECK(std::abs(overlap_q(mode_frame(ising, p, 1.0).phi, mode_frame(ising, p, -1.0).phi)) < 1e-14);
    }
}

TEST_CASE("momentum grids") {
    const auto g = MomentumGrid::gauss_legendre(2048);
    double sum = 0.0;
    for (const auto& n : g.nodes()) {
        CHECK(n.p > 0.0);
        CHECK(n.p < pi);
        CHECK(n.weight > 0.0);
        sum += n.weight;
    }
    CHECK(std::abs(sum - pi) < 1e-12);
    CHECK(g.size() == 2048);

    // exact for polynomials of degree 2n - 1
    const auto g5 = MomentumGrid::gauss_legendre(5);
    double m9 = 0.0;
    for (const auto& n : g5.nodes()) m9 += n.weight * std::pow(n.p, 9);
    CHECK(std::abs(m9 - std::pow(pi, 10) / 10) < 1e-9);

    const auto c = MomentumGrid::finite_chain(8);
    REQUIRE(c.size() == 4);
    for (int m = 1; m <= 4; ++m) {
        CHECK(std::abs(c.nodes()[m - 1].p - pi * (2 * m - 1) / 8) < 1e-15);
        CHECK(std::abs(c.nodes()[m - 1].weight - 2 * pi / 8) < 1e-15);
    }
    CHECK_THROWS_AS(MomentumGrid::finite_chain(7), Error);
}

TEST_CASE("mean overlap Qbar") {
    const auto ising = ModelSpec::ising(1.0, 0, 0, 0);
    const auto grid = MomentumGrid::gauss_legendre(kDefaultGaussNodes);
    CHECK(std::abs(mean_overlap_qbar(ising, grid, 0.7, 0.7) - 1.0) < 1e-13);
    CHECK(std::abs(mean_overlap_qbar(ising, grid, 1.0, -1.0)) < 1e-12);
    CHECK(std::abs(mean_overlap_qbar(ising, grid, -1.0, 1.0)) < 1e-12);

    // independent trapezoid at ten times the resolution
    const double got = mean_overlap_qbar(ising, grid, 2.0, 0.5);
    const double ref = kdq::testing::trapezoid(
                           [](double p) {
                               return std::cos(kdq::testing::reference_phi(p, 2.0)
                                               - kdq::testing::reference_phi(p, 0.5));
                           },
                           20480)
                     / pi;
    CHECK(got > -1.0);
    CHECK(got < 1.0);
    CHECK(std::abs(got - ref) < 1e-10);
}

TEST_CASE("Qbar quadrature convergence") {
    const auto ising = ModelSpec::ising(1.0, 0, 0, 0);
    const auto g1 = MomentumGrid::gauss_legendre(1024);
    const auto g2 = MomentumGrid::gauss_legendre(2048);
    const std::pair<double, double> away[] = {{2.0, 0.5}, {-1.7, 0.3}, {0.2, 1.8}};
    for (auto [a, b] : away) {
        CHECK(std::abs(mean_overlap_qbar(ising, g1, a, b) - mean_overlap_qbar(ising, g2, a, b)) < 1e-10);
    }
    const std::pair<double, double> critical[] = {{1.0, 0.5}, {-1.0, 0.3}, {1.0, -1.0}};
    for (auto [a, b] : critical) {
        CHECK(std::abs(mean_overlap_qbar(ising, g1, a, b) - mean_overlap_qbar(ising, g2, a, b)) < 1e-6);
    }
}

TEST_CASE("spec validation and config parsing") {
    ModelSpec bad = ModelSpec::ising(-1.0, 0, 0, 0);
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = ModelSpec::ising(1.0, 0, 0, 0);
    bad.pairing = {1.0, 2.0};
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = ModelSpec::ising(1.0, 0, 0, 0, LinearRamp{0.0});
    CHECK_THROWS_AS(bad.validate(), Error);

    const auto cfg = parse_run_config(nlohmann::json::parse(R"({
        "hopping": [1.0], "pairing": [1.0], "beta": 15, "h0": 2, "h1": -2, "h2": 0.5,
        "protocol": {"type": "ramp", "delta": 4.0}, "grid": {"kind": "chain", "L": 256},
        "ode": {"rel_tol": 1e-9, "abs_tol": 1e-11}})"));
    CHECK(cfg.model.beta == 15.0);
    CHECK(std::get<LinearRamp>(cfg.model.protocol).delta == 4.0);
    CHECK(cfg.grid.kind == GridKind::FiniteChain);
    CHECK(cfg.grid.size == 256);
    CHECK(cfg.ode.rel_tol == 1e-9);
    CHECK(cfg.grid.build().size() == 128);

    CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"protocol": {"type": "kick"}})")), Error);
    CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"grid": {"kind": "chain", "L": 5}})")), Error);
    CHECK_THROWS_AS(parse_run_config(nlohmann::json::parse(R"({"beta": "hot"})")), Error);
}
