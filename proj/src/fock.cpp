#include "kdq/fock.hpp"

#include "kdq/error.hpp"

#include <cmath>
#include <string>

namespace kdq::fock {

Matrix4cd quadratic_form(const Eigen::Matrix2cd& m) {
    Matrix4cd out = Matrix4cd::Zero();
    out(0, 0) = m(1, 1);
    out(3, 3) = m(0, 0);
    out(0, 3) = m(1, 0);
    out(3, 0) = m(0, 1);
    out(1, 1) = m(0, 0) + m(1, 1);
    return out;
}

Matrix4cd block(const Eigen::Matrix2cd& even, cplx odd) {
    Matrix4cd out = Matrix4cd::Zero();
    out(0, 0) = even(0, 0);
    out(0, 3) = even(0, 1);
    out(3, 0) = even(1, 0);
    out(3, 3) = even(1, 1);
    out(1, 1) = odd;
    out(2, 2) = odd;
    return out;
}

namespace {

// sigma_x M sigma_x
Eigen::Matrix2cd flip(const Eigen::Matrix2cd& m) {
    Eigen::Matrix2cd out;
    out << m(1, 1), m(1, 0), m(0, 1), m(0, 0);
    return out;
}

} // namespace

Matrix4cd mode_hamiltonian(const ModeFrame& f) {
    return quadratic_form(f.hmat.cast<cplx>());
}

Matrix4cd thermal_state(const ModeFrame& f0, double beta) {
    const double x = beta * f0.omega;
    const double th = std::tanh(x);
    const double sech = 1.0 / std::cosh(x);
    const double z = 2.0 * sech + 2.0;
    const Eigen::Matrix2d hhat = f0.hmat / f0.omega;
    const Eigen::Matrix2d even = (Eigen::Matrix2d::Identity() - th * hhat) / z;
    return block(flip(even.cast<cplx>()), sech / z);
}

std::array<Matrix4cd, 3> level_projectors(const ModeFrame& f) {
    const Eigen::Vector2d vp = f.v_plus();
    const Eigen::Vector2d vm = f.v_minus();
    const Eigen::Matrix2d pp = vp * vp.transpose();
    const Eigen::Matrix2d pm = vm * vm.transpose();
    std::array<Matrix4cd, 3> out{
        block(flip(pm.cast<cplx>()), 0.0),
        block(Eigen::Matrix2cd::Zero(), 1.0),
        block(flip(pp.cast<cplx>()), 0.0),
    };

    const Matrix4cd h = mode_hamiltonian(f);
    const double levels[3] = {-f.omega, 0.0, f.omega};
    const double scale = std::max(1.0, f.omega);
    Matrix4cd sum = Matrix4cd::Zero();
    double defect = 0.0;
    for (int k = 0; k < 3; ++k) {
        defect = std::max(defect, (out[k] * out[k] - out[k]).cwiseAbs().maxCoeff());
        defect = std::max(defect, (h * out[k] - levels[k] * out[k]).cwiseAbs().maxCoeff() / scale);
        sum += out[k];
    }
    defect = std::max(defect, (sum - Matrix4cd::Identity()).cwiseAbs().maxCoeff());
    if (defect > 1e-10) {
        throw Error(ErrorKind::ProjectorError, "projector defect " + std::to_string(defect));
    }
    return out;
}

Matrix4cd induced_unitary(const ModePropagator& prop) {
    return block(flip(prop.matrix()), 1.0);
}

} // namespace kdq::fock
