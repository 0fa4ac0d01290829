#ifndef TORIC_GEOMETRY_HPP
#define TORIC_GEOMETRY_HPP

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "toric/polynomial.hpp"
#include "toric/potential.hpp"

namespace toric {

/// How derivatives of H are obtained. Auto picks the closed form when the
/// potential has one and finite differences otherwise.
enum class DerivativeMode { Auto, ClosedForm, FiniteDifference };

/// Curvature evaluation requires min_i L_i(x) >= this.
inline constexpr double kCurvatureGuard = 1e-4;
/// Finite-difference step relative to min_i L_i(x).
inline constexpr double kRelativeStep = 1e-4;

/// H and its first (and optionally second) derivatives at a point.
/// dH[k] = dH/dx_k, d2H[k * n + l] = d^2 H / dx_k dx_l.
struct HessianJet {
    Eigen::VectorXd x;
    Eigen::MatrixXd H;
    std::vector<Eigen::MatrixXd> dH;
    std::vector<Eigen::MatrixXd> d2H;
    bool finite_difference = false;
};

/// Closed form: dH = -H dG H and its derivative. Finite differences: central
/// differences of H with step kRelativeStep * min_i L_i(x); throws
/// StepUnderflow when that step carries no accurate digits at x.
HessianJet hessian_jet(const SymplecticPotential& u, const Eigen::VectorXd& x, int order,
                       DerivativeMode mode = DerivativeMode::Auto, double guard = kInteriorGuard);

struct CurvatureSample {
    Eigen::VectorXd x;
    double scal;
    Eigen::MatrixXd ricci;  // rho_kl, rho = sum rho_kl dx_k ^ dtheta_l
    std::vector<Eigen::MatrixXd> dH;
    std::vector<Eigen::MatrixXd> d2H;
};

/// scal = -sum_ij H_ij,ij and rho_kl = -1/2 sum_i H_li,ik. With these signs
/// scal = 2 tr(rho), and d(Delta x_j)/dx_k = 2 rho_kj.
CurvatureSample scalar_curvature(const SymplecticPotential& u, const Eigen::VectorXd& x,
                                 DerivativeMode mode = DerivativeMode::Auto, double guard = kCurvatureGuard);

/// Delta f = -sum_ij (H_ij,i d_j f + H_ij d_i d_j f) from a first-order jet.
template <SmoothField F>
double laplacian_invariant(const HessianJet& jet, const F& f, const Eigen::VectorXd& x) {
    const Eigen::Index n = jet.H.rows();
    Eigen::VectorXd divergence = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) divergence += jet.dH[static_cast<std::size_t>(i)].row(i).transpose();
    return -(divergence.dot(f.gradient(x)) + jet.H.cwiseProduct(f.hessian(x)).sum());
}

template <SmoothField F>
double laplacian_invariant(const SymplecticPotential& u, const F& f, const Eigen::VectorXd& x,
                           DerivativeMode mode = DerivativeMode::Auto) {
    return laplacian_invariant(hessian_jet(u, x, 1, mode), f, x);
}

/// Delta x_j for every coordinate j.
Eigen::VectorXd laplacian_coordinates(const SymplecticPotential& u, const Eigen::VectorXd& x,
                                      DerivativeMode mode = DerivativeMode::Auto);

struct KEReport {
    double lambda_hat = 0.0;
    Eigen::VectorXd xbar;
    double residual_max = 0.0;
    double residual_l2 = 0.0;  // root mean square over samples and coordinates
    double tolerance = 0.0;
    std::size_t samples = 0;
    bool is_ke = false;
};

/// Least-squares fit of Delta x_i = 2 lambda (x_i - xbar_i) with one lambda
/// shared by all coordinates, over deterministic interior samples. The
/// default tolerance is 1e-6 with closed-form derivatives and 1e-4 otherwise.
KEReport ke_check(const SymplecticPotential& u, int samples, std::optional<double> tol = std::nullopt,
                  DerivativeMode mode = DerivativeMode::Auto);

}  // namespace toric

#endif  // TORIC_GEOMETRY_HPP
