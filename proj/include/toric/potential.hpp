#ifndef TORIC_POTENTIAL_HPP
#define TORIC_POTENTIAL_HPP

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "toric/polynomial.hpp"
#include "toric/polytope.hpp"

namespace toric {

/// u_0 = 1/2 sum (L_k log L_k - L_k)
struct Guillemin {};

/// u_0 + (c/2) x_axis^2, so Hess = Hess u_0 + c E_axis.
struct QuadraticPerturbed {
    int axis;
    double c;
};

/// u_0 - u_0^s / s, where u_0^s is the Guillemin potential of the dilation by
/// s about the vertex centroid.
struct Dilation {
    double s;
};

/// u_0 + v for a polynomial v.
struct GuilleminPlusPoly {
    Polynomial v;
};

using PotentialKind = std::variant<Guillemin, QuadraticPerturbed, Dilation, GuilleminPlusPoly>;

/// Default interior guard: evaluation requires min_i L_i(x) >= this.
inline constexpr double kInteriorGuard = 1e-10;

/// A symplectic potential on a labelled polytope. Immutable; the polytope is
/// shared.
class SymplecticPotential {
public:
    static SymplecticPotential guillemin(const LabelledPolytope& p);
    /// c >= 0; c = 0 is the Guillemin potential itself.
    static SymplecticPotential quadratic_perturbed(const LabelledPolytope& p, int axis, double c);
    /// s > 1. The dilation centre is the vertex centroid of P.
    static SymplecticPotential dilation(const LabelledPolytope& p, double s);
    /// Validated by sampling at construction; throws InvalidPotential when the
    /// Hessian fails to be positive definite somewhere.
    static SymplecticPotential guillemin_plus_poly(const LabelledPolytope& p, Polynomial v, int validation_samples = 64);

    const LabelledPolytope& polytope() const { return *polytope_; }
    const PotentialKind& kind() const { return kind_; }
    int dim() const { return polytope_->dim(); }

    /// d x n normals and offsets in double precision.
    const Eigen::MatrixXd& normals() const { return normals_; }
    const Eigen::VectorXd& offsets() const { return offsets_; }
    Eigen::VectorXd defining_functions(const Eigen::VectorXd& x) const { return normals_ * x + offsets_; }

    /// Dilation centre (zero for other kinds).
    const Eigen::VectorXd& shift() const { return shift_; }
    /// L_k at the dilation centre; L_k^s = L_k + (s - 1) * centre_offsets[k].
    const Eigen::VectorXd& centre_offsets() const { return centre_offsets_; }

    /// True for kinds whose Hessian derivatives are available in closed form.
    bool has_closed_form_derivatives() const { return !std::holds_alternative<GuilleminPlusPoly>(kind_); }
    bool is_guillemin() const { return std::holds_alternative<Guillemin>(kind_); }

    /// The CLI spelling of this potential.
    std::string describe() const;

private:
    SymplecticPotential(const LabelledPolytope& p, PotentialKind kind);

    std::shared_ptr<const LabelledPolytope> polytope_;
    PotentialKind kind_;
    Eigen::MatrixXd normals_;
    Eigen::VectorXd offsets_;
    Eigen::VectorXd shift_;
    Eigen::VectorXd centre_offsets_;
};

struct HessianSample {
    Eigen::VectorXd x;
    double value;
    Eigen::VectorXd gradient;  // du/dx
    Eigen::MatrixXd G;         // u_ij
    Eigen::MatrixXd H;         // u^ij = G^{-1}
    double logdetG;
};

/// Value, gradient, Hessian and inverse Hessian at an interior point.
/// Throws BoundaryPoint when some L_i(x) < guard and NotPositiveDefinite when
/// the LDL^T factorization of G meets a nonpositive pivot.
HessianSample eval_grad_hess(const SymplecticPotential& u, const Eigen::VectorXd& x, double guard = kInteriorGuard);

/// Hessian G only (no inversion).
Eigen::MatrixXd hessian(const SymplecticPotential& u, const Eigen::VectorXd& x, double guard = kInteriorGuard);

/// dG/dx_k for k = 0..n-1, closed form. Not available for GuilleminPlusPoly.
std::vector<Eigen::MatrixXd> hessian_first_derivatives(const SymplecticPotential& u, const Eigen::VectorXd& x);
/// d^2 G / dx_k dx_l, stored at [k * n + l], closed form.
std::vector<Eigen::MatrixXd> hessian_second_derivatives(const SymplecticPotential& u, const Eigen::VectorXd& x);

struct ValidationReport {
    bool pass = true;
    double worst_margin = 0.0;  // smallest eigenvalue met (of G or of its facet restriction)
    std::size_t points_checked = 0;
    std::vector<std::string> failures;
};

/// Sampling-based membership check: G positive definite at low-discrepancy
/// interior points and, near every facet (at L_i = 1e-2 .. 1e-6), G and its
/// restriction to the facet's tangent space positive definite.
ValidationReport validate(const SymplecticPotential& u, int samples);

/// (i,i) entry of H for a QuadraticPerturbed potential through the minor
/// identity u_c^{ii} = det M_ii / (det Hess u_0 + c det M_ii).
double hc_diag(const SymplecticPotential& u, const Eigen::VectorXd& x);

/// lim_{s -> 1+} G^s(x) / (s - 1) = 1/2 sum (L_k + c_k) / L_k^2 nu_k nu_k^T.
/// Requires every offset c_k > 0 (origin interior), else OriginNotInterior.
Eigen::MatrixXd dilation_limit_B(const LabelledPolytope& p, const Eigen::VectorXd& x);

/// Halton point (radical inverses in the first dim primes) for index >= 1.
Eigen::VectorXd halton(std::size_t index, int dim);

/// Deterministic low-discrepancy points of P, drawn volume-proportionally over
/// the triangulation and then pulled toward the vertex centroid by the factor
/// (1 - shrink), so min_i L_i >= shrink * min_i L_i(centroid).
std::vector<Eigen::VectorXd> interior_samples(const LabelledPolytope& p, int count, double shrink);

}  // namespace toric

#endif  // TORIC_POTENTIAL_HPP
