#ifndef TORIC_SPECTRAL_HPP
#define TORIC_SPECTRAL_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "toric/errors.hpp"
#include "toric/polynomial.hpp"
#include "toric/polytope.hpp"
#include "toric/potential.hpp"

namespace toric {

/// Composite rule on a rational triangulation of P. Each simplex carries a
/// conical-product Gauss-Jacobi rule with `order` points per direction
/// (degree 2 * order - 1), after `depth` rounds of uniform subdivision.
struct QuadratureRule {
    int dim = 0;
    int order = 0;
    int depth = 0;
    std::vector<Eigen::VectorXd> nodes;
    std::vector<double> weights;
    std::vector<RationalMatrix> triangulation;  // before subdivision
    Rational volume;                            // exact

    std::size_t size() const { return nodes.size(); }
    int degree() const { return 2 * order - 1; }
    double total_weight() const;
};

/// Gauss-Jacobi nodes and weights on [0, 1] for the weight (1 - t)^alpha.
void gauss_jacobi(int points, int alpha, std::vector<double>& nodes, std::vector<double>& weights);

/// Rule on one simplex ((n+1) x n vertex rows), degree 2 * order - 1.
void simplex_rule(const Eigen::MatrixXd& simplex, int order, std::vector<Eigen::VectorXd>& nodes, std::vector<double>& weights);

/// Uniform refinement: 2^n children of equal volume (n <= 3).
std::vector<RationalMatrix> subdivide(const RationalMatrix& simplex);

/// order in 1..4, depth >= 0, dim(P) <= 3 (DimUnsupported otherwise).
QuadratureRule build_quadrature(const LabelledPolytope& p, int order, int depth);

template <typename F>
double integrate(const QuadratureRule& q, const F& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * f(q.nodes[i]);
    return s;
}

/// H(x_q) at every node, in node order. Evaluation is spread over worker
/// threads (see worker_count) and written to fixed slots.
std::vector<Eigen::MatrixXd> node_inverse_hessians(const SymplecticPotential& u, const QuadratureRule& q);

/// min(TORIC_THREADS, hardware concurrency), at least 1.
int worker_count();

/// int H(df, df) / int (f - mean f)^2, both by quadrature.
template <SmoothField F>
double rayleigh_quotient(const SymplecticPotential& u, const F& f, const QuadratureRule& q) {
    const auto hs = node_inverse_hessians(u, q);
    double mean = 0.0, second = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double v = f.value(q.nodes[i]);
        mean += q.weights[i] * v;
        second += q.weights[i] * v * v;
    }
    mean /= q.total_weight();
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const Eigen::VectorXd g = f.gradient(q.nodes[i]);
        const double d = f.value(q.nodes[i]) - mean;
        num += q.weights[i] * g.dot(hs[i] * g);
        den += q.weights[i] * d * d;
    }
    if (!(den > 1e-24 * second)) throw ZeroDenominator("test function is constant on the quadrature nodes");
    return num / den;
}

/// Mean-centred monomials of total degree 1..D in the scaled variables
/// y = (x - centre) / half_width.
struct TrialSpace {
    std::vector<std::vector<int>> exponents;
    Eigen::VectorXd centre;
    Eigen::VectorXd half_width;
    Eigen::VectorXd means;

    std::size_t size() const { return exponents.size(); }
    /// phi_a(x) for every basis function.
    Eigen::VectorXd values(const Eigen::VectorXd& x) const;
    /// d phi_a / dx_j in column a.
    Eigen::MatrixXd gradients(const Eigen::VectorXd& x) const;
    /// Hessian of sum_a c_a phi_a.
    Eigen::MatrixXd hessian(const Eigen::VectorXd& coeffs, const Eigen::VectorXd& x) const;
};

TrialSpace make_trial_space(const LabelledPolytope& p, int degree, const QuadratureRule& q);

/// sum_a c_a phi_a as a SmoothField.
struct TrialFunction {
    const TrialSpace* space;
    Eigen::VectorXd coeffs;
    double value(const Eigen::VectorXd& x) const { return space->values(x).dot(coeffs); }
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const { return space->gradients(x) * coeffs; }
    Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const { return space->hessian(coeffs, x); }
};

struct RitzResult {
    int degree = 0;
    std::size_t basis_size = 0;  // monomials before dropping
    std::size_t rank = 0;        // kept after pivoted elimination
    int quad_order = 0;
    int quad_depth = 0;
    std::size_t quad_nodes = 0;
    double mass_condition = 0.0;       // largest / smallest kept Cholesky pivot^2
    double stiffness_condition = 0.0;  // largest / smallest Ritz value
    std::size_t jacobi_sweeps = 0;
    Eigen::VectorXd eigenvalues;  // ascending
    double lambda1T = 0.0;
    Eigen::VectorXd eigvec;  // coefficients over the full basis, unit mass norm
    TrialSpace space;

    TrialFunction eigenfunction() const { return {&space, eigvec}; }
};

/// Relative Cholesky pivot below which a basis function is dropped.
inline constexpr double kDropTolerance = 1e-10;
inline constexpr double kJacobiTolerance = 1e-12;

/// Rayleigh-Ritz for the invariant Laplacian on the degree-D trial space.
RitzResult lambda1_invariant(const SymplecticPotential& u, int degree, const QuadratureRule& q);

/// Assembled stiffness and mass over the trial space (exposed for tests).
struct RitzSystem {
    Eigen::MatrixXd stiffness;
    Eigen::MatrixXd mass;
};
RitzSystem assemble(const SymplecticPotential& u, const TrialSpace& space, const QuadratureRule& q);

/// Cyclic Jacobi eigensolver for a symmetric matrix. Returns ascending
/// eigenvalues; columns of `vectors` are the eigenvectors. Sweeps until the
/// off-diagonal Frobenius norm is below tol times the matrix norm.
template <typename Scalar>
struct JacobiResult {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;
    std::size_t sweeps = 0;
};

template <typename Scalar>
JacobiResult<Scalar> jacobi_eigen(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a, Scalar tol,
                                  std::size_t max_sweeps = 100) {
    using std::abs;
    using std::sqrt;
    const Eigen::Index n = a.rows();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> v =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n);
    const Scalar norm = a.norm();
    auto off = [&] {
        Scalar s = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) s += 2 * a(i, j) * a(i, j);
        return sqrt(s);
    };
    JacobiResult<Scalar> out;
    while (off() > tol * norm) {
        if (out.sweeps++ == max_sweeps) throw NoConvergence("Jacobi eigensolver exceeded " + std::to_string(max_sweeps) + " sweeps");
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == Scalar(0)) continue;
                // rotation zeroing a(p, q)
                const Scalar theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
                const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) / (abs(theta) + sqrt(theta * theta + 1));
                const Scalar c = 1 / sqrt(t * t + 1);
                const Scalar s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        out.values[i] = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
        out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
    }
    return out;
}

struct SweepRow {
    double param;
    double lambda1T;
    int degree;
    std::size_t quad_nodes;
};

struct SweepTable {
    std::string family;  // "uc" or "dilation"
    std::vector<SweepRow> rows;
    double baseline = 0.0;  // Guillemin lambda1T on the same trial space and rule
    bool monotone = true;   // uc: strictly decreasing; dilation: increasing as s decreases
    std::vector<std::string> flags;
};

/// c_list nonnegative and strictly ascending.
SweepTable sweep_uc(const LabelledPolytope& p, int axis, const std::vector<double>& c_list, int degree, const QuadratureRule& q);
/// s_list in (1, inf), strictly descending. Rows below baseline - 1e-6 are
/// flagged; non-monotone rows are flagged, not rejected.
SweepTable sweep_dilation(const LabelledPolytope& p, const std::vector<double>& s_list, int degree, const QuadratureRule& q);

/// "param,lambda1T,degree,quad_nodes" followed by one line per row.
std::string to_csv(const SweepTable& table);

}  // namespace toric

#endif  // TORIC_SPECTRAL_HPP
