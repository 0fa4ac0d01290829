#ifndef TORIC_PROJECTIVE_HPP
#define TORIC_PROJECTIVE_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "toric/polytope.hpp"
#include "toric/potential.hpp"
#include "toric/spectral.hpp"

namespace toric {

/// The embedding of an integral Delzant polytope by its lattice points.
/// Point m0 (lexicographically smallest) plays the role of the origin:
/// exponents are taken relative to it.
struct EmbeddingData {
    LabelledPolytope polytope;
    LatticeData lattice;              // k = 1
    std::size_t m0 = 0;               // index into lattice.points
    Eigen::MatrixXd shifts;           // row j: m_j - m0
    Eigen::MatrixXd facet_exponents;  // row j: L_i(m_j), nonnegative integers

    std::size_t size() const { return lattice.points.size(); }  // N + 1
    std::int64_t n() const { return lattice.n_k; }              // N
};

/// Throws NotIntegral, NotDelzant, or DegenerateN (a single lattice point).
EmbeddingData make_embedding(const LabelledPolytope& p);

/// |Z_m|^2 / |Z_m0|^2 at an interior x. For the Guillemin kind this is
/// prod_i L_i(x)^(L_i(m) - L_i(m0)); otherwise exp(2 (m - m0) . du/dx).
/// Throws BoundaryPoint at non-interior x.
double z_squared(const EmbeddingData& e, const SymplecticPotential& u, std::size_t m, const Eigen::VectorXd& x);

/// Psi_mm(x) for every lattice point: alpha_m^2 |Z_m|^2 / sum_j alpha_j^2 |Z_j|^2.
/// For the Guillemin kind the facet-power form is used, which stays valid on
/// the boundary of P. Other kinds need an interior x (BoundaryPoint).
Eigen::VectorXd psi_diagonal(const EmbeddingData& e, const SymplecticPotential& u, const Eigen::VectorXd& alpha,
                             const Eigen::VectorXd& x);
double psi_mm(const EmbeddingData& e, const SymplecticPotential& u, const Eigen::VectorXd& alpha, std::size_t m,
              const Eigen::VectorXd& x);
/// |Psi_mk| = sqrt(Psi_mm Psi_kk); the phase depends on theta and is not modelled.
double psi_offdiagonal_magnitude(const EmbeddingData& e, const SymplecticPotential& u, const Eigen::VectorXd& alpha,
                                 std::size_t m, std::size_t k, const Eigen::VectorXd& x);

struct BalanceWeights {
    Eigen::VectorXd alpha;     // positive, sum 1
    Eigen::VectorXd averages;  // (1/vol) int Psi_ii at the returned alpha
    double residual = 0.0;     // max_i |averages_i - 1/(N+1)|
    int iterations = 0;

    /// alpha rescaled so that alpha_m0 = 1 (the form used in reports).
    Eigen::VectorXd normalized_to_m0(std::size_t m0) const { return alpha / alpha[static_cast<Eigen::Index>(m0)]; }
};

inline constexpr double kBalanceTolerance = 1e-10;
inline constexpr int kBalanceMaxIterations = 500;

/// Damped multiplicative fixed point
///   alpha_i^2 <- alpha_i^2 * sqrt(target / int Psi_ii),  sum alpha = 1,
/// with target = vol / (N + 1). Starts from uniform weights unless `start`
/// is given. Throws NoConvergence after max_iter updates.
BalanceWeights balance(const EmbeddingData& e, const SymplecticPotential& u, const QuadratureRule& q,
                       double tol = kBalanceTolerance, int max_iter = kBalanceMaxIterations,
                       const std::optional<Eigen::VectorXd>& start = std::nullopt);

struct SaturationReport {
    double constant = 0.0;  // n (N + 1) / (N (n + 1))
    double r1 = 0.0;        // max |d Psi_00 (m - m0) + constant|
    double r2 = 0.0;        // worst affine-fit residual of Psi_mm
    double tolerance = 0.0;
    std::size_t samples = 0;
    std::vector<std::size_t> fitted_points;  // lattice indices used for r2
    bool saturated = false;
    std::string classification;  // "fubini-study", "none" or "contradiction"
};

inline constexpr double kSaturationTolerance = 1e-6;

/// Evaluates both saturation residuals at the quadrature nodes of q.
SaturationReport saturation_check(const EmbeddingData& e, const SymplecticPotential& u, const BalanceWeights& alpha,
                                  const QuadratureRule& q, double tol = kSaturationTolerance);

struct BoundRow {
    int k;
    std::int64_t n_k;
    Rational bound;
    bool is_integer;
};

struct BoundReport {
    int k0 = 0;
    bool integral = false;
    std::vector<BoundRow> rows;           // k = k0 .. k0 + 4
    std::optional<Rational> integral_bound;  // k = 1, integral P only
    Rational recommended;                 // smallest listed bound
};

BoundReport bound_report(const LabelledPolytope& p, int k_max = kDefaultKMax);

}  // namespace toric

#endif  // TORIC_PROJECTIVE_HPP
