#ifndef TORIC_POLYNOMIAL_HPP
#define TORIC_POLYNOMIAL_HPP

#include <concepts>
#include <vector>

#include <Eigen/Dense>

namespace toric {

/// Anything with value, gradient and Hessian at a point. Test functions for
/// the Laplacian and the Rayleigh quotient are passed this way.
template <typename F>
concept SmoothField = requires(const F& f, const Eigen::VectorXd& x) {
    { f.value(x) } -> std::convertible_to<double>;
    { f.gradient(x) } -> std::convertible_to<Eigen::VectorXd>;
    { f.hessian(x) } -> std::convertible_to<Eigen::MatrixXd>;
};

struct Monomial {
    std::vector<int> exponents;
    double coefficient;
};

/// Dense-evaluation multivariate polynomial, sum of c * prod x_j^{e_j}.
class Polynomial {
public:
    explicit Polynomial(int dim) : dim_(dim) {}
    Polynomial(int dim, std::vector<Monomial> terms);

    /// c_0 + <a, x>
    static Polynomial affine(double constant, const Eigen::VectorXd& linear);
    /// The coordinate function x_i.
    static Polynomial coordinate(int dim, int i);

    int dim() const { return dim_; }
    int degree() const;
    const std::vector<Monomial>& terms() const { return terms_; }

    void add_term(std::vector<int> exponents, double coefficient);

    double value(const Eigen::VectorXd& x) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;

    Polynomial& operator+=(double c);

private:
    int dim_;
    std::vector<Monomial> terms_;
};

/// Exponent vectors of all monomials with min_degree <= total degree <=
/// max_degree in dim variables, graded and then reverse-lexicographic
/// (x first): 1, x, y, x^2, xy, y^2, ...
std::vector<std::vector<int>> monomial_exponents(int dim, int min_degree, int max_degree);

}  // namespace toric

#endif  // TORIC_POLYNOMIAL_HPP
