#ifndef TORIC_RATIONAL_HPP
#define TORIC_RATIONAL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace toric {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RationalVector = Vector<Rational>;
using RationalMatrix = Matrix<Rational>;
using IntVector = Vector<std::int64_t>;
using IntMatrix = Matrix<std::int64_t>;

/// Parses "7", "-3/4" or a plain decimal such as "0.125" / "-2.5e-1" exactly.
/// Returns nullopt on anything else.
std::optional<Rational> parse_rational(std::string_view text);

/// Canonical text: "p" when the denominator is 1, otherwise "p/q".
std::string to_string(const Rational& q);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);
bool is_integer(const Rational& q);
double to_double(const Rational& q);

inline Eigen::VectorXd to_double(const RationalVector& v) {
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
    return out;
}

/// Exact determinant by fraction-producing Gaussian elimination. Pivots are
/// chosen as the first nonzero entry, so no ordering on Scalar is needed
/// beyond equality with zero.
template <typename Scalar>
Scalar exact_determinant(Matrix<Scalar> a) {
    const Eigen::Index n = a.rows();
    Scalar det = 1;
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index pivot = col;
        while (pivot < n && a(pivot, col) == 0) ++pivot;
        if (pivot == n) return Scalar(0);
        if (pivot != col) {
            a.row(pivot).swap(a.row(col));
            det = -det;
        }
        det *= a(col, col);
        for (Eigen::Index r = col + 1; r < n; ++r) {
            if (a(r, col) == 0) continue;
            const Scalar factor = a(r, col) / a(col, col);
            for (Eigen::Index c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
        }
    }
    return det;
}

/// Exact solve of a square system; nullopt when singular.
template <typename Scalar>
std::optional<Vector<Scalar>> exact_solve(Matrix<Scalar> a, Vector<Scalar> b) {
    const Eigen::Index n = a.rows();
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index pivot = col;
        while (pivot < n && a(pivot, col) == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        if (pivot != col) {
            a.row(pivot).swap(a.row(col));
            std::swap(b[pivot], b[col]);
        }
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == col || a(r, col) == 0) continue;
            const Scalar factor = a(r, col) / a(col, col);
            for (Eigen::Index c = col; c < n; ++c) a(r, c) -= factor * a(col, c);
            b[r] -= factor * b[col];
        }
    }
    Vector<Scalar> x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = b[i] / a(i, i);
    return x;
}

/// Nonzero vector spanning the kernel of a (n-1) x n matrix of full rank,
/// via signed maximal minors (generalized cross product). Zero vector when
/// the rows are dependent.
template <typename Scalar>
Vector<Scalar> kernel_vector(const Matrix<Scalar>& rows) {
    const Eigen::Index n = rows.cols();
    Vector<Scalar> out(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        Matrix<Scalar> minor(n - 1, n - 1);
        for (Eigen::Index r = 0; r < n - 1; ++r) {
            Eigen::Index cc = 0;
            for (Eigen::Index c = 0; c < n; ++c) {
                if (c == j) continue;
                minor(r, cc++) = rows(r, c);
            }
        }
        const Scalar m = n == 1 ? Scalar(1) : exact_determinant<Scalar>(minor);
        out[j] = (j % 2 == 0) ? m : Scalar(-m);
    }
    return out;
}

}  // namespace toric

#endif  // TORIC_RATIONAL_HPP
