#include "toric/projective.hpp"

#include <cmath>
#include <limits>

#include "parallel.hpp"
#include "toric/errors.hpp"
#include "toric/format.hpp"

namespace toric {

namespace {

std::string point_name(const RationalVector& m) {
    std::string s = "(";
    for (Eigen::Index i = 0; i < m.size(); ++i) s += (i ? "," : "") + to_string(m[i]);
    return s + ")";
}

void check_point(const EmbeddingData& e, std::size_t m) {
    if (m >= e.size())
        throw ValidationError("lattice point index " + std::to_string(m) + " out of range (N + 1 = " + std::to_string(e.size()) + ")");
}

void check_alpha(const EmbeddingData& e, const Eigen::VectorXd& alpha) {
    if (static_cast<std::size_t>(alpha.size()) != e.size())
        throw ValidationError("expected " + std::to_string(e.size()) + " weights, got " + std::to_string(alpha.size()));
    for (Eigen::Index i = 0; i < alpha.size(); ++i)
        if (!(alpha[i] > 0.0) || !std::isfinite(alpha[i]))
            throw ValidationError("weight for lattice point " + point_name(e.lattice.points[static_cast<std::size_t>(i)]) +
                                  " is not positive");
}

/// log |Z_m|^2 up to a common additive constant. The Guillemin facet-power
/// form gives -inf for points whose factor vanishes on the boundary.
Eigen::VectorXd log_z_squared(const EmbeddingData& e, const SymplecticPotential& u, const Eigen::VectorXd& x) {
    if (u.dim() != e.polytope.dim() || x.size() != u.dim()) throw ValidationError("dimension mismatch between embedding, potential and point");
    if (u.is_guillemin()) {
        const Eigen::VectorXd l = u.defining_functions(x);
        Eigen::VectorXd logl(l.size());
        for (Eigen::Index i = 0; i < l.size(); ++i) {
            if (l[i] < -1e-12) throw BoundaryPoint("x lies outside P (L_" + std::to_string(i) + " = " + format_double(l[i]) + ")");
            logl[i] = l[i] > 0.0 ? std::log(l[i]) : -std::numeric_limits<double>::infinity();
        }
        Eigen::VectorXd out(e.facet_exponents.rows());
        for (Eigen::Index m = 0; m < out.size(); ++m) {
            double s = 0.0;
            for (Eigen::Index i = 0; i < logl.size(); ++i)
                if (e.facet_exponents(m, i) != 0.0) s += e.facet_exponents(m, i) * logl[i];
            out[m] = s;
        }
        return out;
    }
    return 2.0 * (e.shifts * eval_grad_hess(u, x).gradient);
}

/// Normalized exp(log_w + 2 log alpha).
Eigen::VectorXd softmax_weights(const Eigen::VectorXd& log_z, const Eigen::VectorXd& log_alpha2) {
    const Eigen::VectorXd a = log_z + log_alpha2;
    const double top = a.maxCoeff();
    if (!std::isfinite(top)) throw BoundaryPoint("every lattice weight vanishes at this point");
    Eigen::VectorXd w = (a.array() - top).exp().matrix();
    return w / w.sum();
}

Eigen::VectorXd log_squares(const Eigen::VectorXd& alpha) { return 2.0 * alpha.array().log().matrix(); }

/// Lattice points one primitive edge step away from an integral vertex.
std::vector<std::size_t> vertex_neighbours(const EmbeddingData& e) {
    const int n = e.polytope.dim();
    std::vector<bool> used(e.size(), false);
    for (const auto& v : vertices(e.polytope)) {
        Eigen::MatrixXd a(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) a(r, c) = static_cast<double>(e.polytope.facet(v.active[static_cast<std::size_t>(r)]).normal[c]);
        // edge directions are the columns of the inverse of the active normals
        const Eigen::MatrixXd edges = a.inverse();
        for (int j = 0; j < n; ++j) {
            RationalVector m = v.coords;
            for (int r = 0; r < n; ++r) m[r] += Rational(static_cast<long long>(std::llround(edges(r, j))));
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e.lattice.points[i] == m) used[i] = true;
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < used.size(); ++i)
        if (used[i]) out.push_back(i);
    return out;
}

}  // namespace

EmbeddingData make_embedding(const LabelledPolytope& p) {
    if (!is_integral(p)) throw NotIntegral("the lattice embedding needs integer vertices");
    if (!is_delzant(p)) throw NotDelzant("the lattice embedding needs a Delzant polytope");
    auto lattice = lattice_points(p, 1);
    if (lattice.n_k < 1) throw DegenerateN("P contains a single lattice point");
    const int n = p.dim();
    const auto rows = static_cast<Eigen::Index>(lattice.points.size());
    const auto d = static_cast<Eigen::Index>(p.facet_count());
    // points are sorted lexicographically, so m0 is the first
    const std::size_t m0 = 0;
    Eigen::MatrixXd shifts(rows, n), exps(rows, d);
    for (Eigen::Index j = 0; j < rows; ++j) {
        const auto& m = lattice.points[static_cast<std::size_t>(j)];
        for (int c = 0; c < n; ++c) shifts(j, c) = to_double(m[c] - lattice.points[m0][c]);
        for (Eigen::Index i = 0; i < d; ++i) exps(j, i) = to_double(p.defining_function(static_cast<std::size_t>(i), m));
    }
    return EmbeddingData{p, std::move(lattice), m0, std::move(shifts), std::move(exps)};
}

double z_squared(const EmbeddingData& e, const SymplecticPotential& u, std::size_t m, const Eigen::VectorXd& x) {
    check_point(e, m);
    const Eigen::VectorXd l = u.defining_functions(x);
    if (!(l.minCoeff() > 0.0)) throw BoundaryPoint("z_squared needs an interior point");
    const Eigen::VectorXd lz = log_z_squared(e, u, x);
    return std::exp(lz[static_cast<Eigen::Index>(m)] - lz[static_cast<Eigen::Index>(e.m0)]);
}

Eigen::VectorXd psi_diagonal(const EmbeddingData& e, const SymplecticPotential& u, const Eigen::VectorXd& alpha,
                             const Eigen::VectorXd& x) {
    check_alpha(e, alpha);
    return softmax_weights(log_z_squared(e, u, x), log_squares(alpha));
}

double psi_mm(const EmbeddingData& e, const SymplecticPotential& u, const Eigen::VectorXd& alpha, std::size_t m,
              const Eigen::VectorXd& x) {
    check_point(e, m);
    return psi_diagonal(e, u, alpha, x)[static_cast<Eigen::Index>(m)];
}

double psi_offdiagonal_magnitude(const EmbeddingData& e, const SymplecticPotential& u, const Eigen::VectorXd& alpha,
                                 std::size_t m, std::size_t k, const Eigen::VectorXd& x) {
    check_point(e, m);
    check_point(e, k);
    const Eigen::VectorXd psi = psi_diagonal(e, u, alpha, x);
    return std::sqrt(psi[static_cast<Eigen::Index>(m)] * psi[static_cast<Eigen::Index>(k)]);
}

BalanceWeights balance(const EmbeddingData& e, const SymplecticPotential& u, const QuadratureRule& q, double tol, int max_iter,
                       const std::optional<Eigen::VectorXd>& start) {
    if (q.dim != e.polytope.dim() || u.dim() != e.polytope.dim()) throw ValidationError("dimension mismatch between embedding, potential and quadrature");
    if (!(tol > 0.0)) throw ValidationError("balance tolerance must be positive");
    if (max_iter < 0) throw ValidationError("max_iter must be nonnegative");
    const auto count = static_cast<Eigen::Index>(e.size());

    std::vector<Eigen::VectorXd> log_z(q.size());
    detail::parallel_chunks(q.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) log_z[i] = log_z_squared(e, u, q.nodes[i]);
    });
    const double vol = q.total_weight();
    const double target = 1.0 / static_cast<double>(count);

    BalanceWeights out;
    out.alpha = start ? *start : Eigen::VectorXd::Constant(count, 1.0);
    check_alpha(e, out.alpha);
    out.alpha /= out.alpha.sum();
    for (;;) {
        const Eigen::VectorXd la2 = log_squares(out.alpha);
        Eigen::VectorXd integral = Eigen::VectorXd::Zero(count);
        for (std::size_t i = 0; i < q.size(); ++i) integral += q.weights[i] * softmax_weights(log_z[i], la2);
        out.averages = integral / vol;
        out.residual = (out.averages.array() - target).abs().maxCoeff();
        if (out.residual < tol) return out;
        if (out.iterations == max_iter)
            throw NoConvergence("balance residual " + format_double(out.residual) + " after " + std::to_string(max_iter) +
                                " iterations");
        // alpha_i^2 scales by sqrt(target / average_i), i.e. alpha_i by its fourth root
        for (Eigen::Index i = 0; i < count; ++i) out.alpha[i] *= std::pow(target / out.averages[i], 0.25);
        out.alpha /= out.alpha.sum();
        ++out.iterations;
    }
}

SaturationReport saturation_check(const EmbeddingData& e, const SymplecticPotential& u, const BalanceWeights& alpha,
                                  const QuadratureRule& q, double tol) {
    if (q.dim != e.polytope.dim() || u.dim() != e.polytope.dim()) throw ValidationError("dimension mismatch between embedding, potential and quadrature");
    if (!(tol > 0.0)) throw ValidationError("saturation tolerance must be positive");
    check_alpha(e, alpha.alpha);
    const int n = e.polytope.dim();
    const auto big_n = static_cast<double>(e.n());
    const auto m0 = static_cast<Eigen::Index>(e.m0);

    SaturationReport r;
    r.constant = n * (big_n + 1.0) / (big_n * (n + 1.0));
    r.tolerance = tol;
    r.samples = q.size();
    r.fitted_points = vertex_neighbours(e);

    std::vector<Eigen::VectorXd> psi(q.size());
    std::vector<double> r1(q.size(), 0.0);
    const Eigen::VectorXd la2 = log_squares(alpha.alpha);
    detail::parallel_chunks(q.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto s = eval_grad_hess(u, q.nodes[i]);
            psi[i] = softmax_weights(log_z_squared(e, u, q.nodes[i]), la2);
            // d log|Z_m|^2 = 2 G (m - m0), so d Psi_00 = -2 Psi_00 G sum_k Psi_kk (k - m0)
            const Eigen::VectorXd grad = -2.0 * psi[i][m0] * (s.G * (e.shifts.transpose() * psi[i]));
            for (Eigen::Index m = 0; m < e.shifts.rows(); ++m)
                if (m != m0) r1[i] = std::max(r1[i], std::abs(grad.dot(e.shifts.row(m).transpose()) + r.constant));
        }
    });
    for (double v : r1) r.r1 = std::max(r.r1, v);

    Eigen::MatrixXd design(static_cast<Eigen::Index>(q.size()), n + 1);
    for (std::size_t i = 0; i < q.size(); ++i) {
        design(static_cast<Eigen::Index>(i), 0) = 1.0;
        design.row(static_cast<Eigen::Index>(i)).tail(n) = q.nodes[i].transpose();
    }
    const auto qr = design.colPivHouseholderQr();
    for (std::size_t m : r.fitted_points) {
        Eigen::VectorXd y(design.rows());
        for (std::size_t i = 0; i < q.size(); ++i) y[static_cast<Eigen::Index>(i)] = psi[i][static_cast<Eigen::Index>(m)];
        const Eigen::VectorXd coef = qr.solve(y);
        r.r2 = std::max(r.r2, (design * coef - y).cwiseAbs().maxCoeff());
    }

    r.saturated = r.r1 < tol && r.r2 < tol;
    if (!r.saturated)
        r.classification = "none";
    else if (is_simplex(e.polytope) && e.n() == n)
        r.classification = "fubini-study";
    else
        r.classification = "contradiction";
    return r;
}

BoundReport bound_report(const LabelledPolytope& p, int k_max) {
    if (!is_delzant(p)) throw NotDelzant("bounds need a Delzant polytope");
    BoundReport out;
    out.k0 = k0(p, k_max);
    out.integral = is_integral(p);
    for (int k = out.k0; k <= out.k0 + 4; ++k) {
        const auto lattice = lattice_points(p, k);
        const Rational b = bly_bound_value(p.dim(), k, lattice.n_k);
        out.rows.push_back({k, lattice.n_k, b, is_integer(b)});
    }
    out.recommended = out.rows.front().bound;
    for (const auto& row : out.rows) out.recommended = std::min(out.recommended, row.bound);
    if (out.integral) {
        out.integral_bound = bly_bound(p, 1).bound;
        out.recommended = std::min(out.recommended, *out.integral_bound);
    }
    return out;
}

}  // namespace toric
