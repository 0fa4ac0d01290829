#include "toric/spectral.hpp"

#include <cstdlib>
#include <exception>
#include <thread>

#include "parallel.hpp"
#include "toric/format.hpp"

namespace toric {

double QuadratureRule::total_weight() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

void gauss_jacobi(int points, int alpha, std::vector<double>& nodes, std::vector<double>& weights) {
    // Golub-Welsch on the Jacobi matrix for (1 - x)^alpha (1 + x)^0 on [-1, 1]
    const double a = alpha, b = 0.0;
    Eigen::VectorXd diag(points), sub(std::max(points - 1, 0));
    for (int k = 0; k < points; ++k) {
        const double s = 2.0 * k + a + b;
        diag[k] = k == 0 ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    }
    for (int k = 1; k < points; ++k) {
        const double s = 2.0 * k + a + b;
        sub[k - 1] = std::sqrt(4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0)));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const double mu0 = std::pow(2.0, a + b + 1.0) / (a + 1.0);
    nodes.resize(static_cast<std::size_t>(points));
    weights.resize(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
        const double v0 = es.eigenvectors()(0, k);
        nodes[static_cast<std::size_t>(k)] = 0.5 * (1.0 + es.eigenvalues()[k]);
        weights[static_cast<std::size_t>(k)] = mu0 * v0 * v0 / std::pow(2.0, a + 1.0);
    }
}

void simplex_rule(const Eigen::MatrixXd& simplex, int order, std::vector<Eigen::VectorXd>& nodes, std::vector<double>& weights) {
    const int n = static_cast<int>(simplex.cols());
    Eigen::MatrixXd edges(n, n);
    for (int j = 0; j < n; ++j) edges.col(j) = (simplex.row(j + 1) - simplex.row(0)).transpose();
    const double jac = std::abs(edges.determinant());

    // collapsed coordinates: y_j = t_j prod_{i<j} (1 - t_i), t_j weighted by (1 - t_j)^(n-1-j)
    std::vector<std::vector<double>> t(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) gauss_jacobi(order, n - 1 - j, t[static_cast<std::size_t>(j)], w[static_cast<std::size_t>(j)]);

    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    while (true) {
        Eigen::VectorXd x = simplex.row(0).transpose();
        double weight = jac, remaining = 1.0;
        for (int j = 0; j < n; ++j) {
            const auto jj = static_cast<std::size_t>(j);
            const double tj = t[jj][static_cast<std::size_t>(idx[jj])];
            x += remaining * tj * edges.col(j);
            weight *= w[jj][static_cast<std::size_t>(idx[jj])];
            remaining *= 1.0 - tj;
        }
        nodes.push_back(std::move(x));
        weights.push_back(weight);
        int j = n - 1;
        while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == order) idx[static_cast<std::size_t>(j--)] = 0;
        if (j < 0) break;
    }
}

std::vector<RationalMatrix> subdivide(const RationalMatrix& s) {
    const Eigen::Index n = s.cols();
    auto mid = [&](Eigen::Index i, Eigen::Index j) -> RationalVector {
        RationalVector m(n);
        for (Eigen::Index c = 0; c < n; ++c) m[c] = (s(i, c) + s(j, c)) / 2;
        return m;
    };
    auto simplex = [&](std::initializer_list<RationalVector> rows) {
        RationalMatrix out(static_cast<Eigen::Index>(rows.size()), n);
        Eigen::Index r = 0;
        for (const auto& row : rows) out.row(r++) = row.transpose();
        return out;
    };
    auto v = [&](Eigen::Index i) -> RationalVector { return s.row(i).transpose(); };

    if (n == 1) {
        const RationalVector m = mid(0, 1);
        return {simplex({v(0), m}), simplex({m, v(1)})};
    }
    if (n == 2) {
        const RationalVector m01 = mid(0, 1), m02 = mid(0, 2), m12 = mid(1, 2);
        return {simplex({v(0), m01, m02}), simplex({m01, v(1), m12}), simplex({m02, m12, v(2)}), simplex({m01, m12, m02})};
    }
    if (n == 3) {
        const RationalVector m01 = mid(0, 1), m02 = mid(0, 2), m03 = mid(0, 3), m12 = mid(1, 2), m13 = mid(1, 3),
                             m23 = mid(2, 3);
        // four corners, then the octahedron split along the m02-m13 diagonal
        return {simplex({v(0), m01, m02, m03}), simplex({m01, v(1), m12, m13}), simplex({m02, m12, v(2), m23}),
                simplex({m03, m13, m23, v(3)}),  simplex({m02, m13, m01, m12}),  simplex({m02, m13, m12, m23}),
                simplex({m02, m13, m23, m03}),   simplex({m02, m13, m03, m01})};
    }
    throw DimUnsupported("subdivision is implemented for dimension <= 3, got " + std::to_string(n));
}

QuadratureRule build_quadrature(const LabelledPolytope& p, int order, int depth) {
    if (p.dim() > 3) throw DimUnsupported("quadrature needs dimension <= 3, got " + std::to_string(p.dim()));
    if (order < 1 || order > 4) throw ValidationError("quadrature order must be in 1..4, got " + std::to_string(order));
    if (depth < 0 || depth > 8) throw ValidationError("quadrature depth must be in 0..8, got " + std::to_string(depth));

    QuadratureRule q;
    q.dim = p.dim();
    q.order = order;
    q.depth = depth;
    q.triangulation = triangulate(p);
    q.volume = 0;
    for (const auto& s : q.triangulation) {
        q.volume += simplex_volume(s);
        std::vector<RationalMatrix> pieces{s};
        for (int d = 0; d < depth; ++d) {
            std::vector<RationalMatrix> next;
            for (const auto& piece : pieces)
                for (auto& child : subdivide(piece)) next.push_back(std::move(child));
            pieces = std::move(next);
        }
        for (const auto& piece : pieces) {
            Eigen::MatrixXd simplex(piece.rows(), piece.cols());
            for (Eigen::Index r = 0; r < piece.rows(); ++r)
                for (Eigen::Index c = 0; c < piece.cols(); ++c) simplex(r, c) = to_double(piece(r, c));
            simplex_rule(simplex, order, q.nodes, q.weights);
        }
    }
    return q;
}

int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("TORIC_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) return std::min(cap, hw);
    }
    return hw;
}

std::vector<Eigen::MatrixXd> node_inverse_hessians(const SymplecticPotential& u, const QuadratureRule& q) {
    if (q.dim != u.dim()) throw ValidationError("quadrature and potential dimensions differ");
    std::vector<Eigen::MatrixXd> out(q.size());
    detail::parallel_chunks(q.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) out[i] = eval_grad_hess(u, q.nodes[i]).H;
    });
    return out;
}

namespace {

/// y_j^e for e = 0..degree in row j
Eigen::MatrixXd power_table(const Eigen::VectorXd& y, int degree) {
    Eigen::MatrixXd pw(y.size(), degree + 1);
    for (Eigen::Index j = 0; j < y.size(); ++j) {
        pw(j, 0) = 1.0;
        for (int e = 1; e <= degree; ++e) pw(j, e) = pw(j, e - 1) * y[j];
    }
    return pw;
}

int max_exponent(const std::vector<std::vector<int>>& exponents) {
    int d = 0;
    for (const auto& e : exponents)
        for (int v : e) d = std::max(d, v);
    return d;
}

double raw_monomial(const std::vector<int>& e, const Eigen::MatrixXd& pw) {
    double m = 1.0;
    for (std::size_t j = 0; j < e.size(); ++j) m *= pw(static_cast<Eigen::Index>(j), e[j]);
    return m;
}

}  // namespace

Eigen::VectorXd TrialSpace::values(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd y = (x - centre).cwiseQuotient(half_width);
    const Eigen::MatrixXd pw = power_table(y, max_exponent(exponents));
    Eigen::VectorXd v(static_cast<Eigen::Index>(size()));
    for (std::size_t a = 0; a < size(); ++a) v[static_cast<Eigen::Index>(a)] = raw_monomial(exponents[a], pw) - means[static_cast<Eigen::Index>(a)];
    return v;
}

Eigen::MatrixXd TrialSpace::gradients(const Eigen::VectorXd& x) const {
    const Eigen::Index n = x.size();
    const Eigen::VectorXd y = (x - centre).cwiseQuotient(half_width);
    const Eigen::MatrixXd pw = power_table(y, max_exponent(exponents));
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(size()));
    for (std::size_t a = 0; a < size(); ++a) {
        const auto& e = exponents[a];
        for (Eigen::Index k = 0; k < n; ++k) {
            const int ek = e[static_cast<std::size_t>(k)];
            if (ek == 0) continue;
            double m = ek / half_width[k];
            for (Eigen::Index j = 0; j < n; ++j) m *= pw(j, e[static_cast<std::size_t>(j)] - (j == k ? 1 : 0));
            g(k, static_cast<Eigen::Index>(a)) = m;
        }
    }
    return g;
}

Eigen::MatrixXd TrialSpace::hessian(const Eigen::VectorXd& coeffs, const Eigen::VectorXd& x) const {
    const Eigen::Index n = x.size();
    const Eigen::VectorXd y = (x - centre).cwiseQuotient(half_width);
    const Eigen::MatrixXd pw = power_table(y, max_exponent(exponents));
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t a = 0; a < size(); ++a) {
        for (Eigen::Index k = 0; k < n; ++k) {
            for (Eigen::Index l = 0; l < n; ++l) {
                std::vector<int> e = exponents[a];
                double m = coeffs[static_cast<Eigen::Index>(a)] * e[static_cast<std::size_t>(k)] / half_width[k];
                --e[static_cast<std::size_t>(k)];
                m *= e[static_cast<std::size_t>(l)] / half_width[l];
                --e[static_cast<std::size_t>(l)];
                if (m == 0.0) continue;
                for (Eigen::Index j = 0; j < n; ++j) m *= pw(j, e[static_cast<std::size_t>(j)]);
                h(k, l) += m;
            }
        }
    }
    return h;
}

TrialSpace make_trial_space(const LabelledPolytope& p, int degree, const QuadratureRule& q) {
    if (degree < 1) throw ValidationError("trial degree must be >= 1, got " + std::to_string(degree));
    const int n = p.dim();
    TrialSpace s;
    s.exponents = monomial_exponents(n, 1, degree);
    s.centre = to_double(vertex_centroid(p));
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    Eigen::VectorXd hi = -lo;
    for (const auto& v : vertices(p)) {
        const Eigen::VectorXd c = to_double(v.coords);
        lo = lo.cwiseMin(c);
        hi = hi.cwiseMax(c);
    }
    s.half_width = 0.5 * (hi - lo);
    // values() subtracts the means, which are still zero here
    s.means = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.size()));
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < q.size(); ++i) acc += q.weights[i] * s.values(q.nodes[i]);
    s.means = acc / q.total_weight();
    return s;
}

RitzSystem assemble(const SymplecticPotential& u, const TrialSpace& space, const QuadratureRule& q) {
    const auto hs = node_inverse_hessians(u, q);
    const auto b = static_cast<Eigen::Index>(space.size());
    RitzSystem sys{Eigen::MatrixXd::Zero(b, b), Eigen::MatrixXd::Zero(b, b)};
    for (std::size_t i = 0; i < q.size(); ++i) {
        const Eigen::VectorXd v = space.values(q.nodes[i]);
        const Eigen::MatrixXd g = space.gradients(q.nodes[i]);
        sys.mass.noalias() += q.weights[i] * v * v.transpose();
        sys.stiffness.noalias() += q.weights[i] * g.transpose() * (hs[i] * g);
    }
    return sys;
}

RitzResult lambda1_invariant(const SymplecticPotential& u, int degree, const QuadratureRule& q) {
    RitzResult r;
    r.degree = degree;
    r.space = make_trial_space(u.polytope(), degree, q);
    r.basis_size = r.space.size();
    r.quad_order = q.order;
    r.quad_depth = q.depth;
    r.quad_nodes = q.size();
    if (q.size() < r.basis_size)
        throw QuadratureTooCoarse(std::to_string(q.size()) + " quadrature nodes cannot resolve " + std::to_string(r.basis_size) +
                                  " trial functions");
    const RitzSystem sys = assemble(u, r.space, q);
    const Eigen::MatrixXd& a = sys.stiffness;
    const Eigen::MatrixXd& m = sys.mass;
    if (!a.allFinite() || !m.allFinite()) throw QuadratureTooCoarse("non-finite entries in the Ritz matrices");
    if ((a - a.transpose()).norm() > 1e-8 * a.norm()) throw QuadratureTooCoarse("stiffness matrix is not symmetric");

    // unit-diagonal scaling, then greedy pivoted Cholesky of the mass matrix
    const Eigen::Index b = m.rows();
    Eigen::VectorXd scale(b);
    for (Eigen::Index i = 0; i < b; ++i) scale[i] = m(i, i) > 0.0 ? 1.0 / std::sqrt(m(i, i)) : 0.0;
    const Eigen::MatrixXd ms = scale.asDiagonal() * m * scale.asDiagonal();
    const Eigen::MatrixXd as = scale.asDiagonal() * (0.5 * (a + a.transpose())) * scale.asDiagonal();

    Eigen::VectorXd residual = ms.diagonal();
    Eigen::MatrixXd factor = Eigen::MatrixXd::Zero(b, b);
    std::vector<Eigen::Index> kept;
    std::vector<bool> used(static_cast<std::size_t>(b), false);
    double largest = 0.0, smallest = std::numeric_limits<double>::infinity();
    for (Eigen::Index step = 0; step < b; ++step) {
        Eigen::Index piv = -1;
        for (Eigen::Index i = 0; i < b; ++i)
            if (!used[static_cast<std::size_t>(i)] && scale[i] > 0.0 && (piv < 0 || residual[i] > residual[piv])) piv = i;
        if (piv < 0 || !(residual[piv] > kDropTolerance)) break;
        used[static_cast<std::size_t>(piv)] = true;
        const double d = std::sqrt(residual[piv]);
        largest = std::max(largest, residual[piv]);
        smallest = std::min(smallest, residual[piv]);
        const auto col = static_cast<Eigen::Index>(kept.size());
        for (Eigen::Index i = 0; i < b; ++i) {
            if (used[static_cast<std::size_t>(i)] && i != piv) continue;
            double s = ms(i, piv);
            for (Eigen::Index k = 0; k < col; ++k) s -= factor(i, k) * factor(piv, k);
            factor(i, col) = i == piv ? d : s / d;
            if (i != piv) residual[i] -= factor(i, col) * factor(i, col);
        }
        kept.push_back(piv);
    }
    const auto rank = static_cast<Eigen::Index>(kept.size());
    if (rank == 0) throw MassSingular("every trial function vanishes on the quadrature nodes");
    r.rank = static_cast<std::size_t>(rank);
    r.mass_condition = largest / smallest;

    Eigen::MatrixXd l(rank, rank), a_kept(rank, rank);
    for (Eigen::Index i = 0; i < rank; ++i) {
        for (Eigen::Index j = 0; j < rank; ++j) {
            l(i, j) = factor(kept[static_cast<std::size_t>(i)], j);
            a_kept(i, j) = as(kept[static_cast<std::size_t>(i)], kept[static_cast<std::size_t>(j)]);
        }
    }
    const auto lt = l.triangularView<Eigen::Lower>();
    const Eigen::MatrixXd tmp = lt.solve(a_kept);
    Eigen::MatrixXd c = lt.solve(tmp.transpose()).transpose();
    c = 0.5 * (c + c.transpose());

    const auto jr = jacobi_eigen<double>(c, kJacobiTolerance);
    r.jacobi_sweeps = jr.sweeps;
    r.eigenvalues = jr.values;
    r.lambda1T = jr.values[0];
    if (!(r.lambda1T > 0.0)) throw MassSingular("nonpositive Ritz value " + format_double(r.lambda1T));
    r.stiffness_condition = jr.values[rank - 1] / jr.values[0];

    const Eigen::VectorXd y = l.transpose().triangularView<Eigen::Upper>().solve(jr.vectors.col(0));
    r.eigvec = Eigen::VectorXd::Zero(b);
    for (Eigen::Index i = 0; i < rank; ++i) {
        const Eigen::Index a_idx = kept[static_cast<std::size_t>(i)];
        r.eigvec[a_idx] = y[i] * scale[a_idx];
    }
    Eigen::Index big = 0;
    r.eigvec.cwiseAbs().maxCoeff(&big);
    if (r.eigvec[big] < 0) r.eigvec = -r.eigvec;
    return r;
}

namespace {

void check_list(const std::vector<double>& xs, bool ascending, double lower, bool lower_inclusive, const std::string& name) {
    if (xs.empty()) throw ValidationError(name + " list is empty");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double v = xs[i];
        if (!std::isfinite(v) || v < lower || (!lower_inclusive && v == lower))
            throw ValidationError(name + " = " + format_double(v) + " is out of range");
        if (i > 0 && (ascending ? !(v > xs[i - 1]) : !(v < xs[i - 1])))
            throw ValidationError(name + " list must be strictly " + (ascending ? "ascending" : "descending"));
    }
}

}  // namespace

SweepTable sweep_uc(const LabelledPolytope& p, int axis, const std::vector<double>& c_list, int degree, const QuadratureRule& q) {
    check_list(c_list, true, 0.0, true, "c");
    SweepTable t;
    t.family = "uc";
    t.baseline = lambda1_invariant(SymplecticPotential::guillemin(p), degree, q).lambda1T;
    for (double c : c_list) {
        const auto r = lambda1_invariant(SymplecticPotential::quadratic_perturbed(p, axis, c), degree, q);
        if (!t.rows.empty() && !(r.lambda1T < t.rows.back().lambda1T)) {
            t.monotone = false;
            t.flags.push_back("c = " + format_double(c) + ": lambda1T did not decrease");
        }
        t.rows.push_back({c, r.lambda1T, degree, q.size()});
    }
    return t;
}

SweepTable sweep_dilation(const LabelledPolytope& p, const std::vector<double>& s_list, int degree, const QuadratureRule& q) {
    check_list(s_list, false, 1.0, false, "s");
    SweepTable t;
    t.family = "dilation";
    t.baseline = lambda1_invariant(SymplecticPotential::guillemin(p), degree, q).lambda1T;
    for (double s : s_list) {
        const auto r = lambda1_invariant(SymplecticPotential::dilation(p, s), degree, q);
        if (r.lambda1T < t.baseline - 1e-6) t.flags.push_back("s = " + format_double(s) + ": below the Guillemin value");
        if (!t.rows.empty() && !(r.lambda1T > t.rows.back().lambda1T)) {
            t.monotone = false;
            t.flags.push_back("s = " + format_double(s) + ": lambda1T did not increase");
        }
        t.rows.push_back({s, r.lambda1T, degree, q.size()});
    }
    return t;
}

std::string to_csv(const SweepTable& table) {
    std::string out = "param,lambda1T,degree,quad_nodes\n";
    for (const auto& r : table.rows)
        out += format_double(r.param) + "," + format_double(r.lambda1T) + "," + std::to_string(r.degree) + "," +
               std::to_string(r.quad_nodes) + "\n";
    return out;
}

}  // namespace toric
