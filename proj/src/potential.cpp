#include "toric/potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "toric/errors.hpp"
#include "toric/format.hpp"

namespace toric {

namespace {

std::string format_point(const Eigen::VectorXd& x) {
    std::string s = "(";
    for (Eigen::Index j = 0; j < x.size(); ++j) s += (j ? "," : "") + format_double(x[j]);
    return s + ")";
}

/// sum_k w_k nu_k nu_k^T
Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& normals, const Eigen::VectorXd& w) {
    return normals.transpose() * w.asDiagonal() * normals;
}

Eigen::VectorXd checked_defining_functions(const SymplecticPotential& u, const Eigen::VectorXd& x, double guard) {
    if (x.size() != u.dim()) throw ValidationError("point has dimension " + std::to_string(x.size()));
    const Eigen::VectorXd l = u.defining_functions(x);
    for (Eigen::Index k = 0; k < l.size(); ++k) {
        if (!(l[k] >= guard))
            throw BoundaryPoint("L_" + std::to_string(k) + format_point(x) + " = " + format_double(l[k]) + " is below the interior guard " +
                                format_double(guard));
    }
    return l;
}

Eigen::VectorXd dilated(const SymplecticPotential& u, const Eigen::VectorXd& l, double s) {
    return l + (s - 1.0) * u.centre_offsets();
}

double guillemin_value(const Eigen::VectorXd& l) {
    return 0.5 * (l.array() * l.array().log() - l.array()).sum();
}

constexpr std::array<int, 12> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

double radical_inverse(std::size_t index, int base) {
    double result = 0.0, f = 1.0 / base;
    while (index > 0) {
        result += f * static_cast<double>(index % static_cast<std::size_t>(base));
        index /= static_cast<std::size_t>(base);
        f /= base;
    }
    return result;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

}  // namespace

SymplecticPotential::SymplecticPotential(const LabelledPolytope& p, PotentialKind kind)
    : polytope_(std::make_shared<const LabelledPolytope>(p)),
      kind_(std::move(kind)),
      normals_(p.normals()),
      offsets_(p.offsets()),
      shift_(Eigen::VectorXd::Zero(p.dim())),
      centre_offsets_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p.facet_count()))) {}

SymplecticPotential SymplecticPotential::guillemin(const LabelledPolytope& p) {
    vertices(p);  // well-formedness
    return SymplecticPotential(p, Guillemin{});
}

SymplecticPotential SymplecticPotential::quadratic_perturbed(const LabelledPolytope& p, int axis, double c) {
    vertices(p);
    if (axis < 0 || axis >= p.dim())
        throw InvalidPotential("axis " + std::to_string(axis) + " out of range for dimension " + std::to_string(p.dim()));
    if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidPotential("quadratic perturbation needs c >= 0, got " + format_double(c));
    return SymplecticPotential(p, QuadraticPerturbed{axis, c});
}

SymplecticPotential SymplecticPotential::dilation(const LabelledPolytope& p, double s) {
    if (!(s > 1.0) || !std::isfinite(s)) throw InvalidPotential("dilation needs s > 1, got " + format_double(s));
    const RationalVector centre = vertex_centroid(p);
    SymplecticPotential u(p, Dilation{s});
    u.shift_ = to_double(centre);
    for (std::size_t k = 0; k < p.facet_count(); ++k)
        u.centre_offsets_[static_cast<Eigen::Index>(k)] = to_double(p.defining_function(k, centre));
    return u;
}

SymplecticPotential SymplecticPotential::guillemin_plus_poly(const LabelledPolytope& p, Polynomial v, int validation_samples) {
    vertices(p);
    if (v.dim() != p.dim())
        throw InvalidPotential("polynomial has " + std::to_string(v.dim()) + " variables, polytope dimension is " +
                               std::to_string(p.dim()));
    SymplecticPotential u(p, GuilleminPlusPoly{std::move(v)});
    if (validation_samples > 0) {
        const auto report = validate(u, std::max(validation_samples, 10));
        if (!report.pass) throw InvalidPotential("Guillemin + polynomial is not convex: " + report.failures.front());
    }
    return u;
}

std::string SymplecticPotential::describe() const {
    return std::visit(
        [](const auto& k) -> std::string {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, Guillemin>) {
                return "guillemin";
            } else if constexpr (std::is_same_v<K, QuadraticPerturbed>) {
                return "uc:i=" + std::to_string(k.axis) + ",c=" + format_double(k.c);
            } else if constexpr (std::is_same_v<K, Dilation>) {
                return "dilation:s=" + format_double(k.s);
            } else {
                return "poly:" + std::to_string(k.v.terms().size()) + " terms";
            }
        },
        kind_);
}

Eigen::MatrixXd hessian(const SymplecticPotential& u, const Eigen::VectorXd& x, double guard) {
    const Eigen::VectorXd l = checked_defining_functions(u, x, guard);
    const Eigen::MatrixXd& nu = u.normals();
    return std::visit(
        [&](const auto& k) -> Eigen::MatrixXd {
            using K = std::decay_t<decltype(k)>;
            Eigen::MatrixXd g0 = weighted_gram(nu, (0.5 * l.array().inverse()).matrix());
            if constexpr (std::is_same_v<K, QuadraticPerturbed>) {
                g0(k.axis, k.axis) += k.c;
            } else if constexpr (std::is_same_v<K, Dilation>) {
                const Eigen::VectorXd ls = dilated(u, l, k.s);
                g0 = weighted_gram(nu, (0.5 * (l.array().inverse() - (k.s * ls.array()).inverse())).matrix());
            } else if constexpr (std::is_same_v<K, GuilleminPlusPoly>) {
                g0 += k.v.hessian(x);
            }
            return g0;
        },
        u.kind());
}

HessianSample eval_grad_hess(const SymplecticPotential& u, const Eigen::VectorXd& x, double guard) {
    HessianSample out;
    out.x = x;
    out.G = hessian(u, x, guard);
    const Eigen::VectorXd l = u.defining_functions(x);
    const Eigen::MatrixXd& nu = u.normals();

    out.value = guillemin_value(l);
    out.gradient = 0.5 * nu.transpose() * l.array().log().matrix();
    std::visit(
        [&](const auto& k) {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, QuadraticPerturbed>) {
                out.value += 0.5 * k.c * x[k.axis] * x[k.axis];
                out.gradient[k.axis] += k.c * x[k.axis];
            } else if constexpr (std::is_same_v<K, Dilation>) {
                const Eigen::VectorXd ls = dilated(u, l, k.s);
                out.value -= guillemin_value(ls) / k.s;
                out.gradient -= 0.5 / k.s * nu.transpose() * ls.array().log().matrix();
            } else if constexpr (std::is_same_v<K, GuilleminPlusPoly>) {
                out.value += k.v.value(x);
                out.gradient += k.v.gradient(x);
            }
        },
        u.kind());

    Eigen::LDLT<Eigen::MatrixXd> ldlt(out.G);
    const Eigen::VectorXd pivots = ldlt.vectorD();
    if (ldlt.info() != Eigen::Success || !(pivots.array() > 0.0).all())
        throw NotPositiveDefinite("Hessian of " + u.describe() + " at " + format_point(x) + " has a nonpositive pivot " +
                                  format_double(pivots.minCoeff()));
    const Eigen::Index n = out.G.rows();
    Eigen::MatrixXd h = ldlt.solve(Eigen::MatrixXd::Identity(n, n));
    out.H = 0.5 * (h + h.transpose());
    out.logdetG = pivots.array().log().sum();
    return out;
}

std::vector<Eigen::MatrixXd> hessian_first_derivatives(const SymplecticPotential& u, const Eigen::VectorXd& x) {
    if (!u.has_closed_form_derivatives())
        throw InvalidPotential("no closed-form Hessian derivatives for " + u.describe());
    const Eigen::VectorXd l = checked_defining_functions(u, x, kInteriorGuard);
    const Eigen::MatrixXd& nu = u.normals();
    Eigen::VectorXd w = -0.5 * l.array().square().inverse();
    if (const auto* d = std::get_if<Dilation>(&u.kind())) {
        const Eigen::VectorXd ls = dilated(u, l, d->s);
        w += (0.5 / d->s * ls.array().square().inverse()).matrix();
    }
    std::vector<Eigen::MatrixXd> out;
    for (int k = 0; k < u.dim(); ++k) out.push_back(weighted_gram(nu, w.cwiseProduct(nu.col(k))));
    return out;
}

std::vector<Eigen::MatrixXd> hessian_second_derivatives(const SymplecticPotential& u, const Eigen::VectorXd& x) {
    if (!u.has_closed_form_derivatives())
        throw InvalidPotential("no closed-form Hessian derivatives for " + u.describe());
    const Eigen::VectorXd l = checked_defining_functions(u, x, kInteriorGuard);
    const Eigen::MatrixXd& nu = u.normals();
    Eigen::VectorXd w = l.array().cube().inverse();
    if (const auto* d = std::get_if<Dilation>(&u.kind())) {
        const Eigen::VectorXd ls = dilated(u, l, d->s);
        w -= (1.0 / d->s * ls.array().cube().inverse()).matrix();
    }
    const int n = u.dim();
    std::vector<Eigen::MatrixXd> out(static_cast<std::size_t>(n * n));
    for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m)
            out[static_cast<std::size_t>(k * n + m)] = weighted_gram(nu, w.cwiseProduct(nu.col(k)).cwiseProduct(nu.col(m)));
    return out;
}

ValidationReport validate(const SymplecticPotential& u, int samples) {
    if (samples < 10) throw ValidationError("validate needs at least 10 samples");
    ValidationReport report;
    report.worst_margin = std::numeric_limits<double>::infinity();
    auto record = [&](double margin, const std::string& where) {
        ++report.points_checked;
        report.worst_margin = std::min(report.worst_margin, margin);
        if (!(margin > 0.0)) {
            report.pass = false;
            if (report.failures.size() < 8) report.failures.push_back(where + ": smallest eigenvalue " + format_double(margin));
        }
    };

    for (const auto& x : interior_samples(u.polytope(), samples, 0.0)) {
        try {
            record(min_eigenvalue(hessian(u, x)), "interior point " + format_point(x));
        } catch (const BoundaryPoint&) {
        }
    }

    const LabelledPolytope& p = u.polytope();
    const auto vs = vertices(p);
    const Eigen::VectorXd centre = to_double(vertex_centroid(p));
    const int n = p.dim();
    for (std::size_t i = 0; i < p.facet_count(); ++i) {
        Eigen::VectorXd facet_centre = Eigen::VectorXd::Zero(n);
        int count = 0;
        for (const auto& v : vs) {
            if (std::binary_search(v.active.begin(), v.active.end(), i)) {
                facet_centre += to_double(v.coords);
                ++count;
            }
        }
        facet_centre /= count;
        const double height = p.defining_function(i, centre);
        const Eigen::VectorXd nu = p.facet(i).normal.cast<double>();
        // orthonormal basis of the facet's tangent space
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(nu);
        const Eigen::MatrixXd tangent = Eigen::MatrixXd(qr.householderQ()).rightCols(n - 1);
        for (double delta : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
            const Eigen::VectorXd x = facet_centre + (delta / height) * (centre - facet_centre);
            const std::string where = "near facet " + std::to_string(i) + " at distance " + format_double(delta);
            try {
                const Eigen::MatrixXd g = hessian(u, x);
                record(min_eigenvalue(g), where);
                if (n > 1) record(min_eigenvalue(tangent.transpose() * g * tangent), where + " (tangential)");
            } catch (const BoundaryPoint&) {
            }
        }
    }
    return report;
}

double hc_diag(const SymplecticPotential& u, const Eigen::VectorXd& x) {
    const auto* qp = std::get_if<QuadraticPerturbed>(&u.kind());
    if (!qp) throw InvalidPotential("hc_diag needs a quadratic perturbation, got " + u.describe());
    const Eigen::VectorXd l = checked_defining_functions(u, x, kInteriorGuard);
    const Eigen::MatrixXd g0 = weighted_gram(u.normals(), (0.5 * l.array().inverse()).matrix());
    const int n = u.dim();
    const int i = qp->axis;
    double det_minor = 1.0;
    if (n > 1) {
        Eigen::MatrixXd minor(n - 1, n - 1);
        for (int r = 0, rr = 0; r < n; ++r) {
            if (r == i) continue;
            for (int c = 0, cc = 0; c < n; ++c) {
                if (c == i) continue;
                minor(rr, cc++) = g0(r, c);
            }
            ++rr;
        }
        det_minor = minor.determinant();
    }
    return det_minor / (g0.determinant() + qp->c * det_minor);
}

Eigen::MatrixXd dilation_limit_B(const LabelledPolytope& p, const Eigen::VectorXd& x) {
    const Eigen::VectorXd c = p.offsets();
    for (Eigen::Index k = 0; k < c.size(); ++k)
        if (!(c[k] > 0.0))
            throw OriginNotInterior("offset c_" + std::to_string(k) + " = " + to_string(p.facet(static_cast<std::size_t>(k)).offset) +
                                    " is not positive");
    const Eigen::VectorXd l = p.defining_functions(x);
    for (Eigen::Index k = 0; k < l.size(); ++k)
        if (!(l[k] >= kInteriorGuard)) throw BoundaryPoint("L_" + std::to_string(k) + format_point(x) + " = " + format_double(l[k]));
    const Eigen::VectorXd w = 0.5 * (l + c).array() / l.array().square();
    return weighted_gram(p.normals(), w);
}

Eigen::VectorXd halton(std::size_t index, int dim) {
    if (dim > static_cast<int>(kPrimes.size())) throw ValidationError("Halton dimension too large");
    Eigen::VectorXd h(dim);
    for (int j = 0; j < dim; ++j) h[j] = radical_inverse(index, kPrimes[static_cast<std::size_t>(j)]);
    return h;
}

std::vector<Eigen::VectorXd> interior_samples(const LabelledPolytope& p, int count, double shrink) {
    const int n = p.dim();
    const auto simplices = triangulate(p);
    std::vector<double> cumulative;
    double total = 0.0;
    for (const auto& s : simplices) {
        total += to_double(simplex_volume(s));
        cumulative.push_back(total);
    }
    const Eigen::VectorXd centre = to_double(vertex_centroid(p));

    std::vector<Eigen::VectorXd> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int j = 1; j <= count; ++j) {
        const Eigen::VectorXd h = halton(static_cast<std::size_t>(j), n + 1);
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), h[0] * total);
        const auto& simplex = simplices[static_cast<std::size_t>(std::min<std::ptrdiff_t>(
            it - cumulative.begin(), static_cast<std::ptrdiff_t>(simplices.size()) - 1))];
        // sorted uniforms -> uniform barycentric weights (spacings)
        std::vector<double> u(h.data() + 1, h.data() + n + 1);
        std::sort(u.begin(), u.end());
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        double prev = 0.0;
        for (int r = 0; r <= n; ++r) {
            const double next = r < n ? u[static_cast<std::size_t>(r)] : 1.0;
            for (int c = 0; c < n; ++c) x[c] += (next - prev) * to_double(simplex(r, c));
            prev = next;
        }
        out.push_back(centre + (1.0 - shrink) * (x - centre));
    }
    return out;
}

}  // namespace toric
