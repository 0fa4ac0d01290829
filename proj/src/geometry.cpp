#include "toric/geometry.hpp"

#include <cmath>
#include <limits>

#include "toric/errors.hpp"

namespace toric {

namespace {

bool use_closed_form(const SymplecticPotential& u, DerivativeMode mode) {
    switch (mode) {
        case DerivativeMode::ClosedForm:
            if (!u.has_closed_form_derivatives())
                throw InvalidPotential("no closed-form Hessian derivatives for " + u.describe());
            return true;
        case DerivativeMode::FiniteDifference:
            return false;
        case DerivativeMode::Auto:
        default:
            return u.has_closed_form_derivatives();
    }
}

void closed_form_jet(const SymplecticPotential& u, int order, HessianJet& jet) {
    const int n = u.dim();
    const auto dg = hessian_first_derivatives(u, jet.x);
    for (int k = 0; k < n; ++k) jet.dH.push_back(-jet.H * dg[static_cast<std::size_t>(k)] * jet.H);
    if (order < 2) return;
    const auto d2g = hessian_second_derivatives(u, jet.x);
    jet.d2H.resize(static_cast<std::size_t>(n * n));
    for (int k = 0; k < n; ++k) {
        const auto& dgk = dg[static_cast<std::size_t>(k)];
        for (int l = 0; l < n; ++l) {
            const auto& dhl = jet.dH[static_cast<std::size_t>(l)];
            Eigen::MatrixXd m = -dhl * dgk * jet.H - jet.H * d2g[static_cast<std::size_t>(k * n + l)] * jet.H - jet.H * dgk * dhl;
            jet.d2H[static_cast<std::size_t>(k * n + l)] = 0.5 * (m + m.transpose());
        }
    }
}

void finite_difference_jet(const SymplecticPotential& u, int order, double guard, HessianJet& jet) {
    const int n = u.dim();
    const Eigen::VectorXd& x = jet.x;
    const double h = kRelativeStep * u.defining_functions(x).minCoeff();
    const double scale = std::max(1.0, x.lpNorm<Eigen::Infinity>());
    if (!(h > 1e3 * std::numeric_limits<double>::epsilon() * scale))
        throw StepUnderflow("finite-difference step " + std::to_string(h) + " too small at this point");
    // shifted points lose at most a fraction of min L, so a halved guard holds
    auto h_at = [&](const Eigen::VectorXd& y) { return eval_grad_hess(u, y, 0.5 * guard).H; };
    auto shifted = [&](int k, double a, int l = -1, double b = 0.0) {
        Eigen::VectorXd y = x;
        y[k] += a;
        if (l >= 0) y[l] += b;
        return y;
    };

    std::vector<Eigen::MatrixXd> plus, minus;
    for (int k = 0; k < n; ++k) {
        plus.push_back(h_at(shifted(k, h)));
        minus.push_back(h_at(shifted(k, -h)));
        jet.dH.push_back((plus.back() - minus.back()) / (2 * h));
    }
    if (order < 2) return;
    jet.d2H.resize(static_cast<std::size_t>(n * n));
    for (int k = 0; k < n; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        jet.d2H[kk * static_cast<std::size_t>(n) + kk] = (plus[kk] - 2.0 * jet.H + minus[kk]) / (h * h);
        for (int l = k + 1; l < n; ++l) {
            const Eigen::MatrixXd m = (h_at(shifted(k, h, l, h)) - h_at(shifted(k, h, l, -h)) - h_at(shifted(k, -h, l, h)) +
                                       h_at(shifted(k, -h, l, -h))) /
                                      (4 * h * h);
            jet.d2H[static_cast<std::size_t>(k * n + l)] = m;
            jet.d2H[static_cast<std::size_t>(l * n + k)] = m;
        }
    }
}

}  // namespace

HessianJet hessian_jet(const SymplecticPotential& u, const Eigen::VectorXd& x, int order, DerivativeMode mode, double guard) {
    HessianJet jet;
    jet.x = x;
    jet.H = eval_grad_hess(u, x, guard).H;
    if (order < 1) return jet;
    if (use_closed_form(u, mode)) {
        closed_form_jet(u, order, jet);
    } else {
        jet.finite_difference = true;
        finite_difference_jet(u, order, guard, jet);
    }
    return jet;
}

CurvatureSample scalar_curvature(const SymplecticPotential& u, const Eigen::VectorXd& x, DerivativeMode mode, double guard) {
    HessianJet jet = hessian_jet(u, x, 2, mode, guard);
    const int n = u.dim();
    CurvatureSample out;
    out.x = x;
    out.scal = 0.0;
    out.ricci = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) out.scal -= jet.d2H[static_cast<std::size_t>(i * n + j)](i, j);
    }
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i) out.ricci(k, l) -= 0.5 * jet.d2H[static_cast<std::size_t>(i * n + k)](l, i);
    out.dH = std::move(jet.dH);
    out.d2H = std::move(jet.d2H);
    return out;
}

Eigen::VectorXd laplacian_coordinates(const SymplecticPotential& u, const Eigen::VectorXd& x, DerivativeMode mode) {
    const HessianJet jet = hessian_jet(u, x, 1, mode);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(u.dim());
    for (int i = 0; i < u.dim(); ++i) out -= jet.dH[static_cast<std::size_t>(i)].row(i).transpose();
    return out;
}

KEReport ke_check(const SymplecticPotential& u, int samples, std::optional<double> tol, DerivativeMode mode) {
    if (samples < 20) throw ValidationError("ke_check needs at least 20 samples, got " + std::to_string(samples));
    const int n = u.dim();
    const bool closed = use_closed_form(u, mode);
    const auto points = interior_samples(u.polytope(), samples, 0.05);

    // unknowns (lambda, beta_0..beta_{n-1}): Delta x_i = 2 lambda x_i + beta_i
    const Eigen::Index rows = static_cast<Eigen::Index>(points.size()) * n;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, n + 1);
    Eigen::VectorXd b(rows);
    Eigen::Index r = 0;
    for (const auto& x : points) {
        const Eigen::VectorXd lap = laplacian_coordinates(u, x, mode);
        for (int i = 0; i < n; ++i, ++r) {
            a(r, 0) = 2.0 * x[i];
            a(r, 1 + i) = 1.0;
            b[r] = lap[i];
        }
    }
    const Eigen::VectorXd sol = a.colPivHouseholderQr().solve(b);
    const Eigen::VectorXd residual = b - a * sol;

    KEReport report;
    report.lambda_hat = sol[0];
    report.xbar = -sol.tail(n) / (2.0 * sol[0]);
    report.residual_max = residual.lpNorm<Eigen::Infinity>();
    report.residual_l2 = std::sqrt(residual.squaredNorm() / static_cast<double>(rows));
    report.tolerance = tol.value_or(closed ? 1e-6 : 1e-4);
    report.samples = points.size();
    report.is_ke = report.residual_max < report.tolerance;
    return report;
}

}  // namespace toric
