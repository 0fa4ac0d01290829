// One PASS/FAIL line per acceptance criterion. Exit status is nonzero when
// any criterion fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <sys/wait.h>

#include "sturm_liouville.hpp"
#include "support.hpp"
#include "toric/errors.hpp"
#include "toric/format.hpp"
#include "toric/geometry.hpp"
#include "toric/io.hpp"
#include "toric/projective.hpp"
#include "toric/spectral.hpp"

using namespace toric;
using namespace toric::testing;

namespace {

/// Collects the failed sub-checks of one criterion.
struct Checks {
    std::vector<std::string> failures;
    void operator()(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

std::string fmt(double v) { return format_double(v); }

/// 1/2 sum nu nu^T / L, written out independently of the library.
Eigen::MatrixXd guillemin_hessian(const LabelledPolytope& p, const Eigen::VectorXd& x) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(p.dim(), p.dim());
    for (const auto& f : p.facets()) {
        Eigen::VectorXd nu(p.dim());
        for (int j = 0; j < p.dim(); ++j) nu[j] = static_cast<double>(f.normal[j]);
        g += 0.5 * nu * nu.transpose() / (nu.dot(x) + to_double(f.offset));
    }
    return g;
}

std::string capture(const std::string& args) {
    const std::string cmd = std::string(TORIC_CLI) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return "<popen failed>";
    std::string out;
    std::array<char, 4096> buf{};
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    const int status = pclose(pipe);
    return "status " + std::to_string(WIFEXITED(status) ? WEXITSTATUS(status) : -1) + "\n" + out;
}

std::string bundled(const std::string& name) { return std::string(TORIC_POLYTOPES) + "/" + name + ".json"; }

void criterion1(Checks& check) {
    const auto start = std::chrono::steady_clock::now();
    const auto p = unit_interval();
    const double l = lambda1_invariant(SymplecticPotential::guillemin(p), 4, build_quadrature(p, 3, 3)).lambda1T;
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check(std::abs(l - 4.0) < 1e-4, "lambda1T = " + fmt(l));
    check(seconds < 1.0, "runtime " + fmt(seconds) + " s");
    check(bly_bound(p).bound == 4, "integral bound is not 4");
}

void criterion2(Checks& check) {
    const auto p = simplex2();
    const auto u = SymplecticPotential::guillemin(p);
    const auto q = build_quadrature(p, 3, 2);
    const double l = lambda1_invariant(u, 4, q).lambda1T;
    check(std::abs(l - 6.0) < 5e-3, "lambda1T = " + fmt(l));
    check(bly_bound(p).bound == 6, "bly_bound = " + to_string(bly_bound(p).bound));
    const auto e = make_embedding(p);
    const auto r = saturation_check(e, u, balance(e, u, q), q);
    check(r.saturated && r.r1 < 1e-6 && r.r2 < 1e-6, "r1 = " + fmt(r.r1) + ", r2 = " + fmt(r.r2));
    check(r.classification == "fubini-study", "classification " + r.classification);
}

void criterion3(Checks& check) {
    for (int n = 1; n <= 2; ++n) {
        const auto r = ke_check(SymplecticPotential::guillemin(standard_simplex(n)), 64);
        check(r.is_ke, "simplex n = " + std::to_string(n) + " not KE");
        check(std::abs(r.lambda_hat - (n + 1)) < 1e-8, "lambda_hat = " + fmt(r.lambda_hat));
        check(r.residual_max < 1e-8, "residual_max = " + fmt(r.residual_max));
    }
    const auto r = ke_check(SymplecticPotential::quadratic_perturbed(unit_interval(), 0, 5.0), 64);
    check(!r.is_ke, "u_c (c = 5) reported KE");
    check(r.residual_max > 0.1, "u_c residual_max = " + fmt(r.residual_max));
}

void criterion4(Checks& check) {
    const std::vector<std::pair<LabelledPolytope, double>> cases = {{unit_interval(), 4.0}, {simplex2(), 12.0}};
    for (const auto& [p, expected] : cases) {
        const auto u = SymplecticPotential::guillemin(p);
        double worst_closed = 0.0, worst_fd = 0.0;
        for (const auto& x : interior_samples(p, 20, 0.05)) {
            worst_closed = std::max(worst_closed, rel_err(scalar_curvature(u, x, DerivativeMode::ClosedForm).scal, expected));
            worst_fd = std::max(worst_fd, rel_err(scalar_curvature(u, x, DerivativeMode::FiniteDifference).scal, expected));
        }
        check(worst_closed < 1e-6, "closed form rel err " + fmt(worst_closed));
        check(worst_fd < 1e-3, "finite difference rel err " + fmt(worst_fd));
    }
}

void criterion5(Checks& check) {
    const auto p = unit_interval();
    const auto t = sweep_uc(p, 0, {0, 1, 10, 100, 1000}, 6, build_quadrature(p, 3, 2));
    bool decreasing = true;
    for (std::size_t i = 1; i < t.rows.size(); ++i) decreasing = decreasing && t.rows[i].lambda1T < t.rows[i - 1].lambda1T;
    check(decreasing && t.monotone, "not strictly decreasing");
    check(t.rows.back().lambda1T < 0.05, "lambda1T(c = 1000) = " + fmt(t.rows.back().lambda1T));
}

void criterion6(Checks& check) {
    const auto p = centered_interval();
    const auto t = sweep_dilation(p, {2, 1.5, 1.1, 1.01}, 6, build_quadrature(p, 3, 2));
    for (const auto& r : t.rows)
        check(r.lambda1T >= t.baseline - 1e-6, "s = " + fmt(r.param) + ": " + fmt(r.lambda1T) + " below " + fmt(t.baseline));
    check(t.rows.back().lambda1T > 5 * t.rows.front().lambda1T,
          "lambda1T(1.01) = " + fmt(t.rows.back().lambda1T) + " vs lambda1T(2) = " + fmt(t.rows.front().lambda1T));
}

void criterion7(Checks& check) {
    check(k0(third_interval()) == 3, "k0([0,1/3]) = " + std::to_string(k0(third_interval())));
    check(bly_bound(third_interval()).bound == 12, "bound([0,1/3]) = " + to_string(bly_bound(third_interval()).bound));
    check(k0(three_halves_interval()) == 1, "k0([0,3/2]) = " + std::to_string(k0(three_halves_interval())));
    check(bly_bound(three_halves_interval()).bound == 4, "bound([0,3/2]) = " + to_string(bly_bound(three_halves_interval()).bound));
    for (const auto& entry : std::filesystem::directory_iterator(TORIC_POLYTOPES)) {
        const auto p = read_polytope(entry.path());
        const int k = k0(p);
        for (int j = k; j <= k + 2; ++j)
            check(check_kpk_integral(p, j).ok(), entry.path().filename().string() + " fails at k = " + std::to_string(j));
    }
}

void criterion8(Checks& check) {
    {
        const auto p = unit_interval();
        const auto b = balance(make_embedding(p), SymplecticPotential::guillemin(p), build_quadrature(p, 3, 2), 1e-8, 20);
        check(b.residual < 1e-8 && b.iterations <= 20, "interval residual " + fmt(b.residual));
        check((b.alpha.array() - 0.5).abs().maxCoeff() < 1e-8, "interval weights not uniform");
        // Psi_11 = a1^2 x / (a0^2 (1 - x) + a1^2 x) on a dense midpoint grid
        const int cells = 1000000;
        double s = 0.0;
        for (int i = 0; i < cells; ++i) {
            const double x = (i + 0.5) / cells;
            s += b.alpha[1] * b.alpha[1] * x / (b.alpha[0] * b.alpha[0] * (1 - x) + b.alpha[1] * b.alpha[1] * x);
        }
        check(std::abs(s / cells - 0.5) < 1e-8, "interval grid average " + fmt(s / cells));
    }
    {
        const auto p = simplex2();
        const auto e = make_embedding(p);
        const auto b = balance(e, SymplecticPotential::guillemin(p), build_quadrature(p, 3, 2), 1e-8, 20);
        check(b.residual < 1e-8 && b.iterations <= 20, "simplex residual " + fmt(b.residual));
        check((b.alpha.array() - 1.0 / 3).abs().maxCoeff() < 1e-8, "simplex weights not uniform");
        // Psi_m = a_m^2 l_m / sum a_j^2 l_j with barycentric l, averaged by the centroid rule on a
        // uniform triangulation; points are (0,0), (0,1), (1,0) as in lattice order
        const int k = 200;
        Eigen::Vector3d sum = Eigen::Vector3d::Zero();
        int count = 0;
        auto add = [&](double x, double y) {
            const Eigen::Vector3d l(1 - x - y, y, x);
            const Eigen::Vector3d w = b.alpha.array().square().matrix().cwiseProduct(l);
            sum += w / w.sum();
            ++count;
        };
        for (int i = 0; i < k; ++i)
            for (int j = 0; i + j < k; ++j) {
                add((i + 1.0 / 3) / k, (j + 1.0 / 3) / k);
                if (i + j < k - 1) add((i + 2.0 / 3) / k, (j + 2.0 / 3) / k);
            }
        check(((sum / count).array() - 1.0 / 3).abs().maxCoeff() < 1e-8, "simplex grid averages off");
    }
}

void criterion9(Checks& check) {
    auto compare = [&](const SymplecticPotential& u, const std::function<double(double)>& h, double a, double b) {
        const double ritz = lambda1_invariant(u, 8, build_quadrature(u.polytope(), 4, 3)).lambda1T;
        const double fd = sturm_liouville_lambda1(h, a, b, 2000);
        check(rel_err(ritz, fd) < 1e-3, u.describe() + ": Ritz " + fmt(ritz) + " vs FD " + fmt(fd));
    };
    for (const auto& [p, a, b] : {std::tuple{unit_interval(), 0.0, 1.0}, std::tuple{centered_interval(), -1.0, 1.0}}) {
        const double lo = a, hi = b;
        compare(SymplecticPotential::guillemin(p), [=](double x) { return guillemin_h(x, lo, hi); }, a, b);
    }
    for (double c : {0.0, 1.0, 10.0})
        compare(SymplecticPotential::quadratic_perturbed(unit_interval(), 0, c), [=](double x) { return uc_h(x, 0, 1, c); }, 0, 1);
    for (double s : {1.5, 2.0})
        compare(SymplecticPotential::dilation(centered_interval(), s), [=](double x) { return dilation_h(x, -1, 1, s); }, -1, 1);
}

void criterion10(Checks& check) {
    std::mt19937 rng(2024);
    std::normal_distribution<double> normal;

    // Ritz values never increase with the trial degree
    for (int trial = 0; trial < 6; ++trial) {
        const auto p = random_delzant(rng);
        const auto q = build_quadrature(p, 4, 2);
        for (const auto& u : {SymplecticPotential::guillemin(p), SymplecticPotential::quadratic_perturbed(p, 0, 3.0),
                              SymplecticPotential::dilation(p, 1.4)}) {
            double prev = std::numeric_limits<double>::infinity();
            for (int d = 1; d <= (p.dim() == 1 ? 8 : 5); ++d) {
                const double l = lambda1_invariant(u, d, q).lambda1T;
                check(l <= prev + 1e-10, "Ritz monotonicity: " + u.describe() + " degree " + std::to_string(d));
                prev = l;
            }
        }
    }

    // dilation stiffness dominates the Guillemin stiffness
    for (const auto& p : {unit_interval(), centered_interval(), simplex2(), unit_square(), perturbed_simplex()}) {
        const auto q = build_quadrature(p, 3, 2);
        const auto space = make_trial_space(p, 4, q);
        const auto a0 = assemble(SymplecticPotential::guillemin(p), space, q).stiffness;
        for (double s : {1.01, 2.0, 10.0}) {
            const auto as = assemble(SymplecticPotential::dilation(p, s), space, q).stiffness;
            for (int k = 0; k < 100; ++k) {
                Eigen::VectorXd x(as.rows());
                for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = normal(rng);
                check(x.dot(as * x) >= x.dot(a0 * x), "stiffness domination at s = " + fmt(s));
            }
        }
    }

    // det Hess u_c = det G0 + c det(minor of G0 without the perturbed row and column)
    int points = 0;
    double worst = 0.0;
    while (points < 50) {
        const auto p = random_delzant(rng);
        const int axis = static_cast<int>(rng() % static_cast<unsigned>(p.dim()));
        const double c = std::uniform_real_distribution<double>(0.0, 20.0)(rng);
        const auto u = SymplecticPotential::quadratic_perturbed(p, axis, c);
        for (const auto& x : interior_samples(p, 5, 0.0)) {
            const Eigen::MatrixXd g0 = guillemin_hessian(p, x);
            const double minor = p.dim() == 2 ? g0(1 - axis, 1 - axis) : 1.0;
            worst = std::max(worst, rel_err(hessian(u, x).determinant(), g0.determinant() + c * minor));
            worst = std::max(worst, rel_err(hc_diag(u, x), eval_grad_hess(u, x).H(axis, axis)));
            ++points;
        }
    }
    check(worst < 1e-9, "minor identity rel err " + fmt(worst));

    // sum_m Psi_mm = 1
    double pu = 0.0;
    for (const auto& p : {unit_interval(), interval("-1", "2"), simplex2(), unit_square(), standard_simplex(2)}) {
        const auto e = make_embedding(p);
        Eigen::VectorXd alpha(static_cast<Eigen::Index>(e.size()));
        for (Eigen::Index i = 0; i < alpha.size(); ++i) alpha[i] = 0.1 + std::abs(normal(rng));
        for (const auto& u : {SymplecticPotential::guillemin(p), SymplecticPotential::quadratic_perturbed(p, 0, 4.0),
                              SymplecticPotential::dilation(p, 1.7)})
            for (const auto& x : interior_samples(p, 40, 0.0)) pu = std::max(pu, std::abs(psi_diagonal(e, u, alpha, x).sum() - 1.0));
    }
    check(pu < 1e-12, "partition of unity error " + fmt(pu));

    // quadrature weights sum to the exact volume
    double vol = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = trial == 0 ? standard_simplex(3) : random_delzant(rng);
        const auto q = build_quadrature(p, 1 + trial % 4, trial % 3);
        vol = std::max(vol, rel_err(q.total_weight(), to_double(volume(p))));
    }
    check(vol < 1e-10, "quadrature volume rel err " + fmt(vol));

    // every CLI command reruns byte-identically
    const std::vector<std::string> commands = {
        "info " + bundled("perturbed-simplex"),
        "bound " + bundled("simplex2"),
        "lambda1t " + bundled("interval01") + " --potential guillemin",
        "sweep-uc " + bundled("interval01") + " --c 0,1,10,100,1000",
        "sweep-dilation " + bundled("intervalC") + " --s 2,1.5,1.1,1.01",
        "ke-check " + bundled("square") + " --potential uc:i=1,c=2",
        "balance " + bundled("simplex2") + " --potential dilation:s=1.5",
        "saturate " + bundled("simplex2"),
    };
    for (const auto& c : commands) {
        const auto a = capture(c), b = capture(c);
        check(a.rfind("status 0\n", 0) == 0 && a.size() > 10, "CLI failed: " + c);
        check(a == b, "CLI rerun differs: " + c);
    }
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<void(Checks&)>>> criteria = {
        {"CP1 model: lambda1T = 4 on [0,1]", criterion1},
        {"CP2 model: lambda1T = 6, bound 6, Fubini-Study saturation", criterion2},
        {"KE characterization", criterion3},
        {"scalar curvature oracles", criterion4},
        {"u_c sweep decreases to zero", criterion5},
        {"dilation sweep grows", criterion6},
        {"lattice combinatorics", criterion7},
        {"balance", criterion8},
        {"finite-difference oracle equivalence", criterion9},
        {"property suites", criterion10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Checks check;
        try {
            criteria[i].second(check);
        } catch (const std::exception& e) {
            check.failures.push_back(std::string("exception: ") + e.what());
        }
        const bool ok = check.failures.empty();
        failed += !ok;
        std::cout << (ok ? "PASS " : "FAIL ") << i + 1 << ". " << criteria[i].first;
        if (!ok) std::cout << " [" << check.failures.front() << (check.failures.size() > 1 ? ", ..." : "") << "]";
        std::cout << "\n";
    }
    return failed == 0 ? 0 : 1;
}
