#include "toric/polynomial.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace toric {

namespace {

/// x^e with x^0 = 1 for every x, including 0.
double ipow(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
}

}  // namespace

Polynomial::Polynomial(int dim, std::vector<Monomial> terms) : dim_(dim) {
    for (auto& t : terms) add_term(std::move(t.exponents), t.coefficient);
}

Polynomial Polynomial::affine(double constant, const Eigen::VectorXd& linear) {
    const int n = static_cast<int>(linear.size());
    Polynomial p(n);
    if (constant != 0.0) p.add_term(std::vector<int>(static_cast<std::size_t>(n), 0), constant);
    for (int j = 0; j < n; ++j) {
        std::vector<int> e(static_cast<std::size_t>(n), 0);
        e[static_cast<std::size_t>(j)] = 1;
        p.add_term(e, linear[j]);
    }
    return p;
}

Polynomial Polynomial::coordinate(int dim, int i) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(dim);
    a[i] = 1.0;
    return affine(0.0, a);
}

int Polynomial::degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, std::accumulate(t.exponents.begin(), t.exponents.end(), 0));
    return d;
}

void Polynomial::add_term(std::vector<int> exponents, double coefficient) {
    if (static_cast<int>(exponents.size()) != dim_) throw std::invalid_argument("monomial has wrong number of exponents");
    for (int e : exponents)
        if (e < 0) throw std::invalid_argument("negative exponent");
    for (auto& t : terms_) {
        if (t.exponents == exponents) {
            t.coefficient += coefficient;
            return;
        }
    }
    terms_.push_back({std::move(exponents), coefficient});
}

double Polynomial::value(const Eigen::VectorXd& x) const {
    double s = 0.0;
    for (const auto& t : terms_) {
        double m = t.coefficient;
        for (int j = 0; j < dim_; ++j) m *= ipow(x[j], t.exponents[static_cast<std::size_t>(j)]);
        s += m;
    }
    return s;
}

Eigen::VectorXd Polynomial::gradient(const Eigen::VectorXd& x) const {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim_);
    for (const auto& t : terms_) {
        for (int k = 0; k < dim_; ++k) {
            const int ek = t.exponents[static_cast<std::size_t>(k)];
            if (ek == 0) continue;
            double m = t.coefficient * ek;
            for (int j = 0; j < dim_; ++j) m *= ipow(x[j], t.exponents[static_cast<std::size_t>(j)] - (j == k ? 1 : 0));
            g[k] += m;
        }
    }
    return g;
}

Eigen::MatrixXd Polynomial::hessian(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim_, dim_);
    for (const auto& t : terms_) {
        for (int k = 0; k < dim_; ++k) {
            for (int l = k; l < dim_; ++l) {
                std::vector<int> e = t.exponents;
                double m = t.coefficient * e[static_cast<std::size_t>(k)];
                --e[static_cast<std::size_t>(k)];
                m *= e[static_cast<std::size_t>(l)];
                --e[static_cast<std::size_t>(l)];
                if (m == 0.0) continue;
                for (int j = 0; j < dim_; ++j) m *= ipow(x[j], e[static_cast<std::size_t>(j)]);
                h(k, l) += m;
                if (l != k) h(l, k) += m;
            }
        }
    }
    return h;
}

Polynomial& Polynomial::operator+=(double c) {
    add_term(std::vector<int>(static_cast<std::size_t>(dim_), 0), c);
    return *this;
}

std::vector<std::vector<int>> monomial_exponents(int dim, int min_degree, int max_degree) {
    std::vector<std::vector<int>> out;
    std::vector<int> e(static_cast<std::size_t>(dim), 0);
    // all compositions of `total` into dim parts, first variable highest first
    std::function<void(int, int)> fill = [&](int j, int remaining) {
        if (j == dim - 1) {
            e[static_cast<std::size_t>(j)] = remaining;
            out.push_back(e);
            return;
        }
        for (int a = remaining; a >= 0; --a) {
            e[static_cast<std::size_t>(j)] = a;
            fill(j + 1, remaining - a);
        }
    };
    for (int total = min_degree; total <= max_degree; ++total) fill(0, total);
    return out;
}

}  // namespace toric
