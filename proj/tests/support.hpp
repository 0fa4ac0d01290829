#ifndef TORIC_TESTS_SUPPORT_HPP
#define TORIC_TESTS_SUPPORT_HPP

#include <cmath>
#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "toric/polytope.hpp"

namespace toric::testing {

inline Rational q(const std::string& text) { return *parse_rational(text); }

inline LabelledPolytope make_polytope(int dim, std::initializer_list<std::pair<std::vector<long long>, std::string>> rows) {
    std::vector<Facet> facets;
    for (const auto& [normal, offset] : rows) {
        IntVector v(dim);
        for (int j = 0; j < dim; ++j) v[j] = normal[static_cast<std::size_t>(j)];
        facets.push_back({v, q(offset)});
    }
    return LabelledPolytope(dim, std::move(facets));
}

/// [a, b]
inline LabelledPolytope interval(const Rational& a, const Rational& b) {
    std::vector<Facet> f{{IntVector::Constant(1, 1), Rational(-a)}, {IntVector::Constant(1, -1), b}};
    return LabelledPolytope(1, std::move(f));
}

inline LabelledPolytope interval(const std::string& a, const std::string& b) { return interval(q(a), q(b)); }

inline LabelledPolytope unit_interval() { return make_polytope(1, {{{1}, "0"}, {{-1}, "1"}}); }
inline LabelledPolytope centered_interval() { return make_polytope(1, {{{1}, "1"}, {{-1}, "1"}}); }
inline LabelledPolytope third_interval() { return make_polytope(1, {{{1}, "0"}, {{-1}, "1/3"}}); }
inline LabelledPolytope three_halves_interval() { return make_polytope(1, {{{1}, "0"}, {{-1}, "3/2"}}); }

inline LabelledPolytope simplex2() { return make_polytope(2, {{{1, 0}, "0"}, {{0, 1}, "0"}, {{-1, -1}, "1"}}); }
inline LabelledPolytope unit_square() {
    return make_polytope(2, {{{1, 0}, "0"}, {{0, 1}, "0"}, {{-1, 0}, "1"}, {{0, -1}, "1"}});
}
inline LabelledPolytope centered_square() {
    return make_polytope(2, {{{1, 0}, "1"}, {{0, 1}, "1"}, {{-1, 0}, "1"}, {{0, -1}, "1"}});
}
inline LabelledPolytope perturbed_simplex() {
    return make_polytope(2, {{{1, 0}, "-1/10"}, {{0, 1}, "-1/10"}, {{-1, -1}, "1"}});
}

/// Standard n-simplex {x_i >= 0, sum x_i <= 1}.
inline LabelledPolytope standard_simplex(int n) {
    std::vector<Facet> f;
    for (int i = 0; i < n; ++i) f.push_back({IntVector::Unit(n, i), Rational(0)});
    f.push_back({IntVector::Constant(n, -1), Rational(1)});
    return LabelledPolytope(n, std::move(f));
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Random small rational in (lo, hi) with denominator <= max_den.
inline Rational random_rational(std::mt19937& rng, int lo, int hi, int max_den) {
    std::uniform_int_distribution<int> den_dist(1, max_den);
    const int den = den_dist(rng);
    std::uniform_int_distribution<int> num_dist(lo * den, hi * den);
    return Rational(num_dist(rng), den);
}

/// Random rational Delzant polytope of dimension 1 or 2: intervals,
/// rectangles, and triangles with the standard simplex fan.
inline LabelledPolytope random_delzant(std::mt19937& rng) {
    std::uniform_int_distribution<int> kind(0, 2);
    auto width = [&] { return Rational(1, 3) + random_rational(rng, 0, 2, 5); };
    switch (kind(rng)) {
        case 0: {
            const Rational a = random_rational(rng, -2, 2, 6);
            return interval(a, Rational(a + width()));
        }
        case 1: {
            const Rational a = random_rational(rng, -2, 2, 6), b = random_rational(rng, -2, 2, 6);
            const Rational wa = width(), wb = width();
            std::vector<Facet> f{{IntVector::Unit(2, 0), Rational(-a)},
                                 {IntVector::Unit(2, 1), Rational(-b)},
                                 {-IntVector::Unit(2, 0), Rational(a + wa)},
                                 {-IntVector::Unit(2, 1), Rational(b + wb)}};
            return LabelledPolytope(2, std::move(f));
        }
        default: {
            const Rational a = random_rational(rng, -2, 2, 6), b = random_rational(rng, -2, 2, 6);
            const Rational s = width() + 1;
            std::vector<Facet> f{{IntVector::Unit(2, 0), Rational(-a)},
                                 {IntVector::Unit(2, 1), Rational(-b)},
                                 {IntVector::Constant(2, -1), Rational(a + b + s)}};
            return LabelledPolytope(2, std::move(f));
        }
    }
}

}  // namespace toric::testing

#endif  // TORIC_TESTS_SUPPORT_HPP
