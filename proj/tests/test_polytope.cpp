#include <algorithm>
#include <set>

#include "doctest.h"
#include "support.hpp"
#include "toric/errors.hpp"

using namespace toric;
using namespace toric::testing;

namespace {

RationalVector rv(std::initializer_list<const char*> xs) {
    RationalVector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (const char* x : xs) v[i++] = q(x);
    return v;
}

/// Brute-force oracle: every m in the box [-bound, bound]^n with
/// <m, nu_i> + k c_i >= 0, i.e. m/k in P. Shares nothing with the library's
/// bounding-box scan.
std::vector<RationalVector> brute_lattice(const LabelledPolytope& p, int k, int bound) {
    const int n = p.dim();
    std::vector<RationalVector> out;
    std::vector<int> m(static_cast<std::size_t>(n), -bound);
    while (true) {
        bool inside = true;
        for (const auto& f : p.facets()) {
            Rational s = Rational(k) * f.offset;
            for (int j = 0; j < n; ++j) s += Rational(static_cast<long long>(f.normal[j]) * m[static_cast<std::size_t>(j)]);
            if (s < 0) {
                inside = false;
                break;
            }
        }
        if (inside) {
            RationalVector x(n);
            for (int j = 0; j < n; ++j) x[j] = Rational(m[static_cast<std::size_t>(j)], k);
            out.push_back(x);
        }
        int j = n - 1;
        while (j >= 0 && m[static_cast<std::size_t>(j)] == bound) m[static_cast<std::size_t>(j--)] = -bound;
        if (j < 0) break;
        ++m[static_cast<std::size_t>(j)];
    }
    return out;
}

}  // namespace

TEST_CASE("construction rejects malformed labels") {
    CHECK_THROWS_AS(make_polytope(1, {{{2}, "0"}, {{-1}, "1"}}), InvalidPolytope);
    CHECK_THROWS_WITH(make_polytope(2, {{{1, 0}, "0"}, {{0, 1}, "0"}, {{-2, -2}, "1"}}),
                      doctest::Contains("facet 2"));
    CHECK_THROWS_AS(make_polytope(2, {{{1, 0}, "0"}, {{0, 1}, "0"}}), InvalidPolytope);
    CHECK_THROWS_AS(make_polytope(1, {{{0}, "0"}, {{-1}, "1"}}), InvalidPolytope);
}

TEST_CASE("vertices of the model polytopes") {
    SUBCASE("standard 2-simplex") {
        const auto vs = vertices(simplex2());
        REQUIRE(vs.size() == 3);
        CHECK(vs[0].coords == rv({"0", "0"}));
        CHECK(vs[0].active == std::vector<std::size_t>{0, 1});
        CHECK(vs[1].coords == rv({"0", "1"}));
        CHECK(vs[1].active == std::vector<std::size_t>{0, 2});
        CHECK(vs[2].coords == rv({"1", "0"}));
        CHECK(vs[2].active == std::vector<std::size_t>{1, 2});
    }
    SUBCASE("interval") {
        const auto vs = vertices(unit_interval());
        REQUIRE(vs.size() == 2);
        CHECK(vs[0].coords[0] == 0);
        CHECK(vs[1].coords[0] == 1);
    }
    SUBCASE("square") {
        const auto vs = vertices(unit_square());
        REQUIRE(vs.size() == 4);
        std::set<std::pair<Rational, Rational>> got;
        for (const auto& v : vs) {
            CHECK(v.active.size() == 2);
            got.insert({v.coords[0], v.coords[1]});
        }
        CHECK(got == std::set<std::pair<Rational, Rational>>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    }
}

TEST_CASE("vertices error paths") {
    // x >= 0, y >= 0, x + y >= 1 is unbounded
    CHECK_THROWS_AS(vertices(make_polytope(2, {{{1, 0}, "0"}, {{0, 1}, "0"}, {{1, 1}, "-1"}})), UnboundedOrEmpty);
    // x >= 1, x <= 0 is empty
    CHECK_THROWS_AS(vertices(make_polytope(1, {{{1}, "-1"}, {{-1}, "0"}})), UnboundedOrEmpty);
    // {0}: both facets active at one point
    CHECK_THROWS_AS(vertices(make_polytope(1, {{{1}, "0"}, {{-1}, "0"}})), NonSimple);
    // a square pyramid apex is not simple; here a square with a diagonal cut through a vertex
    CHECK_THROWS_AS(vertices(make_polytope(2, {{{1, 0}, "0"}, {{0, 1}, "0"}, {{-1, 0}, "1"}, {{0, -1}, "1"}, {{-1, -1}, "2"}})),
                    NonSimple);
    // redundant facet never touched
    CHECK_THROWS_AS(vertices(make_polytope(1, {{{1}, "0"}, {{-1}, "1"}, {{-1}, "5"}})), InvalidPolytope);
}

TEST_CASE("Delzant test uses exact vertex determinants") {
    CHECK(is_delzant(simplex2()));
    CHECK(is_delzant(unit_square()));
    // vertex (0,1) has normals (1,0), (-1,-2) with determinant -2
    CHECK_FALSE(is_delzant(make_polytope(2, {{{1, 0}, "0"}, {{0, 1}, "0"}, {{-1, -2}, "2"}})));
}

TEST_CASE("integrality") {
    CHECK(is_integral(simplex2()));
    CHECK_FALSE(is_integral(three_halves_interval()));
    CHECK_FALSE(is_integral(third_interval()));
    CHECK_FALSE(is_integral(perturbed_simplex()));
}

TEST_CASE("lattice points of the model polytopes") {
    SUBCASE("simplex k=1") {
        const auto l = lattice_points(simplex2(), 1);
        CHECK(l.points == std::vector<RationalVector>{rv({"0", "0"}), rv({"0", "1"}), rv({"1", "0"})});
        CHECK(l.n_k == 2);
        CHECK(l.l_min == std::vector<Rational>{0, 0, 0});
        CHECK(l.shrunk == simplex2());
    }
    SUBCASE("[0, 3/2] k=1") {
        const auto l = lattice_points(three_halves_interval(), 1);
        CHECK(l.points == std::vector<RationalVector>{rv({"0"}), rv({"1"})});
        CHECK(l.n_k == 1);
        CHECK(l.l_min == std::vector<Rational>{0, q("1/2")});
        CHECK(l.shrunk == unit_interval());
    }
    SUBCASE("[0, 1/3] k=3") {
        const auto l = lattice_points(third_interval(), 3);
        CHECK(l.points == std::vector<RationalVector>{rv({"0"}), rv({"1/3"})});
        CHECK(l.n_k == 1);
        CHECK(l.l_min == std::vector<Rational>{0, 0});
        CHECK(l.shrunk == third_interval());
    }
    SUBCASE("simplex k=2 has six points") { CHECK(lattice_points(simplex2(), 2).n_k == 5); }
    SUBCASE("empty lattice") {
        CHECK_THROWS_AS(lattice_points(perturbed_simplex(), 1), EmptyLattice);
        CHECK_THROWS_AS(lattice_points(interval("1/5", "2/5"), 1), EmptyLattice);
    }
}

TEST_CASE("combinatorial type") {
    CHECK(same_combinatorial_type(three_halves_interval(), unit_interval()));
    CHECK_FALSE(same_combinatorial_type(third_interval(), make_polytope(1, {{{1}, "0"}, {{-1}, "0"}})));
    CHECK(same_combinatorial_type(simplex2(), perturbed_simplex()));
    CHECK_THROWS_AS(same_combinatorial_type(simplex2(), unit_square()), MismatchedNormals);
    CHECK_THROWS_AS(same_combinatorial_type(unit_interval(), make_polytope(1, {{{-1}, "0"}, {{1}, "1"}})),
                    MismatchedNormals);
    // empty Q
    CHECK_FALSE(same_combinatorial_type(unit_interval(), make_polytope(1, {{{1}, "-2"}, {{-1}, "1"}})));
}

TEST_CASE("k0") {
    CHECK(k0(simplex2()) == 1);
    CHECK(k0(three_halves_interval()) == 1);
    CHECK(k0(third_interval()) == 3);
    CHECK(k0(perturbed_simplex()) == 3);
    CHECK_THROWS_AS(k0(third_interval(), 2), K0NotFound);
}

TEST_CASE("k P_k is integral and Delzant") {
    SUBCASE("[0, 3/2], k=1") {
        const auto r = check_kpk_integral(three_halves_interval(), 1);
        CHECK(r.scaled == unit_interval());
        CHECK(r.ok());
        CHECK(r.lattice_count == 2);
    }
    SUBCASE("simplex, k=2") {
        const auto r = check_kpk_integral(simplex2(), 2);
        CHECK(r.scaled == simplex2().scaled(2));
        CHECK(r.ok());
        CHECK(r.lattice_count == 6);
    }
    SUBCASE("[0, 1/3], k=3") {
        const auto r = check_kpk_integral(third_interval(), 3);
        CHECK(r.scaled == unit_interval());
        CHECK(r.ok());
        CHECK(r.lattice_count == 2);
    }
    CHECK_THROWS_AS(check_kpk_integral(third_interval(), 2), PrematureK);
}

TEST_CASE("bounds from lattice counts") {
    const auto s = bly_bound(simplex2());
    CHECK(s.k_used == 1);
    CHECK(s.n_k == 2);
    CHECK(s.bound == 6);
    CHECK(s.is_integer_bound);

    CHECK(bly_bound(unit_interval()).bound == 4);
    CHECK(bly_bound(three_halves_interval()).bound == 4);

    const auto t = bly_bound(third_interval());
    CHECK(t.k_used == 3);
    CHECK(t.n_k == 1);
    CHECK(t.bound == 12);

    CHECK(bly_bound(simplex2(), 2).bound == q("48/5"));
    CHECK_FALSE(bly_bound(simplex2(), 2).is_integer_bound);
    CHECK_THROWS_AS(bly_bound(third_interval(), 1), PrematureK);
    CHECK_THROWS_AS(bly_bound_value(1, 1, 0), DegenerateN);
}

TEST_CASE("triangulation and volume") {
    CHECK(triangulate(simplex2()).size() == 1);
    CHECK(triangulate(unit_interval()).size() == 1);
    CHECK(triangulate(unit_square()).size() == 4);
    CHECK(volume(simplex2()) == q("1/2"));
    CHECK(volume(unit_square()) == 1);
    CHECK(volume(perturbed_simplex()) == q("32/100"));
    CHECK(volume(standard_simplex(3)) == q("1/6"));

    // cube: 6 square facets, each a 4-triangle fan coned to the centre
    const auto cube = make_polytope(3, {{{1, 0, 0}, "0"}, {{0, 1, 0}, "0"}, {{0, 0, 1}, "0"},
                                        {{-1, 0, 0}, "1"}, {{0, -1, 0}, "1"}, {{0, 0, -1}, "1"}});
    CHECK(triangulate(cube).size() == 24);
    CHECK(volume(cube) == 1);
    // hexagon (blow-up of CP2 at three points): area 3 in these units
    const auto hexagon = make_polytope(2, {{{1, 0}, "0"}, {{0, 1}, "0"}, {{-1, 0}, "2"}, {{0, -1}, "2"},
                                           {{1, 1}, "-1"}, {{-1, -1}, "3"}});
    CHECK(is_delzant(hexagon));
    CHECK(volume(hexagon) == 3);
    CHECK(lattice_points(hexagon, 1).points.size() == 7);
}

TEST_CASE("parse_rational") {
    CHECK(*parse_rational("7") == 7);
    CHECK(*parse_rational("-3/4") == q("-3/4"));
    CHECK(*parse_rational("6/8") == q("3/4"));
    CHECK(*parse_rational("0.125") == q("1/8"));
    CHECK(*parse_rational("-2.5e-1") == q("-1/4"));
    CHECK(*parse_rational("1e2") == 100);
    CHECK(*parse_rational(".5") == q("1/2"));
    CHECK_FALSE(parse_rational("1/0"));
    CHECK_FALSE(parse_rational("abc"));
    CHECK_FALSE(parse_rational("1.2.3"));
    CHECK_FALSE(parse_rational(""));
    CHECK(to_string(q("6/8")) == "3/4");
    CHECK(to_string(q("-4/2")) == "-2");
    CHECK(floor(q("-1/3")) == -1);
    CHECK(ceil(q("-1/3")) == 0);
    CHECK(floor(q("7/2")) == 3);
}

TEST_CASE("property: lattice enumeration matches brute force and refines monotonically") {
    std::mt19937 rng(20261017);
    for (int trial = 0; trial < 40; ++trial) {
        const auto p = random_delzant(rng);
        CAPTURE(trial);
        REQUIRE(is_delzant(p));
        std::optional<LatticeData> previous;
        for (int k : {1, 2, 4, 8, 16}) {
            std::optional<LatticeData> l;
            try {
                l = lattice_points(p, k);
            } catch (const EmptyLattice&) {
                CHECK(brute_lattice(p, k, 6 * k).empty());
                CHECK_FALSE(previous);
                continue;
            }
            if (k <= 4) CHECK(l->points == brute_lattice(p, k, 6 * k));
            CHECK(std::is_sorted(l->points.begin(), l->points.end(), [](const auto& a, const auto& b) {
                return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
            }));
            CHECK(std::adjacent_find(l->points.begin(), l->points.end()) == l->points.end());
            for (std::size_t i = 0; i < p.facet_count(); ++i) {
                CHECK(l->l_min[i] >= 0);
                CHECK(l->shrunk.facet(i).offset == p.facet(i).offset - l->l_min[i]);
                CHECK(l->shrunk.facet(i).normal == p.facet(i).normal);
                Rational mn = p.defining_function(i, l->points.front());
                for (const auto& x : l->points) {
                    CHECK(p.defining_function(i, x) >= 0);
                    mn = std::min(mn, p.defining_function(i, x));
                }
                CHECK(mn == l->l_min[i]);
            }
            if (previous) {
                for (const auto& x : previous->points)
                    CHECK(std::binary_search(l->points.begin(), l->points.end(), x, [](const auto& a, const auto& b) {
                        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
                    }));
                const Rational max_prev = *std::max_element(previous->l_min.begin(), previous->l_min.end());
                const Rational max_now = *std::max_element(l->l_min.begin(), l->l_min.end());
                CHECK(max_now <= max_prev);
                for (std::size_t i = 0; i < p.facet_count(); ++i) CHECK(l->l_min[i] <= previous->l_min[i]);
            }
            previous = l;
        }
        if (is_integral(p)) {
            const auto l1 = lattice_points(p, 1);
            CHECK(std::all_of(l1.l_min.begin(), l1.l_min.end(), [](const Rational& r) { return r == 0; }));
        }
    }
}

TEST_CASE("property: N_k(P) = N_1(k P_k) for k >= k0") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        const auto p = random_delzant(rng);
        CAPTURE(trial);
        const int start = k0(p);
        for (int k = start; k < start + 3; ++k) {
            const auto r = check_kpk_integral(p, k);
            if (same_combinatorial_type(p, lattice_points(p, k).shrunk)) {
                CHECK(r.ok());
                CHECK(lattice_points(r.scaled, 1).n_k == lattice_points(p, k).n_k);
            }
        }
    }
}

TEST_CASE("property: exact computations are reproducible") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const auto p = random_delzant(rng);
        const auto a = lattice_points(p, 3);
        const auto b = lattice_points(p, 3);
        CHECK(a.points == b.points);
        CHECK(a.l_min == b.l_min);
        CHECK(a.shrunk == b.shrunk);
        CHECK(volume(p) == volume(p));
    }
}
