#include "toric/polytope.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "toric/errors.hpp"

namespace toric {

namespace {

Rational dot(const IntVector& normal, const RationalVector& x) {
    Rational s = 0;
    for (Eigen::Index j = 0; j < normal.size(); ++j) s += Rational(static_cast<long long>(normal[j])) * x[j];
    return s;
}

bool lex_less(const RationalVector& a, const RationalVector& b) {
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        if (a[j] < b[j]) return true;
        if (b[j] < a[j]) return false;
    }
    return false;
}

/// Calls visit(indices) for every size-r subset of {0..n-1}, lexicographically.
template <typename Visit>
void for_each_combination(std::size_t n, std::size_t r, Visit&& visit) {
    if (r > n) return;
    std::vector<std::size_t> idx(r);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        visit(idx);
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

RationalMatrix normal_rows(const LabelledPolytope& p, const std::vector<std::size_t>& rows) {
    RationalMatrix a(static_cast<Eigen::Index>(rows.size()), p.dim());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (int j = 0; j < p.dim(); ++j)
            a(static_cast<Eigen::Index>(r), j) = Rational(static_cast<long long>(p.facet(rows[r]).normal[j]));
    return a;
}

bool has_recession_direction(const LabelledPolytope& p) {
    const int n = p.dim();
    bool found = false;
    for_each_combination(p.facet_count(), static_cast<std::size_t>(n - 1), [&](const std::vector<std::size_t>& idx) {
        if (found) return;
        RationalVector y = n == 1 ? RationalVector::Ones(1) : kernel_vector<Rational>(normal_rows(p, idx));
        if ((y.array() == Rational(0)).all()) return;
        for (int sign : {1, -1}) {
            bool inside = true;
            for (const auto& f : p.facets()) {
                if (sign * dot(f.normal, y) < 0) {
                    inside = false;
                    break;
                }
            }
            if (inside) {
                found = true;
                return;
            }
        }
    });
    return found;
}

std::int64_t gcd_of(const IntVector& v) {
    std::int64_t g = 0;
    for (Eigen::Index j = 0; j < v.size(); ++j) g = std::gcd(g, v[j] < 0 ? -v[j] : v[j]);
    return g;
}

}  // namespace

LabelledPolytope::LabelledPolytope(int dim, std::vector<Facet> facets) : dim_(dim), facets_(std::move(facets)) {
    if (dim_ < 1) throw InvalidPolytope("dimension must be positive, got " + std::to_string(dim_));
    if (facets_.size() < static_cast<std::size_t>(dim_) + 1)
        throw InvalidPolytope("need at least " + std::to_string(dim_ + 1) + " facets, got " +
                              std::to_string(facets_.size()));
    for (std::size_t i = 0; i < facets_.size(); ++i) {
        if (facets_[i].normal.size() != dim_)
            throw InvalidPolytope("facet " + std::to_string(i) + ": normal has length " +
                                  std::to_string(facets_[i].normal.size()) + ", expected " + std::to_string(dim_));
        const std::int64_t g = gcd_of(facets_[i].normal);
        if (g == 0) throw InvalidPolytope("facet " + std::to_string(i) + ": zero normal");
        if (g != 1)
            throw InvalidPolytope("facet " + std::to_string(i) + ": normal is not primitive (gcd " +
                                  std::to_string(g) + ")");
    }
}

Rational LabelledPolytope::defining_function(std::size_t i, const RationalVector& x) const {
    return dot(facets_[i].normal, x) + facets_[i].offset;
}

double LabelledPolytope::defining_function(std::size_t i, const Eigen::VectorXd& x) const {
    return facets_[i].normal.cast<double>().dot(x) + to_double(facets_[i].offset);
}

Eigen::VectorXd LabelledPolytope::defining_functions(const Eigen::VectorXd& x) const {
    return normals() * x + offsets();
}

bool LabelledPolytope::contains(const RationalVector& x) const {
    for (std::size_t i = 0; i < facets_.size(); ++i)
        if (defining_function(i, x) < 0) return false;
    return true;
}

Eigen::MatrixXd LabelledPolytope::normals() const {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(facets_.size()), dim_);
    for (std::size_t i = 0; i < facets_.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = facets_[i].normal.cast<double>().transpose();
    return m;
}

Eigen::VectorXd LabelledPolytope::offsets() const {
    Eigen::VectorXd c(static_cast<Eigen::Index>(facets_.size()));
    for (std::size_t i = 0; i < facets_.size(); ++i) c[static_cast<Eigen::Index>(i)] = to_double(facets_[i].offset);
    return c;
}

LabelledPolytope LabelledPolytope::with_offsets(const std::vector<Rational>& offsets) const {
    std::vector<Facet> f = facets_;
    for (std::size_t i = 0; i < f.size(); ++i) f[i].offset = offsets.at(i);
    return LabelledPolytope(dim_, std::move(f));
}

LabelledPolytope LabelledPolytope::translated(const RationalVector& t) const {
    // x in P + t  <=>  <x - t, nu> + c >= 0
    std::vector<Rational> c(facets_.size());
    for (std::size_t i = 0; i < facets_.size(); ++i) c[i] = facets_[i].offset - dot(facets_[i].normal, t);
    return with_offsets(c);
}

LabelledPolytope LabelledPolytope::scaled(const Rational& s) const {
    std::vector<Rational> c(facets_.size());
    for (std::size_t i = 0; i < facets_.size(); ++i) c[i] = s * facets_[i].offset;
    return with_offsets(c);
}

std::vector<Vertex> vertices(const LabelledPolytope& p) {
    const int n = p.dim();
    std::vector<RationalVector> points;
    for_each_combination(p.facet_count(), static_cast<std::size_t>(n), [&](const std::vector<std::size_t>& idx) {
        RationalVector rhs(n);
        for (int r = 0; r < n; ++r) rhs[r] = -p.facet(idx[static_cast<std::size_t>(r)]).offset;
        auto x = exact_solve<Rational>(normal_rows(p, idx), rhs);
        if (x && p.contains(*x)) points.push_back(*x);
    });
    if (points.empty()) throw UnboundedOrEmpty("no vertex: the feasible set is empty or contains no vertex");
    if (has_recession_direction(p)) throw UnboundedOrEmpty("the feasible set is unbounded");

    std::sort(points.begin(), points.end(), lex_less);
    points.erase(std::unique(points.begin(), points.end()), points.end());

    std::vector<Vertex> out;
    out.reserve(points.size());
    std::vector<bool> touched(p.facet_count(), false);
    for (auto& x : points) {
        Vertex v{std::move(x), {}};
        for (std::size_t i = 0; i < p.facet_count(); ++i) {
            if (p.defining_function(i, v.coords) == 0) {
                v.active.push_back(i);
                touched[i] = true;
            }
        }
        if (v.active.size() > static_cast<std::size_t>(n)) {
            std::string coords;
            for (Eigen::Index j = 0; j < v.coords.size(); ++j) coords += (j ? "," : "") + to_string(v.coords[j]);
            throw NonSimple("vertex (" + coords + ") lies on " + std::to_string(v.active.size()) + " facets");
        }
        out.push_back(std::move(v));
    }
    for (std::size_t i = 0; i < touched.size(); ++i)
        if (!touched[i]) throw InvalidPolytope("facet " + std::to_string(i) + " is redundant");
    return out;
}

bool is_delzant(const LabelledPolytope& p) {
    for (const auto& v : vertices(p)) {
        const Rational det = exact_determinant<Rational>(normal_rows(p, v.active));
        if (det != 1 && det != -1) return false;
    }
    return true;
}

bool is_integral(const LabelledPolytope& p) {
    for (const auto& v : vertices(p))
        for (Eigen::Index j = 0; j < v.coords.size(); ++j)
            if (!is_integer(v.coords[j])) return false;
    return true;
}

bool is_simplex(const LabelledPolytope& p) {
    return p.facet_count() == static_cast<std::size_t>(p.dim()) + 1 && vertices(p).size() == p.facet_count();
}

RationalVector vertex_centroid(const LabelledPolytope& p) {
    const auto vs = vertices(p);
    RationalVector c = RationalVector::Zero(p.dim());
    for (const auto& v : vs) c += v.coords;
    return c / Rational(static_cast<long long>(vs.size()));
}

LatticeData lattice_points(const LabelledPolytope& p, int k) {
    if (k < 1) throw ValidationError("refinement k must be >= 1, got " + std::to_string(k));
    const int n = p.dim();
    const auto vs = vertices(p);
    const Rational kk(k);

    std::vector<Integer> lo(static_cast<std::size_t>(n)), hi(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        Rational mn = vs.front().coords[j], mx = mn;
        for (const auto& v : vs) {
            mn = std::min(mn, v.coords[j]);
            mx = std::max(mx, v.coords[j]);
        }
        lo[static_cast<std::size_t>(j)] = ceil(Rational(kk * mn));
        hi[static_cast<std::size_t>(j)] = floor(Rational(kk * mx));
    }

    std::vector<RationalVector> points;
    bool empty_box = false;
    for (int j = 0; j < n; ++j) empty_box |= lo[static_cast<std::size_t>(j)] > hi[static_cast<std::size_t>(j)];
    if (!empty_box) {
        std::vector<Integer> m = lo;
        while (true) {
            RationalVector x(n);
            for (int j = 0; j < n; ++j) x[j] = Rational(m[static_cast<std::size_t>(j)], Integer(k));
            if (p.contains(x)) points.push_back(std::move(x));
            // odometer, last coordinate fastest: lexicographic order for free
            int j = n - 1;
            while (j >= 0 && m[static_cast<std::size_t>(j)] == hi[static_cast<std::size_t>(j)]) {
                m[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];
                --j;
            }
            if (j < 0) break;
            ++m[static_cast<std::size_t>(j)];
        }
    }
    if (points.empty()) throw EmptyLattice("no point of Z^n/" + std::to_string(k) + " lies in P");

    std::vector<Rational> l_min(p.facet_count());
    std::vector<Rational> shrunk_offsets(p.facet_count());
    for (std::size_t i = 0; i < p.facet_count(); ++i) {
        Rational best = p.defining_function(i, points.front());
        for (const auto& x : points) best = std::min(best, p.defining_function(i, x));
        l_min[i] = best;
        shrunk_offsets[i] = p.facet(i).offset - best;
    }
    const auto count = static_cast<std::int64_t>(points.size());
    return LatticeData{k, std::move(points), count - 1, std::move(l_min), p.with_offsets(shrunk_offsets)};
}

bool same_combinatorial_type(const LabelledPolytope& p, const LabelledPolytope& q) {
    if (p.dim() != q.dim() || p.facet_count() != q.facet_count())
        throw MismatchedNormals("dimension or facet count differs");
    for (std::size_t i = 0; i < p.facet_count(); ++i)
        if (p.facet(i).normal != q.facet(i).normal)
            throw MismatchedNormals("facet " + std::to_string(i) + " has a different normal");

    std::vector<Vertex> vq;
    try {
        vq = vertices(q);
    } catch (const ValidationError&) {
        return false;  // empty, unbounded, non-simple or redundant
    }
    const auto vp = vertices(p);
    if (vp.size() != vq.size()) return false;

    auto active_sets = [](const std::vector<Vertex>& vs) {
        std::vector<std::vector<std::size_t>> sets;
        for (const auto& v : vs) sets.push_back(v.active);
        std::sort(sets.begin(), sets.end());
        return sets;
    };
    return active_sets(vp) == active_sets(vq);
}

int k0(const LabelledPolytope& p, int k_max) {
    if (k_max < 1) throw ValidationError("k_max must be >= 1");
    for (int k = 1; k <= k_max; ++k) {
        try {
            if (same_combinatorial_type(p, lattice_points(p, k).shrunk)) return k;
        } catch (const EmptyLattice&) {
        }
    }
    throw K0NotFound("no k <= " + std::to_string(k_max) + " gives P_k the combinatorial type of P");
}

KpkReport check_kpk_integral(const LabelledPolytope& p, int k) {
    try {
        k0(p, k);
    } catch (const K0NotFound&) {
        throw PrematureK("k = " + std::to_string(k) + " is below k0(P)");
    }
    const LatticeData lattice = lattice_points(p, k);
    const LabelledPolytope kpk = lattice.shrunk.scaled(Rational(k));
    KpkReport report{k, kpk};
    report.expected_count = lattice.n_k + 1;
    try {
        report.is_integral = is_integral(kpk);
        report.is_delzant = is_delzant(kpk);
        report.lattice_count = static_cast<std::int64_t>(lattice_points(kpk, 1).points.size());
    } catch (const ValidationError&) {
        return report;
    }
    report.lattice_count_matches = report.lattice_count == report.expected_count;
    return report;
}

Rational bly_bound_value(int dim, int k, std::int64_t n_k) {
    if (n_k == 0) throw DegenerateN("N_k = 0: P meets Z^n/" + std::to_string(k) + " in a single point");
    return Rational(2LL * dim * k * (n_k + 1), static_cast<long long>(n_k));
}

BlyBound bly_bound(const LabelledPolytope& p, std::optional<int> k) {
    int used;
    if (k) {
        used = *k;
        try {
            k0(p, used);
        } catch (const K0NotFound&) {
            throw PrematureK("k = " + std::to_string(used) + " is below k0(P)");
        }
    } else {
        used = is_integral(p) ? 1 : k0(p);
    }
    const LatticeData lattice = lattice_points(p, used);
    const Rational bound = bly_bound_value(p.dim(), used, lattice.n_k);
    return BlyBound{used, lattice.n_k, bound, is_integer(bound)};
}

namespace {

void triangulate_face(const std::vector<Vertex>& vs, std::size_t facet_count, int dim,
                      const std::vector<std::size_t>& face, int face_dim, std::vector<RationalVector>& apexes,
                      std::vector<RationalMatrix>& out) {
    auto contains_face = [](const Vertex& v, const std::vector<std::size_t>& set) {
        return std::includes(v.active.begin(), v.active.end(), set.begin(), set.end());
    };
    std::vector<const RationalVector*> face_vertices;
    for (const auto& v : vs)
        if (contains_face(v, face)) face_vertices.push_back(&v.coords);

    if (face_vertices.size() == static_cast<std::size_t>(face_dim) + 1) {
        RationalMatrix s(dim + 1, dim);
        Eigen::Index r = 0;
        for (const auto& a : apexes) s.row(r++) = a.transpose();
        for (const auto* x : face_vertices) s.row(r++) = x->transpose();
        out.push_back(std::move(s));
        return;
    }
    RationalVector apex = RationalVector::Zero(dim);
    for (const auto* x : face_vertices) apex += *x;
    apexes.push_back(apex / Rational(static_cast<long long>(face_vertices.size())));
    for (std::size_t t = 0; t < facet_count; ++t) {
        if (std::binary_search(face.begin(), face.end(), t)) continue;
        std::vector<std::size_t> sub = face;
        sub.insert(std::upper_bound(sub.begin(), sub.end(), t), t);
        bool nonempty = false;
        for (const auto& v : vs) nonempty |= contains_face(v, sub);
        if (nonempty) triangulate_face(vs, facet_count, dim, sub, face_dim - 1, apexes, out);
    }
    apexes.pop_back();
}

}  // namespace

std::vector<RationalMatrix> triangulate(const LabelledPolytope& p) {
    const auto vs = vertices(p);
    const int n = p.dim();
    std::vector<RationalMatrix> out;
    std::vector<RationalVector> apexes;
    triangulate_face(vs, p.facet_count(), n, {}, n, apexes, out);
    return out;
}

Rational simplex_volume(const RationalMatrix& simplex) {
    const Eigen::Index n = simplex.cols();
    RationalMatrix edges(n, n);
    for (Eigen::Index r = 0; r < n; ++r) edges.row(r) = simplex.row(r + 1) - simplex.row(0);
    Rational det = exact_determinant<Rational>(edges);
    if (det < 0) det = -det;
    Integer factorial = 1;
    for (Eigen::Index i = 2; i <= n; ++i) factorial *= static_cast<long long>(i);
    return det / Rational(factorial);
}

Rational volume(const LabelledPolytope& p) {
    Rational total = 0;
    for (const auto& s : triangulate(p)) total += simplex_volume(s);
    return total;
}

}  // namespace toric
