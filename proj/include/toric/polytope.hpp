#ifndef TORIC_POLYTOPE_HPP
#define TORIC_POLYTOPE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "toric/rational.hpp"

namespace toric {

/// One defining inequality L(x) = <x, normal> + offset >= 0.
struct Facet {
    IntVector normal;
    Rational offset;

    friend bool operator==(const Facet& a, const Facet& b) {
        return a.normal == b.normal && a.offset == b.offset;
    }
};

/// A labelled polytope {x : L_i(x) >= 0} with primitive integer inward
/// normals and rational offsets.
///
/// Construction only checks the structural invariants (dimensions, at least
/// dim+1 facets, primitive nonzero normals). Geometric well-formedness
/// (bounded, simple, no redundant facet) is established by vertices(), which
/// every geometric query goes through. Shrunken polytopes built during
/// lattice refinement may legitimately be degenerate, so the constructor
/// cannot insist on it.
class LabelledPolytope {
public:
    LabelledPolytope(int dim, std::vector<Facet> facets);

    int dim() const { return dim_; }
    std::size_t facet_count() const { return facets_.size(); }
    const std::vector<Facet>& facets() const { return facets_; }
    const Facet& facet(std::size_t i) const { return facets_[i]; }

    /// L_i at an exact point.
    Rational defining_function(std::size_t i, const RationalVector& x) const;
    /// L_i at a floating point.
    double defining_function(std::size_t i, const Eigen::VectorXd& x) const;
    /// All L_i at a floating point.
    Eigen::VectorXd defining_functions(const Eigen::VectorXd& x) const;

    bool contains(const RationalVector& x) const;

    /// d x n matrix whose rows are the normals.
    Eigen::MatrixXd normals() const;
    Eigen::VectorXd offsets() const;

    /// Same normals, new offsets.
    LabelledPolytope with_offsets(const std::vector<Rational>& offsets) const;
    /// The polytope shifted by t: {x + t : x in P}.
    LabelledPolytope translated(const RationalVector& t) const;
    /// The dilation {s x : x in P}.
    LabelledPolytope scaled(const Rational& s) const;

    friend bool operator==(const LabelledPolytope& a, const LabelledPolytope& b) {
        return a.dim_ == b.dim_ && a.facets_ == b.facets_;
    }

private:
    int dim_;
    std::vector<Facet> facets_;
};

struct Vertex {
    RationalVector coords;
    std::vector<std::size_t> active;  // sorted facet indices with L_i = 0
};

/// All vertices with their active facet sets, sorted lexicographically by
/// coordinates.
///
/// Throws UnboundedOrEmpty when the feasible set has no vertex or a
/// recession direction, NonSimple when a vertex lies on more than dim facets,
/// and InvalidPolytope when some facet touches no vertex (redundant).
std::vector<Vertex> vertices(const LabelledPolytope& p);

/// True iff the active normals at every vertex form a lattice basis.
bool is_delzant(const LabelledPolytope& p);
bool is_integral(const LabelledPolytope& p);
bool is_simplex(const LabelledPolytope& p);

/// Exact arithmetic mean of the vertices (an interior point).
RationalVector vertex_centroid(const LabelledPolytope& p);

struct LatticeData {
    int k;
    std::vector<RationalVector> points;  // P cap Z^n / k, lexicographic
    std::int64_t n_k;                    // #points - 1
    std::vector<Rational> l_min;         // min over points of L_i
    LabelledPolytope shrunk;             // offsets c_i - l_min[i]
};

/// Enumerates P cap Z^n/k by scanning the exact bounding box.
/// Throws EmptyLattice when there is no such point.
LatticeData lattice_points(const LabelledPolytope& p, int k);

/// True iff q (same normals as p) is a simple polytope without redundant
/// facets whose vertex active sets coincide with those of p.
/// Throws MismatchedNormals when the normal lists differ.
bool same_combinatorial_type(const LabelledPolytope& p, const LabelledPolytope& q);

inline constexpr int kDefaultKMax = 64;

/// Smallest k <= k_max for which P_k has the combinatorial type of P.
/// Throws K0NotFound otherwise.
int k0(const LabelledPolytope& p, int k_max = kDefaultKMax);

struct KpkReport {
    int k;
    LabelledPolytope scaled;  // k P_k
    bool is_integral = false;
    bool is_delzant = false;
    std::int64_t lattice_count = 0;  // #(k P_k cap Z^n)
    std::int64_t expected_count = 0;  // N_k + 1
    bool lattice_count_matches = false;

    bool ok() const { return is_integral && is_delzant && lattice_count_matches; }
};

/// Builds k P_k and checks that it is an integral Delzant polytope carrying
/// exactly N_k + 1 lattice points. Throws PrematureK when k < k0(P).
KpkReport check_kpk_integral(const LabelledPolytope& p, int k);

struct BlyBound {
    int k_used;
    std::int64_t n_k;
    Rational bound;  // 2 n k (N_k + 1) / N_k
    bool is_integer_bound;
};

/// Lattice-count upper bound on the first eigenvalue. Without k, uses k = 1
/// for integral P and k0(P) otherwise.
BlyBound bly_bound(const LabelledPolytope& p, std::optional<int> k = std::nullopt);

/// The closed-form bound value 2 n k (N_k + 1) / N_k. Throws DegenerateN when
/// n_k == 0.
Rational bly_bound_value(int dim, int k, std::int64_t n_k);

/// Triangulation of P by recursively coning face barycenters over the
/// triangulated subfaces; a face that is already a simplex is kept whole, so
/// a simplex P comes back as itself and a square as a 4-triangle fan. Each
/// simplex is a (dim+1) x dim matrix of vertex rows. Order is canonical
/// (increasing facet indices along the recursion).
std::vector<RationalMatrix> triangulate(const LabelledPolytope& p);

/// |det(v_1 - v_0, ..., v_n - v_0)| / n!
Rational simplex_volume(const RationalMatrix& simplex);
Rational volume(const LabelledPolytope& p);

}  // namespace toric

#endif  // TORIC_POLYTOPE_HPP
