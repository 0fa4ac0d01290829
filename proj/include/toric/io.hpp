#ifndef TORIC_IO_HPP
#define TORIC_IO_HPP

#include <filesystem>
#include <string>

#include "json.hpp"
#include "toric/geometry.hpp"
#include "toric/polytope.hpp"
#include "toric/potential.hpp"
#include "toric/projective.hpp"
#include "toric/spectral.hpp"

namespace toric {

using Json = nlohmann::ordered_json;

/// {"dim": n, "facets": [{"normal": [...], "offset": int | "p/q" | "decimal"}]}
/// Diagnostics name the offending facet index.
LabelledPolytope polytope_from_json(const Json& j);
LabelledPolytope read_polytope(const std::filesystem::path& path);

/// Offsets are written as integers when integral and as "p/q" otherwise.
Json to_json(const LabelledPolytope& p);

/// "guillemin", "uc:i=<axis>,c=<float>", "dilation:s=<float>" or
/// "poly:<file>". The poly file holds {"terms": [{"exponents": [...],
/// "coefficient": c}, ...]}; relative paths resolve against base_dir.
SymplecticPotential parse_potential(const std::string& spec, const LabelledPolytope& p,
                                    const std::filesystem::path& base_dir = ".");
Polynomial polynomial_from_json(const Json& j, int dim);

Json to_json(const Rational& q);
Json to_json(const Eigen::VectorXd& v);
Json to_json(const RitzResult& r);
Json to_json(const KEReport& r);
Json to_json(const BlyBound& b);
Json to_json(const BoundReport& r);
Json to_json(const BalanceWeights& b, std::size_t m0);
Json to_json(const SaturationReport& r);
Json to_json(const SweepTable& t);

}  // namespace toric

#endif  // TORIC_IO_HPP
