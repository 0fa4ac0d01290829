#include "toric/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>

#include "toric/errors.hpp"

namespace toric {

namespace {

Json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::string facet_label(std::size_t i) { return "facet " + std::to_string(i); }

Rational offset_from_json(const Json& j, std::size_t i) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) {
        if (auto q = parse_rational(j.get<std::string>())) return *q;
        throw InvalidPolytope(facet_label(i) + ": offset \"" + j.get<std::string>() + "\" is not a rational");
    }
    throw InvalidPolytope(facet_label(i) + ": offset must be an integer or a string (\"p/q\" or decimal)");
}

double parse_number(std::string_view text, const std::string& what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw InvalidPotential(what + ": \"" + std::string(text) + "\" is not a number");
    return v;
}

int parse_int(std::string_view text, const std::string& what) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw InvalidPotential(what + ": \"" + std::string(text) + "\" is not an integer");
    return v;
}

/// "key=value,key=value" into an ordered list; every key must be expected.
std::vector<std::pair<std::string, std::string>> parse_params(std::string_view body, const std::string& family,
                                                              const std::vector<std::string>& keys) {
    std::vector<std::pair<std::string, std::string>> out;
    while (!body.empty()) {
        const auto comma = body.find(',');
        const auto item = body.substr(0, comma);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw InvalidPotential(family + ": expected key=value, got \"" + std::string(item) + "\"");
        std::string key(item.substr(0, eq));
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw InvalidPotential(family + ": unknown parameter \"" + key + "\"");
        for (const auto& [k, v] : out)
            if (k == key) throw InvalidPotential(family + ": parameter \"" + key + "\" given twice");
        out.emplace_back(std::move(key), std::string(item.substr(eq + 1)));
        body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
    }
    for (const auto& k : keys) {
        bool found = false;
        for (const auto& [key, v] : out) found = found || key == k;
        if (!found) throw InvalidPotential(family + ": missing parameter \"" + k + "\"");
    }
    return out;
}

std::string lookup(const std::vector<std::pair<std::string, std::string>>& params, const std::string& key) {
    for (const auto& [k, v] : params)
        if (k == key) return v;
    return {};
}

}  // namespace

LabelledPolytope polytope_from_json(const Json& j) {
    if (!j.is_object()) throw InvalidPolytope("polytope must be a JSON object");
    if (!j.contains("dim") || !j["dim"].is_number_integer()) throw InvalidPolytope("missing integer \"dim\"");
    if (!j.contains("facets") || !j["facets"].is_array()) throw InvalidPolytope("missing array \"facets\"");
    const int dim = j["dim"].get<int>();
    if (dim < 1) throw InvalidPolytope("dim must be positive");
    std::vector<Facet> facets;
    for (std::size_t i = 0; i < j["facets"].size(); ++i) {
        const Json& f = j["facets"][i];
        if (!f.is_object() || !f.contains("normal") || !f.contains("offset"))
            throw InvalidPolytope(facet_label(i) + ": expected {\"normal\": [...], \"offset\": ...}");
        const Json& nj = f["normal"];
        if (!nj.is_array() || nj.size() != static_cast<std::size_t>(dim))
            throw InvalidPolytope(facet_label(i) + ": normal must have " + std::to_string(dim) + " integer entries");
        IntVector normal(dim);
        long long g = 0;
        for (int c = 0; c < dim; ++c) {
            if (!nj[static_cast<std::size_t>(c)].is_number_integer())
                throw InvalidPolytope(facet_label(i) + ": normal entry " + std::to_string(c) + " is not an integer");
            normal[c] = nj[static_cast<std::size_t>(c)].get<std::int64_t>();
            g = std::gcd(g, static_cast<long long>(normal[c]));
        }
        if (g == 0) throw InvalidPolytope(facet_label(i) + ": normal is zero");
        if (g != 1) throw InvalidPolytope(facet_label(i) + ": normal is not primitive (gcd " + std::to_string(g) + ")");
        facets.push_back({std::move(normal), offset_from_json(f["offset"], i)});
    }
    return LabelledPolytope(dim, std::move(facets));
}

LabelledPolytope read_polytope(const std::filesystem::path& path) {
    try {
        return polytope_from_json(read_json(path));
    } catch (const InvalidPolytope& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

Json to_json(const Rational& q) {
    if (is_integer(q) && abs(numerator(q)) < Integer(1) << 53) return numerator(q).convert_to<long long>();
    return to_string(q);
}

Json to_json(const LabelledPolytope& p) {
    Json facets = Json::array();
    for (const auto& f : p.facets()) {
        Json normal = Json::array();
        for (Eigen::Index c = 0; c < f.normal.size(); ++c) normal.push_back(f.normal[c]);
        facets.push_back({{"normal", normal}, {"offset", to_json(f.offset)}});
    }
    return {{"dim", p.dim()}, {"facets", facets}};
}

Polynomial polynomial_from_json(const Json& j, int dim) {
    if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
        throw InvalidPotential("polynomial file must hold {\"terms\": [...]}");
    Polynomial v(dim);
    for (std::size_t i = 0; i < j["terms"].size(); ++i) {
        const Json& t = j["terms"][i];
        const std::string label = "term " + std::to_string(i);
        if (!t.is_object() || !t.contains("exponents") || !t.contains("coefficient") || !t["coefficient"].is_number())
            throw InvalidPotential(label + ": expected {\"exponents\": [...], \"coefficient\": number}");
        const Json& e = t["exponents"];
        if (!e.is_array() || e.size() != static_cast<std::size_t>(dim))
            throw InvalidPotential(label + ": exponents must have " + std::to_string(dim) + " entries");
        std::vector<int> exps;
        for (const auto& x : e) {
            if (!x.is_number_integer() || x.get<int>() < 0) throw InvalidPotential(label + ": exponents must be nonnegative integers");
            exps.push_back(x.get<int>());
        }
        v.add_term(std::move(exps), t["coefficient"].get<double>());
    }
    return v;
}

SymplecticPotential parse_potential(const std::string& spec, const LabelledPolytope& p, const std::filesystem::path& base_dir) {
    const auto colon = spec.find(':');
    const std::string family = spec.substr(0, colon);
    const std::string_view body = colon == std::string::npos ? std::string_view{} : std::string_view(spec).substr(colon + 1);
    if (family == "guillemin") {
        if (colon != std::string::npos) throw InvalidPotential("guillemin takes no parameters");
        return SymplecticPotential::guillemin(p);
    }
    if (family == "uc") {
        const auto params = parse_params(body, family, {"i", "c"});
        return SymplecticPotential::quadratic_perturbed(p, parse_int(lookup(params, "i"), "uc axis"), parse_number(lookup(params, "c"), "uc c"));
    }
    if (family == "dilation") {
        const auto params = parse_params(body, family, {"s"});
        return SymplecticPotential::dilation(p, parse_number(lookup(params, "s"), "dilation s"));
    }
    if (family == "poly") {
        if (body.empty()) throw InvalidPotential("poly needs a coefficient file");
        std::filesystem::path file{std::string(body)};
        if (file.is_relative()) file = base_dir / file;
        return SymplecticPotential::guillemin_plus_poly(p, polynomial_from_json(read_json(file), p.dim()));
    }
    throw InvalidPotential("unknown potential \"" + spec + "\" (expected guillemin, uc:i=,c=, dilation:s= or poly:<file>)");
}

Json to_json(const Eigen::VectorXd& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Json to_json(const RitzResult& r) {
    return {{"lambda1T", r.lambda1T},
            {"eigenvalues", to_json(r.eigenvalues)},
            {"degree", r.degree},
            {"basis_size", r.basis_size},
            {"rank", r.rank},
            {"quad_order", r.quad_order},
            {"quad_depth", r.quad_depth},
            {"quad_nodes", r.quad_nodes},
            {"mass_condition", r.mass_condition},
            {"stiffness_condition", r.stiffness_condition},
            {"jacobi_sweeps", r.jacobi_sweeps},
            {"eigvec", to_json(r.eigvec)}};
}

Json to_json(const KEReport& r) {
    return {{"is_ke", r.is_ke},     {"lambda_hat", r.lambda_hat}, {"xbar", to_json(r.xbar)},
            {"residual_max", r.residual_max}, {"residual_l2", r.residual_l2}, {"tolerance", r.tolerance},
            {"samples", r.samples}};
}

Json to_json(const BlyBound& b) {
    return {{"k", b.k_used}, {"n_k", b.n_k}, {"bound", to_json(b.bound)}, {"bound_value", to_double(b.bound)},
            {"is_integer", b.is_integer_bound}};
}

Json to_json(const BoundReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"k", row.k}, {"n_k", row.n_k}, {"bound", to_json(row.bound)}, {"bound_value", to_double(row.bound)},
                        {"is_integer", row.is_integer}});
    Json out = {{"k0", r.k0}, {"integral", r.integral}, {"bounds", rows}};
    out["integral_bound"] = r.integral_bound ? to_json(*r.integral_bound) : Json(nullptr);
    out["recommended"] = to_json(r.recommended);
    return out;
}

Json to_json(const BalanceWeights& b, std::size_t m0) {
    return {{"alpha", to_json(b.alpha)},
            {"alpha_m0_normalized", to_json(b.normalized_to_m0(m0))},
            {"averages", to_json(b.averages)},
            {"residual", b.residual},
            {"iterations", b.iterations}};
}

Json to_json(const SaturationReport& r) {
    return {{"r1", r.r1},
            {"r2", r.r2},
            {"saturated", r.saturated},
            {"classification", r.classification},
            {"constant", r.constant},
            {"tolerance", r.tolerance},
            {"samples", r.samples},
            {"fitted_points", r.fitted_points}};
}

Json to_json(const SweepTable& t) {
    Json rows = Json::array();
    for (const auto& r : t.rows)
        rows.push_back({{"param", r.param}, {"lambda1T", r.lambda1T}, {"degree", r.degree}, {"quad_nodes", r.quad_nodes}});
    return {{"family", t.family}, {"baseline", t.baseline}, {"monotone", t.monotone}, {"flags", t.flags}, {"rows", rows}};
}

}  // namespace toric
