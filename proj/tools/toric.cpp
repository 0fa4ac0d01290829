// Command-line front end: polytope inspection, bounds, lambda1T, family
// sweeps, KE and saturation checks.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "toric/errors.hpp"
#include "toric/geometry.hpp"
#include "toric/io.hpp"
#include "toric/projective.hpp"
#include "toric/spectral.hpp"

using namespace toric;

namespace {

struct RunConfig {
    std::string command;
    std::string polytope_path;
    std::string potential = "guillemin";
    int degree = 6;
    int quad_order = 3;
    int quad_depth = 2;
    std::optional<int> k;
    int k_max = kDefaultKMax;
    std::vector<double> c_list;
    std::vector<double> s_list;
    int axis = 0;
    std::optional<double> tol;
    int samples = 64;
    int max_iter = kBalanceMaxIterations;
    std::string output;
};

bool uses_potential(const std::string& c) {
    return c == "lambda1t" || c == "ke-check" || c == "balance" || c == "saturate";
}
bool uses_quadrature(const std::string& c) {
    return c == "lambda1t" || c == "sweep-uc" || c == "sweep-dilation" || c == "balance" || c == "saturate";
}
bool is_sweep(const std::string& c) { return c == "sweep-uc" || c == "sweep-dilation"; }

Json config_json(const RunConfig& cfg) {
    Json j = {{"command", cfg.command}, {"polytope", cfg.polytope_path}};
    if (uses_potential(cfg.command)) j["potential"] = cfg.potential;
    if (cfg.command == "lambda1t" || is_sweep(cfg.command)) j["degree"] = cfg.degree;
    if (uses_quadrature(cfg.command)) {
        j["quad_order"] = cfg.quad_order;
        j["quad_depth"] = cfg.quad_depth;
    }
    if (cfg.command == "bound") {
        j["k"] = cfg.k ? Json(*cfg.k) : Json(nullptr);
        j["k_max"] = cfg.k_max;
    }
    if (cfg.command == "saturate") j["k_max"] = cfg.k_max;
    if (cfg.command == "sweep-uc") {
        j["axis"] = cfg.axis;
        j["c"] = cfg.c_list;
    }
    if (cfg.command == "sweep-dilation") j["s"] = cfg.s_list;
    if (cfg.command == "ke-check") j["samples"] = cfg.samples;
    if (cfg.command == "ke-check" || cfg.command == "balance" || cfg.command == "saturate")
        j["tol"] = cfg.tol ? Json(*cfg.tol) : Json(nullptr);
    if (cfg.command == "balance" || cfg.command == "saturate") j["max_iter"] = cfg.max_iter;
    j["output"] = cfg.output;
    j["threads"] = worker_count();
    return j;
}

void validate(RunConfig& cfg) {
    if (cfg.output.empty()) cfg.output = is_sweep(cfg.command) ? "csv" : "json";
    if (cfg.output != "text" && cfg.output != "json" && cfg.output != "csv")
        throw ValidationError("--output must be text, json or csv");
    if (cfg.output == "csv" && !is_sweep(cfg.command)) throw ValidationError("--output csv is only available for sweeps");
    if (cfg.degree < 1) throw ValidationError("--degree must be at least 1");
    if (cfg.quad_order < 1 || cfg.quad_order > 4) throw ValidationError("--quad-order must be in 1..4");
    if (cfg.quad_depth < 0 || cfg.quad_depth > 8) throw ValidationError("--quad-depth must be in 0..8");
    if (cfg.k && *cfg.k < 1) throw ValidationError("--k must be positive");
    if (cfg.k_max < 1) throw ValidationError("--k-max must be positive");
    if (cfg.tol && !(*cfg.tol > 0.0)) throw ValidationError("--tol must be positive");
    if (cfg.samples < 20) throw ValidationError("--samples must be at least 20");
    if (cfg.max_iter < 0) throw ValidationError("--max-iter must be nonnegative");
    if (cfg.command == "sweep-uc" && cfg.c_list.empty()) throw ValidationError("sweep-uc needs --c");
    if (cfg.command == "sweep-dilation" && cfg.s_list.empty()) throw ValidationError("sweep-dilation needs --s");
}

std::string render_text(const Json& report) {
    std::string out;
    for (const auto& [key, value] : report.items()) {
        if (key == "config") {
            for (const auto& [ck, cv] : value.items()) out += "# " + ck + " = " + cv.dump() + "\n";
        } else {
            out += key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
        }
    }
    return out;
}

Json info(const LabelledPolytope& p) {
    Json verts = Json::array();
    for (const auto& v : vertices(p)) {
        Json c = Json::array();
        for (Eigen::Index i = 0; i < v.coords.size(); ++i) c.push_back(to_json(v.coords[i]));
        verts.push_back({{"coords", c}, {"active", v.active}});
    }
    std::size_t lattice_count = 0;
    try {
        lattice_count = lattice_points(p, 1).points.size();
    } catch (const EmptyLattice&) {
    }
    return {{"polytope", to_json(p)},
            {"vertices", verts},
            {"delzant", is_delzant(p)},
            {"integral", is_integral(p)},
            {"simplex", is_simplex(p)},
            {"volume", to_json(volume(p))},
            {"lattice_points", lattice_count}};
}

int run(RunConfig cfg) {
    validate(cfg);
    const std::filesystem::path path(cfg.polytope_path);
    const auto p = read_polytope(path);
    Json report = {{"config", config_json(cfg)}};
    auto quadrature = [&] { return build_quadrature(p, cfg.quad_order, cfg.quad_depth); };
    auto potential = [&] { return parse_potential(cfg.potential, p, path.parent_path()); };

    if (cfg.command == "info") {
        report.update(info(p));
    } else if (cfg.command == "bound") {
        if (!is_delzant(p)) throw NotDelzant("bounds need a Delzant polytope");
        const auto b = bly_bound(p, cfg.k);
        const auto r = bound_report(p, cfg.k_max);
        report["bound"] = to_json(b.bound);
        report["bound_value"] = to_double(b.bound);
        report["k_used"] = b.k_used;
        report["n_k"] = b.n_k;
        report["is_integer"] = b.is_integer_bound;
        report.update(to_json(r));
    } else if (cfg.command == "lambda1t") {
        report["result"] = to_json(lambda1_invariant(potential(), cfg.degree, quadrature()));
    } else if (cfg.command == "sweep-uc" || cfg.command == "sweep-dilation") {
        const auto q = quadrature();
        const auto table = cfg.command == "sweep-uc" ? sweep_uc(p, cfg.axis, cfg.c_list, cfg.degree, q)
                                                     : sweep_dilation(p, cfg.s_list, cfg.degree, q);
        if (cfg.output == "csv") {
            // stdout carries the CSV contract alone; the configuration goes to stderr
            std::cerr << report["config"].dump() << "\n";
            for (const auto& f : table.flags) std::cerr << "flag: " << f << "\n";
            std::cout << to_csv(table);
            return 0;
        }
        report["sweep"] = to_json(table);
    } else if (cfg.command == "ke-check") {
        report["ke"] = to_json(ke_check(potential(), cfg.samples, cfg.tol));
    } else if (cfg.command == "balance" || cfg.command == "saturate") {
        const auto u = potential();
        const auto q = quadrature();
        const auto e = make_embedding(p);
        const double balance_tol = cfg.command == "balance" ? cfg.tol.value_or(kBalanceTolerance) : kBalanceTolerance;
        const auto b = balance(e, u, q, balance_tol, cfg.max_iter);
        if (cfg.command == "saturate") report["bounds"] = to_json(bound_report(p, cfg.k_max))["bounds"];
        report["balance"] = to_json(b, e.m0);
        if (cfg.command == "saturate") report["saturation"] = to_json(saturation_check(e, u, b, q, cfg.tol.value_or(kSaturationTolerance)));
    }

    std::cout << (cfg.output == "text" ? render_text(report) : report.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toric Kahler geometry toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;

    struct Spec {
        const char* name;
        const char* help;
    };
    const std::vector<Spec> commands = {
        {"info", "vertices, Delzant and integrality flags, volume, lattice count"},
        {"bound", "lattice-count eigenvalue bounds"},
        {"lambda1t", "first invariant eigenvalue by Rayleigh-Ritz"},
        {"sweep-uc", "lambda1T along the u_c family (CSV)"},
        {"sweep-dilation", "lambda1T along the dilation family (CSV)"},
        {"ke-check", "Kahler-Einstein residual check"},
        {"balance", "diagonal balancing weights"},
        {"saturate", "balance, then the Fubini-Study saturation check"},
    };
    for (const auto& spec : commands) {
        const std::string name = spec.name;
        auto* sub = app.add_subcommand(name, spec.help);
        sub->add_option("polytope", cfg.polytope_path, "polytope JSON file")->required();
        sub->add_option("--output", cfg.output, "text, json or csv");
        if (uses_potential(name)) sub->add_option("--potential", cfg.potential, "guillemin | uc:i=<axis>,c=<c> | dilation:s=<s> | poly:<file>");
        if (name == "lambda1t" || is_sweep(name)) sub->add_option("--degree", cfg.degree, "trial polynomial degree (default 6)");
        if (uses_quadrature(name)) {
            sub->add_option("--quad-order", cfg.quad_order, "points per direction, 1..4 (default 3)");
            sub->add_option("--quad-depth", cfg.quad_depth, "subdivision rounds (default 2)");
        }
        if (name == "bound") sub->add_option("--k", cfg.k, "refinement level (default: 1 if integral, else k0)");
        if (name == "bound" || name == "saturate") sub->add_option("--k-max", cfg.k_max, "search limit for k0 (default 64)");
        if (name == "sweep-uc") {
            sub->add_option("--c", cfg.c_list, "comma-separated c values, ascending")->delimiter(',');
            sub->add_option("--axis", cfg.axis, "perturbed coordinate (0-based, default 0)");
        }
        if (name == "sweep-dilation") sub->add_option("--s", cfg.s_list, "comma-separated s values, descending")->delimiter(',');
        if (name == "ke-check" || name == "balance" || name == "saturate") sub->add_option("--tol", cfg.tol, "tolerance");
        if (name == "ke-check") sub->add_option("--samples", cfg.samples, "interior sample count (default 64)");
        if (name == "balance" || name == "saturate") sub->add_option("--max-iter", cfg.max_iter, "balance iteration cap (default 500)");
        sub->callback([&cfg, name] { cfg.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return run(cfg);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
