#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include <gasketlab/gasketlab.hpp>

using namespace gasket;

namespace {

struct usage_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

Region parse_region(const std::string& s) {
    std::stringstream ss(s);
    std::string item;
    std::vector<double> v;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw usage_error("--region: not a number: " + item);
        }
    }
    if (v.size() != 4) throw usage_error("--region expects x0,x1,y0,y1");
    Region r{v[0], v[1], v[2], v[3]};
    if (!(r.x1 > r.x0) || !(r.y1 > r.y0)) throw usage_error("--region must satisfy x0 < x1 and y0 < y1");
    return r;
}

struct Options {
    std::string region = "-2,2,-2,2";
    int res = 512;
    int maxiter = 0;  // 0 selects the per-command default
    double tol = default_tol;
    double eps = max_basin_eps;
    int level = 20;
    int max_level = 16;
    int maxgen = 3;
    int threads = 0;
    unsigned seed = 0;
    std::string out;
    std::string triangulation = "tetrahedron";
    std::string normalize = "strip";
    std::string packing;
};

int iterations(const Options& o, int fallback) { return o.maxiter > 0 ? o.maxiter : fallback; }

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) std::cout << text;
    else write_text_file(o.out, text);
}

void save_image(const Options& o, const RasterImage& img) {
    write_image(img, o.out);
    std::cerr << "wrote " << img.width << "x" << img.height << " image to " << o.out << '\n';
}

CirclePacking load_packing(const Options& o) {
    if (!o.packing.empty()) return packing_from_json(read_json_file(o.packing));
    return solve_packing(load_triangulation(o.triangulation), parse_normalization(o.normalize), o.tol);
}

int cmd_pack(const Options& o) {
    const auto p = solve_packing(load_triangulation(o.triangulation), parse_normalization(o.normalize), o.tol);
    const auto rep = verify_packing(p, std::max(o.tol, 1e-9));
    emit(o, packing_to_json(p).dump(2) + "\n");
    std::cerr << "packing: " << p.tri.vertex_count() << " circles, max residual " << rep.max_residual << '\n';
    return rep.ok() ? 0 : 1;
}

int cmd_orbit_disks(const Options& o) {
    const auto p = load_packing(o);
    const auto disks = orbit_disks(p, o.maxgen, o.tol);
    emit(o, orbit_disks_to_json(disks).dump(2) + "\n");
    const auto counts = generation_counts(disks);
    std::cerr << "generation counts:";
    for (auto c : counts) std::cerr << ' ' << c;
    std::cerr << '\n';
    return 0;
}

int cmd_symmetries(const Options& o) {
    const auto p = load_packing(o);
    const auto g = mobius_symmetries(p, std::max(o.tol, 1e-9));
    std::ostringstream os;
    os << "order,orientation_preserving,graph_automorphisms\n"
       << g.order() << ',' << g.orientation_preserving() << ',' << graph_automorphisms(p.tri).size() << "\n\n";
    os << "anti,permutation\n";
    for (const auto& s : g.elements) {
        os << s.map.anti() << ',';
        for (std::size_t k = 0; k < s.perm.size(); ++k) os << (k ? " " : "") << s.perm[k];
        os << '\n';
    }
    emit(o, os.str());
    return 0;
}

int cmd_render(const std::string& kind, const Options& o) {
    if (o.out.empty()) throw usage_error("render needs --out");
    const Region region = parse_region(o.region);
    if (kind == "gasket") {
        save_image(o, render_limit_set(load_packing(o), region, o.res, {iterations(o, 50), o.threads}));
    } else if (kind == "julia") {
        save_image(o, render_julia(region, o.res, {iterations(o, 100), o.eps, o.threads}));
    } else if (kind == "affine") {
        save_image(o, render_affine(o.res, {iterations(o, 20), o.threads}));
    } else {
        save_image(o, render_schwarz(region, o.res, {iterations(o, 60), o.threads}));
    }
    return 0;
}

int cmd_conjugacy_check(const Options& o) {
    const auto r = exact_identity_check(o.level);
    std::cout << "level " << o.level << ": " << r.checked << " dyadics, " << r.identity_failures
              << " identity failures, " << r.bitwalk_failures << " bit-walk mismatches, " << r.inverse_failures
              << " inverse mismatches (" << r.seconds << " s)\n";
    const bool ok = r.identity_failures == 0 && r.bitwalk_failures == 0 && r.inverse_failures == 0;
    std::cout << "exact identities: " << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? 0 : 1;
}

int cmd_conjugacy_distortion(const Options& o) {
    emit(o, distortion_csv(distortion_table(o.max_level)));
    return 0;
}

int cmd_verify(const std::string& suite, const Options& o) {
    const auto criteria = acceptance_criteria(o.seed, o.level);
    bool ok = true;
    for (int id : suite_criteria(suite)) {
        const auto r = criteria[std::size_t(id - 1)]();
        std::cout << format_result(r) << std::flush;
        ok = ok && r.pass();
    }
    std::string tables;
    if (suite == "all" || suite == "conjugacy") {
        const auto r = exact_identity_check(o.level);
        const bool exact = r.identity_failures == 0 && r.bitwalk_failures == 0 && r.inverse_failures == 0;
        std::cout << "exact identities: " << (exact ? "PASS" : "FAIL") << '\n';
        ok = ok && exact;
        tables += distortion_csv(distortion_table(16)) + "\n";
    }
    if (suite == "all" || suite == "group") tables += group_tables_csv() + "\n";
    if (suite == "all" || suite == "julia" || suite == "julia-structure")
        tables += julia_inventory_csv() + "\n" + julia_touching_csv() + "\n";
    if (suite == "all" || suite == "affine") tables += affine_expansion_csv() + "\n" + affine_dimension_csv() + "\n";
    if (suite == "all" || suite == "schwarz") tables += schwarz_tables_csv(o.seed) + "\n";
    if (!tables.empty()) {
        if (o.out.empty()) std::cout << '\n' << tables;
        else write_text_file(o.out, tables);
    }
    std::cout << (ok ? "verify " + suite + ": PASS\n" : "verify " + suite + ": FAIL\n");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Circle packings, reflection groups and dynamical gaskets"};
    app.require_subcommand(1);
    Options o;

    auto add_region = [&](CLI::App* c) { c->add_option("--region", o.region, "x0,x1,y0,y1")->capture_default_str(); };
    auto add_res = [&](CLI::App* c) {
        c->add_option("--res", o.res, "image width in pixels")->check(CLI::Range(1, 1 << 15))->capture_default_str();
    };
    auto add_maxiter = [&](CLI::App* c) {
        c->add_option("--maxiter", o.maxiter, "iteration cap")->check(CLI::Range(1, 1 << 20));
    };
    auto add_threads = [&](CLI::App* c) {
        c->add_option("--threads", o.threads, "worker threads (default GASKETLAB_THREADS, else all cores)")
            ->check(CLI::Range(1, 1024));
    };
    auto add_out = [&](CLI::App* c, bool required) {
        auto* opt = c->add_option("--out", o.out, "output path");
        if (required) opt->required();
    };
    auto add_tol = [&](CLI::App* c) {
        c->add_option("--tol", o.tol, "numerical tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    };
    auto add_packing_source = [&](CLI::App* c) {
        c->add_option("--triangulation", o.triangulation, "builder name or triangulation JSON")->capture_default_str();
        c->add_option("--normalize", o.normalize, "default | strip | fix3:p;q;r")->capture_default_str();
        c->add_option("--packing", o.packing, "packing JSON written by pack")->check(CLI::ExistingFile);
    };
    auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "sampling seed")->capture_default_str(); };

    auto* pack = app.add_subcommand("pack", "solve a circle packing");
    pack->add_option("--triangulation", o.triangulation, "builder name or triangulation JSON")->capture_default_str();
    pack->add_option("--normalize", o.normalize, "default | strip | fix3:p;q;r")->capture_default_str();
    add_tol(pack);
    add_out(pack, false);

    auto* render = app.add_subcommand("render", "render a limit set, Julia set or tiling");
    render->require_subcommand(1);
    std::string render_kind;
    for (const char* kind : {"gasket", "julia", "affine", "schwarz"}) {
        auto* c = render->add_subcommand(kind, std::string("render the ") + kind + " picture");
        add_res(c);
        add_maxiter(c);
        add_threads(c);
        add_out(c, true);
        if (std::string(kind) != "affine") add_region(c);
        if (std::string(kind) == "gasket") {
            add_packing_source(c);
            add_tol(c);
        }
        if (std::string(kind) == "julia")
            c->add_option("--eps", o.eps, "basin capture radius")->check(CLI::Range(1e-12, max_basin_eps))
                ->capture_default_str();
        c->callback([&render_kind, kind] { render_kind = kind; });
    }

    auto* orbit = app.add_subcommand("orbit-disks", "enumerate orbit disks by generation");
    add_packing_source(orbit);
    orbit->add_option("--maxgen", o.maxgen, "largest generation")->check(CLI::Range(0, 12))->capture_default_str();
    add_tol(orbit);
    add_out(orbit, false);

    auto* conj = app.add_subcommand("conjugacy", "Farey boundary conjugacy checks");
    conj->require_subcommand(1);
    auto* check = conj->add_subcommand("check", "exact identities at every dyadic of a level");
    check->add_option("--level", o.level, "dyadic level")->check(CLI::Range(1, max_farey_level))->capture_default_str();
    auto* dist = conj->add_subcommand("distortion", "scale-wise distortion table as CSV");
    dist->add_option("--max-level", o.max_level, "largest level")->check(CLI::Range(1, 20))->capture_default_str();
    add_out(dist, false);

    auto* verify = app.add_subcommand("verify", "run verification suites");
    std::string suite = "all";
    verify->add_option("suite", suite, "all | packing | group | julia | julia-structure | affine | schwarz | conjugacy")
        ->check(CLI::IsMember({"all", "packing", "group", "julia", "julia-structure", "affine", "schwarz", "conjugacy"}))
        ->capture_default_str();
    verify->add_option("--level", o.level, "dyadic level of the exact suite")
        ->check(CLI::Range(1, max_farey_level))
        ->capture_default_str();
    add_seed(verify);
    add_out(verify, false);

    auto* sym = app.add_subcommand("symmetries", "Mobius symmetry group of a packing");
    add_packing_source(sym);
    add_tol(sym);
    add_out(sym, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*pack) return cmd_pack(o);
        if (*orbit) return cmd_orbit_disks(o);
        if (*sym) return cmd_symmetries(o);
        if (*render) return cmd_render(render_kind, o);
        if (*check) return cmd_conjugacy_check(o);
        if (*dist) return cmd_conjugacy_distortion(o);
        if (*verify) return cmd_verify(suite, o);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
