// blockadelab: command-line frontend for the blockade-structure toolkit.
// Subcommands compose via files or standard streams; machine-readable output
// goes to stdout, human summaries to stderr. Exit codes: 0 success,
// 1 validation/usage error, 2 resource-cap refusal.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "blockadelab/catalog.hpp"
#include "blockadelab/combinatorics.hpp"
#include "blockadelab/core.hpp"
#include "blockadelab/spectra.hpp"
#include "blockadelab/symmetry.hpp"
#include "blockadelab/tessellation.hpp"

using nlohmann::json;
using namespace blockadelab;

namespace {

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw StructuralError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json gate_to_json(const GateSpec& g) {
    json j;
    j["name"] = g.name;
    j["n"] = g.graph.n;
    json edges = json::array();
    for (auto [a, b] : g.graph.edges) edges.push_back({a, b});
    j["edges"] = edges;
    j["weights"] = g.graph.weights;
    j["ports"] = g.ports.ports;
    if (g.structure) {
        j["dimension"] = g.structure->dimension;
        j["blockade_radius"] = g.structure->blockade_radius;
        json atoms = json::array();
        for (const auto& a : g.structure->atoms)
            atoms.push_back({{"id", a.id}, {"pos", a.pos}, {"detuning", a.detuning}});
        j["atoms"] = atoms;
    }
    return j;
}

json permutation_to_json(const Permutation& p) { return json(p.image); }

Boundary parse_boundary(const std::string& b) {
    if (b == "periodic") return Boundary::periodic;
    if (b == "open" || b == "open-rough") return Boundary::open_rough;
    throw StructuralError("boundary must be periodic or open");
}

std::uint64_t max_basis_from_env() {
    const char* env = std::getenv("BLOCKADELAB_MAX_BASIS");
    if (!env) return std::uint64_t{1} << 24;
    return std::strtoull(env, nullptr, 10);
}

void print_csv_spectrum(const std::vector<double>& energies,
                        const std::vector<std::vector<int>>& flux, double deg_tol) {
    bool with_flux = !flux.empty() && !flux[0].empty();
    std::printf("level,energy,degeneracy%s\n", with_flux ? ",flux" : "");
    for (std::size_t i = 0; i < energies.size(); ++i) {
        int deg = 0;
        for (std::size_t j = 0; j < energies.size(); ++j)
            if (std::abs(energies[j] - energies[i]) < deg_tol) ++deg;
        std::printf("%zu,%.17g,%d", i, energies[i], deg);
        if (with_flux) {
            std::string f;
            for (int x : flux[i]) f += x ? '1' : '0';
            std::printf(",%s", f.c_str());
        }
        std::printf("\n");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"blockadelab: blockade structures, ground languages, automorphisms, spectra"};
    app.require_subcommand(1);
    int threads = 0;
    std::uint64_t seed = 0;
    app.add_option("--threads", threads, "worker-thread bound for spectra assembly (0 = cores)");
    app.add_option("--seed", seed, "seed for randomized property suites (reserved)");

    // catalog
    auto* cat = app.add_subcommand("catalog", "emit a named structure as JSON");
    std::string cat_name;
    cat->add_option("name", cat_name, "not|nor|or|icrs|fsu|fsu-mirror|fsu-extended")->required();

    // mwis
    auto* mw = app.add_subcommand("mwis", "maximum-weight independent sets of a graph");
    std::string mw_input;
    bool mw_json = false;
    mw->add_option("input", mw_input, "graph/structure JSON file ('-' = stdin)")->required();
    mw->add_flag("--json", mw_json, "emit a JSON report instead of a language file");

    // aut
    auto* au = app.add_subcommand("aut", "automorphism group of a graph");
    std::string au_input;
    au->add_option("input", au_input, "graph/structure JSON file ('-' = stdin)")->required();

    // orbits
    auto* orb = app.add_subcommand("orbits", "orbit decomposition of the MWIS language");
    std::string orb_input, orb_lang;
    orb->add_option("input", orb_input, "graph/structure JSON file ('-' = stdin)")->required();
    orb->add_option("--language", orb_lang, "language file (default: compute MWIS)");

    // fullsym
    auto* fs = app.add_subcommand("fullsym", "fully-symmetric verdict + orbit report");
    std::string fs_input;
    fs->add_option("input", fs_input, "graph/structure JSON file ('-' = stdin)")->required();

    // quotient
    auto* qu = app.add_subcommand("quotient", "clique-condensation quotient graph");
    std::string qu_input;
    bool qu_check = false;
    qu->add_option("input", qu_input, "graph/structure JSON file ('-' = stdin)")->required();
    qu->add_flag("--check-aut", qu_check, "also verify |Aut(G)| == |Aut(G_red)|");

    // tessellate
    auto* te = app.add_subcommand("tessellate", "generate tessellated blockade graphs");
    std::string te_name = "loop", te_boundary = "periodic";
    int te_nx = 2, te_ny = 2;
    bool te_plaquettes = false;
    te->add_option("name", te_name, "loop|singleport|verresen|zeng|stastny")->required();
    te->add_option("--nx", te_nx, "unit cells in x")->required();
    te->add_option("--ny", te_ny, "unit cells in y")->required();
    te->add_option("--boundary", te_boundary, "periodic|open (loop/singleport only)");
    te->add_flag("--plaquettes", te_plaquettes, "include plaquette permutations (loop only)");

    // spectrum
    auto* sp = app.add_subcommand("spectrum", "diagonalize the blockade Hamiltonian");
    std::string sp_input, sp_report, sp_plaq;
    double sp_omega = 0.1, sp_delta = 1.0, sp_plaq_omega = 0.0;
    double sp_u0 = 0.0;
    int sp_levels = 8;
    sp->add_option("input", sp_input, "graph/structure JSON file ('-' = stdin)")->required();
    sp->add_option("--omega", sp_omega, "uniform fluctuation Ω");
    sp->add_option("--delta", sp_delta, "unit detuning Δ")->check(CLI::PositiveNumber);
    sp->add_option("--levels", sp_levels, "number of levels to print");
    sp->add_option("--u0", sp_u0, "finite blockade strength (default: infinite)");
    sp->add_option("--plaquettes", sp_plaq, "JSON file with permutations (list of image arrays)");
    sp->add_option("--plaq-omega", sp_plaq_omega, "plaquette fluctuation ω");
    sp->add_option("--report", sp_report, "write the JSON amplitude report to this file");

    // effective
    auto* ef = app.add_subcommand("effective", "perturbative effective Hamiltonian");
    std::string ef_input;
    double ef_omega = 0.05, ef_delta = 1.0;
    int ef_order = 2;
    ef->add_option("input", ef_input, "graph/structure JSON file ('-' = stdin)")->required();
    ef->add_option("--omega", ef_omega, "uniform fluctuation Ω");
    ef->add_option("--delta", ef_delta, "unit detuning Δ")->check(CLI::PositiveNumber);
    ef->add_option("--order", ef_order, "perturbation order (<= 6)");

    // embed-check
    auto* em = app.add_subcommand("embed-check", "validate the catalog coordinate tables");
    std::string em_name = "all";
    em->add_option("name", em_name, "fsu|fsu-mirror|fsu-extended|all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);  // prints the usage text
        return code == 0 ? 0 : 1;
    }

    try {
        if (*cat) {
            GateSpec g = build_gate(cat_name);
            std::cout << gate_to_json(g).dump(2) << "\n";
            std::cerr << "catalog " << g.name << ": " << g.graph.n << " atoms, "
                      << g.graph.edges.size() << " blockades, |L| = "
                      << g.expected_full_language.size() << "\n";
        } else if (*mw) {
            auto [g, ports] = any_graph_from_json(read_input(mw_input));
            auto res = mwis(g);
            if (mw_json) {
                json j;
                j["max_weight"] = res.max_weight;
                json langj = json::array();
                for (const auto& c : res.language.configs) langj.push_back(c.str());
                j["language"] = langj;
                if (res.independent_count) j["independent_count"] = *res.independent_count;
                std::cout << j.dump(2) << "\n";
            } else {
                std::cout << language_to_text(res.language);
            }
            std::cerr << "mwis: max weight " << res.max_weight << ", " << res.language.size()
                      << " configurations\n";
        } else if (*au) {
            auto [g, ports] = any_graph_from_json(read_input(au_input));
            auto a = automorphism_group(g);
            json j;
            j["n"] = a.n;
            j["order"] = a.order;
            json gens = json::array();
            for (const auto& p : a.generators) gens.push_back(permutation_to_json(p));
            j["generators"] = gens;
            std::cout << j.dump(2) << "\n";
            std::cerr << "aut: order " << a.order << ", " << a.generators.size()
                      << " generators\n";
        } else if (*orb || *fs) {
            std::string input = *orb ? orb_input : fs_input;
            auto [g, ports] = any_graph_from_json(read_input(input));
            auto a = automorphism_group(g);
            Language l;
            if (*orb && !orb_lang.empty())
                l = language_from_text(read_input(orb_lang));
            else
                l = mwis(g).language;
            auto dec = orbit_decomposition(a, l);
            json j;
            j["aut_order"] = a.order;
            j["language_size"] = l.size();
            j["orbit_count"] = dec.orbits.size();
            json orbits = json::array();
            for (const auto& o : dec.orbits) {
                json oj = json::array();
                for (const auto& c : o) oj.push_back(c.str());
                orbits.push_back(oj);
            }
            j["orbits"] = orbits;
            if (*fs) j["fully_symmetric"] = (dec.orbits.size() == 1);
            if (!ports.empty()) {
                PortMap pm{ports};
                json pl = json::array();
                for (const auto& c : restrict_language_to_ports(l, pm).configs)
                    pl.push_back(c.str());
                j["port_language"] = pl;
            }
            std::cout << j.dump(2) << "\n";
            if (*fs)
                std::cerr << "fullsym: " << (dec.orbits.size() == 1 ? "true" : "false") << " ("
                          << dec.orbits.size() << " orbits, |A| = " << a.order
                          << ", |L| = " << l.size() << ")\n";
            else
                std::cerr << "orbits: " << dec.orbits.size() << " orbits\n";
        } else if (*qu) {
            auto [g, ports] = any_graph_from_json(read_input(qu_input));
            auto q = quotient_by_cliques(g);
            json j;
            j["classes"] = q.classes;
            j["quotient"] = json::parse(to_json(q.quotient));
            if (qu_check) {
                auto a1 = automorphism_group(g);
                auto a2 = automorphism_group(q.quotient);
                j["aut_order"] = a1.order;
                j["aut_order_reduced"] = a2.order;
                j["aut_preserved"] = (a1.order == a2.order);
            }
            std::cout << j.dump(2) << "\n";
            std::cerr << "quotient: " << g.n << " -> " << q.quotient.n << " vertices\n";
        } else if (*te) {
            Boundary b = parse_boundary(te_boundary);
            json j;
            if (te_name == "loop") {
                auto ls = build_loop_structure(te_nx, te_ny, b);
                j["graph"] = json::parse(to_json(ls.graph));
                j["num_atoms"] = ls.lattice.num_atoms;
                j["num_edges"] = ls.lattice.edges.size();
                j["num_plaquettes"] = ls.lattice.plaquettes.size();
                if (te_plaquettes) {
                    json pl = json::array();
                    for (std::size_t p = 0; p < ls.lattice.plaquettes.size(); ++p) {
                        auto pp = plaquette_automorphism(ls, static_cast<int>(p));
                        json pj;
                        pj["plaquette"] = pp.plaquette;
                        pj["permutation"] = permutation_to_json(pp.permutation);
                        pj["edge_swaps"] = pp.edge_swaps;
                        json vf = json::array();
                        for (auto [v, alpha] : pp.vertex_factors) vf.push_back({v, alpha});
                        pj["vertex_factors"] = vf;
                        pl.push_back(pj);
                    }
                    j["plaquette_permutations"] = pl;
                }
                std::cerr << "tessellate loop " << te_nx << "x" << te_ny << ": "
                          << ls.lattice.num_atoms << " atoms\n";
            } else if (te_name == "singleport") {
                std::vector<int> ports;
                auto g = build_singleport_xor_tessellation(te_nx, te_ny, b, &ports);
                j = json::parse(to_json(g));
                j["ports"] = ports;
                std::cerr << "tessellate singleport: " << g.n << " atoms\n";
            } else {
                std::vector<int> ports;
                auto g = build_literature_model(te_name, te_nx, te_ny, &ports);
                j = json::parse(to_json(g));
                if (!ports.empty()) j["ports"] = ports;
                std::cerr << "tessellate " << te_name << ": " << g.n << " atoms\n";
            }
            std::cout << j.dump(2) << "\n";
        } else if (*sp) {
            auto [g, ports] = any_graph_from_json(read_input(sp_input));
            HamiltonianSpec spec;
            spec.graph = g;
            spec.omega = sp_omega;
            spec.delta_unit = sp_delta;
            spec.threads = threads;
            spec.max_basis = max_basis_from_env();
            if (sp->count("--u0")) spec.u0 = sp_u0;
            if (!sp_plaq.empty()) {
                json pj = json::parse(read_input(sp_plaq));
                for (const auto& arr : pj)
                    spec.plaquette_perms.push_back(Permutation{arr.get<std::vector<int>>()});
                spec.plaquette_omega = sp_plaq_omega;
            }
            Language logical = mwis(g).language;
            if (!spec.plaquette_perms.empty()) {
                auto flux = flux_sector_labels(spec);
                std::vector<double> shifted = flux.shifted_energies;
                std::vector<std::vector<int>> fl = flux.flux;
                // present levels sorted by the shifted energies
                std::vector<std::size_t> idx(shifted.size());
                for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
                std::stable_sort(idx.begin(), idx.end(),
                                 [&](std::size_t x, std::size_t y) { return shifted[x] < shifted[y]; });
                std::vector<double> energies;
                std::vector<std::vector<int>> flux_sorted;
                std::size_t count = std::min<std::size_t>(sp_levels, shifted.size());
                for (std::size_t r = 0; r < count; ++r) {
                    energies.push_back(shifted[idx[r]]);
                    flux_sorted.push_back(fl[idx[r]]);
                }
                print_csv_spectrum(energies, flux_sorted, 1e-9 * sp_delta);
            } else {
                auto rep = ground_state_analysis(spec, logical, sp_levels);
                print_csv_spectrum(rep.eigenvalues, {}, 1e-9 * sp_delta);
                json j;
                j["gap"] = rep.gap;
                j["unique_ground"] = rep.unique_ground;
                j["logical_weight"] = rep.logical_weight;
                j["equal_weight"] = rep.equal_weight;
                j["max_relative_spread"] = rep.max_relative_spread;
                json amps = json::object();
                for (const auto& [c, amp] : rep.logical_amplitudes) amps[c.str()] = amp;
                j["logical_amplitudes"] = amps;
                if (!sp_report.empty()) {
                    std::ofstream out(sp_report);
                    out << j.dump(2) << "\n";
                } else {
                    std::cerr << j.dump(2) << "\n";
                }
            }
        } else if (*ef) {
            auto [g, ports] = any_graph_from_json(read_input(ef_input));
            HamiltonianSpec spec;
            spec.graph = g;
            spec.omega = ef_omega;
            spec.delta_unit = ef_delta;
            Language logical = mwis(g).language;
            auto eff = effective_hamiltonian(spec, logical, ef_order);
            json j;
            j["order"] = eff.order;
            j["removed_shift"] = eff.removed_shift;
            json basis = json::array();
            for (const auto& c : eff.logical.configs) basis.push_back(c.str());
            j["basis"] = basis;
            json rows = json::array();
            for (int a = 0; a < eff.matrix.n; ++a) {
                json row = json::array();
                for (int b = 0; b < eff.matrix.n; ++b) row.push_back(eff.matrix.at(a, b));
                rows.push_back(row);
            }
            j["matrix"] = rows;
            std::cout << j.dump(2) << "\n";
            std::cerr << "effective: order " << eff.order << ", dim " << eff.matrix.n << "\n";
        } else if (*em) {
            json j = json::array();
            auto check_one = [&](const std::string& name) {
                GateSpec g = build_gate(name);
                json r;
                r["name"] = name;
                r["margin"] = blockade_margin(*g.structure);
                r["margin_ok"] = blockade_margin(*g.structure) > 1e-3;
                r["n"] = g.graph.n;
                r["edges"] = g.graph.edges.size();
                j.push_back(r);
            };
            if (em_name == "all") {
                check_one("fsu");
                check_one("fsu-mirror");
                check_one("fsu-extended");
            } else {
                check_one(em_name);
            }
            bool all_ok = true;
            for (const auto& r : j)
                if (!r.at("margin_ok").get<bool>()) all_ok = false;
            std::cout << j.dump(2) << "\n";
            std::cerr << "embed-check: " << (all_ok ? "ok" : "FAILED") << "\n";
            if (!all_ok) return 1;
        }
    } catch (const ResourceLimitError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
