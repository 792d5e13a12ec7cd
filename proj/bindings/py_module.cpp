// Python bindings for the main blockadelab operations. Graphs travel as
// (n, edges, weights) triples, configurations and languages as bit strings;
// reports come back as plain dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blockadelab/catalog.hpp"
#include "blockadelab/combinatorics.hpp"
#include "blockadelab/core.hpp"
#include "blockadelab/spectra.hpp"
#include "blockadelab/symmetry.hpp"
#include "blockadelab/tessellation.hpp"

namespace py = pybind11;
using namespace blockadelab;

namespace {

BlockadeGraph make_graph(int n, const std::vector<std::pair<int, int>>& edges,
                         const std::vector<int>& weights) {
    BlockadeGraph g;
    g.n = n;
    g.edges = edges;
    g.weights = weights;
    g.normalize();
    g.validate();
    return g;
}

std::vector<std::string> lang_strings(const Language& l) {
    std::vector<std::string> out;
    for (const auto& c : l.configs) out.push_back(c.str());
    return out;
}

Language lang_from_strings(const std::vector<std::string>& rows) {
    std::vector<Configuration> v;
    for (const auto& r : rows) v.push_back(Configuration::from_string(r));
    return Language::from_unsorted(std::move(v));
}

py::dict graph_dict(const BlockadeGraph& g) {
    py::dict d;
    d["n"] = g.n;
    d["edges"] = g.edges;
    d["weights"] = g.weights;
    return d;
}

py::dict gate_dict(const GateSpec& gate) {
    py::dict d = graph_dict(gate.graph);
    d["name"] = gate.name;
    d["ports"] = gate.ports.ports;
    d["port_language"] = lang_strings(gate.expected_port_language);
    d["full_language"] = lang_strings(gate.expected_full_language);
    if (gate.structure) {
        std::vector<std::vector<double>> pos;
        std::vector<int> det;
        for (const auto& a : gate.structure->atoms) {
            pos.push_back(a.pos);
            det.push_back(a.detuning);
        }
        d["positions"] = pos;
        d["detunings"] = det;
        d["blockade_radius"] = gate.structure->blockade_radius;
    }
    return d;
}

Boundary boundary_of(const std::string& b) {
    if (b == "periodic") return Boundary::periodic;
    if (b == "open" || b == "open-rough") return Boundary::open_rough;
    throw StructuralError("boundary must be 'periodic' or 'open'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "blockade structures: ground languages, automorphisms, spectra";

    py::register_exception<StructuralError>(m, "StructuralError");
    py::register_exception<ResourceLimitError>(m, "ResourceLimitError");

    m.def("build_gate", [](const std::string& name) { return gate_dict(build_gate(name)); },
          py::arg("name"), "catalog structure: not|nor|or|icrs|fsu|fsu-mirror|fsu-extended");

    m.def(
        "blockade_graph",
        [](int dimension, double radius, const std::vector<std::vector<double>>& positions,
           const std::vector<int>& detunings) {
            BlockadeStructure s;
            s.dimension = dimension;
            s.blockade_radius = radius;
            for (std::size_t i = 0; i < positions.size(); ++i)
                s.atoms.push_back({static_cast<int>(i), positions[i], detunings[i]});
            return graph_dict(blockade_graph_from_structure(s));
        },
        py::arg("dimension"), py::arg("blockade_radius"), py::arg("positions"),
        py::arg("detunings"));

    m.def(
        "mwis",
        [](int n, const std::vector<std::pair<int, int>>& edges, const std::vector<int>& weights) {
            auto res = mwis(make_graph(n, edges, weights));
            py::dict d;
            d["max_weight"] = res.max_weight;
            d["language"] = lang_strings(res.language);
            if (res.independent_count) d["independent_count"] = *res.independent_count;
            return d;
        },
        py::arg("n"), py::arg("edges"), py::arg("weights"));

    m.def("restrict_to_ports",
          [](const std::vector<std::string>& language, const std::vector<int>& ports) {
              return lang_strings(restrict_language_to_ports(lang_from_strings(language),
                                                             PortMap{ports}));
          });

    m.def(
        "automorphism_group",
        [](int n, const std::vector<std::pair<int, int>>& edges, const std::vector<int>& weights) {
            auto a = automorphism_group(make_graph(n, edges, weights));
            py::dict d;
            d["order"] = a.order;
            std::vector<std::vector<int>> gens;
            for (const auto& p : a.generators) gens.push_back(p.image);
            d["generators"] = gens;
            return d;
        },
        py::arg("n"), py::arg("edges"), py::arg("weights"));

    m.def(
        "is_fully_symmetric",
        [](int n, const std::vector<std::pair<int, int>>& edges, const std::vector<int>& weights) {
            auto rep = is_fully_symmetric(make_graph(n, edges, weights));
            py::dict d;
            d["fully_symmetric"] = rep.fully_symmetric;
            d["aut_order"] = rep.group.order;
            d["max_weight"] = rep.mwis.max_weight;
            std::vector<std::vector<std::string>> orbits;
            for (const auto& o : rep.orbits.orbits) {
                std::vector<std::string> os;
                for (const auto& c : o) os.push_back(c.str());
                orbits.push_back(std::move(os));
            }
            d["orbits"] = orbits;
            return d;
        },
        py::arg("n"), py::arg("edges"), py::arg("weights"));

    m.def(
        "quotient_by_cliques",
        [](int n, const std::vector<std::pair<int, int>>& edges, const std::vector<int>& weights) {
            auto q = quotient_by_cliques(make_graph(n, edges, weights));
            py::dict d;
            d["classes"] = q.classes;
            d["quotient"] = graph_dict(q.quotient);
            return d;
        },
        py::arg("n"), py::arg("edges"), py::arg("weights"));

    m.def(
        "loop_structure",
        [](int nx, int ny, const std::string& boundary) {
            auto ls = build_loop_structure(nx, ny, boundary_of(boundary));
            py::dict d = graph_dict(ls.graph);
            d["num_plaquettes"] = ls.lattice.plaquettes.size();
            std::vector<int> light, dark;
            for (const auto& e : ls.lattice.edges) {
                light.push_back(e.light_atom);
                dark.push_back(e.dark_atom);
            }
            d["light_atoms"] = light;
            d["dark_atoms"] = dark;
            return d;
        },
        py::arg("nx"), py::arg("ny"), py::arg("boundary") = "periodic");

    m.def(
        "loop_language",
        [](int nx, int ny, const std::string& boundary) {
            auto ls = build_loop_structure(nx, ny, boundary_of(boundary));
            return lang_strings(loop_language(ls));
        },
        py::arg("nx"), py::arg("ny"), py::arg("boundary") = "periodic");

    m.def(
        "plaquette_permutation",
        [](int nx, int ny, const std::string& boundary, int p) {
            auto ls = build_loop_structure(nx, ny, boundary_of(boundary));
            return plaquette_automorphism(ls, p).permutation.image;
        },
        py::arg("nx"), py::arg("ny"), py::arg("boundary"), py::arg("plaquette"));

    m.def(
        "literature_model",
        [](const std::string& name, int nx, int ny) {
            std::vector<int> ports;
            auto g = build_literature_model(name, nx, ny, &ports);
            py::dict d = graph_dict(g);
            d["ports"] = ports;
            return d;
        },
        py::arg("name"), py::arg("nx"), py::arg("ny"));

    m.def(
        "ground_state_analysis",
        [](int n, const std::vector<std::pair<int, int>>& edges, const std::vector<int>& weights,
           double omega, double delta, std::optional<std::vector<std::string>> logical,
           std::optional<double> u0) {
            HamiltonianSpec spec;
            spec.graph = make_graph(n, edges, weights);
            spec.omega = omega;
            spec.delta_unit = delta;
            spec.u0 = u0;
            Language l = logical ? lang_from_strings(*logical) : mwis(spec.graph).language;
            auto rep = ground_state_analysis(spec, l);
            py::dict d;
            d["eigenvalues"] = rep.eigenvalues;
            d["gap"] = rep.gap;
            d["unique_ground"] = rep.unique_ground;
            d["logical_weight"] = rep.logical_weight;
            d["equal_weight"] = rep.equal_weight;
            d["max_relative_spread"] = rep.max_relative_spread;
            py::dict amps;
            for (const auto& [c, amp] : rep.logical_amplitudes) amps[py::str(c.str())] = amp;
            d["logical_amplitudes"] = amps;
            return d;
        },
        py::arg("n"), py::arg("edges"), py::arg("weights"), py::arg("omega"),
        py::arg("delta") = 1.0, py::arg("logical") = std::nullopt, py::arg("u0") = std::nullopt);

    m.def(
        "effective_hamiltonian",
        [](int n, const std::vector<std::pair<int, int>>& edges, const std::vector<int>& weights,
           double omega, int order) {
            HamiltonianSpec spec;
            spec.graph = make_graph(n, edges, weights);
            spec.omega = omega;
            spec.delta_unit = 1.0;
            auto eff = effective_hamiltonian(spec, mwis(spec.graph).language, order);
            py::dict d;
            d["basis"] = lang_strings(eff.logical);
            std::vector<std::vector<double>> rows;
            for (int a = 0; a < eff.matrix.n; ++a) {
                std::vector<double> row;
                for (int b = 0; b < eff.matrix.n; ++b) row.push_back(eff.matrix.at(a, b));
                rows.push_back(std::move(row));
            }
            d["matrix"] = rows;
            d["removed_shift"] = eff.removed_shift;
            return d;
        },
        py::arg("n"), py::arg("edges"), py::arg("weights"), py::arg("omega"), py::arg("order"));
}
