#pragma once

// Named gate structures (NOT, NOR, OR, ICRS, FSU and its link-extended
// variant) and the amalgamation operator. Edge sets and detunings that are
// only figure-encoded in the source material are frozen here; the test suite
// re-derives them with exhaustive search oracles.

#include <optional>
#include <string>

#include "blockadelab/core.hpp"

namespace blockadelab {

struct GateSpec {
    std::string name;
    BlockadeGraph graph;
    std::optional<BlockadeStructure> structure;  // present when coordinates exist
    PortMap ports;
    Language expected_port_language;  // port-level truth table
    Language expected_full_language;  // including ancillas

    // mwis(graph) must equal expected_full_language and restrict to
    // expected_port_language; throws StructuralError otherwise.
    void self_validate() const;
};

// Two equally detuned atoms in blockade; language {01, 10}.
GateSpec build_not();

// Five atoms, ports (A,B,Q) = (0,1,2) with detunings (1,1,2), two 1Δ
// ancillas; full language {00100, 01001, 10010, 11000}.
GateSpec build_nor();

// Eight atoms: ports (A,B,Q,R) = 0..3 at 1Δ, four 3Δ ancillas forming a K4;
// the inverted crossing, port language {0011, 0110, 1001, 1100}.
GateSpec build_icrs();

// Ten atoms from the unit-ball coordinate table: a 4Δ tetrahedron plus six 1Δ
// wings in three logically inverted antipodal pairs. Ports 4..9 are the wings
// (A, B, C, Abar, Bbar, Cbar); (A,B,C) carry the even-parity (XOR) triple.
// mirror = true reflects the coordinates about the x = 0 plane.
GateSpec build_fsu(bool mirror = false);

// 22-atom extension of the FSU: every wing continues through a 2Δ bridge to a
// 1Δ outer port over links of equal length (unit-ball coordinates).
GateSpec build_fsu_extended();

GateSpec build_gate(const std::string& name);  // not|nor|or|icrs|fsu|fsu-mirror|fsu-extended

// Wing/tetrahedron index helpers for the FSU builders.
struct FsuLayout {
    static constexpr int tetra[4] = {0, 1, 2, 3};
    static constexpr int wing_a = 4, wing_b = 5, wing_c = 6;
    static constexpr int wing_abar = 7, wing_bbar = 8, wing_cbar = 9;
};

// Joins two structures by identifying atom pairs (one of a, one of b) and
// summing their detunings; edge sets are unioned and the expected language is
// recomputed from scratch. Identification must be injective on both sides.
GateSpec amalgamate(const GateSpec& a, const GateSpec& b,
                    const std::vector<std::pair<int, int>>& identify,
                    const std::string& name = "amalgam");

// NOR with a NOT glued to its output port; port language {000, 011, 101, 111}.
GateSpec build_or();

}  // namespace blockadelab
