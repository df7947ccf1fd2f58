#pragma once

#include "qhforge/cohomology.hpp"
#include "qhforge/curve_class.hpp"

#include <string>
#include <utility>
#include <vector>

namespace qhforge {

/// One component of a stable-map stratum: genus, curve class, the marked
/// points it carries, and whether the map is constant on it.
struct GraphVertex {
    int genus = 0;
    CurveClass cls;
    std::vector<int> marks;  // sorted labels from {1..k}
    bool ghost = false;
};

/// Combinatorial type of a stable map: decorated graph with one vertex per
/// component and one edge per node.
struct DualGraph {
    std::vector<GraphVertex> vertices;
    std::vector<std::pair<int, int>> edges;  // (a, b) with a <= b; multiedges kept
    int total_genus = 0;
    int total_marks = 0;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }

    bool connected() const;
    int first_betti() const;  // edges - vertices + components

    /// Marked points plus incident edge ends (a self-node counts twice).
    int special_points(int v) const;

    CurveClass total_class(int rank) const;

    /// Isomorphism-invariant encoding; decorations participate. Trees use a
    /// rooted canonical form, anything else a grouped permutation search.
    std::string canonical_encoding() const;
};

/// Empty result means the graph is a valid stable stratum type.
std::vector<std::string> stability_violations(const ClassLattice& lattice, const DualGraph& g);

bool check_stability(const ClassLattice& lattice, const DualGraph& g);

/// Ghost components never outnumber the non-constant ones.
bool ghost_bound(const DualGraph& g);

/// 2 c_1(A) + 2(3-n)(g-1) + 2k + dim X + dim E.
long expected_dimension(long chern_a, int g, int k, int n, int dim_x, int dim_e);
long expected_dimension(const ClassLattice& lattice, const CurveClass& a, int g, int k, int n,
                        int dim_x, int dim_e);

/// All stable stratum types for class a with k marked points, genus 0, up to
/// decorated-graph isomorphism, sorted by canonical encoding. Finiteness
/// comes from the positive-energy decompositions of a together with an a
/// priori cap on the number of ghosts.
std::vector<DualGraph> enumerate_strata(const RingModel& m, const CurveClass& a, int g, int k);

std::string graph_str(const DualGraph& g);

}  // namespace qhforge
