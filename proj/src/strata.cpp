#include "qhforge/strata.hpp"

#include "qhforge/errors.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace qhforge {

namespace {

std::vector<std::vector<int>> adjacency(const DualGraph& g) {
    std::vector<std::vector<int>> adj(g.vertex_count());
    for (const auto& [a, b] : g.edges) {
        adj[a].push_back(b);
        if (a != b) adj[b].push_back(a);
    }
    return adj;
}

std::string vertex_decoration(const GraphVertex& v) {
    std::ostringstream os;
    os << "g" << v.genus << (v.ghost ? "*" : "") << "c[";
    for (size_t i = 0; i < v.cls.coords.size(); ++i) os << (i ? "," : "") << v.cls.coords[i];
    os << "]m[";
    for (size_t i = 0; i < v.marks.size(); ++i) os << (i ? "," : "") << v.marks[i];
    os << "]";
    return os.str();
}

// Rooted canonical form for decorated trees.
std::string rooted_encoding(const DualGraph& g, const std::vector<std::vector<int>>& adj, int v,
                            int parent) {
    std::vector<std::string> children;
    for (int w : adj[v])
        if (w != parent) children.push_back(rooted_encoding(g, adj, w, v));
    std::sort(children.begin(), children.end());
    std::string out = "(" + vertex_decoration(g.vertices[v]);
    for (const auto& c : children) out += c;
    out += ")";
    return out;
}

// Centers of a tree: the one or two vertices left after repeatedly removing
// leaves.
std::vector<int> tree_centers(const DualGraph& g) {
    const int n = g.vertex_count();
    if (n == 1) return {0};
    auto adj = adjacency(g);
    std::vector<int> degree(n);
    for (int v = 0; v < n; ++v) degree[v] = static_cast<int>(adj[v].size());
    std::vector<int> layer;
    std::vector<bool> removed(n, false);
    for (int v = 0; v < n; ++v)
        if (degree[v] <= 1) layer.push_back(v);
    int remaining = n;
    while (remaining > 2) {
        std::vector<int> next;
        for (int v : layer) {
            removed[v] = true;
            --remaining;
            for (int w : adj[v])
                if (!removed[w] && --degree[w] == 1) next.push_back(w);
        }
        layer = std::move(next);
    }
    std::sort(layer.begin(), layer.end());
    return layer;
}

std::string permutation_encoding(const DualGraph& g, const std::vector<int>& perm) {
    // perm[new] = old
    std::vector<int> pos(perm.size());
    for (size_t i = 0; i < perm.size(); ++i) pos[perm[i]] = static_cast<int>(i);
    std::ostringstream os;
    for (size_t i = 0; i < perm.size(); ++i) os << vertex_decoration(g.vertices[perm[i]]) << ";";
    std::vector<std::pair<int, int>> edges;
    for (auto [a, b] : g.edges) {
        int x = pos[a], y = pos[b];
        edges.emplace_back(std::min(x, y), std::max(x, y));
    }
    std::sort(edges.begin(), edges.end());
    for (auto [a, b] : edges) os << a << "-" << b << ";";
    return os.str();
}

}  // namespace

bool DualGraph::connected() const {
    const int n = vertex_count();
    if (n == 0) return false;
    auto adj = adjacency(*this);
    std::vector<bool> seen(n, false);
    std::vector<int> stack = {0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                ++count;
                stack.push_back(w);
            }
    }
    return count == n;
}

int DualGraph::first_betti() const {
    const int n = vertex_count();
    auto adj = adjacency(*this);
    std::vector<bool> seen(n, false);
    int components = 0;
    for (int start = 0; start < n; ++start) {
        if (seen[start]) continue;
        ++components;
        std::vector<int> stack = {start};
        seen[start] = true;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj[v])
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
    }
    return edge_count() - n + components;
}

int DualGraph::special_points(int v) const {
    int s = static_cast<int>(vertices[v].marks.size());
    for (const auto& [a, b] : edges) {
        if (a == v) ++s;
        if (b == v) ++s;
    }
    return s;
}

CurveClass DualGraph::total_class(int rank) const {
    CurveClass total = CurveClass::zero(rank);
    for (const auto& v : vertices) total = total + v.cls;
    return total;
}

std::string DualGraph::canonical_encoding() const {
    const int n = vertex_count();
    if (n == 0) return "()";
    const bool tree = connected() && edge_count() == n - 1;
    if (tree) {
        auto adj = adjacency(*this);
        auto centers = tree_centers(*this);
        std::string best;
        for (int c : centers) {
            std::string e = rooted_encoding(*this, adj, c, -1);
            if (best.empty() || e < best) best = e;
        }
        return best;
    }
    // General case: plain minimum over all vertex orders. Only exercised off
    // trees, at small sizes.
    if (n > 8) throw std::invalid_argument("canonical form limited to 8 vertices off trees");
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::string best;
    do {
        std::string e = permutation_encoding(*this, perm);
        if (best.empty() || e < best) best = e;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<std::string> stability_violations(const ClassLattice& lattice, const DualGraph& g) {
    std::vector<std::string> out;
    const int n = g.vertex_count();
    if (n == 0) {
        out.push_back("empty graph");
        return out;
    }
    if (!g.connected()) out.push_back("graph not connected");

    std::vector<int> all_marks;
    int genus_sum = 0;
    for (int v = 0; v < n; ++v) {
        const auto& vert = g.vertices[v];
        genus_sum += vert.genus;
        if (vert.genus < 0) out.push_back("vertex " + std::to_string(v) + ": negative genus");
        all_marks.insert(all_marks.end(), vert.marks.begin(), vert.marks.end());
        if (vert.cls.rank() != lattice.rank()) {
            out.push_back("vertex " + std::to_string(v) + ": class rank mismatch");
            continue;
        }
        if (!vert.cls.effective())
            out.push_back("vertex " + std::to_string(v) + ": class outside the effective cone");
        if (vert.ghost) {
            if (!vert.cls.is_zero())
                out.push_back("vertex " + std::to_string(v) + ": ghost with nonzero class");
            if (vert.genus != 0)
                out.push_back("vertex " + std::to_string(v) + ": ghost with positive genus");
            if (g.special_points(v) < 3)
                out.push_back("vertex " + std::to_string(v) +
                              ": ghost with fewer than 3 special points");
        } else if (vert.cls.effective() && !(lattice.energy(vert.cls) > 0)) {
            out.push_back("vertex " + std::to_string(v) + ": non-ghost with zero energy");
        }
    }
    std::sort(all_marks.begin(), all_marks.end());
    std::vector<int> expected(g.total_marks);
    std::iota(expected.begin(), expected.end(), 1);
    if (all_marks != expected) out.push_back("marks do not partition {1..k}");
    if (g.connected() && genus_sum + g.first_betti() != g.total_genus)
        out.push_back("vertex genera and loops do not add up to the total genus");
    for (const auto& [a, b] : g.edges)
        if (a < 0 || b < 0 || a >= n || b >= n) out.push_back("edge endpoint out of range");
    return out;
}

bool check_stability(const ClassLattice& lattice, const DualGraph& g) {
    return stability_violations(lattice, g).empty();
}

bool ghost_bound(const DualGraph& g) {
    int ghosts = 0, rest = 0;
    for (const auto& v : g.vertices) (v.ghost ? ghosts : rest)++;
    return ghosts <= rest;
}

long expected_dimension(long chern_a, int g, int k, int n, int dim_x, int dim_e) {
    return 2 * chern_a + 2 * (3 - n) * (g - 1) + 2 * k + dim_x + dim_e;
}

long expected_dimension(const ClassLattice& lattice, const CurveClass& a, int g, int k, int n,
                        int dim_x, int dim_e) {
    return expected_dimension(lattice.chern(a), g, k, n, dim_x, dim_e);
}

namespace {

// All decompositions of `a` into an unordered multiset of effective classes
// with positive energy, each multiset listed in nonincreasing class order.
void decompositions_rec(const ClassLattice& lattice, const CurveClass& rest,
                        const std::vector<CurveClass>& pieces, size_t max_piece,
                        std::vector<CurveClass>& current,
                        std::vector<std::vector<CurveClass>>& out) {
    if (rest.is_zero()) {
        out.push_back(current);
        return;
    }
    for (size_t i = 0; i < max_piece; ++i) {
        auto remaining = rest.minus_effective(pieces[i]);
        if (!remaining) continue;
        current.push_back(pieces[i]);
        decompositions_rec(lattice, *remaining, pieces, i + 1, current, out);
        current.pop_back();
    }
}

std::vector<std::vector<CurveClass>> class_decompositions(const ClassLattice& lattice,
                                                          const CurveClass& a) {
    std::vector<CurveClass> pieces;
    for (const auto& c : lattice.effective_classes_up_to(lattice.energy(a)))
        if (!c.is_zero() && a.minus_effective(c)) pieces.push_back(c);
    // Nonincreasing order keeps multisets unique.
    std::reverse(pieces.begin(), pieces.end());
    std::vector<std::vector<CurveClass>> out;
    std::vector<CurveClass> current;
    decompositions_rec(lattice, a, pieces, pieces.size(), current, out);
    return out;
}

std::vector<std::vector<std::pair<int, int>>> labeled_trees(int n) {
    std::vector<std::vector<std::pair<int, int>>> out;
    if (n == 1) {
        out.push_back({});
        return out;
    }
    if (n == 2) {
        out.push_back({{0, 1}});
        return out;
    }
    // Decode every Pruefer sequence of length n-2.
    std::vector<int> seq(n - 2, 0);
    while (true) {
        std::vector<int> degree(n, 1);
        for (int s : seq) ++degree[s];
        std::vector<std::pair<int, int>> edges;
        std::set<int> leaves;
        for (int v = 0; v < n; ++v)
            if (degree[v] == 1) leaves.insert(v);
        std::vector<int> work = seq;
        for (int s : work) {
            int leaf = *leaves.begin();
            leaves.erase(leaves.begin());
            edges.emplace_back(std::min(leaf, s), std::max(leaf, s));
            if (--degree[s] == 1) leaves.insert(s);
        }
        int u = *leaves.begin(), v = *std::next(leaves.begin());
        edges.emplace_back(std::min(u, v), std::max(u, v));
        out.push_back(std::move(edges));

        int i = n - 3;
        while (i >= 0 && seq[i] == n - 1) seq[i--] = 0;
        if (i < 0) break;
        ++seq[i];
    }
    return out;
}

}  // namespace

std::vector<DualGraph> enumerate_strata(const RingModel& m, const CurveClass& a, int g, int k) {
    if (g != 0) throw ScopeError("stratum enumeration is implemented for genus 0 only");
    if (!a.effective()) throw std::invalid_argument("class outside the effective cone");
    if (k < 0) throw std::invalid_argument("negative number of marks");
    const ClassLattice& lattice = *m.lattice();
    if (a.rank() != lattice.rank()) throw LatticeMismatch("class rank does not match model");

    std::map<std::string, DualGraph> found;

    std::vector<std::vector<CurveClass>> decs;
    if (a.is_zero()) {
        if (k >= 3) decs.push_back({});  // purely ghost strata
    } else {
        decs = class_decompositions(lattice, a);
    }

    for (const auto& parts : decs) {
        const int p = static_cast<int>(parts.size());
        // Every ghost needs 3 special points, which caps their number in a
        // tree: q <= p + k - 2 (and q <= k - 2 when there are no moving
        // components at all).
        int q_max = p == 0 ? std::max(0, k - 2) : std::max(0, p + k - 2);
        int q_min = p == 0 ? 1 : 0;
        for (int q = q_min; q <= q_max; ++q) {
            const int nv = p + q;
            if (nv == 0) continue;
            if (nv > 12) throw std::invalid_argument("stratum graphs limited to 12 vertices");
            auto trees = labeled_trees(nv);
            // Distinct placements of the class multiset on vertices 0..p-1.
            std::vector<std::vector<CurveClass>> placements;
            {
                std::vector<CurveClass> arrangement = parts;
                std::sort(arrangement.begin(), arrangement.end());
                do placements.push_back(arrangement);
                while (std::next_permutation(arrangement.begin(), arrangement.end()));
            }
            const long mark_assignments = [&] {
                long t = 1;
                for (int i = 0; i < k; ++i) t *= nv;
                return t;
            }();
            for (const auto& edges : trees) {
                for (const auto& placement : placements) {
                    for (long code = 0; code < mark_assignments; ++code) {
                        DualGraph graph;
                        graph.total_genus = 0;
                        graph.total_marks = k;
                        graph.edges = edges;
                        graph.vertices.resize(nv);
                        for (int v = 0; v < nv; ++v) {
                            auto& vert = graph.vertices[v];
                            vert.genus = 0;
                            if (v < p) {
                                vert.cls = placement[v];
                                vert.ghost = false;
                            } else {
                                vert.cls = CurveClass::zero(lattice.rank());
                                vert.ghost = true;
                            }
                        }
                        long c = code;
                        for (int mark = 1; mark <= k; ++mark) {
                            graph.vertices[c % nv].marks.push_back(mark);
                            c /= nv;
                        }
                        if (!check_stability(lattice, graph)) continue;
                        found.emplace(graph.canonical_encoding(), std::move(graph));
                    }
                }
            }
        }
    }

    std::vector<DualGraph> out;
    out.reserve(found.size());
    for (auto& [key, graph] : found) out.push_back(std::move(graph));
    return out;
}

std::string graph_str(const DualGraph& g) {
    std::ostringstream os;
    for (int v = 0; v < g.vertex_count(); ++v) {
        const auto& vert = g.vertices[v];
        os << "v" << v << (vert.ghost ? " ghost" : "") << " class=[";
        for (int i = 0; i < vert.cls.rank(); ++i) os << (i ? "," : "") << vert.cls.coords[i];
        os << "]";
        if (!vert.marks.empty()) {
            os << " marks={";
            for (size_t i = 0; i < vert.marks.size(); ++i) os << (i ? "," : "") << vert.marks[i];
            os << "}";
        }
        if (v + 1 < g.vertex_count()) os << "  ";
    }
    if (!g.edges.empty()) {
        os << "  edges:";
        for (const auto& [x, y] : g.edges) os << " " << x << "-" << y;
    }
    return os.str();
}

}  // namespace qhforge
