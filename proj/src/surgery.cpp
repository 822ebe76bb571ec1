#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "cuspforge/surface.hpp"
#include "surface_local.hpp"

namespace cuspforge {

namespace local {

int common_vertex(int e1, int e2) {
    if (e1 == e2) return -1;
    for (int a : edge_ends()[ix(e1)])
        for (int b : edge_ends()[ix(e2)])
            if (a == b) return a;
    return -1;
}

std::vector<Arc> disc_arcs(DiscKind kind, int type, const std::array<int, 6>& corner, int owner) {
    std::vector<Arc> out;
    for (int f = 0; f < 4; ++f) {
        int v = disc_arc_vertex(kind, type, f);
        if (v < 0) continue;
        int us[2], k = 0;
        for (int u = 0; u < 4; ++u)
            if (u != v && u != f) us[k++] = u;
        int e0 = edge_index(v, us[0]), e1 = edge_index(v, us[1]);
        out.push_back({f, e0, e1, corner[ix(e0)], corner[ix(e1)], owner});
    }
    return out;
}

double circle_pos(int face, int edge, int rank, int count) {
    int vs[3], k = 0;
    for (int v = 0; v < 4; ++v)
        if (v != face) vs[k++] = v;
    double t = (rank + 1.0) / (count + 1.0);
    auto [lo, hi] = edge_ends()[ix(edge)];
    if (lo == vs[0] && hi == vs[1]) return t;
    if (lo == vs[1] && hi == vs[2]) return 1 + t;
    return 3 - t;
}

bool interleaved(double a1, double a2, double b1, double b2) {
    if (a1 > a2) std::swap(a1, a2);
    bool in1 = a1 < b1 && b1 < a2, in2 = a1 < b2 && b2 < a2;
    return in1 != in2;
}

std::array<Arc, 2> smooth(const Arc& A, const Arc& B, int choice) {
    auto lohi = [](const Arc& X) {
        return X.pa < X.pb ? std::array<std::pair<int, int>, 2>{{{X.pa, X.ea}, {X.pb, X.eb}}}
                           : std::array<std::pair<int, int>, 2>{{{X.pb, X.eb}, {X.pa, X.ea}}};
    };
    auto a = lohi(A), b = lohi(B);
    auto mk = [&](std::pair<int, int> x, std::pair<int, int> y) { return Arc{A.face, x.second, y.second, x.first, y.first, -1}; };
    if (choice == 0) return {mk(a[0], b[0]), mk(a[1], b[1])};
    return {mk(a[0], b[1]), mk(a[1], b[0])};
}

int circle_choice(const Arc& A, const Arc& B, int choice, const std::array<double, 4>& pos) {
    std::array<std::pair<double, int>, 4> pts{{{pos[0], A.pa}, {pos[1], A.pb}, {pos[2], B.pa}, {pos[3], B.pb}}};
    std::sort(pts.begin(), pts.end());
    auto s = smooth(A, B, choice);
    std::set<int> first{s[0].pa, s[0].pb}, adj{pts[0].second, pts[1].second}, adj2{pts[2].second, pts[3].second};
    return (first == adj || first == adj2) ? 0 : 1;
}

std::optional<std::vector<std::vector<Arc>>> trace(const std::vector<Arc>& arcs) {
    std::map<int, std::vector<int>> at;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        at[arcs[i].pa].push_back(static_cast<int>(i));
        at[arcs[i].pb].push_back(static_cast<int>(i));
    }
    for (const auto& [p, v] : at)
        if (v.size() != 2) return std::nullopt;
    std::vector<bool> used(arcs.size(), false);
    std::vector<std::vector<Arc>> out;
    for (std::size_t s = 0; s < arcs.size(); ++s) {
        if (used[s]) continue;
        std::vector<Arc> cur;
        int i = static_cast<int>(s);
        int pt = arcs[s].pa;
        while (!used[ix(i)]) {
            used[ix(i)] = true;
            Arc a = arcs[ix(i)];
            if (a.pa != pt) {
                std::swap(a.pa, a.pb);
                std::swap(a.ea, a.eb);
            }
            cur.push_back(a);
            pt = a.pb;
            const auto& two = at[pt];
            i = two[0] == i ? two[1] : two[0];
        }
        out.push_back(std::move(cur));
    }
    return out;
}

Classified classify(const std::vector<Arc>& curve) {
    Classified c;
    std::vector<Arc> cyc = curve;
    while (true) {
        auto it = std::find_if(cyc.begin(), cyc.end(), [](const Arc& a) { return a.ea == a.eb; });
        if (it == cyc.end()) break;
        if (cyc.size() == 2) {
            if (cyc[0].ea != cyc[0].eb || cyc[1].ea != cyc[1].eb) {
                c.why = "bigon with a normal side";
                return c;
            }
            cyc.clear();
            ++c.reductions;
            break;
        }
        std::size_t n = cyc.size(), i = static_cast<std::size_t>(it - cyc.begin());
        const Arc& prev = cyc[(i + n - 1) % n];
        const Arc& next = cyc[(i + 1) % n];
        if (prev.face != next.face) {
            c.why = "returning arc between different faces";
            return c;
        }
        Arc merged{prev.face, prev.ea, next.eb, prev.pa, next.pb, -1};
        std::vector<Arc> rest;
        for (std::size_t k = 2; k < n - 1; ++k) rest.push_back(cyc[(i + k) % n]);
        rest.push_back(merged);
        cyc = std::move(rest);
        ++c.reductions;
    }
    std::set<int> faces;
    for (const auto& a : cyc) faces.insert(a.face);
    if (faces.size() != cyc.size()) {
        c.why = "piece meets a face twice";
        return c;
    }
    if (cyc.empty()) {
        c.ok = true;
        c.kind = DiscKind::Tunnel;
        return c;
    }
    if (cyc.size() == 3) {
        int v = common_vertex(cyc[0].ea, cyc[0].eb);
        for (const auto& a : cyc)
            if (common_vertex(a.ea, a.eb) != v || a.face == v) v = -1;
        if (v < 0) {
            c.why = "three arcs that are not a triangle";
            return c;
        }
        c.ok = true;
        c.kind = c.reductions ? DiscKind::PseudoTriangle : DiscKind::Triangle;
        c.type = v;
        return c;
    }
    if (cyc.size() == 4 && c.reductions == 0) {
        std::set<int> used;
        for (const auto& a : cyc) {
            used.insert(a.ea);
            used.insert(a.eb);
        }
        std::vector<int> missing;
        for (int e = 0; e < 6; ++e)
            if (!used.count(e)) missing.push_back(e);
        if (used.size() == 4 && missing.size() == 2 && common_vertex(missing[0], missing[1]) < 0) {
            c.ok = true;
            c.kind = DiscKind::Quad;
            auto [a, b] = edge_ends()[ix(missing[0])];
            c.type = quad_family(a, b);
            return c;
        }
    }
    c.why = std::to_string(cyc.size()) + " arcs left after " + std::to_string(c.reductions) + " reductions";
    return c;
}

GeneralizedDisc to_disc(int tet, const std::vector<Arc>& curve, const Classified& c) {
    GeneralizedDisc d;
    d.tet = tet;
    d.kind = c.kind;
    d.type = c.kind == DiscKind::Tunnel ? -1 : c.type;
    d.reductions = c.reductions;
    for (const auto& a : curve) {
        GeneralizedArc g;
        g.face = a.face;
        g.edge_a = a.ea;
        g.edge_b = a.eb;
        g.point_a = a.pa;
        g.point_b = a.pb;
        d.arcs.push_back(g);
    }
    return d;
}

}  // namespace local

using local::Arc;
using local::ix;

std::string arc_checksum(const std::vector<GeneralizedDisc>& discs) {
    std::map<std::pair<int, int>, std::vector<int>> ends;
    std::map<std::pair<int, int>, int> count;
    for (const auto& d : discs)
        for (const auto& a : d.arcs) {
            auto key = std::make_pair(d.tet, a.face);
            ends[key].push_back(a.edge_a);
            ends[key].push_back(a.edge_b);
            ++count[key];
        }
    std::ostringstream out;
    for (auto& [key, v] : ends) {
        std::sort(v.begin(), v.end());
        out << key.first << '.' << key.second << ':' << count[key] << '[';
        for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << v[i];
        out << ']';
    }
    return out.str();
}

namespace {

// Two discs in one abstract tet with ranked points on each edge.
struct LocalPair {
    std::array<DiscSlot, 2> slot;
    std::array<std::array<int, 6>, 2> corner{};  // point per disc and edge, -1 if none
    std::vector<int> rank;                      // per point, from the lower end
    std::array<int, 6> count{};
    std::vector<Arc> arcs;
    std::vector<std::pair<int, int>> crossings;  // arc indices, ascending face

    // rankFirst[e]: true when disc 0 is nearer the lower end of edge e.
    LocalPair(DiscSlot a, DiscSlot b, const std::array<bool, 6>& firstNearer) : slot{a, b} {
        for (auto& c : corner) c.fill(-1);
        int next = 0;
        for (int d = 0; d < 2; ++d)
            for (const auto& [x, y] : disc_corner_edges(slot[ix(d)].kind, slot[ix(d)].type))
                corner[ix(d)][ix(edge_index(x, y))] = next++;
        rank.assign(ix(next), 0);
        for (int e = 0; e < 6; ++e) {
            bool both = corner[0][ix(e)] >= 0 && corner[1][ix(e)] >= 0;
            count[ix(e)] = (corner[0][ix(e)] >= 0) + (corner[1][ix(e)] >= 0);
            if (both) {
                rank[ix(corner[0][ix(e)])] = firstNearer[ix(e)] ? 0 : 1;
                rank[ix(corner[1][ix(e)])] = firstNearer[ix(e)] ? 1 : 0;
            }
        }
        for (int d = 0; d < 2; ++d) {
            auto a2 = local::disc_arcs(slot[ix(d)].kind, slot[ix(d)].type, corner[ix(d)], d);
            arcs.insert(arcs.end(), a2.begin(), a2.end());
        }
        for (std::size_t i = 0; i < arcs.size(); ++i)
            for (std::size_t j = i + 1; j < arcs.size(); ++j)
                if (arcs[i].face == arcs[j].face && arcs[i].owner != arcs[j].owner &&
                    local::interleaved(pos(arcs[i], arcs[i].pa, arcs[i].ea), pos(arcs[i], arcs[i].pb, arcs[i].eb),
                                       pos(arcs[j], arcs[j].pa, arcs[j].ea), pos(arcs[j], arcs[j].pb, arcs[j].eb)))
                    crossings.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }

    double pos(const Arc& a, int p, int e) const { return local::circle_pos(a.face, e, rank[ix(p)], count[ix(e)]); }

    std::vector<GeneralizedDisc> inputs() const {
        std::vector<GeneralizedDisc> out;
        for (int d = 0; d < 2; ++d) {
            std::vector<Arc> mine;
            for (const auto& a : arcs)
                if (a.owner == d) mine.push_back(a);
            auto curves = local::trace(mine);
            auto c = local::classify(curves->front());
            out.push_back(local::to_disc(0, curves->front(), c));
        }
        return out;
    }

    // Smoothing by circle choices at each crossing; nullopt unless exactly two pieces.
    std::optional<std::vector<GeneralizedDisc>> outcome(const std::vector<int>& circleChoices) const {
        std::vector<Arc> out = arcs;
        std::vector<bool> drop(arcs.size(), false);
        std::vector<Arc> added;
        for (std::size_t k = 0; k < crossings.size(); ++k) {
            const Arc& A = arcs[ix(crossings[k].first)];
            const Arc& B = arcs[ix(crossings[k].second)];
            std::array<double, 4> p{pos(A, A.pa, A.ea), pos(A, A.pb, A.eb), pos(B, B.pa, B.ea), pos(B, B.pb, B.eb)};
            int idChoice = local::circle_choice(A, B, 0, p) == circleChoices[k] ? 0 : 1;
            auto s = local::smooth(A, B, idChoice);
            drop[ix(crossings[k].first)] = drop[ix(crossings[k].second)] = true;
            added.push_back(s[0]);
            added.push_back(s[1]);
        }
        std::vector<Arc> all;
        for (std::size_t i = 0; i < arcs.size(); ++i)
            if (!drop[i]) all.push_back(arcs[i]);
        all.insert(all.end(), added.begin(), added.end());
        auto curves = local::trace(all);
        if (!curves || curves->size() != 2) return std::nullopt;
        std::vector<GeneralizedDisc> res;
        for (const auto& c : *curves) {
            auto cl = local::classify(c);
            if (!cl.ok) return std::nullopt;
            res.push_back(local::to_disc(0, c, cl));
        }
        return res;
    }

    std::vector<int> crossing_faces() const {
        std::vector<int> f;
        for (auto [i, j] : crossings) f.push_back(arcs[ix(i)].face);
        return f;
    }

    // Consistent smoothing vectors in lexicographic order.
    std::vector<std::pair<std::vector<int>, std::vector<GeneralizedDisc>>> consistent() const {
        std::vector<std::pair<std::vector<int>, std::vector<GeneralizedDisc>>> out;
        std::size_t k = crossings.size();
        for (unsigned m = 0; m < (1u << k); ++m) {
            std::vector<int> ch(k);
            for (std::size_t i = 0; i < k; ++i) ch[i] = (m >> (k - 1 - i)) & 1u;
            if (auto o = outcome(ch)) out.emplace_back(ch, *o);
        }
        return out;
    }
};

void sort_crossings_by_face(LocalPair& P) {
    std::sort(P.crossings.begin(), P.crossings.end(),
              [&](auto x, auto y) { return P.arcs[ix(x.first)].face < P.arcs[ix(y.first)].face; });
}

LocalSurgery finish(const LocalPair& P, const std::vector<int>& choices, std::vector<GeneralizedDisc> outputs) {
    LocalSurgery s;
    s.inputs = P.inputs();
    s.outputs = std::move(outputs);
    s.crossing_faces = P.crossing_faces();
    s.choices = choices;
    s.checksum_before = arc_checksum(s.inputs);
    s.checksum_after = arc_checksum(s.outputs);
    return s;
}

}  // namespace

LocalSurgery quadrilateral_surgery(int family_a, int family_b, char branch) {
    if (family_a < 0 || family_a > 2 || family_b < 0 || family_b > 2) throw SurfaceError("quad family out of range");
    if (family_a == family_b) throw SurfaceError("parallel quads do not cross");
    if (branch != 'b' && branch != 'c') throw SurfaceError("branch must be b or c");
    std::array<bool, 6> first;
    first.fill(true);
    LocalPair P({DiscKind::Quad, family_a}, {DiscKind::Quad, family_b}, first);
    sort_crossings_by_face(P);
    auto opts = P.consistent();
    if (P.crossings.size() != 2 || opts.size() != 2) throw std::logic_error("quad pair without two consistent smoothings");
    const auto& pick = opts[branch == 'b' ? 0 : 1];
    return finish(P, pick.first, pick.second);
}

LocalSurgery triangular_surgery(int vertex, int family, bool essential, bool beyond) {
    if (vertex < 0 || vertex > 3 || family < 0 || family > 2) throw SurfaceError("disc type out of range");
    std::array<bool, 6> first{};
    for (int e = 0; e < 6; ++e) {
        // The triangle (disc 0) beyond the quad is nearer the end away from its vertex.
        bool triNearerLower = local::edge_ends()[ix(e)][0] != vertex;
        first[ix(e)] = beyond ? triNearerLower : !triNearerLower;
    }
    LocalPair P({DiscKind::Triangle, vertex}, {DiscKind::Quad, family}, first);
    sort_crossings_by_face(P);
    if (P.crossings.empty()) throw SurfaceError("triangle and quad do not cross");
    for (const auto& [ch, out] : P.consistent()) {
        bool tunnel = std::any_of(out.begin(), out.end(), [](const GeneralizedDisc& d) { return d.kind == DiscKind::Tunnel; });
        if (tunnel != essential) return finish(P, ch, out);
    }
    throw std::logic_error("no consistent smoothing of the requested kind");
}

TrivialIsotopy trivial_isotopy(int vertex_a, int vertex_b, std::array<int, 2> order) {
    if (vertex_a < 0 || vertex_a > 3 || vertex_b < 0 || vertex_b > 3) throw SurfaceError("vertex out of range");
    if (!((order[0] == 0 && order[1] == 1) || (order[0] == 1 && order[1] == 0))) throw SurfaceError("order must be a permutation");
    TrivialIsotopy r;
    r.order = order;
    r.nested = vertex_a == vertex_b;
    // Check the placement: order[0] nearest the shared vertex on every shared edge.
    std::array<bool, 6> first{};
    for (int e = 0; e < 6; ++e) {
        auto [lo, hi] = local::edge_ends()[ix(e)];
        if (!r.nested) {
            first[ix(e)] = lo == vertex_a;
        } else if (lo == vertex_a || hi == vertex_a) {
            first[ix(e)] = (lo == vertex_a) == (order[0] == 0);
        }
    }
    LocalPair P({DiscKind::Triangle, vertex_a}, {DiscKind::Triangle, vertex_b}, first);
    if (!P.crossings.empty()) throw std::logic_error("trivial isotopy left a crossing");
    return r;
}

// ---------------------------------------------------------------- tunnels

std::vector<TunnelChain> GeneralizedSurface::tunnel_chains() const {
    std::size_t n = discs.size();
    std::vector<std::vector<int>> adj(n);
    auto isTunnel = [&](int d) { return d >= 0 && ix(d) < n && discs[ix(d)].kind == DiscKind::Tunnel; };
    for (std::size_t d = 0; d < n; ++d) {
        if (discs[d].kind != DiscKind::Tunnel) continue;
        for (const auto& a : discs[d].arcs)
            if (isTunnel(a.across_disc)) adj[d].push_back(a.across_disc);
    }
    std::vector<bool> seen(n, false);
    std::vector<TunnelChain> out;
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s] || discs[s].kind != DiscKind::Tunnel) continue;
        TunnelChain ch;
        std::vector<int> stack{static_cast<int>(s)};
        seen[s] = true;
        bool allTwo = true;
        while (!stack.empty()) {
            int d = stack.back();
            stack.pop_back();
            ch.discs.push_back(d);
            if (adj[ix(d)].size() != 2) allTwo = false;
            for (int o : adj[ix(d)])
                if (!seen[ix(o)]) {
                    seen[ix(o)] = true;
                    stack.push_back(o);
                }
        }
        std::sort(ch.discs.begin(), ch.discs.end());
        ch.closed = allTwo;
        out.push_back(std::move(ch));
    }
    return out;
}

std::optional<TunnelChain> detect_cyclic_tunnel(const GeneralizedSurface& S) {
    for (auto& c : S.tunnel_chains())
        if (c.closed) return c;
    return std::nullopt;
}

}  // namespace cuspforge
