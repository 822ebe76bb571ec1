#include "cuspforge/normal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "cuspforge/hyperbolic.hpp"
#include "text_lines.hpp"

namespace cuspforge {

namespace {

std::size_t ix(int v) { return static_cast<std::size_t>(v); }

// The vertex paired with `a` in a quad family.
int family_partner(int fam, int a) {
    for (int b = 0; b < 4; ++b)
        if (b != a && quad_family(a, b) == fam) return b;
    return -1;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(ix(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[ix(x)] != x) {
            parent[ix(x)] = parent[ix(parent[ix(x)])];
            x = parent[ix(x)];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[ix(std::max(a, b))] = std::min(a, b);
        return true;
    }
};

// Union-find carrying the parity of each element relative to its root.
struct ParityUnionFind {
    std::vector<int> parent, parity;
    explicit ParityUnionFind(int n) : parent(ix(n)), parity(ix(n), 0) { std::iota(parent.begin(), parent.end(), 0); }
    std::pair<int, int> find(int x) {
        int p = 0;
        while (parent[ix(x)] != x) {
            p ^= parity[ix(x)];
            x = parent[ix(x)];
        }
        return {x, p};
    }
    // Returns false on a contradiction.
    bool relate(int a, int b, int rel) {
        auto [ra, pa] = find(a);
        auto [rb, pb] = find(b);
        if (ra == rb) return (pa ^ pb) == rel;
        parent[ix(rb)] = ra;
        parity[ix(rb)] = pa ^ pb ^ rel;
        return true;
    }
};

}  // namespace

std::vector<std::pair<int, int>> disc_corner_edges(DiscKind kind, int type) {
    std::vector<std::pair<int, int>> out;
    if (kind == DiscKind::Quad) {
        int a = 0, b = family_partner(type, 0);
        int c = -1, d = -1;
        for (int x = 0; x < 4; ++x)
            if (x != a && x != b) (c < 0 ? c : d) = x;
        out = {{a, c}, {a, d}, {b, d}, {b, c}};
    } else {
        for (int u = 0; u < 4; ++u)
            if (u != type) out.emplace_back(type, u);
    }
    return out;
}

int disc_arc_vertex(DiscKind kind, int type, int f) {
    if (kind == DiscKind::Quad) return family_partner(type, f);
    return type == f ? -1 : type;
}

namespace {

int arc_vertex(const Disc& d, int f) { return disc_arc_vertex(d.kind, d.type, f); }

int corner_slot(const std::vector<std::pair<int, int>>& cs, int a, int b) {
    for (std::size_t i = 0; i < cs.size(); ++i)
        if ((cs[i].first == a && cs[i].second == b) || (cs[i].first == b && cs[i].second == a)) return static_cast<int>(i);
    return -1;
}

const std::vector<std::array<int, 7>>& option_table(int bound) {
    static std::map<int, std::vector<std::array<int, 7>>> cache;
    auto it = cache.find(bound);
    if (it != cache.end()) return it->second;
    std::vector<std::array<int, 7>> out;
    std::array<int, 7> o{};
    for (o[0] = 0; o[0] <= bound; ++o[0])
        for (o[1] = 0; o[1] <= bound; ++o[1])
            for (o[2] = 0; o[2] <= bound; ++o[2])
                for (o[3] = 0; o[3] <= bound; ++o[3]) {
                    for (int q = 2; q >= 0; --q)
                        for (int c = bound; c >= 1; --c) {
                            auto p = o;
                            p[ix(4 + q)] = c;
                            out.push_back(p);
                        }
                    auto p = o;
                    p[4] = p[5] = p[6] = 0;
                    out.push_back(p);
                }
    std::sort(out.begin(), out.end());
    return cache.emplace(bound, std::move(out)).first->second;
}

int option_arcs(const std::array<int, 7>& o, int f, int v) { return o[ix(v)] + o[ix(4 + quad_family(f, v))]; }

}  // namespace

int quad_family(int a, int b) {
    if (a > b) std::swap(a, b);
    if ((a == 0 && b == 1) || (a == 2 && b == 3)) return 0;
    if ((a == 0 && b == 2) || (a == 1 && b == 3)) return 1;
    return 2;
}

const char* quad_family_name(int fam) {
    static const char* names[3] = {"01|23", "02|13", "03|12"};
    return names[fam];
}

bool NormalCoordinates::has_quad() const { return quad_count() > 0; }

bool NormalCoordinates::is_zero() const {
    return std::all_of(x.begin(), x.end(), [](int v) { return v == 0; });
}

int NormalCoordinates::quad_count() const {
    int s = 0;
    for (int t = 0; t < tets(); ++t)
        for (int q = 0; q < 3; ++q) s += quad(t, q);
    return s;
}

bool is_admissible(const NormalCoordinates& x) {
    for (int v : x.x)
        if (v < 0) return false;
    for (int t = 0; t < x.tets(); ++t) {
        int used = 0;
        for (int q = 0; q < 3; ++q) used += x.quad(t, q) > 0;
        if (used > 1) return false;
    }
    return true;
}

std::vector<std::vector<int>> MatchingMatrix::dense() const {
    std::vector<std::vector<int>> out(rows.size(), std::vector<int>(ix(cols), 0));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (auto [c, v] : rows[r].entries) out[r][ix(c)] = v;
    return out;
}

MatchingMatrix matching_matrix(const Triangulation& T) {
    MatchingMatrix B;
    B.cols = 7 * T.size();
    for (int t = 0; t < T.size(); ++t)
        for (int f = 0; f < 4; ++f) {
            if (!T.is_glued(t, f)) continue;
            FaceSlot left{t, f}, right = T.partner(t, f);
            if (!(left < right)) continue;
            const auto& g = *T.gluing(t, f);
            for (int v = 0; v < 4; ++v) {
                if (v == f) continue;
                std::map<int, int> e;
                e[7 * t + v] += 1;
                e[7 * t + 4 + quad_family(f, v)] += 1;
                int w = g.perm[v];
                e[7 * g.tet + w] -= 1;
                e[7 * g.tet + 4 + quad_family(right.face, w)] -= 1;
                MatchingRow row{left, right, v, {}};
                for (auto [c, k] : e)
                    if (k != 0) row.entries.emplace_back(c, k);
                B.rows.push_back(std::move(row));
            }
        }
    return B;
}

bool is_solution(const MatchingMatrix& B, const NormalCoordinates& x) {
    if (static_cast<int>(x.x.size()) != B.cols) return false;
    for (const auto& r : B.rows) {
        long s = 0;
        for (auto [c, k] : r.entries) s += static_cast<long>(k) * x.x[ix(c)];
        if (s != 0) return false;
    }
    return true;
}

NormalCoordinates vertex_link(const Triangulation& T, const CuspClass& c) {
    NormalCoordinates x(T.size());
    for (auto [t, v] : c.corners) x.tri(t, v) = 1;
    return x;
}

std::vector<NormalCoordinates> enumerate_solutions(const Triangulation& T, int bound, std::size_t limit) {
    if (bound < 1) throw std::invalid_argument("bound must be at least 1");
    const auto& opts = option_table(bound);
    int n = T.size();
    std::vector<int> choice(ix(n), -1);
    std::vector<NormalCoordinates> out;
    auto fits = [&](int t, const std::array<int, 7>& o) {
        for (int f = 0; f < 4; ++f) {
            const auto& g = T.gluing(t, f);
            if (!g || g->tet > t) continue;
            const auto& other = g->tet == t ? o : opts[ix(choice[ix(g->tet)])];
            for (int v = 0; v < 4; ++v)
                if (v != f && option_arcs(o, f, v) != option_arcs(other, g->perm[f], g->perm[v])) return false;
        }
        return true;
    };
    std::function<void(int)> rec = [&](int t) {
        if (out.size() >= limit) return;
        if (t == n) {
            NormalCoordinates x(n);
            for (int u = 0; u < n; ++u)
                for (int k = 0; k < 7; ++k) x.x[ix(7 * u + k)] = opts[ix(choice[ix(u)])][ix(k)];
            if (!x.is_zero()) out.push_back(std::move(x));
            return;
        }
        for (std::size_t i = 0; i < opts.size() && out.size() < limit; ++i) {
            if (!fits(t, opts[i])) continue;
            choice[ix(t)] = static_cast<int>(i);
            rec(t + 1);
        }
        choice[ix(t)] = -1;
    };
    rec(0);
    return out;
}

SearchResult find_solution(const Triangulation& T, int bound, int tet, int family, long node_budget) {
    int n = T.size();
    if (bound < 1 || bound > 14) throw std::invalid_argument("bound must be in 1..14");
    if (tet < 0 || tet >= n || family < 0 || family > 2) throw std::invalid_argument("tet or family out of range");
    const auto& opts = option_table(bound);

    // One variable per arc class, shared across each face gluing.
    std::map<std::tuple<int, int, int>, int> var;
    int nv = 0;
    std::vector<std::array<int, 12>> scope(ix(n));
    std::array<std::pair<int, int>, 12> positions{};
    {
        int k = 0;
        for (int f = 0; f < 4; ++f)
            for (int v = 0; v < 4; ++v)
                if (v != f) positions[ix(k++)] = {f, v};
    }
    for (int t = 0; t < n; ++t)
        for (int k = 0; k < 12; ++k) {
            auto [f, v] = positions[ix(k)];
            auto key = std::make_tuple(t, f, v);
            auto it = var.find(key);
            if (it == var.end()) {
                int id = nv++;
                var[key] = id;
                if (const auto& g = T.gluing(t, f)) var[std::make_tuple(g->tet, g->perm[f], g->perm[v])] = id;
                scope[ix(t)][ix(k)] = id;
            } else {
                scope[ix(t)][ix(k)] = it->second;
            }
        }
    std::vector<std::array<int, 12>> tup(opts.size());
    for (std::size_t i = 0; i < opts.size(); ++i)
        for (int k = 0; k < 12; ++k) tup[i][ix(k)] = option_arcs(opts[i], positions[ix(k)].first, positions[ix(k)].second);

    std::vector<std::vector<int>> users(ix(nv));
    for (int t = 0; t < n; ++t)
        for (int k = 0; k < 12; ++k) {
            auto& u = users[ix(scope[ix(t)][ix(k)])];
            if (u.empty() || u.back() != t) u.push_back(t);
        }

    using Dom = std::uint32_t;
    struct State {
        std::vector<Dom> dom;
        std::vector<std::vector<int>> cand;
    };
    State root;
    root.dom.assign(ix(nv), (Dom(1) << (2 * bound + 1)) - 1);
    root.cand.resize(ix(n));
    for (int t = 0; t < n; ++t) {
        const auto& sc = scope[ix(t)];
        for (std::size_t i = 0; i < opts.size(); ++i) {
            if (t == tet && opts[i][ix(4 + family)] == 0) continue;
            bool ok = true;
            for (int a = 0; a < 12 && ok; ++a)
                for (int b = a + 1; b < 12 && ok; ++b)
                    if (sc[ix(a)] == sc[ix(b)] && tup[i][ix(a)] != tup[i][ix(b)]) ok = false;
            if (ok) root.cand[ix(t)].push_back(static_cast<int>(i));
        }
    }

    auto propagate = [&](State& s, std::vector<int> queue) {
        while (!queue.empty()) {
            int t = queue.back();
            queue.pop_back();
            const auto& sc = scope[ix(t)];
            std::vector<int> keep;
            for (int i : s.cand[ix(t)]) {
                bool ok = true;
                for (int k = 0; k < 12 && ok; ++k) ok = (s.dom[ix(sc[ix(k)])] >> tup[ix(i)][ix(k)]) & 1u;
                if (ok) keep.push_back(i);
            }
            if (keep.empty()) return false;
            s.cand[ix(t)] = std::move(keep);
            for (int k = 0; k < 12; ++k) {
                Dom sup = 0;
                for (int i : s.cand[ix(t)]) sup |= Dom(1) << tup[ix(i)][ix(k)];
                int u = sc[ix(k)];
                Dom nd = s.dom[ix(u)] & sup;
                if (nd != s.dom[ix(u)]) {
                    if (nd == 0) return false;
                    s.dom[ix(u)] = nd;
                    for (int x : users[ix(u)])
                        if (x != t) queue.push_back(x);
                }
            }
        }
        return true;
    };

    SearchResult res;
    std::vector<int> all(ix(n));
    std::iota(all.begin(), all.end(), 0);
    if (!propagate(root, all)) {
        res.exhausted = true;
        return res;
    }
    auto optsum = [&](int i) { return std::accumulate(opts[ix(i)].begin(), opts[ix(i)].end(), 0); };
    bool out_of_budget = false;
    std::function<std::optional<State>(State&)> rec = [&](State& s) -> std::optional<State> {
        if (++res.nodes > node_budget) {
            out_of_budget = true;
            return std::nullopt;
        }
        int best = -1;
        for (int t = 0; t < n; ++t)
            if (s.cand[ix(t)].size() > 1 && (best < 0 || s.cand[ix(t)].size() < s.cand[ix(best)].size())) best = t;
        if (best < 0) return s;
        auto order = s.cand[ix(best)];
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return optsum(a) < optsum(b); });
        for (int i : order) {
            State c = s;
            c.cand[ix(best)] = {i};
            if (propagate(c, {best}))
                if (auto r = rec(c)) return r;
            if (out_of_budget) return std::nullopt;
        }
        return std::nullopt;
    };
    auto done = rec(root);
    res.exhausted = !out_of_budget;
    if (done) {
        NormalCoordinates x(n);
        for (int t = 0; t < n; ++t)
            for (int k = 0; k < 7; ++k) x.x[ix(7 * t + k)] = opts[ix(done->cand[ix(t)][0])][ix(k)];
        if (!is_solution(matching_matrix(T), x)) throw std::logic_error("arc search returned a non-solution");
        res.solution = std::move(x);
        res.exhausted = true;
    }
    return res;
}

std::string disc_kind_name(DiscKind k) {
    switch (k) {
        case DiscKind::Triangle: return "triangle";
        case DiscKind::Quad: return "quad";
        case DiscKind::PseudoTriangle: return "pseudo-triangle";
        case DiscKind::Tunnel: return "tunnel";
    }
    return "?";
}

double SurfaceVertex::angle_sum() const {
    return triangle_corners * geom::triangle_corner_angle() + quad_corners * geom::quad_corner_angle();
}

void compute_cells(DiscComplex& D) {
    int nd = D.F();
    auto ec = edge_classes(D.base);
    UnionFind corners(6 * std::max(nd, 1));
    UnionFind comps(std::max(nd, 1));
    ParityUnionFind orient(std::max(nd, 1));
    std::vector<bool> contradiction(ix(std::max(nd, 1)), false);
    std::vector<std::vector<std::pair<int, int>>> cs(ix(nd));
    for (int d = 0; d < nd; ++d) cs[ix(d)] = disc_corner_edges(D.discs[ix(d)].kind, D.discs[ix(d)].type);

    int arcs = 0, matched = 0;
    D.closed = true;
    std::vector<std::pair<int, int>> bad;
    for (int d = 0; d < nd; ++d) {
        const Disc& A = D.discs[ix(d)];
        for (int f = 0; f < 4; ++f) {
            int v = arc_vertex(A, f);
            if (v < 0) continue;
            ++arcs;
            int o = D.across[ix(d)][ix(f)];
            if (o < 0) {
                D.closed = false;
                continue;
            }
            ++matched;
            const auto& g = *D.base.gluing(A.tet, f);
            std::vector<int> us;
            for (int u = 0; u < 4; ++u)
                if (u != f && u != v) us.push_back(u);
            const auto& mine = cs[ix(d)];
            const auto& theirs = cs[ix(o)];
            int s1 = corner_slot(mine, v, us[0]), s2 = corner_slot(mine, v, us[1]);
            int r1 = corner_slot(theirs, g.perm[v], g.perm[us[0]]), r2 = corner_slot(theirs, g.perm[v], g.perm[us[1]]);
            if (s1 < 0 || s2 < 0 || r1 < 0 || r2 < 0) throw std::logic_error("arc endpoints do not match disc corners");
            corners.unite(6 * d + s1, 6 * o + r1);
            corners.unite(6 * d + s2, 6 * o + r2);
            comps.unite(d, o);
            bool fwdMine = (s1 + 1) % static_cast<int>(mine.size()) == s2;
            bool fwdTheirs = (r1 + 1) % static_cast<int>(theirs.size()) == r2;
            if (!orient.relate(d, o, fwdMine == fwdTheirs ? 1 : 0)) bad.emplace_back(d, o);
        }
    }
    D.edges = matched / 2 + (arcs - matched);

    std::map<int, int> compId;
    D.component.assign(ix(nd), -1);
    for (int d = 0; d < nd; ++d) {
        int r = comps.find(d);
        auto it = compId.emplace(r, static_cast<int>(compId.size())).first;
        D.component[ix(d)] = it->second;
    }
    D.component_orientable.assign(compId.size(), true);
    for (auto [d, o] : bad) D.component_orientable[ix(D.component[ix(d)])] = false;

    std::map<int, int> vertId;
    D.vertices.clear();
    D.corner_vertex.assign(ix(nd), {});
    for (int d = 0; d < nd; ++d) D.corner_vertex[ix(d)].assign(cs[ix(d)].size(), -1);
    for (int d = 0; d < nd; ++d) {
        const Disc& A = D.discs[ix(d)];
        for (std::size_t s = 0; s < cs[ix(d)].size(); ++s) {
            int r = corners.find(6 * d + static_cast<int>(s));
            auto [it, fresh] = vertId.emplace(r, static_cast<int>(D.vertices.size()));
            if (fresh) {
                SurfaceVertex sv;
                sv.edge_class = ec.of(A.tet, cs[ix(d)][s].first, cs[ix(d)][s].second);
                sv.component = D.component[ix(d)];
                D.vertices.push_back(sv);
            }
            auto& sv = D.vertices[ix(it->second)];
            ++sv.degree;
            (A.kind == DiscKind::Quad ? sv.quad_corners : sv.triangle_corners)++;
            D.corner_vertex[ix(d)][s] = it->second;
        }
    }
}

DiscComplex reconstruct(const Triangulation& T, const NormalCoordinates& x) {
    if (x.tets() != T.size() || !is_admissible(x) || !is_solution(matching_matrix(T), x))
        throw std::invalid_argument("coordinates are not an admissible solution of the matching system");
    int n = T.size();
    DiscComplex D;
    D.base = T;
    // start[t][k]: first disc index of kind slot k (0..3 triangles, 4 quad).
    std::vector<std::array<int, 5>> start(ix(n));
    std::vector<int> fam(ix(n), -1);
    for (int t = 0; t < n; ++t) {
        for (int v = 0; v < 4; ++v) {
            start[ix(t)][ix(v)] = D.F();
            for (int c = 0; c < x.tri(t, v); ++c) D.discs.push_back({t, DiscKind::Triangle, v, c});
        }
        start[ix(t)][4] = D.F();
        for (int q = 0; q < 3; ++q)
            for (int c = 0; c < x.quad(t, q); ++c) {
                fam[ix(t)] = q;
                D.discs.push_back({t, DiscKind::Quad, q, c});
            }
    }
    // Disc whose arc on face f is the k-th from corner v.
    auto at_rank = [&](int t, int f, int v, int k) {
        int tv = x.tri(t, v);
        if (k < tv) return start[ix(t)][ix(v)] + k;
        int q = quad_family(f, v), nq = x.quad(t, q);
        int j = k - tv;
        if (j >= nq) throw std::logic_error("arc rank out of range");
        bool nearZeroSide = (v == 0 || f == 0);
        return start[ix(t)][4] + (nearZeroSide ? j : nq - 1 - j);
    };
    D.across.assign(D.discs.size(), {-1, -1, -1, -1});
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const auto& g = T.gluing(t, f);
            if (!g) continue;
            for (int v = 0; v < 4; ++v) {
                if (v == f) continue;
                int cnt = x.arcs(t, f, v);
                for (int k = 0; k < cnt; ++k)
                    D.across[ix(at_rank(t, f, v, k))][ix(f)] = at_rank(g->tet, g->perm[f], g->perm[v], k);
            }
        }
    compute_cells(D);
    return D;
}

std::vector<DiscComplex> components(const DiscComplex& D) {
    std::vector<DiscComplex> out(ix(D.component_count()));
    std::vector<int> newIndex(D.discs.size(), -1);
    for (std::size_t d = 0; d < D.discs.size(); ++d) {
        auto& C = out[ix(D.component[d])];
        newIndex[d] = C.F();
        C.discs.push_back(D.discs[d]);
    }
    for (auto& C : out) {
        C.base = D.base;
        C.across.assign(C.discs.size(), {-1, -1, -1, -1});
    }
    for (std::size_t d = 0; d < D.discs.size(); ++d)
        for (int f = 0; f < 4; ++f) {
            int o = D.across[d][ix(f)];
            if (o >= 0) out[ix(D.component[d])].across[ix(newIndex[d])][ix(f)] = newIndex[ix(o)];
        }
    for (auto& C : out) compute_cells(C);
    return out;
}

NormalCoordinates coordinates_of(const DiscComplex& D) {
    NormalCoordinates x(D.base.size());
    for (const auto& d : D.discs) {
        if (d.kind == DiscKind::Quad)
            ++x.quad(d.tet, d.type);
        else if (d.kind != DiscKind::Tunnel)
            ++x.tri(d.tet, d.type);
    }
    return x;
}

double gauss_bonnet_euler(const DiscComplex& D) {
    const double twoPi = 2 * std::numbers::pi;
    double s = 0;
    for (const auto& v : D.vertices) s += twoPi - v.angle_sum();
    int quads = 0;
    for (const auto& d : D.discs) quads += d.kind == DiscKind::Quad;
    s -= (twoPi - 4 * geom::quad_corner_angle()) * quads;
    return s / twoPi;
}

int euler_characteristic(const DiscComplex& D) {
    if (!D.closed) throw std::domain_error("surface has unmatched arcs");
    int chi = D.V() - D.E() + D.F();
    if (std::abs(gauss_bonnet_euler(D) - chi) > 1e-6) throw std::logic_error("Euler characteristic disagrees with the angle-sum count");
    return chi;
}

bool is_linking(const DiscComplex& component) {
    return std::all_of(component.discs.begin(), component.discs.end(), [](const Disc& d) { return d.kind == DiscKind::Triangle; });
}

SurfaceCurvatureReport surface_curvature_check(const DiscComplex& D) {
    SurfaceCurvatureReport r;
    auto ec = edge_classes(D.base);
    const double twoPi = 2 * std::numbers::pi;
    for (std::size_t i = 0; i < D.vertices.size(); ++i) {
        const auto& v = D.vertices[i];
        int index = ec.classes[ix(v.edge_class)].index;
        VertexCurvatureIssue issue{static_cast<int>(i), v.edge_class, v.degree, index, v.angle_sum(), ""};
        if (v.degree != index) {
            issue.what = "vertex degree differs from the edge index";
            r.issues.push_back(issue);
        }
        if (v.angle_sum() < twoPi - 1e-9) {
            issue.what = "angle sum below 2*pi";
            r.issues.push_back(issue);
        }
    }
    r.ok = r.issues.empty();
    return r;
}

NormalCoordinates parse_ncrd(std::string_view txt) {
    using text::parse_int;
    using text::tokenize;
    auto lines = text::significant_lines(txt);
    if (lines.empty()) throw ParseError(1, 1, "empty input");
    auto header = tokenize(lines[0].second);
    if (header.size() != 2 || header[0].text != "ncrd" || header[1].text != "1")
        throw ParseError(lines[0].first, 1, "expected header 'ncrd 1'");
    if (lines.size() < 2) throw ParseError(lines[0].first + 1, 1, "expected 'ntet <n>'");
    auto nt = tokenize(lines[1].second);
    if (nt.size() != 2 || nt[0].text != "ntet") throw ParseError(lines[1].first, 1, "expected 'ntet <n>'");
    int n = parse_int(nt[1], lines[1].first);
    NormalCoordinates x(n);
    std::vector<bool> have(ix(n), false);
    for (std::size_t i = 2; i < lines.size(); ++i) {
        int ln = lines[i].first;
        auto toks = tokenize(lines[i].second);
        if (toks[0].text != "tet") throw ParseError(ln, toks[0].column, "expected 'tet'");
        if (toks.size() != 9) throw ParseError(ln, toks[0].column, "expected 'tet <t>' followed by 7 coordinates");
        int t = parse_int(toks[1], ln);
        if (t >= n) throw ParseError(ln, toks[1].column, "tet id out of range");
        if (have[ix(t)]) throw ParseError(ln, toks[1].column, "duplicate tet id " + std::to_string(t));
        have[ix(t)] = true;
        for (int k = 0; k < 7; ++k) x.x[ix(7 * t + k)] = parse_int(toks[ix(2 + k)], ln);
    }
    for (int t = 0; t < n; ++t)
        if (!have[ix(t)]) throw ParseError(lines.back().first + 1, 1, "missing tet " + std::to_string(t));
    return x;
}

std::string serialize_ncrd(const NormalCoordinates& x) {
    std::ostringstream os;
    os << "ncrd 1\nntet " << x.tets() << "\n";
    for (int t = 0; t < x.tets(); ++t) {
        os << "tet " << t;
        for (int k = 0; k < 7; ++k) os << " " << x.x[ix(7 * t + k)];
        os << "\n";
    }
    return os.str();
}

}  // namespace cuspforge
