#include "cuspforge/surface.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "cuspforge/symmetry.hpp"
#include "surface_local.hpp"

namespace cuspforge {

using local::ix;

// ---------------------------------------------------------------- discs in a ball

int PartialDisc::disc_count() const {
    return static_cast<int>(std::count_if(disc.begin(), disc.end(), [](const auto& d) { return d.has_value(); }));
}

int PartialDisc::quad_count() const {
    return static_cast<int>(
        std::count_if(disc.begin(), disc.end(), [](const auto& d) { return d && d->kind == DiscKind::Quad; }));
}

bool PartialDisc::same_discs(const PartialDisc& other) const {
    auto byBase = [](const PartialDisc& P) {
        std::vector<std::optional<DiscSlot>> out(P.disc.size());
        for (std::size_t i = 0; i < P.disc.size(); ++i) out[ix(P.ball.copy_of[i])] = P.disc[i];
        return out;
    };
    return byBase(*this) == byBase(other);
}

namespace {

int other_vertex(int a, int b, int c) {
    for (int x = 0; x < 4; ++x)
        if (x != a && x != b && x != c) return x;
    return -1;
}

std::optional<int> arc_on(const PartialDisc& C, int t, int f) {
    const auto& d = C.disc[ix(t)];
    if (!d) return std::nullopt;
    int v = disc_arc_vertex(d->kind, d->type, f);
    if (v < 0) return std::nullopt;
    return v;
}

// Orders the arcs on boundary faces into one closed curve.
std::vector<BoundaryArc> order_boundary(const PartialDisc& C) {
    const Ball& B = C.ball;
    std::set<FaceSlot> pending;
    for (int t = 0; t < B.size(); ++t)
        for (int f = 0; f < 4; ++f)
            if (arc_on(C, t, f) && !B.is_interior({t, f})) pending.insert({t, f});
    std::vector<BoundaryArc> out;
    if (pending.empty()) return out;
    FaceSlot start = *pending.begin();
    int v = *arc_on(C, start.tet, start.face);
    int a = -1, b = -1;
    for (int x = 0; x < 4; ++x)
        if (x != v && x != start.face) (a < 0 ? a : b) = x;
    BoundaryArc cur{start.tet, start.face, v, a, b};
    for (std::size_t guard = 0; guard <= pending.size() + out.size(); ++guard) {
        out.push_back(cur);
        FaceEdge nx = rotate_to_boundary(B, FaceEdge{cur.tet, cur.face, cur.vertex, cur.to});
        auto w = arc_on(C, nx.tet, nx.face);
        if (!w || (*w != nx.a && *w != nx.b)) throw SurfaceError("disc boundary breaks at tet " + std::to_string(nx.tet));
        int from = *w == nx.a ? nx.b : nx.a;
        BoundaryArc next{nx.tet, nx.face, *w, from, other_vertex(*w, from, nx.face)};
        if (next.slot() == out.front().slot()) {
            if (out.size() != pending.size()) throw SurfaceError("disc boundary is not a single curve");
            return out;
        }
        if (!pending.count(next.slot())) throw SurfaceError("disc boundary leaves the boundary faces");
        cur = next;
    }
    throw SurfaceError("disc boundary does not close");
}

}  // namespace

PartialDisc extend_quad(const Ball& B, int tet, int family) {
    if (tet < 0 || tet >= B.size()) throw SurfaceError("seed tet out of range");
    if (family < 0 || family > 2) throw SurfaceError("quad family out of range");
    PartialDisc C;
    C.ball = B;
    C.disc.assign(ix(B.size()), std::nullopt);
    C.seed_tet = tet;
    C.seed_family = family;
    C.disc[ix(tet)] = DiscSlot{DiscKind::Quad, family};
    std::deque<int> q{tet};
    while (!q.empty()) {
        int t = q.front();
        q.pop_front();
        for (int f = 0; f < 4; ++f) {
            auto v = arc_on(C, t, f);
            if (!v || !B.is_interior({t, f})) continue;
            const auto& g = *B.full.gluing(t, f);
            int f2 = g.perm[f], w = g.perm[*v];
            auto& there = C.disc[ix(g.tet)];
            if (there) {
                if (disc_arc_vertex(there->kind, there->type, f2) != w)
                    throw SurfaceError("two discs forced in tet " + std::to_string(g.tet) + " (reached from tet " +
                                       std::to_string(t) + ")");
                continue;
            }
            there = DiscSlot{DiscKind::Triangle, w};
            q.push_back(g.tet);
        }
    }
    C.boundary = order_boundary(C);
    return C;
}

PartialDisc extend_curve(const Ball& B, const std::vector<BoundaryArc>& arcs) {
    int n = B.size();
    // want[t][f]: required cut vertex on face f (-1 none known), fixed[t][f]: requirement is exact.
    std::vector<std::array<int, 4>> want(ix(n), {-1, -1, -1, -1});
    for (const auto& a : arcs) {
        if (B.is_interior(a.slot())) throw SurfaceError("curve arc on an interior face");
        if (want[ix(a.tet)][ix(a.face)] >= 0) throw SurfaceError("curve meets a face twice");
        want[ix(a.tet)][ix(a.face)] = a.vertex;
    }
    PartialDisc C;
    C.ball = B;
    C.disc.assign(ix(n), std::nullopt);
    std::vector<DiscSlot> prefs;
    for (int v = 0; v < 4; ++v) prefs.push_back({DiscKind::Triangle, v});
    for (int q = 0; q < 3; ++q) prefs.push_back({DiscKind::Quad, q});

    auto fits = [&](int t, const DiscSlot& s) {
        for (int f = 0; f < 4; ++f) {
            int v = disc_arc_vertex(s.kind, s.type, f);
            if (!B.is_interior({t, f})) {
                if (v != want[ix(t)][ix(f)]) return false;
                continue;
            }
            if (want[ix(t)][ix(f)] >= 0 && v != want[ix(t)][ix(f)]) return false;
            const auto& g = *B.full.gluing(t, f);
            const auto& there = C.disc[ix(g.tet)];
            if (there) {
                int w = disc_arc_vertex(there->kind, there->type, g.perm[f]);
                if ((v < 0) != (w < 0) || (v >= 0 && g.perm[v] != w)) return false;
            }
        }
        return true;
    };
    auto touched = [&](int t) {
        for (int f = 0; f < 4; ++f)
            if (want[ix(t)][ix(f)] >= 0) return true;
        return false;
    };
    for (;;) {
        int best = -1;
        std::vector<DiscSlot> bestOpts;
        for (int t = 0; t < n; ++t) {
            if (C.disc[ix(t)] || !touched(t)) continue;
            std::vector<DiscSlot> opts;
            for (const auto& s : prefs)
                if (fits(t, s)) opts.push_back(s);
            if (opts.empty()) throw SurfaceError("curve does not bound a normal disc (tet " + std::to_string(t) + ")");
            if (best < 0 || opts.size() < bestOpts.size()) {
                best = t;
                bestOpts = opts;
            }
        }
        if (best < 0) break;
        C.disc[ix(best)] = bestOpts.front();
        const auto& s = bestOpts.front();
        for (int f = 0; f < 4; ++f) {
            int v = disc_arc_vertex(s.kind, s.type, f);
            if (v < 0 || !B.is_interior({best, f})) continue;
            const auto& g = *B.full.gluing(best, f);
            auto& w = want[ix(g.tet)][ix(g.perm[f])];
            if (w >= 0 && w != g.perm[v]) throw SurfaceError("curve extension conflicts in tet " + std::to_string(g.tet));
            w = g.perm[v];
        }
    }
    for (int t = 0; t < n; ++t) {
        if (C.disc[ix(t)] && C.disc[ix(t)]->kind == DiscKind::Quad && C.seed_tet < 0) {
            C.seed_tet = t;
            C.seed_family = C.disc[ix(t)]->type;
        }
        for (int f = 0; f < 4; ++f) {
            auto v = arc_on(C, t, f);
            if (!B.is_interior({t, f}) && (v ? *v : -1) != want[ix(t)][ix(f)])
                throw SurfaceError("extension misses a curve arc in tet " + std::to_string(t));
        }
    }
    C.boundary = order_boundary(C);
    return C;
}

// ---------------------------------------------------------------- transport and reconnect

namespace {

int gap_after(const Ball& B, const BoundaryArc& a, const BoundaryArc& next) {
    return face_distance(B, FaceEdge{a.tet, a.face, a.vertex, a.to}, next.slot());
}

int curve_measure(const Ball& B, const std::vector<BoundaryArc>& c) {
    long s = 0;
    try {
        for (std::size_t i = 0; i < c.size(); ++i) s += gap_after(B, c[i], c[(i + 1) % c.size()]);
    } catch (const BallError&) {
        return INT_MAX;
    }
    return s > INT_MAX ? INT_MAX : static_cast<int>(s);
}

}  // namespace

TransportResult transport_boundary(const Ball& B, const std::vector<BoundaryArc>& curve) {
    TransportResult r;
    std::size_t n = curve.size();
    for (const auto& a : curve) {
        const auto& g = *B.full.gluing(a.tet, a.face);
        r.image.push_back({g.tet, g.perm[a.face], g.perm[a.vertex], g.perm[a.from], g.perm[a.to]});
    }
    for (std::size_t i = 0; i < n; ++i) {
        r.gaps.push_back(gap_after(B, curve[i], curve[(i + 1) % n]));
        r.measure += r.gaps.back();
    }
    if (n == 0) return r;
    std::size_t first = 0;
    while (first < n && r.gaps[first] == 0) ++first;
    if (first == n) {
        r.pieces.emplace_back(n);
        std::iota(r.pieces.back().begin(), r.pieces.back().end(), 0);
        return r;
    }
    std::vector<int> cur;
    for (std::size_t k = 1; k <= n; ++k) {
        std::size_t i = (first + k) % n;
        cur.push_back(static_cast<int>(i));
        if (r.gaps[i] > 0) {
            r.pieces.push_back(cur);
            cur.clear();
        }
    }
    return r;
}

ReconnectResult reconnect(const PartialDisc& disc, int cap) {
    ReconnectResult r;
    Ball cur = disc.ball;
    const auto& c = disc.boundary;
    if (cap < 0) cap = 6 * cur.size() * std::max<int>(1, static_cast<int>(cur.boundary_pairs().size()));
    std::set<FaceSlot> forbidden;
    for (const auto& a : c) {
        forbidden.insert(a.slot());
        forbidden.insert(cur.partner(a.slot()));
    }
    auto carriesDisc = [&](FaceSlot s) { return arc_on(disc, s.tet, s.face).has_value(); };

    int m = curve_measure(cur, c);
    r.measures.push_back(m);
    while (m > 0) {
        if (r.iterations >= cap) {
            r.failure = "cap";
            break;
        }
        bool moved = false;
        for (std::size_t i = 0; i < c.size() && !moved; ++i) {
            const auto& a = c[i];
            const auto& b = c[(i + 1) % c.size()];
            auto chain = distance_chain(cur, FaceEdge{a.tet, a.face, a.vertex, a.to}, b.slot());
            for (FaceSlot G : chain) {
                if (moved) break;
                FaceSlot Gp = cur.partner(G);
                if (G.tet == Gp.tet || forbidden.count(G) || forbidden.count(Gp)) continue;
                for (FaceSlot R : tree_path(cur, G.tet, Gp.tet)) {
                    FaceSlot Rp = cur.partner(R);
                    if (carriesDisc(R) || carriesDisc(Rp)) continue;
                    Ball next = cur;
                    next.interior[ix(R.tet)][ix(R.face)] = next.interior[ix(Rp.tet)][ix(Rp.face)] = false;
                    next.interior[ix(G.tet)][ix(G.face)] = next.interior[ix(Gp.tet)][ix(Gp.face)] = true;
                    int mn = curve_measure(next, c);
                    if (mn >= m) continue;
                    if (!check_ball(next).empty()) continue;
                    try {
                        auto again = extend_quad(next, disc.seed_tet, disc.seed_family);
                        if (!again.same_discs(disc) || again.boundary != c) continue;
                    } catch (const SurfaceError&) {
                        continue;
                    }
                    cur = std::move(next);
                    m = mn;
                    r.measures.push_back(m);
                    ++r.iterations;
                    moved = true;
                    break;
                }
            }
        }
        if (!moved) {
            r.failure = "stuck";
            break;
        }
    }
    r.ball = cur;
    if (m != 0) return r;
    try {
        r.image_disc = extend_curve(cur, transport_boundary(cur, c).image);
        r.ok = true;
    } catch (const SurfaceError& e) {
        r.failure = e.what();
    }
    return r;
}

// ---------------------------------------------------------------- singular surfaces

std::string crossing_kind_name(CrossingKind k) {
    switch (k) {
        case CrossingKind::QuadQuad: return "quad/quad";
        case CrossingKind::TriQuad: return "tri/quad";
        case CrossingKind::TriTri: return "tri/tri";
        case CrossingKind::Parallel: return "parallel";
    }
    return "?";
}

namespace {

std::optional<CrossingKind> kind_between(const Disc& a, const Disc& b) {
    bool qa = a.kind == DiscKind::Quad, qb = b.kind == DiscKind::Quad;
    if (qa && qb) return a.type == b.type ? CrossingKind::Parallel : CrossingKind::QuadQuad;
    if (qa || qb) return CrossingKind::TriQuad;
    if (a.type == b.type) return CrossingKind::TriTri;
    return std::nullopt;
}

void record_crossings(SingularSurface& S) {
    const auto& discs = S.complex.discs;
    std::map<int, std::vector<int>> byTet;
    for (std::size_t d = 0; d < discs.size(); ++d) byTet[discs[d].tet].push_back(static_cast<int>(d));
    for (const auto& [t, ds] : byTet)
        for (std::size_t i = 0; i < ds.size(); ++i)
            for (std::size_t j = i + 1; j < ds.size(); ++j) {
                if (S.layer[ix(ds[i])] == S.layer[ix(ds[j])]) continue;
                if (auto k = kind_between(discs[ix(ds[i])], discs[ix(ds[j])])) S.crossings.push_back({t, ds[i], ds[j], *k});
            }
}

}  // namespace

SingularSurface pair_discs(const PartialDisc& disc, const PartialDisc& partner) {
    const Ball& B0 = disc.ball;
    const Ball& B1 = partner.ball;
    if (B0.copy_of != B1.copy_of || !(B0.base == B1.base)) throw SurfaceError("discs live over different balls");
    SingularSurface S;
    auto& D = S.complex;
    D.base = B0.base;
    int n = B0.size();
    std::array<std::vector<int>, 2> idx{std::vector<int>(ix(n), -1), std::vector<int>(ix(n), -1)};
    std::array<const PartialDisc*, 2> layers{&disc, &partner};
    for (int L = 0; L < 2; ++L)
        for (int i = 0; i < n; ++i) {
            const auto& s = layers[ix(L)]->disc[ix(i)];
            if (!s) continue;
            idx[ix(L)][ix(i)] = D.F();
            D.discs.push_back({B0.copy_of[ix(i)], s->kind, s->type, L});
            S.layer.push_back(L);
        }
    D.across.assign(ix(D.F()), {-1, -1, -1, -1});
    for (int L = 0; L < 2; ++L) {
        const PartialDisc& P = *layers[ix(L)];
        for (int i = 0; i < n; ++i) {
            int d = idx[ix(L)][ix(i)];
            if (d < 0) continue;
            for (int f = 0; f < 4; ++f) {
                auto v = arc_on(P, i, f);
                if (!v) continue;
                const auto& g = *P.ball.full.gluing(i, f);
                // Interior arcs stay in their layer; boundary arcs meet the other layer.
                int L2 = P.ball.is_interior({i, f}) ? L : 1 - L;
                int o = idx[ix(L2)][ix(g.tet)];
                if (o < 0 || arc_on(*layers[ix(L2)], g.tet, g.perm[f]) != g.perm[*v])
                    throw SurfaceError("arc on face " + std::to_string(f) + " of tet " + std::to_string(B0.copy_of[ix(i)]) +
                                       " has no partner arc");
                D.across[ix(d)][ix(f)] = o;
            }
        }
    }
    compute_cells(D);
    if (disc.seed_tet >= 0) S.seed_disc = idx[0][ix(disc.seed_tet)];
    record_crossings(S);
    return S;
}

SingularSurface overlay(const Triangulation& T, const NormalCoordinates& first, const NormalCoordinates& second) {
    SingularSurface S;
    auto& D = S.complex;
    D.base = T;
    int L = 0;
    for (const auto* x : {&first, &second}) {
        auto R = reconstruct(T, *x);
        int off = D.F();
        for (std::size_t d = 0; d < R.discs.size(); ++d) {
            D.discs.push_back(R.discs[d]);
            auto a = R.across[d];
            for (auto& o : a)
                if (o >= 0) o += off;
            D.across.push_back(a);
            S.layer.push_back(L);
        }
        ++L;
    }
    compute_cells(D);
    for (int d = 0; d < D.F(); ++d)
        if (D.discs[ix(d)].kind == DiscKind::Quad) {
            S.seed_disc = d;
            break;
        }
    record_crossings(S);
    return S;
}

}  // namespace cuspforge
