#include "cuspforge/ball.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace cuspforge {

namespace {

std::size_t ix(int v) { return static_cast<std::size_t>(v); }

int third_face(int a, int b, int f) {
    for (int x = 0; x < 4; ++x)
        if (x != a && x != b && x != f) return x;
    return -1;
}

Ball build_ball(const Triangulation& T, const std::vector<int>& order, const std::vector<std::pair<int, int>>& treeFaces) {
    int n = T.size();
    Ball B;
    B.base = T;
    B.copy_of = order;
    std::vector<int> label(ix(n), -1);
    for (int i = 0; i < n; ++i) label[ix(order[ix(i)])] = i;
    B.full = Triangulation(n);
    for (int i = 0; i < n; ++i)
        for (int f = 0; f < 4; ++f) {
            const auto& g = T.gluing(order[ix(i)], f);
            if (g) B.full.set(i, f, Gluing{label[ix(g->tet)], g->perm});
        }
    B.interior.assign(ix(n), {false, false, false, false});
    for (auto [bt, f] : treeFaces) {
        int i = label[ix(bt)];
        B.interior[ix(i)][ix(f)] = true;
        auto p = B.full.partner(i, f);
        B.interior[ix(p.tet)][ix(p.face)] = true;
    }
    return B;
}

}  // namespace

Triangulation Ball::shape() const {
    Triangulation S(size());
    for (int t = 0; t < size(); ++t)
        for (int f = 0; f < 4; ++f)
            if (interior[ix(t)][ix(f)]) S.set(t, f, full.gluing(t, f));
    return S;
}

std::vector<std::pair<FaceSlot, FaceSlot>> Ball::tree() const {
    std::vector<std::pair<FaceSlot, FaceSlot>> out;
    for (int t = 0; t < size(); ++t)
        for (int f = 0; f < 4; ++f) {
            if (!interior[ix(t)][ix(f)]) continue;
            FaceSlot s{t, f}, p = partner(s);
            if (s < p) out.emplace_back(s, p);
        }
    return out;
}

std::vector<BoundaryPair> Ball::boundary_pairs() const {
    std::vector<BoundaryPair> out;
    for (int t = 0; t < size(); ++t)
        for (int f = 0; f < 4; ++f) {
            if (interior[ix(t)][ix(f)] || !full.is_glued(t, f)) continue;
            FaceSlot s{t, f}, p = partner(s);
            if (s < p) out.push_back({s, p, full.gluing(t, f)->perm});
        }
    return out;
}

std::string check_ball(const Ball& B) {
    int n = B.size();
    if (static_cast<int>(B.copy_of.size()) != n) return "copy_of has wrong size";
    std::vector<int> c = B.copy_of;
    std::sort(c.begin(), c.end());
    for (int i = 0; i < n; ++i)
        if (c[ix(i)] != i) return "copy_of is not a bijection";
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            if (!B.interior[ix(t)][ix(f)]) continue;
            if (!B.full.is_glued(t, f)) return "interior face without gluing";
            auto p = B.partner({t, f});
            if (!B.is_interior(p)) return "interior marking not symmetric";
        }
    Triangulation S = B.shape();
    if (static_cast<int>(B.tree().size()) != n - 1) return "tree does not have n-1 faces";
    if (!is_connected(S)) return "tree does not span";
    int open = 0;
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f)
            if (!B.interior[ix(t)][ix(f)] && B.full.is_glued(t, f)) ++open;
    if (open != 2 * static_cast<int>(B.boundary_pairs().size())) return "boundary faces not paired";
    auto ec = edge_classes(S);
    for (std::size_t i = 0; i < ec.classes.size(); ++i)
        if (ec.closed[i]) return "edge class " + std::to_string(i) + " misses the boundary";
    auto u = unique_common_simplex_check(S);
    if (!u.ok)
        return "unique common simplex fails for tets " + std::to_string(u.violation->first) + "," + std::to_string(u.violation->second);
    return "";
}

Ball unfold(const Triangulation& T) {
    int n = T.size();
    if (n < 2) throw BallError("unfold needs at least two tetrahedra");
    if (!is_connected(T)) throw BallError("unfold needs a connected triangulation");
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f)
            if (!T.is_glued(t, f)) throw BallError("unfold needs a closed triangulation");

    std::vector<int> order{0};
    std::vector<bool> in(ix(n), false);
    in[0] = true;
    std::vector<std::pair<int, int>> treeFaces;
    long leaves = 0;
    const long maxLeaves = 4096;
    std::optional<Ball> found;

    // Depth-first over attachment choices; the first leaf is the BFS tree.
    std::function<void()> extend = [&]() {
        if (found || leaves >= maxLeaves) return;
        if (static_cast<int>(order.size()) == n) {
            ++leaves;
            Ball B = build_ball(T, order, treeFaces);
            if (check_ball(B).empty()) found = std::move(B);
            return;
        }
        for (std::size_t i = 0; i < order.size() && !found; ++i) {
            int t = order[i];
            for (int f = 0; f < 4 && !found; ++f) {
                int t2 = T.gluing(t, f)->tet;
                if (in[ix(t2)]) continue;
                in[ix(t2)] = true;
                order.push_back(t2);
                treeFaces.emplace_back(t, f);
                extend();
                treeFaces.pop_back();
                order.pop_back();
                in[ix(t2)] = false;
                if (leaves >= maxLeaves) return;
            }
        }
    };
    extend();
    if (!found) throw BallError("no attachment order satisfies the ball properties");
    return *found;
}

FaceEdge rotate_to_boundary(const Ball& B, FaceEdge from, int* wedges) {
    if (B.is_interior(from.slot())) throw BallError("rotate_to_boundary starts on an interior face");
    int t = from.tet, f = from.face, a = from.a, b = from.b;
    int count = 1;
    for (int guard = 0; guard <= 6 * B.size() + 6; ++guard) {
        int g = third_face(a, b, f);
        if (!B.interior[ix(t)][ix(g)]) {
            if (wedges) *wedges = count;
            return {t, g, a, b};
        }
        const auto& gl = *B.full.gluing(t, g);
        int nf = gl.perm[g], na = gl.perm[a], nb = gl.perm[b];
        t = gl.tet;
        f = nf;
        a = na;
        b = nb;
        ++count;
    }
    throw BallError("edge walk did not reach the boundary");
}

FaceEdge jump(const Ball& B, FaceEdge from) {
    const auto& g = B.full.gluing(from.tet, from.face);
    if (!g) throw BallError("jump across an unglued face");
    return {g->tet, g->perm[from.face], g->perm[from.a], g->perm[from.b]};
}

std::vector<FaceSlot> distance_chain(const Ball& B, FaceEdge F1, FaceSlot F2) {
    if (rotate_to_boundary(B, F1).slot() != F2) throw BallError("faces do not meet along the given edge");
    FaceSlot target = B.partner(F2);
    FaceEdge cur = jump(B, F1);
    std::vector<FaceSlot> chain;
    for (int guard = 0; guard <= 4 * B.size(); ++guard) {
        FaceEdge nb = rotate_to_boundary(B, cur);
        if (nb.slot() == target) return chain;
        chain.push_back(nb.slot());
        cur = jump(B, nb);
    }
    throw BallError("distance chain does not close");
}

int face_distance(const Ball& B, FaceEdge F1, FaceSlot F2) { return static_cast<int>(distance_chain(B, F1, F2).size()); }

std::vector<FaceSlot> tree_path(const Ball& B, int from, int to) {
    std::vector<FaceSlot> prev(ix(B.size()), FaceSlot{-1, -1});
    std::vector<bool> seen(ix(B.size()), false);
    std::deque<int> q{from};
    seen[ix(from)] = true;
    while (!q.empty()) {
        int t = q.front();
        q.pop_front();
        if (t == to) break;
        for (int f = 0; f < 4; ++f) {
            if (!B.interior[ix(t)][ix(f)]) continue;
            int t2 = B.full.gluing(t, f)->tet;
            if (seen[ix(t2)]) continue;
            seen[ix(t2)] = true;
            prev[ix(t2)] = {t, f};
            q.push_back(t2);
        }
    }
    std::vector<FaceSlot> path;
    for (int x = to; x != from;) {
        FaceSlot p = prev[ix(x)];
        if (p.tet < 0) throw BallError("tets are not connected in the tree");
        path.push_back(p);
        x = p.tet;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

Ball cut_and_reglue(const Ball& B, FaceSlot R, FaceSlot G1, FaceSlot G1p) {
    if (!B.is_interior(R)) throw BallError("R is not a tree face");
    if (B.is_interior(G1) || B.is_interior(G1p)) throw BallError("G1 is not a boundary face");
    if (B.partner(G1) != G1p) throw BallError("G1 and G1p are not a boundary pair");
    auto path = tree_path(B, G1.tet, G1p.tet);
    FaceSlot Rp = B.partner(R);
    bool onPath = std::any_of(path.begin(), path.end(), [&](FaceSlot s) { return s == R || s == Rp; });
    if (!onPath) throw BallError("gluing G1 does not reconnect the components left by cutting R");
    Ball C = B;
    C.interior[ix(R.tet)][ix(R.face)] = false;
    C.interior[ix(Rp.tet)][ix(Rp.face)] = false;
    C.interior[ix(G1.tet)][ix(G1.face)] = true;
    C.interior[ix(G1p.tet)][ix(G1p.face)] = true;
    if (auto why = check_ball(C); !why.empty()) throw BallError("reglued ball is invalid: " + why);
    return C;
}

std::vector<EdgeWeight> boundary_weights(const Ball& B) {
    auto base = edge_classes(B.base);
    std::vector<EdgeWeight> out(base.classes.size());
    std::vector<bool> done(base.classes.size(), false);
    for (std::size_t c = 0; c < base.classes.size(); ++c) out[c].base_class = static_cast<int>(c);
    for (int t = 0; t < B.size(); ++t)
        for (int f = 0; f < 4; ++f) {
            if (B.is_interior({t, f})) continue;
            for (int e = 0; e < 6; ++e) {
                int a = kEdgeVerts[ix(e)][0], b = kEdgeVerts[ix(e)][1];
                if (a == f || b == f) continue;
                int cls = base.of(B.copy_of[ix(t)], a, b);
                if (done[ix(cls)]) continue;
                done[ix(cls)] = true;
                // Start just after the jump into (t,f) and go round once.
                FaceEdge start{t, f, a, b};
                FaceEdge cur = start;
                auto& w = out[ix(cls)];
                for (int guard = 0; guard <= 6 * B.size(); ++guard) {
                    int wedges = 0;
                    FaceEdge nb = rotate_to_boundary(B, cur, &wedges);
                    w.segment_wedges.push_back(wedges);
                    ++w.m;
                    cur = jump(B, nb);
                    if (cur.slot() == start.slot() && std::min(cur.a, cur.b) == a && std::max(cur.a, cur.b) == b) break;
                }
            }
        }
    return out;
}

std::string format_ball(const Ball& B) {
    std::ostringstream os;
    os << "ball ntet " << B.size() << "\n";
    for (int i = 0; i < B.size(); ++i) os << "copy " << i << " " << B.copy_of[ix(i)] << "\n";
    for (auto [a, b] : B.tree())
        os << "tree " << a.tet << ":" << a.face << " " << b.tet << ":" << b.face << " " << B.full.gluing(a.tet, a.face)->perm.str() << "\n";
    auto bp = B.boundary_pairs();
    os << "pairs " << bp.size() << "\n";
    for (const auto& p : bp)
        os << "pair " << p.first.tet << ":" << p.first.face << " " << p.second.tet << ":" << p.second.face << " " << p.perm.str() << "\n";
    for (const auto& w : boundary_weights(B)) {
        os << "weight edge " << w.base_class << " m " << w.m << " wedges";
        for (int x : w.segment_wedges) os << " " << x;
        os << "\n";
    }
    return os.str();
}

}  // namespace cuspforge
