#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "cuspforge/surface.hpp"
#include "cuspforge/symmetry.hpp"
#include "surface_local.hpp"

namespace cuspforge {

using local::Arc;
using local::ix;

namespace {

struct ResolveFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using PointPair = std::pair<int, int>;
PointPair pair_of(const Arc& a) { return {std::min(a.pa, a.pb), std::max(a.pa, a.pb)}; }

// A crossing point of two arcs on a face of the base triangulation.
struct Node {
    FaceSlot face;
    std::vector<int> links;
};

// Two discs of one tet crossing at two nodes, joined by a double arc.
struct Link {
    int tet = -1;
    int d1 = -1, d2 = -1;
    std::array<int, 2> node{-1, -1};
    std::array<std::pair<int, int>, 2> arcs;  // arc indices into the tet arc list, per node
    std::array<int, 2> forward{-1, -1};       // choice at node[0] -> forced choice at node[1]
    std::array<std::vector<GeneralizedDisc>, 2> outcome;  // per choice at node[0]
};

struct Curve {
    std::vector<int> nodes;
    std::vector<int> links;
    std::vector<int> valid;  // admissible choices at nodes[0]
    int choice = -1;
};

class Resolver {
public:
    Resolver(const SingularSurface& S, const ResolveOptions& opt) : S_(S), D_(S.complex), T_(D_.base), opt_(opt) {}

    ResolveResult run() {
        ResolveResult r;
        try {
            if (!D_.closed) throw ResolveFailure("singular surface has unmatched arcs");
            if (S_.seed_disc < 0) throw ResolveFailure("no seed quad");
            long cap = opt_.cap < 0 ? 4L * D_.F() * D_.F() : opt_.cap;
            order_points();
            build_arcs();
            find_crossings();
            build_curves();
            long steps = 0;
            for (int attempt = 0;; ++attempt) {
                steps += static_cast<long>(nodes_.size());
                if (steps > cap) throw ResolveFailure("resolution cap exceeded");
                apply(r);
                auto seedComp = seed_component(r.surface);
                auto chain = cyclic_tunnel_in(r.surface, seedComp);
                if (!chain) {
                    finish(r, seedComp);
                    break;
                }
                if (attempt >= 3) throw ResolveFailure("cyclic tunnel persists");
                flip_through(r.surface, *chain);
                r.cyclic_tunnel_fixed = true;
            }
        } catch (const ResolveFailure& e) {
            r.ok = false;
            r.failure = e.what();
        }
        r.double_curves = static_cast<int>(curves_.size());
        return r;
    }

private:
    const SingularSurface& S_;
    const DiscComplex& D_;
    const Triangulation& T_;
    ResolveOptions opt_;
    EdgeClasses ec_;
    std::vector<int> rank_;        // per point, from the class start
    std::vector<int> classCount_;  // points per edge class
    std::map<int, std::vector<int>> tetDiscs_;
    std::map<int, std::vector<Arc>> tetArcs_;
    std::vector<Node> nodes_;
    std::vector<Link> links_;
    std::vector<Curve> curves_;
    std::vector<int> nodeChoice_;

    int corner_point(int d, int e) const {
        const auto& cs = disc_corner_edges(D_.discs[ix(d)].kind, D_.discs[ix(d)].type);
        for (std::size_t s = 0; s < cs.size(); ++s)
            if (edge_index(cs[s].first, cs[s].second) == e) return D_.corner_vertex[ix(d)][s];
        return -1;
    }

    void order_points() {
        ec_ = edge_classes(T_);
        int nv = D_.V();
        std::vector<double> hug(ix(nv), 0);
        std::vector<int> hugN(ix(nv), 0);
        std::map<int, std::vector<std::pair<int, int>>> wedge;  // slot -> (disc, point)
        for (int d = 0; d < D_.F(); ++d) {
            const Disc& A = D_.discs[ix(d)];
            const auto& cs = disc_corner_edges(A.kind, A.type);
            for (std::size_t s = 0; s < cs.size(); ++s) {
                int e = edge_index(cs[s].first, cs[s].second);
                int slot = 6 * A.tet + e;
                int p = D_.corner_vertex[ix(d)][s];
                int start = ec_.start_vertex[ix(slot)];
                double v = 0;
                if (A.kind != DiscKind::Quad) v = A.type == start ? -1 : 1;
                hug[ix(p)] += v;
                ++hugN[ix(p)];
                wedge[slot].emplace_back(d, p);
            }
        }
        rank_.assign(ix(nv), -1);
        classCount_.assign(ec_.classes.size(), 0);
        std::vector<std::vector<int>> byClass(ec_.classes.size());
        for (int p = 0; p < nv; ++p) byClass[ix(D_.vertices[ix(p)].edge_class)].push_back(p);
        for (std::size_t c = 0; c < ec_.classes.size(); ++c) {
            const auto& pts = byClass[c];
            classCount_[c] = static_cast<int>(pts.size());
            if (pts.empty()) continue;
            for (const auto& m : ec_.classes[c].members) {
                const auto& w = wedge[6 * m.tet + edge_index(m.a, m.b)];
                std::set<int> seen;
                for (auto [d, p] : w) seen.insert(p);
                if (w.size() != pts.size() || seen.size() != pts.size())
                    throw ResolveFailure("surface vertex wraps an edge more than once");
            }
            const auto& ref = ec_.classes[c].members.front();
            int slot = 6 * ref.tet + edge_index(ref.a, ref.b);
            int start = ec_.start_vertex[ix(slot)];
            std::map<int, std::vector<std::tuple<int, int, int>>> perLayer;  // layer -> (group, pos, point)
            for (auto [d, p] : wedge[slot]) {
                const Disc& A = D_.discs[ix(d)];
                int group, pos;
                if (A.kind == DiscKind::Quad) {
                    int partner0 = -1;
                    for (int b = 1; b < 4; ++b)
                        if (quad_family(0, b) == A.type) partner0 = b;
                    bool zeroSide = start == 0 || start == partner0;
                    group = 1;
                    pos = zeroSide ? A.position : -A.position;
                } else {
                    group = A.type == start ? 0 : 2;
                    pos = A.type == start ? A.position : -A.position;
                }
                perLayer[S_.layer[ix(d)]].emplace_back(group, pos, p);
            }
            std::vector<std::vector<int>> lists;
            for (auto& [L, v] : perLayer) {
                std::sort(v.begin(), v.end());
                lists.emplace_back();
                for (auto& t : v) lists.back().push_back(std::get<2>(t));
            }
            std::vector<std::size_t> head(lists.size(), 0);
            for (int r = 0; r < classCount_[c]; ++r) {
                int best = -1;
                for (std::size_t L = 0; L < lists.size(); ++L) {
                    if (head[L] >= lists[L].size()) continue;
                    int p = lists[L][head[L]];
                    if (best < 0) {
                        best = static_cast<int>(L);
                        continue;
                    }
                    int q = lists[ix(best)][head[ix(best)]];
                    if (hug[ix(p)] / hugN[ix(p)] < hug[ix(q)] / hugN[ix(q)]) best = static_cast<int>(L);
                }
                rank_[ix(lists[ix(best)][head[ix(best)]++])] = r;
            }
        }
    }

    double pos_in(int t, const Arc& a, int p, int e) const {
        int slot = 6 * t + e;
        int c = ec_.class_of[ix(slot)];
        int n = classCount_[ix(c)];
        int r = rank_[ix(p)];
        int fromLo = ec_.start_vertex[ix(slot)] == local::edge_ends()[ix(e)][0] ? r : n - 1 - r;
        return local::circle_pos(a.face, e, fromLo, n);
    }

    void build_arcs() {
        for (int d = 0; d < D_.F(); ++d) {
            const Disc& A = D_.discs[ix(d)];
            tetDiscs_[A.tet].push_back(d);
            std::array<int, 6> corner;
            for (int e = 0; e < 6; ++e) corner[ix(e)] = corner_point(d, e);
            auto arcs = local::disc_arcs(A.kind, A.type, corner, d);
            auto& dst = tetArcs_[A.tet];
            dst.insert(dst.end(), arcs.begin(), arcs.end());
        }
    }

    void find_crossings() {
        std::map<std::tuple<int, int, PointPair, PointPair>, int> nodeId;
        for (auto& [t, arcs] : tetArcs_) {
            std::map<std::pair<int, int>, std::vector<std::tuple<int, int, int>>> byPair;  // (d1,d2) -> (node, i, j)
            std::vector<int> uses(arcs.size(), 0);
            for (std::size_t i = 0; i < arcs.size(); ++i)
                for (std::size_t j = i + 1; j < arcs.size(); ++j) {
                    const Arc& A = arcs[i];
                    const Arc& B = arcs[j];
                    if (A.face != B.face || A.owner == B.owner) continue;
                    if (!local::interleaved(pos_in(t, A, A.pa, A.ea), pos_in(t, A, A.pb, A.eb), pos_in(t, B, B.pa, B.ea),
                                            pos_in(t, B, B.pb, B.eb)))
                        continue;
                    ++uses[i];
                    ++uses[j];
                    FaceSlot here{t, A.face}, there = T_.partner(t, A.face);
                    FaceSlot canon = std::min(here, there);
                    auto pa = pair_of(A), pb = pair_of(B);
                    auto key = std::make_tuple(canon.tet, canon.face, std::min(pa, pb), std::max(pa, pb));
                    auto [it, fresh] = nodeId.emplace(key, static_cast<int>(nodes_.size()));
                    if (fresh) nodes_.push_back({canon, {}});
                    int a = A.owner, b = B.owner;
                    if (a < b)
                        byPair[{a, b}].emplace_back(it->second, static_cast<int>(i), static_cast<int>(j));
                    else
                        byPair[{b, a}].emplace_back(it->second, static_cast<int>(j), static_cast<int>(i));
                }
            for (int u : uses)
                if (u > 1) throw ResolveFailure("arc crosses more than one arc in tet " + std::to_string(t));
            for (auto& [dd, xs] : byPair) {
                if (xs.size() != 2)
                    throw ResolveFailure(std::to_string(xs.size()) + " crossings between two discs in tet " + std::to_string(t));
                Link L;
                L.tet = t;
                L.d1 = dd.first;
                L.d2 = dd.second;
                for (int k = 0; k < 2; ++k) {
                    L.node[ix(k)] = std::get<0>(xs[ix(k)]);
                    L.arcs[ix(k)] = {std::get<1>(xs[ix(k)]), std::get<2>(xs[ix(k)])};
                }
                int id = static_cast<int>(links_.size());
                for (int n : L.node) nodes_[ix(n)].links.push_back(id);
                links_.push_back(std::move(L));
            }
        }
        for (const auto& n : nodes_)
            if (n.links.size() != 2) throw ResolveFailure("crossing point not shared by two tets");
        for (auto& L : links_) evaluate(L);
    }

    // Arcs of a tet after smoothing the given crossings.
    std::vector<Arc> smoothed(int t, const std::vector<std::pair<std::pair<int, int>, int>>& cuts,
                              const std::set<int>* owners) const {
        const auto& arcs = tetArcs_.at(t);
        std::vector<bool> drop(arcs.size(), false);
        std::vector<Arc> out;
        for (const auto& [ij, ch] : cuts) {
            drop[ix(ij.first)] = drop[ix(ij.second)] = true;
            auto s = local::smooth(arcs[ix(ij.first)], arcs[ix(ij.second)], ch);
            out.push_back(s[0]);
            out.push_back(s[1]);
        }
        for (std::size_t i = 0; i < arcs.size(); ++i)
            if (!drop[i] && (!owners || owners->count(arcs[i].owner))) out.push_back(arcs[i]);
        return out;
    }

    void evaluate(Link& L) {
        std::set<int> owners{L.d1, L.d2};
        for (int c1 = 0; c1 < 2; ++c1)
            for (int c2 = 0; c2 < 2; ++c2) {
                auto arcs = smoothed(L.tet, {{L.arcs[0], c1}, {L.arcs[1], c2}}, &owners);
                auto curves = local::trace(arcs);
                if (!curves || curves->size() != 2) continue;
                if (L.forward[ix(c1)] >= 0) throw ResolveFailure("double arc smoothing is ambiguous in tet " + std::to_string(L.tet));
                L.forward[ix(c1)] = c2;
                for (const auto& c : *curves) {
                    auto cl = local::classify(c);
                    if (!cl.ok) cl.kind = DiscKind::Tunnel, cl.type = -2;
                    L.outcome[ix(c1)].push_back(local::to_disc(L.tet, c, cl));
                }
            }
        if (L.forward[0] < 0 || L.forward[1] < 0 || L.forward[0] == L.forward[1])
            throw ResolveFailure("no consistent exchange along the double arc in tet " + std::to_string(L.tet));
    }

    static int irregular(const std::vector<GeneralizedDisc>& ds) {
        int k = 0;
        for (const auto& d : ds) k += d.kind == DiscKind::PseudoTriangle || d.kind == DiscKind::Tunnel;
        return k;
    }

    // Choice at node[0] of a link when its node `from` has choice `c`; returns the other node's choice.
    int carry(const Link& L, int from, int c) const {
        if (L.node[0] == from) return L.forward[ix(c)];
        return L.forward[0] == c ? 0 : 1;
    }
    int link_choice(const Link& L) const { return nodeChoice_[ix(L.node[0])]; }

    void build_curves() {
        std::vector<bool> seen(nodes_.size(), false);
        int seedTet = D_.discs[ix(S_.seed_disc)].tet;
        for (std::size_t s = 0; s < nodes_.size(); ++s) {
            if (seen[s]) continue;
            Curve C;
            int n = static_cast<int>(s), via = nodes_[s].links[0];
            while (!seen[ix(n)]) {
                seen[ix(n)] = true;
                C.nodes.push_back(n);
                C.links.push_back(via);
                const Link& L = links_[ix(via)];
                n = L.node[0] == n ? L.node[1] : L.node[0];
                const auto& two = nodes_[ix(n)].links;
                via = two[0] == via ? two[1] : two[0];
            }
            // Walk once more to check that each start choice closes up.
            bool hasSeed = false;
            std::array<int, 2> bad{0, 0};
            std::array<bool, 2> keepsQuad{false, false};
            for (int c0 = 0; c0 < 2; ++c0) {
                int c = c0, at = C.nodes[0];
                for (int li : C.links) {
                    const Link& L = links_[ix(li)];
                    int atChoice0 = L.node[0] == at ? c : carry(L, at, c);
                    const auto& out = L.outcome[ix(atChoice0)];
                    bad[ix(c0)] += irregular(out);
                    if (L.tet == seedTet && (L.d1 == S_.seed_disc || L.d2 == S_.seed_disc)) {
                        hasSeed = true;
                        keepsQuad[ix(c0)] = keepsQuad[ix(c0)] ||
                                            std::any_of(out.begin(), out.end(), [](const GeneralizedDisc& d) { return d.kind == DiscKind::Quad; });
                    }
                    c = carry(L, at, c);
                    at = L.node[0] == at ? L.node[1] : L.node[0];
                }
                if (at == C.nodes[0] && c == c0) C.valid.push_back(c0);
            }
            if (C.valid.empty()) throw ResolveFailure("double curve has no consistent exchange");
            auto better = [&](int a, int b) {
                if (hasSeed && keepsQuad[ix(a)] != keepsQuad[ix(b)]) return keepsQuad[ix(a)];
                if (bad[ix(a)] != bad[ix(b)]) return bad[ix(a)] < bad[ix(b)];
                return a < b;
            };
            C.choice = C.valid[0];
            for (int v : C.valid)
                if (better(v, C.choice)) C.choice = v;
            if (opt_.irregular_start && !hasSeed && C.valid.size() == 2) C.choice = 1 - C.choice;
            curves_.push_back(std::move(C));
        }
    }

    void assign_choices() {
        nodeChoice_.assign(nodes_.size(), -1);
        for (const auto& C : curves_) {
            int c = C.choice, at = C.nodes[0];
            for (int li : C.links) {
                nodeChoice_[ix(at)] = c;
                const Link& L = links_[ix(li)];
                c = carry(L, at, c);
                at = L.node[0] == at ? L.node[1] : L.node[0];
            }
        }
    }

    std::string branch_name(const Link& L) const {
        const Disc& a = D_.discs[ix(L.d1)];
        const Disc& b = D_.discs[ix(L.d2)];
        const auto& out = L.outcome[ix(link_choice(L))];
        bool tunnel = std::any_of(out.begin(), out.end(), [](const GeneralizedDisc& d) { return d.kind == DiscKind::Tunnel; });
        if (a.kind == DiscKind::Quad && b.kind == DiscKind::Quad && a.type != b.type) {
            // b/c follow the circle reading of the two crossing faces, lowest face first.
            const auto& arcs = tetArcs_.at(L.tet);
            auto circle = [&](int k, int ch) {
                const Arc& A = arcs[ix(L.arcs[ix(k)].first)];
                const Arc& B = arcs[ix(L.arcs[ix(k)].second)];
                std::array<double, 4> p{pos_in(L.tet, A, A.pa, A.ea), pos_in(L.tet, A, A.pb, A.eb), pos_in(L.tet, B, B.pa, B.ea),
                                        pos_in(L.tet, B, B.pb, B.eb)};
                return local::circle_choice(A, B, ch, p);
            };
            bool swapFaces = arcs[ix(L.arcs[1].first)].face < arcs[ix(L.arcs[0].first)].face;
            std::vector<std::vector<int>> combos;
            for (int c0 = 0; c0 < 2; ++c0) {
                std::vector<int> v{circle(0, c0), circle(1, L.forward[ix(c0)])};
                if (swapFaces) std::swap(v[0], v[1]);
                combos.push_back(v);
            }
            auto mine = combos[ix(link_choice(L))];
            std::sort(combos.begin(), combos.end());
            return mine == combos[0] ? "b" : "c";
        }
        if (a.kind == DiscKind::Quad || b.kind == DiscKind::Quad) {
            if (a.kind != b.kind) return tunnel ? "non-essential" : "essential";
        }
        return tunnel || irregular(out) ? "irregular" : "isotopy";
    }

    void apply(ResolveResult& r) {
        assign_choices();
        r.log.clear();
        GeneralizedSurface G;
        G.base = T_;
        for (auto& [t, arcs] : tetArcs_) {
            std::vector<std::pair<std::pair<int, int>, int>> cuts;
            for (std::size_t li = 0; li < links_.size(); ++li) {
                const Link& L = links_[li];
                if (L.tet != t) continue;
                for (int k = 0; k < 2; ++k) cuts.push_back({L.arcs[ix(k)], nodeChoice_[ix(L.node[ix(k)])]});
                // One log step per double arc.
                ResolutionStep st;
                st.tet = t;
                const Disc& a = D_.discs[ix(L.d1)];
                const Disc& b = D_.discs[ix(L.d2)];
                st.kinds = crossing_kind_name(*kind_of(a, b));
                st.branch = branch_name(L);
                std::vector<GeneralizedDisc> before;
                for (int d : {L.d1, L.d2}) {
                    std::vector<Arc> mine;
                    for (const auto& x : arcs)
                        if (x.owner == d) mine.push_back(x);
                    auto c = local::trace(mine);
                    before.push_back(local::to_disc(t, c->front(), local::classify(c->front())));
                }
                st.checksum_before = arc_checksum(before);
                st.checksum_after = arc_checksum(L.outcome[ix(link_choice(L))]);
                r.log.push_back(st);
            }
            auto curves = local::trace(smoothed(t, cuts, nullptr));
            if (!curves) throw ResolveFailure("arcs do not close up in tet " + std::to_string(t));
            for (const auto& c : *curves) {
                auto cl = local::classify(c);
                if (!cl.ok) throw ResolveFailure("piece in tet " + std::to_string(t) + ": " + cl.why);
                G.discs.push_back(local::to_disc(t, c, cl));
            }
        }
        // Match arcs across faces by their endpoints.
        std::map<std::tuple<int, int, PointPair>, std::vector<std::pair<int, int>>> at;
        for (std::size_t d = 0; d < G.discs.size(); ++d)
            for (std::size_t k = 0; k < G.discs[d].arcs.size(); ++k) {
                const auto& a = G.discs[d].arcs[k];
                FaceSlot here{G.discs[d].tet, a.face};
                FaceSlot canon = std::min(here, T_.partner(here.tet, here.face));
                at[{canon.tet, canon.face, {std::min(a.point_a, a.point_b), std::max(a.point_a, a.point_b)}}].emplace_back(
                    static_cast<int>(d), static_cast<int>(k));
            }
        for (const auto& [key, v] : at) {
            if (v.size() != 2) throw ResolveFailure("arc without a partner after surgery");
            for (int s = 0; s < 2; ++s) {
                auto& a = G.discs[ix(v[ix(s)].first)].arcs[ix(v[ix(s)].second)];
                a.across_disc = v[ix(1 - s)].first;
                a.across_arc = v[ix(1 - s)].second;
            }
        }
        r.surface = std::move(G);
    }

    static std::optional<CrossingKind> kind_of(const Disc& a, const Disc& b) {
        bool qa = a.kind == DiscKind::Quad, qb = b.kind == DiscKind::Quad;
        if (qa && qb) return a.type == b.type ? CrossingKind::Parallel : CrossingKind::QuadQuad;
        if (qa || qb) return CrossingKind::TriQuad;
        return a.type == b.type ? CrossingKind::TriTri : CrossingKind::Parallel;
    }

    // Component ids per piece plus the component of the seed quad.
    std::pair<std::vector<int>, int> seed_component(const GeneralizedSurface& G) const {
        std::size_t n = G.discs.size();
        std::vector<int> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int x) { return parent[ix(x)] == x ? x : parent[ix(x)] = find(parent[ix(x)]); };
        for (std::size_t d = 0; d < n; ++d)
            for (const auto& a : G.discs[d].arcs)
                if (a.across_disc >= 0) parent[ix(find(static_cast<int>(d)))] = find(a.across_disc);
        std::vector<int> comp(n);
        for (std::size_t d = 0; d < n; ++d) comp[d] = find(static_cast<int>(d));

        const Disc& seed = D_.discs[ix(S_.seed_disc)];
        std::set<int> seedPts(D_.corner_vertex[ix(S_.seed_disc)].begin(), D_.corner_vertex[ix(S_.seed_disc)].end());
        int best = -1, bestHits = -1;
        for (std::size_t d = 0; d < n; ++d) {
            const auto& g = G.discs[d];
            if (g.tet != seed.tet || g.kind != DiscKind::Quad) continue;
            int hits = 0;
            for (const auto& a : g.arcs) hits += seedPts.count(a.point_a) + seedPts.count(a.point_b);
            if (hits > bestHits) {
                best = static_cast<int>(d);
                bestHits = hits;
            }
        }
        if (best < 0) throw ResolveFailure("seed quad lost in surgery");
        return {comp, comp[ix(best)]};
    }

    std::optional<TunnelChain> cyclic_tunnel_in(const GeneralizedSurface& G, const std::pair<std::vector<int>, int>& sc) const {
        for (auto& ch : G.tunnel_chains())
            if (ch.closed && sc.first[ix(ch.discs.front())] == sc.second) return ch;
        return std::nullopt;
    }

    void flip_through(const GeneralizedSurface& G, const TunnelChain& chain) {
        std::set<int> tets;
        for (int d : chain.discs) tets.insert(G.discs[ix(d)].tet);
        bool any = false;
        for (auto& C : curves_) {
            bool hit = std::any_of(C.links.begin(), C.links.end(), [&](int li) { return tets.count(links_[ix(li)].tet) > 0; });
            if (hit && C.valid.size() == 2) {
                C.choice = 1 - C.choice;
                any = true;
            }
        }
        if (!any) throw ResolveFailure("cyclic tunnel cannot be removed");
    }

    void finish(ResolveResult& r, const std::pair<std::vector<int>, int>& sc) const {
        NormalCoordinates x(T_.size());
        r.pseudo_triangles = r.pseudo_conversions = r.tunnels = 0;
        for (std::size_t d = 0; d < r.surface.discs.size(); ++d) {
            const auto& g = r.surface.discs[d];
            if (g.kind == DiscKind::PseudoTriangle) ++r.pseudo_triangles;
            if (sc.first[d] != sc.second) continue;
            switch (g.kind) {
                case DiscKind::Triangle: ++x.tri(g.tet, g.type); break;
                case DiscKind::PseudoTriangle:
                    ++x.tri(g.tet, g.type);
                    ++r.pseudo_conversions;
                    break;
                case DiscKind::Quad: ++x.quad(g.tet, g.type); break;
                case DiscKind::Tunnel: ++r.tunnels; break;
            }
        }
        r.x = x;
        if (!is_admissible(x)) throw ResolveFailure("resolved surface is not admissible");
        if (!is_solution(matching_matrix(T_), x)) throw ResolveFailure("resolved surface fails the matching equations");
        if (!x.has_quad()) throw ResolveFailure("resolved surface has no quad");
        r.ok = true;
    }
};

}  // namespace

ResolveResult resolve(const SingularSurface& S, const ResolveOptions& options) { return Resolver(S, options).run(); }

}  // namespace cuspforge

namespace cuspforge {

namespace {

std::optional<NormalCoordinates> pick_component(const Triangulation& T, const NormalCoordinates& x) {
    for (const auto& comp : components(reconstruct(T, x))) {
        auto y = coordinates_of(comp);
        if (y.has_quad() && !is_linking(comp)) return y;
    }
    return std::nullopt;
}

std::optional<NormalCoordinates> direct_search(const Triangulation& T, int tet, const SurfaceOptions& o,
                                               std::vector<std::string>& log) {
    for (int bound = 1; bound <= o.fallback_max_bound; ++bound)
        for (int fam = 0; fam < 3; ++fam) {
            auto s = find_solution(T, bound, tet, fam, o.node_budget);
            if (!s.solution) {
                if (!s.exhausted) log.push_back("search bound " + std::to_string(bound) + " family " + quad_family_name(fam) +
                                                ": node budget spent");
                continue;
            }
            if (auto y = pick_component(T, *s.solution)) return y;
        }
    return std::nullopt;
}

std::optional<std::pair<NormalCoordinates, int>> quotient_search(const Triangulation& T, const SurfaceOptions& o,
                                                                 std::vector<std::string>& log) {
    auto autos = automorphisms(T);
    for (const auto& H : free_subgroups(autos)) {
        if (H.size() < 2) continue;
        auto q = quotient(T, autos, H);
        if (!q) continue;
        for (int bound = 1; bound <= o.fallback_max_bound; ++bound)
            for (int fam = 0; fam < 3; ++fam) {
                auto s = find_solution(q->T, bound, q->rep_of[0], fam, o.node_budget);
                if (!s.solution) continue;
                auto x = lift(*q, *s.solution);
                if (!is_admissible(x) || !is_solution(matching_matrix(T), x)) continue;
                if (auto y = pick_component(T, x)) return std::make_pair(*y, q->T.size());
            }
        log.push_back("quotient by " + std::to_string(H.size()) + " symmetries: no surface");
    }
    return std::nullopt;
}

}  // namespace

SurfaceResult construct_nonlinking_surface(const Triangulation& T, const SurfaceOptions& options) {
    auto ucs = unique_common_simplex_check(T);
    if (!ucs.ok) throw SurfaceError("triangulation fails the unique common simplex check: " + ucs.detail);
    SurfaceResult out;
    Ball B = unfold(T);
    const int seed = 0;
    for (int fam = 0; fam < 3; ++fam) {
        std::string tag = std::string("family ") + quad_family_name(fam) + ": ";
        try {
            PartialDisc C1 = extend_quad(B, seed, fam);
            auto rc = reconnect(C1);
            if (!rc.ok || !rc.image_disc) {
                out.log.push_back(tag + "reconnect " + rc.failure + " after " + std::to_string(rc.iterations) + " steps, measure " +
                                  std::to_string(rc.measures.back()));
                continue;
            }
            PartialDisc here = extend_quad(rc.ball, seed, fam);
            bool parallel = here.same_discs(*rc.image_disc);
            for (int other = 0; other < 3 && !parallel; ++other)
                if (other != fam) {
                    try {
                        parallel = extend_quad(rc.ball, seed, other).same_discs(*rc.image_disc);
                    } catch (const SurfaceError&) {
                    }
                }
            if (parallel) {
                out.log.push_back(tag + "image disc parallel to a seed disc");
                continue;
            }
            auto S = pair_discs(here, *rc.image_disc);
            auto r = resolve(S);
            out.steps = r.log;
            if (!r.ok) {
                out.log.push_back(tag + "resolution failed: " + r.failure);
                continue;
            }
            out.x = r.x;
            out.start_family = fam;
            out.log.push_back(tag + "resolved " + std::to_string(r.log.size()) + " double arcs on " +
                              std::to_string(r.double_curves) + " double curves");
            return out;
        } catch (const std::exception& e) {
            out.log.push_back(tag + e.what());
        }
    }

    out.fallback = true;
    out.fallback_reason = out.log.empty() ? "no start family" : out.log.back();
    out.steps.clear();
    std::optional<NormalCoordinates> found;
    if (T.size() <= 32) {
        found = direct_search(T, seed, options, out.log);
        if (found) out.fallback_route = "direct";
    }
    if (!found) {
        if (auto q = quotient_search(T, options, out.log)) {
            found = q->first;
            out.fallback_route = "quotient-" + std::to_string(q->second);
        }
    }
    if (!found && T.size() > 32) {
        found = direct_search(T, seed, options, out.log);
        if (found) out.fallback_route = "direct";
    }
    if (!found) throw SurfaceError("no non-linking surface found: " + out.fallback_reason);
    out.x = *found;
    out.log.push_back("fallback via " + out.fallback_route);
    return out;
}

std::string format_resolution_log(const SurfaceResult& r) {
    std::string s;
    for (const auto& st : r.steps) {
        s += "tet " + std::to_string(st.tet) + " " + st.kinds + " " + st.branch + " " + st.checksum_before + " -> " +
             st.checksum_after + (st.conserved() ? "" : " MISMATCH") + "\n";
    }
    for (const auto& l : r.log) s += "# " + l + "\n";
    return s;
}

}  // namespace cuspforge
