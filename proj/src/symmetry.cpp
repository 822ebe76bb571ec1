#include "cuspforge/symmetry.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace cuspforge {

namespace {

std::size_t ix(int v) { return static_cast<std::size_t>(v); }

// Automorphisms of a connected triangulation are fixed by where tet 0 goes.
int key_of(const Automorphism& g) { return g.tet[0] * 24 + g.perm[0].index(); }

}  // namespace

bool Automorphism::is_identity() const {
    for (std::size_t t = 0; t < tet.size(); ++t)
        if (tet[t] != static_cast<int>(t) || perm[t] != Perm4::identity()) return false;
    return true;
}

bool Automorphism::fixes_a_tet() const {
    for (std::size_t t = 0; t < tet.size(); ++t)
        if (tet[t] == static_cast<int>(t)) return true;
    return false;
}

std::vector<Automorphism> automorphisms(const Triangulation& T) {
    std::vector<Automorphism> out;
    int n = T.size();
    if (n == 0 || !is_connected(T)) return out;
    Automorphism g;
    // Stabiliser of tet 0, identity first.
    std::vector<Automorphism> stab;
    for (const Perm4& p0 : Perm4::all())
        if (extend_isomorphism(T, T, 0, p0, g.tet, g.perm)) stab.push_back(g);
    // One automorphism per tet in the orbit of tet 0. Tets reached by
    // composing known ones need no search.
    std::vector<std::optional<Automorphism>> to(ix(n));
    to[0] = stab.front();
    std::vector<Automorphism> gens;
    std::vector<int> reached{0};
    for (int u = 1; u < n; ++u) {
        if (to[ix(u)]) continue;
        bool found = false;
        for (const Perm4& p0 : Perm4::all())
            if (extend_isomorphism(T, T, u, p0, g.tet, g.perm)) {
                found = true;
                break;
            }
        if (!found) continue;
        gens.push_back(g);
        for (std::size_t i = 0; i < reached.size(); ++i) {
            const Automorphism h = *to[ix(reached[i])];
            for (const auto& k : gens) {
                int v = k.tet[ix(reached[i])];
                if (to[ix(v)]) continue;
                to[ix(v)] = compose(k, h);
                reached.push_back(v);
            }
        }
    }
    for (int u = 0; u < n; ++u) {
        if (!to[ix(u)]) continue;
        std::vector<Automorphism> here;
        for (const auto& s : stab) here.push_back(compose(*to[ix(u)], s));
        std::sort(here.begin(), here.end(), [](const Automorphism& a, const Automorphism& b) { return a.perm[0] < b.perm[0]; });
        for (auto& h : here) out.push_back(std::move(h));
    }
    return out;
}

Automorphism compose(const Automorphism& g, const Automorphism& h) {
    Automorphism r;
    r.tet.resize(h.tet.size());
    r.perm.resize(h.perm.size());
    for (std::size_t t = 0; t < h.tet.size(); ++t) {
        int u = h.tet[t];
        r.tet[t] = g.tet[ix(u)];
        r.perm[t] = g.perm[ix(u)] * h.perm[t];
    }
    return r;
}

std::vector<std::vector<int>> free_subgroups(const std::vector<Automorphism>& autos, std::size_t limit) {
    int n = static_cast<int>(autos.size());
    if (n == 0) return {};
    int maxKey = 0;
    for (const auto& a : autos) maxKey = std::max(maxKey, key_of(a));
    std::vector<int> byKey(ix(maxKey + 1), -1);
    for (int i = 0; i < n; ++i) byKey[ix(key_of(autos[ix(i)]))] = i;
    // Only the tet-0 column of a product is needed to identify it.
    auto mul = [&](int a, int b) {
        const auto& g = autos[ix(a)];
        const auto& h = autos[ix(b)];
        int u = h.tet[0];
        return byKey[ix(g.tet[ix(u)] * 24 + (g.perm[ix(u)] * h.perm[0]).index())];
    };
    int id = -1;
    for (int i = 0; i < n; ++i)
        if (autos[ix(i)].is_identity()) id = i;
    std::vector<bool> bad(ix(n));
    for (int i = 0; i < n; ++i) bad[ix(i)] = i != id && autos[ix(i)].fixes_a_tet();

    // Closure of a generating set; empty if some element fixes a tet.
    long work = 2'000'000;  // multiplications
    std::vector<char> mark(ix(n), 0);
    auto closure = [&](const std::vector<int>& gens) {
        std::vector<int> elems{id};
        mark[ix(id)] = 1;
        bool ok = true;
        for (std::size_t i = 0; i < elems.size() && ok; ++i)
            for (int g : gens) {
                --work;
                int y = mul(g, elems[i]);
                if (bad[ix(y)]) {
                    ok = false;
                    break;
                }
                if (!mark[ix(y)]) {
                    mark[ix(y)] = 1;
                    elems.push_back(y);
                }
            }
        for (int e : elems) mark[ix(e)] = 0;
        if (!ok) return std::vector<int>{};
        std::sort(elems.begin(), elems.end());
        return elems;
    };

    std::set<std::vector<int>> found;
    std::vector<int> cyclicGen;
    struct Group {
        std::vector<int> gens;  // positions in cyclicGen, increasing
        std::vector<int> elems;
    };
    std::vector<Group> layer;
    for (int i = 0; i < n; ++i) {
        if (i == id || bad[ix(i)]) continue;
        auto H = closure({i});
        if (!H.empty() && found.insert(H).second) {
            layer.push_back({{static_cast<int>(cyclicGen.size())}, H});
            cyclicGen.push_back(i);
        }
    }
    // Grow by one cyclic generator at a time, generators in increasing order.
    while (!layer.empty() && work > 0) {
        std::vector<Group> next;
        for (const auto& G : layer)
            for (int k = G.gens.back() + 1; k < static_cast<int>(cyclicGen.size()) && work > 0; ++k) {
                int g = cyclicGen[ix(k)];
                if (std::binary_search(G.elems.begin(), G.elems.end(), g)) continue;
                std::vector<int> gens;
                for (int j : G.gens) gens.push_back(cyclicGen[ix(j)]);
                gens.push_back(g);
                auto K = closure(gens);
                if (K.empty() || !found.insert(K).second) continue;
                auto more = G.gens;
                more.push_back(k);
                next.push_back({more, K});
            }
        layer = std::move(next);
    }
    std::vector<std::vector<int>> out(found.begin(), found.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.size() > y.size(); });
    if (out.size() > limit) out.resize(limit);
    return out;
}

std::optional<Quotient> quotient(const Triangulation& T, const std::vector<Automorphism>& autos,
                                 const std::vector<int>& subgroup) {
    int n = T.size();
    Quotient q;
    q.order = static_cast<int>(subgroup.size());
    q.rep_of.assign(ix(n), -1);
    q.chart.assign(ix(n), Perm4{});
    std::vector<int> reps;
    for (int t = 0; t < n; ++t) {
        if (q.rep_of[ix(t)] >= 0) continue;
        int qt = static_cast<int>(reps.size());
        reps.push_back(t);
        int orbit = 0;
        for (int h : subgroup) {
            const auto& g = autos[ix(h)];
            int u = g.tet[ix(t)];
            if (q.rep_of[ix(u)] >= 0) return std::nullopt;  // stabiliser is not trivial
            q.rep_of[ix(u)] = qt;
            q.chart[ix(u)] = g.perm[ix(t)].inverse();
            ++orbit;
        }
        if (orbit != q.order) return std::nullopt;
    }
    q.T = Triangulation(static_cast<int>(reps.size()));
    for (std::size_t r = 0; r < reps.size(); ++r)
        for (int f = 0; f < 4; ++f) {
            const auto& g = T.gluing(reps[r], f);
            if (!g) continue;
            Perm4 p = q.chart[ix(g->tet)] * g->perm;
            int u = q.rep_of[ix(g->tet)];
            if (u == static_cast<int>(r) && p[f] == f) return std::nullopt;
            q.T.set(static_cast<int>(r), f, Gluing{u, p});
        }
    for (int r = 0; r < q.T.size(); ++r)
        for (int f = 0; f < 4; ++f) {
            const auto& g = q.T.gluing(r, f);
            if (!g) continue;
            const auto& back = q.T.gluing(g->tet, g->perm[f]);
            if (!back || back->tet != r || back->perm != g->perm.inverse()) return std::nullopt;
        }
    return q;
}

NormalCoordinates lift(const Quotient& q, const NormalCoordinates& xq) {
    int n = static_cast<int>(q.rep_of.size());
    NormalCoordinates x(n);
    for (int t = 0; t < n; ++t) {
        int r = q.rep_of[ix(t)];
        const Perm4& c = q.chart[ix(t)];
        for (int v = 0; v < 4; ++v) x.tri(t, v) = xq.tri(r, c[v]);
        for (int b = 1; b < 4; ++b) x.quad(t, quad_family(0, b)) = xq.quad(r, quad_family(c[0], c[b]));
    }
    return x;
}

}  // namespace cuspforge
