#include "cuspforge/coverings.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <numeric>
#include <sstream>

namespace cuspforge {

namespace {

constexpr long kMaxBranchedSheets = 4096;

std::size_t ix(int v) { return static_cast<std::size_t>(v); }

struct CutData {
    std::vector<std::pair<FaceSlot, FaceSlot>> tree;  // base labels
    std::vector<BoundaryPair> pairs;                  // base labels
    Ball ball;
};

CutData cut_along_ball(const Triangulation& T) {
    CutData d{{}, {}, unfold(T)};
    auto relabel = [&](FaceSlot s) { return FaceSlot{d.ball.copy_of[ix(s.tet)], s.face}; };
    for (auto [a, b] : d.ball.tree()) d.tree.emplace_back(relabel(a), relabel(b));
    for (const auto& p : d.ball.boundary_pairs()) d.pairs.push_back({relabel(p.first), relabel(p.second), p.perm});
    return d;
}

// Sheets 0..K-1; tree faces stay inside a sheet, pair i sends sheet b to next(b, i).
CoveringMap assemble(const Triangulation& T, const CutData& cut, int K, const std::function<int(int, int)>& next,
                     const std::function<std::string(int)>& label) {
    int n = T.size();
    CoveringMap c;
    c.base = T;
    c.degree = K;
    c.total = Triangulation(K * n);
    for (int b = 0; b < K; ++b) {
        for (auto [a, a2] : cut.tree) {
            const auto& g = *T.gluing(a.tet, a.face);
            c.total.join(b * n + a.tet, a.face, b * n + g.tet, g.perm);
        }
        for (std::size_t i = 0; i < cut.pairs.size(); ++i) {
            const auto& p = cut.pairs[i];
            int b2 = next(b, static_cast<int>(i));
            c.total.join(b * n + p.first.tet, p.first.face, b2 * n + p.second.tet, p.perm);
        }
    }
    c.tet_map.resize(ix(K * n));
    c.sheet_label.resize(ix(K * n));
    for (int b = 0; b < K; ++b)
        for (int t = 0; t < n; ++t) {
            c.tet_map[ix(b * n + t)] = t;
            c.sheet_label[ix(b * n + t)] = label(b);
        }
    return c;
}

// ---- PGL(2, p) arithmetic on the projective line; the point p stands for ∞.

struct Mat {
    long a, b, c, d;
    auto operator<=>(const Mat&) const = default;
};

long md(long x, long p) { return ((x % p) + p) % p; }

long inv_mod(long x, long p) {
    long r = 1, e = p - 2, base = md(x, p);
    while (e > 0) {
        if (e & 1) r = r * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return r;
}

Mat normalize(Mat m, long p) {
    long v[4] = {md(m.a, p), md(m.b, p), md(m.c, p), md(m.d, p)};
    for (long x : v)
        if (x != 0) {
            long iv = inv_mod(x, p);
            return {v[0] * iv % p, v[1] * iv % p, v[2] * iv % p, v[3] * iv % p};
        }
    throw std::logic_error("zero matrix");
}

Mat mul(const Mat& x, const Mat& y, long p) {
    return normalize({x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d}, p);
}

long apply(const Mat& m, long x, long p) {
    if (x == p) return md(m.c, p) == 0 ? p : m.a * inv_mod(m.c, p) % p;
    long num = md(m.a * x + m.b, p), den = md(m.c * x + m.d, p);
    return den == 0 ? p : num * inv_mod(den, p) % p;
}

// Möbius map sending (z1,z2,z3) to (0,∞,1).
Mat to_standard(const std::array<long, 3>& z, long p) {
    auto [z1, z2, z3] = z;
    if (z1 == p) return {0, md(z3 - z2, p), 1, md(-z2, p)};
    if (z2 == p) return {1, md(-z1, p), 0, md(z3 - z1, p)};
    if (z3 == p) return {1, md(-z1, p), 1, md(-z2, p)};
    return {md(z3 - z2, p), md(-z1 * (z3 - z2), p), md(z3 - z1, p), md(-z2 * (z3 - z1), p)};
}

Mat from_three(const std::array<long, 3>& src, const std::array<long, 3>& dst, long p) {
    Mat A = to_standard(src, p), B = to_standard(dst, p);
    Mat Bi{B.d, md(-B.b, p), md(-B.c, p), B.a};
    return normalize({Bi.a * A.a + Bi.b * A.c, Bi.a * A.b + Bi.b * A.d, Bi.c * A.a + Bi.d * A.c, Bi.c * A.b + Bi.d * A.d}, p);
}

}  // namespace

CoveringMap identity_cover(const Triangulation& T) {
    CoveringMap c;
    c.total = T;
    c.base = T;
    c.degree = 1;
    c.construction = "identity";
    c.tet_map.resize(ix(T.size()));
    std::iota(c.tet_map.begin(), c.tet_map.end(), 0);
    c.sheet_label.assign(ix(T.size()), "0");
    return c;
}

CoveringMap doubling_cover(const Triangulation& T) {
    CutData cut = cut_along_ball(T);
    int m = static_cast<int>(cut.pairs.size());
    if (m > 20) throw std::runtime_error("doubling degree too large");
    auto c = assemble(
        T, cut, 1 << m, [](int b, int i) { return b ^ (1 << i); },
        [m](int b) {
            std::string s(ix(m), '0');
            for (int i = 0; i < m; ++i)
                if ((b >> i) & 1) s[ix(i)] = '1';
            return s;
        });
    c.construction = "doubling";
    return c;
}

std::optional<CoveringMap> congruence_cover(const Triangulation& T, int pInt) {
    long p = pInt;
    int n = T.size();
    auto vr = validate(T);
    if (!vr.ok || !vr.orientable) return std::nullopt;
    for (const auto& cls : edge_classes(T).classes)
        if (cls.index % 6 != 0) return std::nullopt;
    long w = -1;
    for (long x = 2; x < p; ++x)
        if ((x * x + x + 1) % p == 0) {
            w = x;
            break;
        }
    if (w < 0) return std::nullopt;
    long z = md(1 + w, p), zb = md(1 + w * w, p);
    auto standard = [&](int sign) { return std::array<long, 4>{p, 0, 1, sign > 0 ? z : zb}; };

    std::vector<std::array<long, 4>> pos(ix(n));
    std::vector<bool> placed(ix(n), false);
    std::vector<std::array<bool, 4>> tree(ix(n), {false, false, false, false});
    pos[0] = standard(vr.signs[0]);
    placed[0] = true;
    std::deque<int> q{0};
    auto face_points = [](const std::array<long, 4>& P, int f, const Perm4* perm) {
        std::array<long, 3> out{};
        int k = 0;
        for (int v = 0; v < 4; ++v)
            if (v != f) out[ix(k++)] = P[ix(perm ? (*perm)[v] : v)];
        return out;
    };
    while (!q.empty()) {
        int t = q.front();
        q.pop_front();
        for (int f = 0; f < 4; ++f) {
            const auto& g = *T.gluing(t, f);
            if (placed[ix(g.tet)]) continue;
            auto std2 = standard(vr.signs[ix(g.tet)]);
            Mat M = from_three(face_points(std2, f, &g.perm), face_points(pos[ix(t)], f, nullptr), p);
            for (int v = 0; v < 4; ++v) pos[ix(g.tet)][ix(v)] = apply(M, std2[ix(v)], p);
            placed[ix(g.tet)] = true;
            tree[ix(t)][ix(f)] = true;
            tree[ix(g.tet)][ix(g.perm[f])] = true;
            q.push_back(g.tet);
        }
    }
    const Mat I = normalize({1, 0, 0, 1}, p);
    std::vector<std::array<Mat, 4>> hol(ix(n));
    std::vector<Mat> gens;
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            if (tree[ix(t)][ix(f)]) {
                hol[ix(t)][ix(f)] = I;
                continue;
            }
            const auto& g = *T.gluing(t, f);
            hol[ix(t)][ix(f)] = from_three(face_points(pos[ix(t)], f, nullptr), face_points(pos[ix(g.tet)], f, &g.perm), p);
            gens.push_back(hol[ix(t)][ix(f)]);
        }
    std::vector<Mat> G{I};
    std::map<Mat, int> index{{I, 0}};
    for (std::size_t k = 0; k < G.size(); ++k)
        for (const Mat& h : gens) {
            Mat x = mul(h, G[k], p);
            if (index.emplace(x, static_cast<int>(G.size())).second) G.push_back(x);
        }
    int K = static_cast<int>(G.size());
    CoveringMap c;
    c.base = T;
    c.degree = K;
    c.construction = "congruence-p" + std::to_string(pInt);
    c.total = Triangulation(K * n);
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const auto& g = *T.gluing(t, f);
            for (int b = 0; b < K; ++b) {
                int b2 = index.at(mul(hol[ix(t)][ix(f)], G[ix(b)], p));
                c.total.set(b * n + t, f, Gluing{b2 * n + g.tet, g.perm});
            }
        }
    c.tet_map.resize(ix(K * n));
    c.sheet_label.resize(ix(K * n));
    for (int b = 0; b < K; ++b)
        for (int t = 0; t < n; ++t) {
            const Mat& m = G[ix(b)];
            c.tet_map[ix(b * n + t)] = t;
            c.sheet_label[ix(b * n + t)] =
                "[" + std::to_string(m.a) + "," + std::to_string(m.b) + "," + std::to_string(m.c) + "," + std::to_string(m.d) + "]";
        }
    if (!validate(c.total).ok) return std::nullopt;
    return c;
}

CoveringMap finite_cover(const Triangulation& T) {
    std::string diag;
    std::optional<CoveringMap> d;
    auto pairs = unfold(T).boundary_pairs().size();
    long long tets = pairs < 40 ? (1LL << pairs) * T.size() : -1;
    if (tets >= 0 && tets <= kDoublingTetBudget) {
        d = doubling_cover(T);
        auto u = unique_common_simplex_check(d->total);
        if (u.ok) return *d;
        diag = "doubling (degree " + std::to_string(d->degree) + ") fails the unique common simplex property at tets " +
               std::to_string(u.violation->first) + "," + std::to_string(u.violation->second) + ": " + u.detail;
    } else {
        diag = "doubling skipped: 2^" + std::to_string(pairs) + " sheets exceed the budget of " +
               std::to_string(kDoublingTetBudget) + " tets";
    }
    for (int p : {7, 13, 19, 31, 37, 43}) {
        auto c = congruence_cover(T, p);
        if (!c || !is_connected(c->total) || !unique_common_simplex_check(c->total).ok) continue;
        c->doubling_ucs = false;
        c->doubling_diagnostic = diag;
        return *c;
    }
    if (!d) throw std::runtime_error(diag + "; no congruence cover available");
    d->doubling_ucs = false;
    d->doubling_diagnostic = diag + "; no congruence cover available";
    return *d;
}

namespace {

void check_projection(const CoveringMap& c, CoverReport& r) {
    int n = c.base.size();
    if (c.total.size() != c.degree * n) r.failures.push_back("total tet count is not degree * base tets");
    if (static_cast<int>(c.tet_map.size()) != c.total.size()) {
        r.failures.push_back("tet map has wrong size");
        return;
    }
    std::vector<int> count(ix(n), 0);
    for (int x : c.tet_map) {
        if (x < 0 || x >= n) {
            r.failures.push_back("tet map leaves the base");
            return;
        }
        ++count[ix(x)];
    }
    for (int t = 0; t < n; ++t)
        if (count[ix(t)] != c.degree) r.failures.push_back("base tet " + std::to_string(t) + " has " + std::to_string(count[ix(t)]) + " preimages");
    auto v = validate(c.total);
    for (const auto& viol : v.violations)
        r.failures.push_back("total " + viol.kind + " at " + std::to_string(viol.tet) + ":" + std::to_string(viol.face));
    for (int t = 0; t < c.total.size(); ++t)
        for (int f = 0; f < 4; ++f) {
            const auto& g = c.total.gluing(t, f);
            const auto& bg = c.base.gluing(c.tet_map[ix(t)], f);
            if (!g || !bg) continue;
            if (bg->tet != c.tet_map[ix(g->tet)] || bg->perm != g->perm)
                r.failures.push_back("gluing " + std::to_string(t) + ":" + std::to_string(f) + " does not project to the base");
        }
}

// Returns the wrap count of every total class; records failures on non-integer wraps.
std::vector<int> wrap_counts(const CoveringMap& c, CoverReport& r, std::map<int, int>* sums, std::vector<int>* baseOf) {
    auto be = edge_classes(c.base);
    auto te = edge_classes(c.total);
    std::vector<int> wraps;
    for (const auto& cls : te.classes) {
        const auto& m = cls.members.front();
        int bc = be.of(c.tet_map[ix(m.tet)], m.a, m.b);
        int bi = be.classes[ix(bc)].index;
        if (cls.index % bi != 0) r.failures.push_back("edge class over base class " + std::to_string(bc) + " has non-integral wrap");
        wraps.push_back(cls.index / bi);
        if (sums) (*sums)[bc] += cls.index / bi;
        if (baseOf) baseOf->push_back(bc);
    }
    return wraps;
}

}  // namespace

CoverReport verify_covering(const CoveringMap& c) {
    CoverReport r;
    check_projection(c, r);
    if (r.failures.empty()) {
        std::map<int, int> sums;
        auto wraps = wrap_counts(c, r, &sums, nullptr);
        for (const auto& [bc, s] : sums)
            if (s != c.degree) r.failures.push_back("wraps over base class " + std::to_string(bc) + " sum to " + std::to_string(s));
        int branched = static_cast<int>(std::count_if(wraps.begin(), wraps.end(), [](int w) { return w > 1; }));
        if (branched > 0) r.notes.push_back(std::to_string(branched) + " edge classes wrap more than once (branched along edges)");
    }
    r.ok = r.failures.empty();
    return r;
}

namespace {

// Sheets are Z_k^r, encoded base k; pair i shifts every sheet by shifts[i].
int add_digits(int a, int b, int k, int r) {
    int out = 0, mulr = 1;
    for (int d = 0; d < r; ++d) {
        out += ((a % k + b % k) % k) * mulr;
        a /= k;
        b /= k;
        mulr *= k;
    }
    return out;
}

std::string digits_label(int b, int k, int r) {
    std::string s;
    for (int d = 0; d < r; ++d) {
        if (d) s += ".";
        s += std::to_string(b % k);
        b /= k;
    }
    return s;
}

bool generates(const std::vector<int>& shifts, int k, int r, int order) {
    std::vector<bool> seen(ix(order), false);
    std::vector<int> stack{0};
    seen[0] = true;
    int count = 1;
    while (!stack.empty()) {
        int g = stack.back();
        stack.pop_back();
        for (int s : shifts) {
            int h = add_digits(g, s, k, r);
            if (!seen[ix(h)]) {
                seen[ix(h)] = true;
                ++count;
                stack.push_back(h);
            }
        }
    }
    return count == order;
}

std::optional<BranchedCoveringMap> search_group(const Triangulation& T, const CutData& cut, int k, int r, int target, long& budget) {
    int m = static_cast<int>(cut.pairs.size());
    int order = 1;
    for (int d = 0; d < r; ++d) order *= k;
    std::vector<int> s(ix(m), 0);
    while (true) {
        if (--budget < 0) throw std::runtime_error("branched cover search budget exhausted");
        if (generates(s, k, r, order)) {
            auto c = assemble(
                T, cut, order, [&](int b, int i) { return add_digits(b, s[ix(i)], k, r); },
                [&](int b) { return digits_label(b, k, r); });
            bool good = true;
            for (const auto& cls : edge_classes(c.total).classes)
                if (cls.index < target) {
                    good = false;
                    break;
                }
            if (good) {
                BranchedCoveringMap out;
                c.construction = "branched-k" + std::to_string(k) + "-r" + std::to_string(r);
                out.cover = std::move(c);
                out.k = k;
                out.rank = r;
                out.shifts = s;
                out.target_index = target;
                return out;
            }
        }
        int i = m - 1;
        while (i >= 0 && s[ix(i)] == order - 1) s[ix(i--)] = 0;
        if (i < 0) return std::nullopt;
        ++s[ix(i)];
    }
}

// Smallest rank r for this k; the rank never needs to exceed the number of pairs.
std::optional<BranchedCoveringMap> search_k(const Triangulation& T, const CutData& cut, int k, int target, long& budget) {
    int m = static_cast<int>(cut.pairs.size());
    if (k == 1) return search_group(T, cut, 1, 1, target, budget);
    long order = 1;
    for (int r = 1; r <= m; ++r) {
        order *= k;
        if (order > kMaxBranchedSheets) break;
        if (auto b = search_group(T, cut, k, r, target, budget)) return b;
    }
    return std::nullopt;
}

void finish_branched(BranchedCoveringMap& b, const CutData& cut) {
    b.weights = boundary_weights(cut.ball);
    long long m0 = 1;
    for (const auto& w : b.weights) m0 *= w.m;
    b.copy_bound = static_cast<long long>(b.k) * m0;
    CoverReport scratch;
    std::vector<int> baseOf;
    auto wraps = wrap_counts(b.cover, scratch, nullptr, &baseOf);
    std::set<int> locus;
    for (std::size_t i = 0; i < wraps.size(); ++i)
        if (wraps[i] > 1) locus.insert(baseOf[i]);
    b.branch_locus.assign(locus.begin(), locus.end());
}

}  // namespace

BranchedCoveringMap branched_cover(const Triangulation& T, int target) {
    CutData cut = cut_along_ball(T);
    long budget = 2'000'000;
    for (int k = 1; k <= 24; ++k) {
        if (auto b = search_k(T, cut, k, target, budget)) {
            finish_branched(*b, cut);
            return *b;
        }
    }
    throw std::runtime_error("no branched cover with wrap multiple at most 24 reaches the target index");
}

BranchedCoveringMap branched_cover_with_k(const Triangulation& T, int k, int target) {
    CutData cut = cut_along_ball(T);
    long budget = 2'000'000;
    auto b = search_k(T, cut, k, target, budget);
    if (!b) throw std::runtime_error("no branched cover with wrap multiple " + std::to_string(k) + " reaches the target index");
    finish_branched(*b, cut);
    return *b;
}

CoverReport verify_branched_cover(const BranchedCoveringMap& b) {
    CoverReport r;
    check_projection(b.cover, r);
    if (r.failures.empty()) {
        std::vector<int> baseOf;
        auto wraps = wrap_counts(b.cover, r, nullptr, &baseOf);
        std::set<int> locus(b.branch_locus.begin(), b.branch_locus.end());
        auto te = edge_classes(b.cover.total);
        for (std::size_t i = 0; i < wraps.size(); ++i) {
            if (wraps[i] < 1) r.failures.push_back("wrap count below 1");
            if (wraps[i] > 1 && !locus.count(baseOf[i]))
                r.failures.push_back("branching over base class " + std::to_string(baseOf[i]) + " outside the declared locus");
            if (te.classes[i].index < b.target_index)
                r.failures.push_back("edge class " + std::to_string(i) + " has index " + std::to_string(te.classes[i].index));
        }
    }
    r.ok = r.failures.empty();
    return r;
}

std::string format_cover_map(const CoveringMap& c) {
    std::ostringstream os;
    for (int t = 0; t < c.total.size(); ++t) os << t << " " << c.tet_map[ix(t)] << " " << c.sheet_label[ix(t)] << "\n";
    return os.str();
}

}  // namespace cuspforge
