#include "cuspforge/triangulation.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <deque>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

#include "text_lines.hpp"

namespace cuspforge {

// ---------------------------------------------------------------- Perm4

Perm4 Perm4::from_string(std::string_view s) {
    if (s.size() != 4) throw std::invalid_argument("permutation must have 4 digits");
    Perm4 p;
    bool seen[4] = {false, false, false, false};
    for (int i = 0; i < 4; ++i) {
        char c = s[static_cast<std::size_t>(i)];
        if (c < '0' || c > '3') throw std::invalid_argument("permutation digit out of range");
        int v = c - '0';
        if (seen[v]) throw std::invalid_argument("permutation is not a bijection");
        seen[v] = true;
        p.img[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
    }
    return p;
}

const std::vector<Perm4>& Perm4::all() {
    static const std::vector<Perm4> perms = [] {
        std::vector<Perm4> out;
        std::array<std::uint8_t, 4> a{0, 1, 2, 3};
        do {
            Perm4 p;
            p.img = a;
            out.push_back(p);
        } while (std::next_permutation(a.begin(), a.end()));
        return out;
    }();
    return perms;
}

Perm4 Perm4::inverse() const {
    Perm4 q;
    for (int i = 0; i < 4; ++i) q.img[img[static_cast<std::size_t>(i)]] = static_cast<std::uint8_t>(i);
    return q;
}

Perm4 Perm4::operator*(const Perm4& rhs) const {
    Perm4 r;
    for (int i = 0; i < 4; ++i) r.img[static_cast<std::size_t>(i)] = img[rhs.img[static_cast<std::size_t>(i)]];
    return r;
}

bool Perm4::is_odd() const {
    int inv = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (img[static_cast<std::size_t>(i)] > img[static_cast<std::size_t>(j)]) ++inv;
    return inv % 2 == 1;
}

int Perm4::index() const {
    const auto& a = all();
    return static_cast<int>(std::lower_bound(a.begin(), a.end(), *this) - a.begin());
}

std::string Perm4::str() const {
    std::string s(4, '0');
    for (int i = 0; i < 4; ++i) s[static_cast<std::size_t>(i)] = static_cast<char>('0' + img[static_cast<std::size_t>(i)]);
    return s;
}

// ---------------------------------------------------------------- Triangulation

FaceSlot Triangulation::partner(int t, int f) const {
    const auto& g = gluing(t, f);
    if (!g) throw std::logic_error("face is not glued");
    return {g->tet, g->perm[f]};
}

void Triangulation::join(int t, int f, int t2, Perm4 p) {
    set(t, f, Gluing{t2, p});
    set(t2, p[f], Gluing{t, p.inverse()});
}

void Triangulation::unjoin(int t, int f) {
    if (!is_glued(t, f)) return;
    auto p = partner(t, f);
    set(t, f, std::nullopt);
    set(p.tet, p.face, std::nullopt);
}

int Triangulation::add_tet() {
    glue_.emplace_back();
    return size() - 1;
}

ParseError::ParseError(int line_, int column_, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line_) + ", column " + std::to_string(column_) + ": " + msg),
      line(line_),
      column(column_) {}

// ---------------------------------------------------------------- parsing

using text::parse_int;
using text::Token;
using text::tokenize;

Triangulation parse_triangulation(std::string_view text) {
    auto lines = text::significant_lines(text);
    if (lines.empty()) throw ParseError(1, 1, "empty input");

    auto header = tokenize(lines[0].second);
    if (header.size() != 2 || header[0].text != "itri" || header[1].text != "1")
        throw ParseError(lines[0].first, 1, "expected header 'itri 1'");
    if (lines.size() < 2) throw ParseError(lines[0].first + 1, 1, "expected 'ntet <n>'");
    auto nt = tokenize(lines[1].second);
    if (nt.size() != 2 || nt[0].text != "ntet") throw ParseError(lines[1].first, 1, "expected 'ntet <n>'");
    int n = parse_int(nt[1], lines[1].first);

    Triangulation T(n);
    std::vector<bool> have(static_cast<std::size_t>(n), false);
    for (std::size_t li = 2; li < lines.size(); ++li) {
        int ln = lines[li].first;
        auto toks = tokenize(lines[li].second);
        if (toks[0].text != "tet") throw ParseError(ln, toks[0].column, "expected 'tet'");
        if (toks.size() != 6) throw ParseError(ln, toks[0].column, "expected 'tet <t>' followed by 4 face entries");
        int t = parse_int(toks[1], ln);
        if (t >= n) throw ParseError(ln, toks[1].column, "tet id out of range");
        if (have[static_cast<std::size_t>(t)]) throw ParseError(ln, toks[1].column, "duplicate tet id " + std::to_string(t));
        have[static_cast<std::size_t>(t)] = true;
        for (int j = 0; j < 4; ++j) {
            const Token& e = toks[static_cast<std::size_t>(2 + j)];
            if (e.text == "-") continue;
            auto c1 = e.text.find(':');
            auto c2 = c1 == std::string_view::npos ? c1 : e.text.find(':', c1 + 1);
            if (c2 == std::string_view::npos) throw ParseError(ln, e.column, "expected <tet>:<face>:<perm>");
            Token tt{e.text.substr(0, c1), e.column};
            Token ff{e.text.substr(c1 + 1, c2 - c1 - 1), e.column + static_cast<int>(c1) + 1};
            std::string_view ps = e.text.substr(c2 + 1);
            int pcol = e.column + static_cast<int>(c2) + 1;
            int t2 = parse_int(tt, ln);
            int f2 = parse_int(ff, ln);
            if (t2 >= n) throw ParseError(ln, tt.column, "target tet out of range");
            Perm4 p;
            try {
                p = Perm4::from_string(ps);
            } catch (const std::invalid_argument& ex) {
                throw ParseError(ln, pcol, ex.what());
            }
            if (f2 != p[j]) throw ParseError(ln, ff.column, "target face must equal the permutation image of the face");
            T.set(t, j, Gluing{t2, p});
        }
    }
    for (int t = 0; t < n; ++t)
        if (!have[static_cast<std::size_t>(t)]) throw ParseError(lines.back().first + 1, 1, "missing tet " + std::to_string(t));
    return T;
}

std::string serialize(const Triangulation& T) {
    std::string out = "itri 1\nntet " + std::to_string(T.size()) + "\n";
    for (int t = 0; t < T.size(); ++t) {
        out += "tet " + std::to_string(t);
        for (int f = 0; f < 4; ++f) {
            const auto& g = T.gluing(t, f);
            if (!g) {
                out += " -";
            } else {
                out += " " + std::to_string(g->tet) + ":" + std::to_string(g->perm[f]) + ":" + g->perm.str();
            }
        }
        out += "\n";
    }
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t triangulation_hash(const Triangulation& T) { return fnv1a64(serialize(T)); }

std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------- validation

bool is_connected(const Triangulation& T) {
    int n = T.size();
    if (n == 0) return true;
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<int> st{0};
    seen[0] = true;
    int count = 1;
    while (!st.empty()) {
        int t = st.back();
        st.pop_back();
        for (int f = 0; f < 4; ++f) {
            const auto& g = T.gluing(t, f);
            if (!g || g->tet < 0 || g->tet >= n || seen[static_cast<std::size_t>(g->tet)]) continue;
            seen[static_cast<std::size_t>(g->tet)] = true;
            ++count;
            st.push_back(g->tet);
        }
    }
    return count == n;
}

namespace {

std::optional<std::vector<int>> orientation_signs(const Triangulation& T) {
    int n = T.size();
    std::vector<int> sign(static_cast<std::size_t>(n), 0);
    for (int root = 0; root < n; ++root) {
        if (sign[static_cast<std::size_t>(root)] != 0) continue;
        sign[static_cast<std::size_t>(root)] = 1;
        std::vector<int> st{root};
        while (!st.empty()) {
            int t = st.back();
            st.pop_back();
            for (int f = 0; f < 4; ++f) {
                const auto& g = T.gluing(t, f);
                if (!g) continue;
                int want = g->perm.is_odd() ? sign[static_cast<std::size_t>(t)] : -sign[static_cast<std::size_t>(t)];
                int& s = sign[static_cast<std::size_t>(g->tet)];
                if (s == 0) {
                    s = want;
                    st.push_back(g->tet);
                } else if (s != want) {
                    return std::nullopt;
                }
            }
        }
    }
    return sign;
}

}  // namespace

ValidationReport validate(const Triangulation& T) {
    ValidationReport r;
    int n = T.size();
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const auto& g = T.gluing(t, f);
            if (!g) {
                r.violations.push_back({"totality", t, f, "face has no gluing"});
                continue;
            }
            if (g->tet == t) r.violations.push_back({"self-gluing", t, f, "face glued to its own tet"});
            int f2 = g->perm[f];
            const auto& back = T.gluing(g->tet, f2);
            if (!back || back->tet != t || back->perm != g->perm.inverse()) {
                r.violations.push_back({"involution", g->tet, f2,
                                        "expected " + std::to_string(t) + ":" + std::to_string(f) + ":" + g->perm.inverse().str()});
            }
        }
    if (!is_connected(T)) r.violations.insert(r.violations.begin(), Violation{"connectivity", -1, -1, "dual graph is disconnected"});
    r.ok = r.violations.empty();
    if (auto s = orientation_signs(T)) {
        r.orientable = true;
        r.signs = *s;
    }
    return r;
}

bool orientable_bruteforce(const Triangulation& T) {
    int n = T.size();
    if (n > 20) throw std::invalid_argument("brute force limited to 20 tets");
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        bool good = true;
        for (int t = 0; t < n && good; ++t)
            for (int f = 0; f < 4 && good; ++f) {
                const auto& g = T.gluing(t, f);
                if (!g) continue;
                bool same = ((mask >> t) & 1u) == ((mask >> g->tet) & 1u);
                if (same != g->perm.is_odd()) good = false;
            }
        if (good) return true;
    }
    return false;
}

// ---------------------------------------------------------------- edges and cusps

int edge_index(int a, int b) {
    if (a > b) std::swap(a, b);
    static constexpr int table[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};
    if (a == b || a < 0 || b > 3) throw std::invalid_argument("bad edge");
    return table[a][b];
}

double EdgeClass::angle_sum() const { return index * std::numbers::pi / 3.0; }

EdgeClasses edge_classes(const Triangulation& T) {
    int n = T.size();
    std::size_t slots = static_cast<std::size_t>(6 * n);
    EdgeClasses ec;
    ec.class_of.assign(slots, -1);
    ec.start_vertex.assign(slots, -1);
    // Slots are visited in increasing order, so each class is numbered by its smallest member.
    for (int t = 0; t < n; ++t)
        for (int e = 0; e < 6; ++e) {
            std::size_t s0 = static_cast<std::size_t>(6 * t + e);
            if (ec.class_of[s0] >= 0) continue;
            int id = static_cast<int>(ec.classes.size());
            EdgeClass cls;
            bool closed = true;
            ec.class_of[s0] = id;
            ec.start_vertex[s0] = kEdgeVerts[static_cast<std::size_t>(e)][0];
            std::vector<int> st{6 * t + e};
            while (!st.empty()) {
                int s = st.back();
                st.pop_back();
                int u = s / 6, ue = s % 6;
                int a = kEdgeVerts[static_cast<std::size_t>(ue)][0], b = kEdgeVerts[static_cast<std::size_t>(ue)][1];
                cls.members.push_back({u, a, b});
                int start = ec.start_vertex[static_cast<std::size_t>(s)];
                for (int f = 0; f < 4; ++f) {
                    if (f == a || f == b) continue;
                    const auto& g = T.gluing(u, f);
                    if (!g) {
                        closed = false;
                        continue;
                    }
                    int s2 = 6 * g->tet + edge_index(g->perm[a], g->perm[b]);
                    if (ec.class_of[static_cast<std::size_t>(s2)] >= 0) continue;
                    ec.class_of[static_cast<std::size_t>(s2)] = id;
                    ec.start_vertex[static_cast<std::size_t>(s2)] = g->perm[start];
                    st.push_back(s2);
                }
            }
            std::sort(cls.members.begin(), cls.members.end());
            cls.index = static_cast<int>(cls.members.size());
            ec.classes.push_back(std::move(cls));
            ec.closed.push_back(closed);
        }
    return ec;
}

CurvatureResult is_negatively_curved(const Triangulation& T) {
    CurvatureResult r;
    auto ec = edge_classes(T);
    r.negatively_curved = true;
    for (std::size_t i = 0; i < ec.classes.size(); ++i) {
        int idx = ec.classes[i].index;
        if (idx < 6) r.negatively_curved = false;
        if (idx > 6) r.singular.push_back(static_cast<int>(i));
    }
    return r;
}

std::vector<CuspClass> cusp_classes(const Triangulation& T) {
    int n = T.size();
    std::vector<int> cls(static_cast<std::size_t>(4 * n), -1);
    std::vector<CuspClass> out;
    for (int t = 0; t < n; ++t)
        for (int v = 0; v < 4; ++v) {
            if (cls[static_cast<std::size_t>(4 * t + v)] >= 0) continue;
            int id = static_cast<int>(out.size());
            CuspClass c;
            std::vector<int> st{4 * t + v};
            cls[static_cast<std::size_t>(4 * t + v)] = id;
            while (!st.empty()) {
                int s = st.back();
                st.pop_back();
                int u = s / 4, w = s % 4;
                c.corners.emplace_back(u, w);
                for (int f = 0; f < 4; ++f) {
                    if (f == w) continue;
                    const auto& g = T.gluing(u, f);
                    if (!g) continue;
                    int s2 = 4 * g->tet + g->perm[w];
                    if (cls[static_cast<std::size_t>(s2)] >= 0) continue;
                    cls[static_cast<std::size_t>(s2)] = id;
                    st.push_back(s2);
                }
            }
            std::sort(c.corners.begin(), c.corners.end());
            out.push_back(std::move(c));
        }
    return out;
}

UcsResult unique_common_simplex_check(const Triangulation& T) {
    int n = T.size();
    auto ec = edge_classes(T);
    std::vector<std::vector<int>> tetsOf(ec.classes.size());
    std::vector<std::array<int, 6>> cls(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t)
        for (int e = 0; e < 6; ++e) {
            int c = ec.class_of[static_cast<std::size_t>(6 * t + e)];
            cls[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)] = c;
            auto& v = tetsOf[static_cast<std::size_t>(c)];
            if (v.empty() || v.back() != t) v.push_back(t);
        }
    for (auto& v : tetsOf) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    std::vector<int> seenStamp(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<int>> shared(static_cast<std::size_t>(n));
    for (int t = 0; t < n; ++t) {
        std::vector<int> touched;
        std::set<int> own(cls[static_cast<std::size_t>(t)].begin(), cls[static_cast<std::size_t>(t)].end());
        for (int c : own)
            for (int u : tetsOf[static_cast<std::size_t>(c)]) {
                if (u <= t) continue;
                if (seenStamp[static_cast<std::size_t>(u)] != t) {
                    seenStamp[static_cast<std::size_t>(u)] = t;
                    shared[static_cast<std::size_t>(u)].clear();
                    touched.push_back(u);
                }
                shared[static_cast<std::size_t>(u)].push_back(c);
            }
        // Face-sharing partners may not share any edge class via this index only when
        // the face is glued with no common edge, which is impossible; still include them.
        for (int f = 0; f < 4; ++f) {
            const auto& g = T.gluing(t, f);
            if (g && g->tet > t && seenStamp[static_cast<std::size_t>(g->tet)] != t) {
                seenStamp[static_cast<std::size_t>(g->tet)] = t;
                shared[static_cast<std::size_t>(g->tet)].clear();
                touched.push_back(g->tet);
            }
        }
        std::sort(touched.begin(), touched.end());
        for (int u : touched) {
            const auto& sh = shared[static_cast<std::size_t>(u)];
            std::vector<int> faces;
            for (int f = 0; f < 4; ++f) {
                const auto& g = T.gluing(t, f);
                if (g && g->tet == u) faces.push_back(f);
            }
            bool ok = true;
            std::string why;
            if (faces.empty()) {
                ok = sh.size() <= 1;
                why = std::to_string(sh.size()) + " shared edge classes without a shared face";
            } else if (faces.size() == 1) {
                std::set<int> fe;
                int f = faces[0];
                for (int e = 0; e < 6; ++e)
                    if (kEdgeVerts[static_cast<std::size_t>(e)][0] != f && kEdgeVerts[static_cast<std::size_t>(e)][1] != f)
                        fe.insert(cls[static_cast<std::size_t>(t)][static_cast<std::size_t>(e)]);
                std::set<int> s(sh.begin(), sh.end());
                ok = s == fe;
                why = "shared edge classes beyond the shared face";
            } else {
                ok = false;
                why = std::to_string(faces.size()) + " shared faces";
            }
            if (!ok) return {false, std::make_pair(t, u), why};
        }
    }
    return {true, std::nullopt, ""};
}

DualGraph dual_graph(const Triangulation& T) {
    DualGraph g;
    g.nodes = T.size();
    for (int t = 0; t < T.size(); ++t)
        for (int f = 0; f < 4; ++f) {
            const auto& gl = T.gluing(t, f);
            if (!gl) continue;
            FaceSlot other{gl->tet, gl->perm[f]};
            if (other < FaceSlot{t, f}) continue;
            g.edges.push_back({t, f, other.tet, other.face, gl->perm});
        }
    return g;
}

bool extend_isomorphism(const Triangulation& A, const Triangulation& B, int img0, const Perm4& p0, std::vector<int>& map,
                        std::vector<Perm4>& pm) {
    int n = A.size();
    if (n != B.size() || n == 0) return false;
    map.assign(static_cast<std::size_t>(n), -1);
    pm.assign(static_cast<std::size_t>(n), Perm4{});
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    map[0] = img0;
    pm[0] = p0;
    used[static_cast<std::size_t>(img0)] = true;
    std::deque<int> q{0};
    while (!q.empty()) {
        int t = q.front();
        q.pop_front();
        int u = map[static_cast<std::size_t>(t)];
        const Perm4& p = pm[static_cast<std::size_t>(t)];
        for (int f = 0; f < 4; ++f) {
            const auto& ga = A.gluing(t, f);
            const auto& gb = B.gluing(u, p[f]);
            if (ga.has_value() != gb.has_value()) return false;
            if (!ga) continue;
            // Image of target tet: q with q∘σa = σb∘p
            Perm4 want = gb->perm * p * ga->perm.inverse();
            auto t2 = static_cast<std::size_t>(ga->tet);
            if (map[t2] < 0) {
                if (used[static_cast<std::size_t>(gb->tet)]) return false;
                map[t2] = gb->tet;
                pm[t2] = want;
                used[static_cast<std::size_t>(gb->tet)] = true;
                q.push_back(ga->tet);
            } else if (map[t2] != gb->tet || pm[t2] != want) {
                return false;
            }
        }
    }
    return std::find(map.begin(), map.end(), -1) == map.end();
}

bool isomorphic(const Triangulation& A, const Triangulation& B) {
    int n = A.size();
    if (n != B.size()) return false;
    if (n == 0) return true;
    std::vector<int> map;
    std::vector<Perm4> pm;
    for (int img0 = 0; img0 < n; ++img0)
        for (const Perm4& p0 : Perm4::all())
            if (extend_isomorphism(A, B, img0, p0, map, pm)) return true;
    return false;
}

}  // namespace cuspforge
