#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cuspforge {

// Permutation of {0,1,2,3}; img[i] is the image of i.
struct Perm4 {
    std::array<std::uint8_t, 4> img{0, 1, 2, 3};

    static Perm4 identity() { return {}; }
    static Perm4 from_string(std::string_view s);  // "1302"; throws std::invalid_argument
    static const std::vector<Perm4>& all();        // the 24 permutations, lexicographic

    int operator[](int i) const { return img[static_cast<std::size_t>(i)]; }
    Perm4 inverse() const;
    Perm4 operator*(const Perm4& rhs) const;  // (a*b)(i) = a(b(i))
    bool is_odd() const;
    int index() const;  // position in all()
    std::string str() const;
    bool operator==(const Perm4&) const = default;
    auto operator<=>(const Perm4&) const = default;
};

struct Gluing {
    int tet = -1;
    Perm4 perm;
    bool operator==(const Gluing&) const = default;
};

struct FaceSlot {
    int tet = -1;
    int face = -1;
    bool operator==(const FaceSlot&) const = default;
    auto operator<=>(const FaceSlot&) const = default;
};

// Tetrahedra with optional face gluings. Face f is opposite vertex f; the
// gluing (t,f) -> (t', s) identifies face f of t with face s(f) of t',
// vertex v going to s(v).
class Triangulation {
public:
    Triangulation() = default;
    explicit Triangulation(int n) : glue_(static_cast<std::size_t>(n)) {}

    int size() const { return static_cast<int>(glue_.size()); }
    const std::optional<Gluing>& gluing(int t, int f) const {
        return glue_[static_cast<std::size_t>(t)][static_cast<std::size_t>(f)];
    }
    bool is_glued(int t, int f) const { return gluing(t, f).has_value(); }
    FaceSlot partner(int t, int f) const;  // requires is_glued

    // One-sided write; join() writes both sides.
    void set(int t, int f, std::optional<Gluing> g) {
        glue_[static_cast<std::size_t>(t)][static_cast<std::size_t>(f)] = g;
    }
    void join(int t, int f, int t2, Perm4 p);
    void unjoin(int t, int f);
    int add_tet();

    bool operator==(const Triangulation&) const = default;

private:
    std::vector<std::array<std::optional<Gluing>, 4>> glue_;
};

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int line, int column, const std::string& msg);
};

Triangulation parse_triangulation(std::string_view text);
std::string serialize(const Triangulation& T);
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t triangulation_hash(const Triangulation& T);
std::string hex64(std::uint64_t h);

struct Violation {
    std::string kind;  // involution | self-gluing | totality | connectivity
    int tet = -1;
    int face = -1;
    std::string detail;
};

struct ValidationReport {
    bool ok = true;
    bool orientable = false;
    std::vector<Violation> violations;
    std::vector<int> signs;  // orientation signs when orientable
};

ValidationReport validate(const Triangulation& T);
// Independent exhaustive check over all 2^n sign assignments; n <= 20.
bool orientable_bruteforce(const Triangulation& T);

// Edges of a tet are indexed 0..5: 01 02 03 12 13 23.
inline constexpr std::array<std::array<int, 2>, 6> kEdgeVerts{{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};
int edge_index(int a, int b);  // a != b, either order

struct EdgeSlot {
    int tet = -1;
    int a = -1;  // a < b
    int b = -1;
    bool operator==(const EdgeSlot&) const = default;
    auto operator<=>(const EdgeSlot&) const = default;
};

struct EdgeClass {
    std::vector<EdgeSlot> members;  // sorted
    int index = 0;                  // number of wedges
    double angle_sum() const;       // index * pi/3
};

struct EdgeClasses {
    std::vector<EdgeClass> classes;  // numbered by smallest member
    std::vector<int> class_of;       // [6*t + e]
    // Tet vertex of slot (t,e) lying at the class's start end.
    std::vector<int> start_vertex;   // [6*t + e]
    // True when the class is a closed cycle of wedges (no boundary face met).
    std::vector<bool> closed;
    int of(int t, int a, int b) const { return class_of[static_cast<std::size_t>(6 * t + edge_index(a, b))]; }
};

EdgeClasses edge_classes(const Triangulation& T);

struct CurvatureResult {
    bool negatively_curved = false;
    std::vector<int> singular;  // classes with index > 6
};
CurvatureResult is_negatively_curved(const Triangulation& T);

struct CuspClass {
    std::vector<std::pair<int, int>> corners;  // (tet, vertex), sorted
};
std::vector<CuspClass> cusp_classes(const Triangulation& T);

struct UcsResult {
    bool ok = true;
    std::optional<std::pair<int, int>> violation;
    std::string detail;
};
UcsResult unique_common_simplex_check(const Triangulation& T);

struct DualEdge {
    int tet = -1, face = -1, tet2 = -1, face2 = -1;
    Perm4 perm;
};
struct DualGraph {
    int nodes = 0;
    std::vector<DualEdge> edges;  // one per glued face pair, from the smaller slot
};
DualGraph dual_graph(const Triangulation& T);
bool is_connected(const Triangulation& T);

// Relabels tets by BFS from tet 0 over gluings in face order; tests
// structural isomorphism by trying every start tet and permutation.
bool isomorphic(const Triangulation& A, const Triangulation& B);
// Extends tet 0 -> (img0, p0) along gluings of a connected A; fills the tet
// and vertex maps when this gives an isomorphism onto B.
bool extend_isomorphism(const Triangulation& A, const Triangulation& B, int img0, const Perm4& p0, std::vector<int>& tet,
                        std::vector<Perm4>& perm);

}  // namespace cuspforge
