#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oligocat/gset.hpp"
#include "oligocat/poset.hpp"

namespace oligocat {

// ---------------------------------------------------------------------------
// Instances
// ---------------------------------------------------------------------------

enum class CatKind {
    FinGSet,  // RC-A: finite G-sets for a fixed finite permutation group
    OpFinSet  // RC-B: opposite of non-empty finite sets
};

struct Bounds {
    int maxPointsA = 12;    // RC-A object size admitted to lattice enumeration
    int maxElementsB = 7;   // RC-B object size (Bell-number blowup)
    int maxOrbitSubsets = 22;  // RC-A: 2^orbits guard for ample/stable-subset sweeps
};

struct RCInstance;
using RCInstancePtr = std::shared_ptr<const RCInstance>;

struct RCInstance {
    CatKind kind;
    PermGroupPtr group;  // FinGSet only
    Bounds bounds;

    static RCInstancePtr finGSet(PermGroupPtr g, Bounds b = {}) {
        auto inst = std::make_shared<RCInstance>();
        inst->kind = CatKind::FinGSet;
        inst->group = std::move(g);
        inst->bounds = b;
        return inst;
    }
    static RCInstancePtr opFinSet(Bounds b = {}) {
        auto inst = std::make_shared<RCInstance>();
        inst->kind = CatKind::OpFinSet;
        inst->bounds = b;
        return inst;
    }
};

// ---------------------------------------------------------------------------
// Objects and morphisms
// ---------------------------------------------------------------------------

/// Object of an instance.  RC-A: a finite G-set.  RC-B: a non-empty labeled
/// finite set (the object is that set regarded in the opposite category).
struct RCObject {
    RCInstancePtr inst;
    std::shared_ptr<const GSet> gset;        // RC-A
    std::vector<std::string> labels;         // RC-B

    int size() const {
        return inst->kind == CatKind::FinGSet ? gset->points()
                                              : static_cast<int>(labels.size());
    }
    std::string key() const {
        if (inst->kind == CatKind::FinGSet) return "A:" + gset->key();
        std::string k = "B:";
        for (const auto& l : labels) k += l + ";";
        return k;
    }
    friend bool operator==(const RCObject& a, const RCObject& b) {
        if (a.inst->kind != b.inst->kind) return false;
        if (a.inst->kind == CatKind::FinGSet) return *a.gset == *b.gset;
        return a.labels == b.labels;
    }
};

inline RCObject makeObjectA(const RCInstancePtr& inst, GSet g) {
    if (inst->kind != CatKind::FinGSet) throw DomainError("makeObjectA on wrong instance");
    RCObject o;
    o.inst = inst;
    o.gset = std::make_shared<GSet>(std::move(g));
    return o;
}
inline RCObject makeObjectB(const RCInstancePtr& inst, std::vector<std::string> labels) {
    if (inst->kind != CatKind::OpFinSet) throw DomainError("makeObjectB on wrong instance");
    if (labels.empty()) throw DomainError("RC-B objects are non-empty");
    RCObject o;
    o.inst = inst;
    o.labels = std::move(labels);
    return o;
}
/// RC-B object with default labels x0..x{n-1}.
inline RCObject makeSetObject(const RCInstancePtr& inst, int n) {
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
    return makeObjectB(inst, std::move(labels));
}

/// Morphism f: source -> target.
/// RC-A: map[i] = image of source point i (size = source points).
/// RC-B: map holds the underlying set function u(target) -> u(source)
///       (size = target elements) — the reversal realizes the opposite category.
struct RCMor {
    RCObject source, target;
    std::vector<int> map;

    std::string key() const {
        std::string k = source.key() + ">" + target.key() + ":";
        for (int v : map) k += std::to_string(v) + ",";
        return k;
    }
    friend bool operator==(const RCMor& a, const RCMor& b) {
        return a.source == b.source && a.target == b.target && a.map == b.map;
    }
};

inline bool isValidMor(const RCMor& f) {
    if (f.source.inst->kind != f.target.inst->kind) return false;
    if (f.source.inst->kind == CatKind::FinGSet) {
        return isEquivariant(*f.source.gset, *f.target.gset, f.map);
    }
    if (f.map.size() != static_cast<size_t>(f.target.size())) return false;
    for (int v : f.map)
        if (v < 0 || v >= f.source.size()) return false;
    return true;
}

inline RCMor identityMor(const RCObject& x) {
    RCMor f;
    f.source = x;
    f.target = x;
    f.map.resize(x.size());
    std::iota(f.map.begin(), f.map.end(), 0);
    return f;
}

/// g ∘ f for f: X→Y, g: Y→Z.
inline RCMor composeMor(const RCMor& g, const RCMor& f) {
    if (!(f.target == g.source)) throw DomainError("composeMor: middle objects differ");
    RCMor h;
    h.source = f.source;
    h.target = g.target;
    if (f.source.inst->kind == CatKind::FinGSet) {
        h.map.resize(f.map.size());
        for (size_t i = 0; i < f.map.size(); ++i) h.map[i] = g.map[f.map[i]];
    } else {
        // underlying functions compose the other way: u(g∘f) = u(f) ∘ u(g)
        h.map.resize(g.map.size());
        for (size_t i = 0; i < g.map.size(); ++i) h.map[i] = f.map[g.map[i]];
    }
    return h;
}

inline bool isIsoMor(const RCMor& f) {
    if (f.source.size() != f.target.size()) return false;
    std::vector<char> seen(f.map.size(), 0);
    if (f.map.size() != static_cast<size_t>(f.source.size())) return false;
    for (int v : f.map) {
        if (v < 0 || v >= static_cast<int>(f.map.size()) || seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

/// Regular epimorphism test: RC-A point-surjectivity; RC-B injectivity of the
/// underlying map.
inline bool isSurjection(const RCMor& f) {
    if (f.source.inst->kind == CatKind::FinGSet) {
        std::vector<char> hit(f.target.size(), 0);
        for (int v : f.map) hit[v] = 1;
        return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
    }
    std::vector<char> seen(f.source.size(), 0);
    for (int v : f.map) {
        if (seen[v]) return false;
        seen[v] = 1;
    }
    return true;
}

inline RCMor inverseMor(const RCMor& f) {
    if (!isIsoMor(f)) throw DomainError("inverseMor: not an isomorphism");
    RCMor g;
    g.source = f.target;
    g.target = f.source;
    g.map.resize(f.map.size());
    for (size_t i = 0; i < f.map.size(); ++i) g.map[f.map[i]] = static_cast<int>(i);
    return g;
}

// ---------------------------------------------------------------------------
// Terminal object, types
// ---------------------------------------------------------------------------

inline RCObject terminalObject(const RCInstancePtr& inst) {
    if (inst->kind == CatKind::FinGSet)
        return makeObjectA(inst, GSet::trivialAction(inst->group, 1));
    return makeObjectB(inst, {"*"});
}

inline RCMor terminalMor(const RCObject& x) {
    RCMor f;
    f.source = x;
    f.target = terminalObject(x.inst);
    if (x.inst->kind == CatKind::FinGSet)
        f.map.assign(x.size(), 0);
    else
        f.map.assign(1, 0);  // pick the first element; choice is harmless up to iso
    return f;
}

/// Λ-index of the image of X → 1.  RC-A: {0 = empty, 1 = principal};
/// RC-B: always 1 (the only quotient of a singleton is itself).
inline int typeOf(const RCObject& x) {
    if (x.inst->kind == CatKind::FinGSet) return x.size() > 0 ? 1 : 0;
    return 1;
}
inline bool isPrincipal(const RCObject& x) { return typeOf(x) == 1; }

// ---------------------------------------------------------------------------
// Subobjects
// ---------------------------------------------------------------------------

/// Canonical subobject representative.
/// RC-A: data[i] ∈ {0,1}, membership of point i in a G-stable subset.
/// RC-B: data[i] = block index of element i in a set partition, numbered by
///        first occurrence (restricted-growth form).
struct Sub {
    std::vector<int> data;

    friend bool operator==(const Sub& a, const Sub& b) { return a.data == b.data; }
    friend bool operator<(const Sub& a, const Sub& b) { return a.data < b.data; }
    std::string key() const {
        std::string k;
        for (int v : data) k += std::to_string(v) + ",";
        return k;
    }
};

inline void canonicalizePartition(std::vector<int>& block) {
    std::map<int, int> relabel;
    for (int& b : block) {
        auto [it, inserted] = relabel.emplace(b, static_cast<int>(relabel.size()));
        b = it->second;
    }
}

inline int blockCount(const Sub& s) {
    int m = -1;
    for (int v : s.data) m = std::max(m, v);
    return m + 1;
}

inline bool isValidSub(const RCObject& x, const Sub& s) {
    if (s.data.size() != static_cast<size_t>(x.size())) return false;
    if (x.inst->kind == CatKind::FinGSet) {
        for (int v : s.data)
            if (v != 0 && v != 1) return false;
        for (const auto& a : x.gset->action())
            for (int p = 0; p < x.size(); ++p)
                if (s.data[p] && !s.data[a(p)]) return false;
        return true;
    }
    std::vector<int> copy = s.data;
    canonicalizePartition(copy);
    return copy == s.data;
}

inline Sub topSub(const RCObject& x) {
    Sub s;
    if (x.inst->kind == CatKind::FinGSet) {
        s.data.assign(x.size(), 1);
    } else {
        s.data.resize(x.size());
        std::iota(s.data.begin(), s.data.end(), 0);  // discrete partition = X itself
    }
    return s;
}
inline Sub bottomSub(const RCObject& x) {
    Sub s;
    s.data.assign(x.size(), 0);  // RC-A: empty subset; RC-B: one-block partition
    return s;
}

/// Subobject order: RC-A inclusion; RC-B reverse refinement (a ≤ b iff a's
/// partition is coarser than b's).
inline bool subLeq(const RCObject& x, const Sub& a, const Sub& b) {
    if (x.inst->kind == CatKind::FinGSet) {
        for (int i = 0; i < x.size(); ++i)
            if (a.data[i] && !b.data[i]) return false;
        return true;
    }
    // every block of b must lie inside a block of a
    std::map<int, int> bBlockToA;
    for (int i = 0; i < x.size(); ++i) {
        auto [it, inserted] = bBlockToA.emplace(b.data[i], a.data[i]);
        if (!inserted && it->second != a.data[i]) return false;
    }
    return true;
}

/// Greatest lower bound.  RC-A: intersection; RC-B: finest common coarsening
/// (join of partitions).
inline Sub subMeet(const RCObject& x, const Sub& a, const Sub& b) {
    Sub s;
    int n = x.size();
    if (x.inst->kind == CatKind::FinGSet) {
        s.data.resize(n);
        for (int i = 0; i < n; ++i) s.data[i] = a.data[i] && b.data[i];
        return s;
    }
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    auto unite = [&](int u, int v) {
        u = find(u);
        v = find(v);
        if (u != v) parent[std::max(u, v)] = std::min(u, v);
    };
    std::map<int, int> firstA, firstB;
    for (int i = 0; i < n; ++i) {
        auto [ia, na] = firstA.emplace(a.data[i], i);
        if (!na) unite(ia->second, i);
        auto [ib, nb] = firstB.emplace(b.data[i], i);
        if (!nb) unite(ib->second, i);
    }
    s.data.resize(n);
    for (int i = 0; i < n; ++i) s.data[i] = find(i);
    canonicalizePartition(s.data);
    return s;
}

/// Least upper bound.  RC-A: union; RC-B: common refinement.
inline Sub subJoin(const RCObject& x, const Sub& a, const Sub& b) {
    Sub s;
    int n = x.size();
    s.data.resize(n);
    if (x.inst->kind == CatKind::FinGSet) {
        for (int i = 0; i < n; ++i) s.data[i] = a.data[i] || b.data[i];
        return s;
    }
    std::map<std::pair<int, int>, int> pairId;
    for (int i = 0; i < n; ++i) {
        auto [it, inserted] =
            pairId.emplace(std::make_pair(a.data[i], b.data[i]), static_cast<int>(pairId.size()));
        s.data[i] = it->second;
    }
    canonicalizePartition(s.data);
    return s;
}

namespace detail {

/// All partitions of {0..n-1} as restricted-growth strings, lexicographic.
inline std::vector<std::vector<int>> allPartitions(int n) {
    std::vector<std::vector<int>> out;
    std::vector<int> rgs(n, 0);
    std::function<void(int, int)> go = [&](int i, int maxUsed) {
        if (i == n) {
            out.push_back(rgs);
            return;
        }
        for (int b = 0; b <= maxUsed + 1; ++b) {
            rgs[i] = b;
            go(i + 1, std::max(maxUsed, b));
        }
    };
    if (n > 0) go(0, -1);
    return out;
}

/// All coarsenings of a canonical partition (partitions of its blocks),
/// returned canonical.
inline std::vector<Sub> coarseningsOf(const Sub& s) {
    int k = blockCount(s);
    std::vector<Sub> out;
    for (const auto& p : allPartitions(k)) {
        Sub c;
        c.data.resize(s.data.size());
        for (size_t i = 0; i < s.data.size(); ++i) c.data[i] = p[s.data[i]];
        canonicalizePartition(c.data);
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

/// Complete subobject enumeration, sorted canonically.  Guarded by instance
/// bounds (RC-B partition counts grow as Bell numbers).
inline std::vector<Sub> subobjects(const RCObject& x) {
    const Bounds& b = x.inst->bounds;
    std::vector<Sub> out;
    if (x.inst->kind == CatKind::FinGSet) {
        if (x.size() > b.maxPointsA)
            throw SizeLimitError("subobjects: " + std::to_string(x.size()) +
                                 " points exceeds bound " + std::to_string(b.maxPointsA));
        auto orbits = x.gset->orbits();
        int k = static_cast<int>(orbits.size());
        if (k > b.maxOrbitSubsets) throw SizeLimitError("subobjects: too many orbits");
        for (uint64_t mask = 0; mask < (uint64_t{1} << k); ++mask) {
            Sub s;
            s.data.assign(x.size(), 0);
            for (int i = 0; i < k; ++i)
                if (mask & (uint64_t{1} << i))
                    for (int p : orbits[i]) s.data[p] = 1;
            out.push_back(std::move(s));
        }
    } else {
        if (x.size() > b.maxElementsB)
            throw SizeLimitError("subobjects: " + std::to_string(x.size()) +
                                 " elements exceeds bound " + std::to_string(b.maxElementsB));
        for (auto& p : detail::allPartitions(x.size())) {
            Sub s;
            s.data = std::move(p);
            out.push_back(std::move(s));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct SubLattice {
    std::vector<Sub> elems;  // sorted canonically
    FinitePoset poset;
    int bottomIdx = -1, topIdx = -1;
};

inline SubLattice subLattice(const RCObject& x) {
    auto elems = subobjects(x);
    int n = static_cast<int>(elems.size());
    std::vector<std::vector<char>> leq(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) leq[i][j] = subLeq(x, elems[i], elems[j]) ? 1 : 0;
    SubLattice L{std::move(elems), FinitePoset(std::move(leq))};
    Sub bot = bottomSub(x), top = topSub(x);
    for (int i = 0; i < n; ++i) {
        if (L.elems[i] == bot) L.bottomIdx = i;
        if (L.elems[i] == top) L.topIdx = i;
    }
    return L;
}

/// The subobject as an object in its own right.
/// RC-A: restriction to the member points.  RC-B: the block set, labeled by
/// each block's minimum-index element.
inline RCObject subObject(const RCObject& x, const Sub& s) {
    if (x.inst->kind == CatKind::FinGSet) {
        std::vector<int> pts;
        for (int i = 0; i < x.size(); ++i)
            if (s.data[i]) pts.push_back(i);
        return makeObjectA(x.inst, subGSet(*x.gset, pts));
    }
    int k = blockCount(s);
    std::vector<std::string> labels(k);
    std::vector<char> seen(k, 0);
    for (int i = 0; i < x.size(); ++i)
        if (!seen[s.data[i]]) {
            seen[s.data[i]] = 1;
            labels[s.data[i]] = x.labels[i];
        }
    return makeObjectB(x.inst, std::move(labels));
}

/// The canonical monomorphism subObject(x,s) -> x.
inline RCMor subMono(const RCObject& x, const Sub& s) {
    RCMor f;
    f.source = subObject(x, s);
    f.target = x;
    if (x.inst->kind == CatKind::FinGSet) {
        for (int i = 0; i < x.size(); ++i)
            if (s.data[i]) f.map.push_back(i);
    } else {
        f.map = s.data;  // u(x) -> blocks
    }
    return f;
}

/// Image of s under f, as a subobject of the target.
inline Sub imageOfSub(const RCMor& f, const Sub& s) {
    Sub out;
    if (f.source.inst->kind == CatKind::FinGSet) {
        out.data.assign(f.target.size(), 0);
        for (int i = 0; i < f.source.size(); ++i)
            if (s.data[i]) out.data[f.map[i]] = 1;
        return out;
    }
    // kernel partition of (u-side) y ↦ s.block[u(f)(y)]
    out.data.resize(f.target.size());
    for (int y = 0; y < f.target.size(); ++y) out.data[y] = s.data[f.map[y]];
    canonicalizePartition(out.data);
    return out;
}

/// Pullback of the subobject t of the target along f.
inline Sub preimageSub(const RCMor& f, const Sub& t) {
    Sub out;
    int n = f.source.size();
    if (f.source.inst->kind == CatKind::FinGSet) {
        out.data.resize(n);
        for (int i = 0; i < n; ++i) out.data[i] = t.data[f.map[i]];
        return out;
    }
    // finest partition of u(source) such that u(f) maps t-blocks into blocks
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    std::map<int, int> firstInBlock;
    for (int y = 0; y < f.target.size(); ++y) {
        auto [it, inserted] = firstInBlock.emplace(t.data[y], f.map[y]);
        if (!inserted) {
            int a = find(it->second), b = find(f.map[y]);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    out.data.resize(n);
    for (int i = 0; i < n; ++i) out.data[i] = find(i);
    canonicalizePartition(out.data);
    return out;
}

// ---------------------------------------------------------------------------
// Products
// ---------------------------------------------------------------------------

/// Binary product with factor bookkeeping.
/// RC-A: cartesian product, pair (a,b) at index a*ny + b.
/// RC-B: disjoint union of underlying sets, factor labels prefixed "0:"/"1:";
///        x's elements first.
struct Product {
    RCObject obj;
    RCObject x, y;
    int nx = 0, ny = 0;

    int pairIndex(int a, int b) const { return a * ny + b; }  // RC-A
    std::pair<int, int> unpair(int p) const { return {p / ny, p % ny}; }
};

inline Product product(const RCObject& x, const RCObject& y) {
    if (x.inst->kind != y.inst->kind) throw DomainError("product: instance mismatch");
    Product P;
    P.x = x;
    P.y = y;
    P.nx = x.size();
    P.ny = y.size();
    if (x.inst->kind == CatKind::FinGSet) {
        int n = P.nx * P.ny;
        std::vector<Permutation> action;
        for (size_t g = 0; g < x.gset->action().size(); ++g) {
            Permutation p;
            p.images.resize(n);
            for (int a = 0; a < P.nx; ++a)
                for (int b = 0; b < P.ny; ++b)
                    p.images[a * P.ny + b] =
                        x.gset->action()[g](a) * P.ny + y.gset->action()[g](b);
            action.push_back(std::move(p));
        }
        P.obj = makeObjectA(x.inst, GSet(x.gset->group(), n, std::move(action)));
    } else {
        std::vector<std::string> labels;
        for (const auto& l : x.labels) labels.push_back("0:" + l);
        for (const auto& l : y.labels) labels.push_back("1:" + l);
        P.obj = makeObjectB(x.inst, std::move(labels));
    }
    return P;
}

inline RCMor proj1(const Product& P) {
    RCMor f;
    f.source = P.obj;
    f.target = P.x;
    if (P.obj.inst->kind == CatKind::FinGSet) {
        f.map.resize(P.nx * P.ny);
        for (int a = 0; a < P.nx; ++a)
            for (int b = 0; b < P.ny; ++b) f.map[P.pairIndex(a, b)] = a;
    } else {
        f.map.resize(P.nx);
        std::iota(f.map.begin(), f.map.end(), 0);
    }
    return f;
}
inline RCMor proj2(const Product& P) {
    RCMor f;
    f.source = P.obj;
    f.target = P.y;
    if (P.obj.inst->kind == CatKind::FinGSet) {
        f.map.resize(P.nx * P.ny);
        for (int a = 0; a < P.nx; ++a)
            for (int b = 0; b < P.ny; ++b) f.map[P.pairIndex(a, b)] = b;
    } else {
        f.map.resize(P.ny);
        for (int j = 0; j < P.ny; ++j) f.map[j] = P.nx + j;
    }
    return f;
}

/// ⟨f,g⟩: Z → X×Y for f: Z→X, g: Z→Y.
inline RCMor pairing(const Product& P, const RCMor& f, const RCMor& g) {
    if (!(f.source == g.source) || !(f.target == P.x) || !(g.target == P.y))
        throw DomainError("pairing: cone does not match the product");
    RCMor h;
    h.source = f.source;
    h.target = P.obj;
    if (P.obj.inst->kind == CatKind::FinGSet) {
        h.map.resize(f.source.size());
        for (int z = 0; z < f.source.size(); ++z) h.map[z] = P.pairIndex(f.map[z], g.map[z]);
    } else {
        h.map.resize(P.nx + P.ny);
        for (int i = 0; i < P.nx; ++i) h.map[i] = f.map[i];
        for (int j = 0; j < P.ny; ++j) h.map[P.nx + j] = g.map[j];
    }
    return h;
}

/// Ternary product carrying all three binary projections.
struct Product3 {
    RCObject obj;
    RCObject x, y, z;
    int n1 = 0, n2 = 0, n3 = 0;
    Product p12prod, p13prod, p23prod;  // the binary products X×Y, X×Z, Y×Z
    RCMor p12, p13, p23;                // projections from obj to those products
    RCMor p1, p2, p3;

    int tripleIndex(int a, int b, int c) const { return (a * n2 + b) * n3 + c; }
};

inline Product3 product3(const RCObject& x, const RCObject& y, const RCObject& z) {
    Product3 T;
    T.x = x;
    T.y = y;
    T.z = z;
    T.n1 = x.size();
    T.n2 = y.size();
    T.n3 = z.size();
    if (x.inst->kind == CatKind::FinGSet) {
        int n = T.n1 * T.n2 * T.n3;
        std::vector<Permutation> action;
        for (size_t g = 0; g < x.gset->action().size(); ++g) {
            Permutation p;
            p.images.resize(n);
            for (int a = 0; a < T.n1; ++a)
                for (int b = 0; b < T.n2; ++b)
                    for (int c = 0; c < T.n3; ++c)
                        p.images[T.tripleIndex(a, b, c)] =
                            T.tripleIndex(x.gset->action()[g](a), y.gset->action()[g](b),
                                          z.gset->action()[g](c));
            action.push_back(std::move(p));
        }
        T.obj = makeObjectA(x.inst, GSet(x.gset->group(), n, std::move(action)));
    } else {
        std::vector<std::string> labels;
        for (const auto& l : x.labels) labels.push_back("0:" + l);
        for (const auto& l : y.labels) labels.push_back("1:" + l);
        for (const auto& l : z.labels) labels.push_back("2:" + l);
        T.obj = makeObjectB(x.inst, std::move(labels));
    }
    T.p12prod = product(x, y);
    T.p13prod = product(x, z);
    T.p23prod = product(y, z);

    auto makeProj = [&](const Product& target, int which) {
        RCMor f;
        f.source = T.obj;
        f.target = target.obj;
        if (T.obj.inst->kind == CatKind::FinGSet) {
            f.map.resize(T.n1 * T.n2 * T.n3);
            for (int a = 0; a < T.n1; ++a)
                for (int b = 0; b < T.n2; ++b)
                    for (int c = 0; c < T.n3; ++c) {
                        int p = T.tripleIndex(a, b, c);
                        if (which == 12) f.map[p] = target.pairIndex(a, b);
                        if (which == 13) f.map[p] = target.pairIndex(a, c);
                        if (which == 23) f.map[p] = target.pairIndex(b, c);
                    }
        } else {
            f.map.resize(target.nx + target.ny);
            auto offset = [&](int factor) {
                return factor == 0 ? 0 : (factor == 1 ? T.n1 : T.n1 + T.n2);
            };
            int fa = which == 23 ? 1 : 0;
            int fb = which == 12 ? 1 : 2;
            for (int i = 0; i < target.nx; ++i) f.map[i] = offset(fa) + i;
            for (int j = 0; j < target.ny; ++j) f.map[target.nx + j] = offset(fb) + j;
        }
        return f;
    };
    T.p12 = makeProj(T.p12prod, 12);
    T.p13 = makeProj(T.p13prod, 13);
    T.p23 = makeProj(T.p23prod, 23);
    T.p1 = composeMor(proj1(T.p12prod), T.p12);
    T.p2 = composeMor(proj2(T.p12prod), T.p12);
    T.p3 = composeMor(proj2(T.p13prod), T.p13);
    return T;
}

// ---------------------------------------------------------------------------
// Fiber products and image factorization
// ---------------------------------------------------------------------------

/// Fiber product of f: X→Z, g: Y→Z, materialized as a subobject of X×Y.
/// RC-A: the equalizing subset.  RC-B: the pushout of the underlying cospan.
struct FiberProduct {
    Product prod;  // X×Y
    Sub sub;       // the fiber product inside it
    RCObject obj;  // subObject(prod.obj, sub)
    RCMor toX, toY;
};

inline FiberProduct fiberProduct(const RCMor& f, const RCMor& g) {
    if (!(f.target == g.target)) throw DomainError("fiberProduct: codomains differ");
    FiberProduct F;
    F.prod = product(f.source, g.source);
    int nx = F.prod.nx, ny = F.prod.ny;
    if (f.source.inst->kind == CatKind::FinGSet) {
        F.sub.data.assign(nx * ny, 0);
        for (int a = 0; a < nx; ++a)
            for (int b = 0; b < ny; ++b)
                if (f.map[a] == g.map[b]) F.sub.data[F.prod.pairIndex(a, b)] = 1;
    } else {
        int n = nx + ny;
        std::vector<int> parent(n);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<int(int)> find = [&](int v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        for (int k = 0; k < f.target.size(); ++k) {
            int a = find(f.map[k]), b = find(nx + g.map[k]);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
        F.sub.data.resize(n);
        for (int i = 0; i < n; ++i) F.sub.data[i] = find(i);
        canonicalizePartition(F.sub.data);
    }
    F.obj = subObject(F.prod.obj, F.sub);
    RCMor mono = subMono(F.prod.obj, F.sub);
    F.toX = composeMor(proj1(F.prod), mono);
    F.toY = composeMor(proj2(F.prod), mono);
    return F;
}

/// Surjection–injection factorization of f.
struct ImageFactorization {
    Sub image;       // subobject of the target
    RCObject obj;    // the image as an object
    RCMor surj;      // source → image object
    RCMor mono;      // image object → target
};

inline ImageFactorization imageFactorization(const RCMor& f) {
    ImageFactorization R;
    R.image = imageOfSub(f, topSub(f.source));
    R.obj = subObject(f.target, R.image);
    R.mono = subMono(f.target, R.image);
    RCMor s;
    s.source = f.source;
    s.target = R.obj;
    if (f.source.inst->kind == CatKind::FinGSet) {
        std::vector<int> pos(f.target.size(), -1);
        int idx = 0;
        for (int i = 0; i < f.target.size(); ++i)
            if (R.image.data[i]) pos[i] = idx++;
        s.map.resize(f.source.size());
        for (int i = 0; i < f.source.size(); ++i) s.map[i] = pos[f.map[i]];
    } else {
        // u(image) = blocks of the kernel partition; the factored map sends a
        // block to the common u(f)-value of its members
        int k = blockCount(R.image);
        s.map.assign(k, -1);
        for (int y = 0; y < f.target.size(); ++y)
            if (s.map[R.image.data[y]] == -1) s.map[R.image.data[y]] = f.map[y];
    }
    R.surj = std::move(s);
    return R;
}

// ---------------------------------------------------------------------------
// Relations
// ---------------------------------------------------------------------------

/// Relation from X to Y: a subobject of Y×X.
struct Relation {
    RCObject src, tgt;  // X, Y
    Product prod;       // Y×X
    Sub sub;

    std::string key() const { return tgt.key() + "*" + src.key() + "#" + sub.key(); }
};

inline Relation makeRelation(const RCObject& x, const RCObject& y, Sub s) {
    Relation r;
    r.src = x;
    r.tgt = y;
    r.prod = product(y, x);
    if (!isValidSub(r.prod.obj, s)) throw DomainError("makeRelation: invalid subobject");
    r.sub = std::move(s);
    return r;
}

inline Relation diagonalRel(const RCObject& x) {
    Relation r;
    r.src = x;
    r.tgt = x;
    r.prod = product(x, x);
    RCMor idm = identityMor(x);
    RCMor delta = pairing(r.prod, idm, idm);
    r.sub = imageOfSub(delta, topSub(x));
    return r;
}

/// Graph of f: X→Y as a relation from X to Y (image of ⟨f,id⟩).
inline Relation graphRel(const RCMor& f) {
    Relation r;
    r.src = f.source;
    r.tgt = f.target;
    r.prod = product(f.target, f.source);
    RCMor pm = pairing(r.prod, f, identityMor(f.source));
    r.sub = imageOfSub(pm, topSub(f.source));
    return r;
}

/// Transpose via the canonical product symmetry.
inline Relation transposeRel(const Relation& a) {
    Relation r;
    r.src = a.tgt;
    r.tgt = a.src;
    r.prod = product(a.src, a.tgt);
    if (a.src.inst->kind == CatKind::FinGSet) {
        int ny = a.prod.nx, nx = a.prod.ny;  // a.prod = Y×X
        r.sub.data.resize(nx * ny);
        for (int xx = 0; xx < nx; ++xx)
            for (int yy = 0; yy < ny; ++yy)
                r.sub.data[r.prod.pairIndex(xx, yy)] = a.sub.data[a.prod.pairIndex(yy, xx)];
    } else {
        int ny = a.prod.nx, nx = a.prod.ny;
        r.sub.data.resize(nx + ny);
        for (int i = 0; i < nx; ++i) r.sub.data[i] = a.sub.data[ny + i];
        for (int j = 0; j < ny; ++j) r.sub.data[nx + j] = a.sub.data[j];
        canonicalizePartition(r.sub.data);
    }
    return r;
}

/// Composite of relations with the intermediate object and the surjection
/// onto the image (the data Knop composition weights).
struct ComposedRelation {
    Relation rel;          // B∘A ⊆ Z×X
    RCObject intermediate; // B ×_Y A
    RCMor surjToImage;     // intermediate → image object of rel.sub
};

inline ComposedRelation composeRel(const Relation& b, const Relation& a) {
    if (!(b.src == a.tgt)) throw DomainError("composeRel: middle objects differ");
    // legs of A ⊆ Y×X and B ⊆ Z×Y
    RCMor aMono = subMono(a.prod.obj, a.sub);
    RCMor aY = composeMor(proj1(a.prod), aMono);
    RCMor aX = composeMor(proj2(a.prod), aMono);
    RCMor bMono = subMono(b.prod.obj, b.sub);
    RCMor bZ = composeMor(proj1(b.prod), bMono);
    RCMor bY = composeMor(proj2(b.prod), bMono);

    FiberProduct F = fiberProduct(bY, aY);  // B ×_Y A ⊆ B×A
    RCMor toZ = composeMor(bZ, F.toX);
    RCMor toX = composeMor(aX, F.toY);

    ComposedRelation R;
    R.rel.src = a.src;
    R.rel.tgt = b.tgt;
    R.rel.prod = product(b.tgt, a.src);
    RCMor pm = pairing(R.rel.prod, toZ, toX);
    ImageFactorization I = imageFactorization(pm);
    R.rel.sub = I.image;
    R.intermediate = F.obj;
    R.surjToImage = I.surj;
    return R;
}

inline bool isEquivalenceRelation(const Relation& r) {
    if (!(r.src == r.tgt)) throw DomainError("isEquivalenceRelation: relation not square");
    Relation d = diagonalRel(r.src);
    if (!subLeq(r.prod.obj, d.sub, r.sub)) return false;        // reflexive
    if (!(transposeRel(r).sub == r.sub)) return false;          // symmetric
    Sub rr = composeRel(r, r).rel.sub;
    return subLeq(r.prod.obj, rr, r.sub);                       // transitive
}

// ---------------------------------------------------------------------------
// Ample subobjects
// ---------------------------------------------------------------------------

namespace detail {

inline bool projectionsSurject(const RCObject& prodObj, const Sub& s,
                               const std::vector<RCMor>& projs) {
    RCMor mono = subMono(prodObj, s);
    for (const auto& p : projs)
        if (!isSurjection(composeMor(p, mono))) return false;
    return true;
}

/// RC-A: subsets of the given orbit list (each orbit a point list), as Subs.
inline std::vector<Sub> orbitSubsetSubs(const RCObject& obj,
                                        const std::vector<std::vector<int>>& orbits,
                                        bool includeEmpty) {
    int k = static_cast<int>(orbits.size());
    if (k > obj.inst->bounds.maxOrbitSubsets)
        throw SizeLimitError("orbit-subset sweep: too many orbits (" + std::to_string(k) + ")");
    std::vector<Sub> out;
    for (uint64_t mask = includeEmpty ? 0 : 1; mask < (uint64_t{1} << k); ++mask) {
        Sub s;
        s.data.assign(obj.size(), 0);
        for (int i = 0; i < k; ++i)
            if (mask & (uint64_t{1} << i))
                for (int p : orbits[i]) s.data[p] = 1;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace detail

/// Subobjects of the product that surject onto every factor.  When `within`
/// is given, only subobjects ≤ within are considered (the fiber-product case
/// of the ample-subobject decompositions).
inline std::vector<Sub> ampleSubobjects(const Product& P,
                                        const std::optional<Sub>& within = std::nullopt) {
    std::vector<RCMor> projs{proj1(P), proj2(P)};
    std::vector<Sub> candidates;
    if (P.obj.inst->kind == CatKind::FinGSet) {
        std::vector<std::vector<int>> orbits = P.obj.gset->orbits();
        if (within) {
            std::vector<std::vector<int>> kept;
            for (auto& o : orbits)
                if (within->data[o[0]]) kept.push_back(o);
            orbits = std::move(kept);
        }
        candidates = detail::orbitSubsetSubs(P.obj, orbits, false);
    } else {
        if (within) {
            candidates = detail::coarseningsOf(*within);
        } else {
            if (P.obj.size() > 9) throw SizeLimitError("ampleSubobjects: product too large");
            for (auto& p : detail::allPartitions(P.obj.size())) candidates.push_back(Sub{std::move(p)});
        }
    }
    std::vector<Sub> out;
    for (auto& s : candidates)
        if (detail::projectionsSurject(P.obj, s, projs)) out.push_back(std::move(s));
    std::sort(out.begin(), out.end());
    return out;
}

/// Ample subobjects of a ternary product (all three projections surjective).
inline std::vector<Sub> ampleSubobjects3(const Product3& T,
                                         const std::optional<Sub>& within = std::nullopt) {
    std::vector<RCMor> projs{T.p1, T.p2, T.p3};
    std::vector<Sub> candidates;
    if (T.obj.inst->kind == CatKind::FinGSet) {
        std::vector<std::vector<int>> orbits = T.obj.gset->orbits();
        if (within) {
            std::vector<std::vector<int>> kept;
            for (auto& o : orbits)
                if (within->data[o[0]]) kept.push_back(o);
            orbits = std::move(kept);
        }
        candidates = detail::orbitSubsetSubs(T.obj, orbits, false);
    } else {
        if (within) {
            candidates = detail::coarseningsOf(*within);
        } else {
            if (T.obj.size() > 9) throw SizeLimitError("ampleSubobjects3: product too large");
            for (auto& p : detail::allPartitions(T.obj.size())) candidates.push_back(Sub{std::move(p)});
        }
    }
    std::vector<Sub> out;
    for (auto& s : candidates)
        if (detail::projectionsSurject(T.obj, s, projs)) out.push_back(std::move(s));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace oligocat
