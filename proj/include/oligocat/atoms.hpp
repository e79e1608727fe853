#pragma once

#include <optional>
#include <variant>

#include "oligocat/enumerate.hpp"
#include "oligocat/regcat.hpp"

namespace oligocat {

// ---------------------------------------------------------------------------
// Atoms and objects of the order C
// ---------------------------------------------------------------------------

/// An atom of C: the transitive piece attached to a principal object X,
/// optionally quotiented by a subgroup Γ ≤ Aut(X) (RC-A data modeling only;
/// Γ-atoms never participate in products).
struct Atom {
    RCObject label;
    std::optional<PermGroup> gamma;

    std::string key() const {
        std::string k = label.key();
        if (gamma) {
            k += "/";
            for (const auto& e : gamma->elements()) {
                for (int v : e.images) k += std::to_string(v) + ".";
                k += "|";
            }
        }
        return k;
    }
    friend bool operator==(const Atom& a, const Atom& b) { return a.key() == b.key(); }
};

inline Atom makeAtom(RCObject x) {
    if (!isPrincipal(x)) throw DomainError("atoms are labeled by principal objects");
    return Atom{std::move(x), std::nullopt};
}

/// Finite union of atoms, kept in canonical (sorted) order.
struct CObject {
    std::vector<Atom> atoms;

    void canonicalize() {
        std::sort(atoms.begin(), atoms.end(),
                  [](const Atom& a, const Atom& b) { return a.key() < b.key(); });
    }
    std::string key() const {
        std::string k;
        for (const auto& a : atoms) k += a.key() + "&";
        return k;
    }
};

inline CObject makeCObject(std::vector<Atom> atoms) {
    CObject c{std::move(atoms)};
    c.canonicalize();
    return c;
}

/// Map of C-objects: each source atom goes to a target atom via a surjection
/// of the underlying principal objects.
struct CMor {
    CObject source, target;
    // legs[i] = (target atom index, surjection source.atoms[i].label → target atom label)
    std::vector<std::pair<int, RCMor>> legs;
};

inline bool isValidCMor(const CMor& f) {
    if (f.legs.size() != f.source.atoms.size()) return false;
    for (size_t i = 0; i < f.legs.size(); ++i) {
        const auto& [ti, mor] = f.legs[i];
        if (ti < 0 || ti >= static_cast<int>(f.target.atoms.size())) return false;
        if (!(mor.source == f.source.atoms[i].label)) return false;
        if (!(mor.target == f.target.atoms[ti].label)) return false;
        if (!isValidMor(mor) || !isSurjection(mor)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Products of atoms (ample-subobject decomposition)
// ---------------------------------------------------------------------------

/// 𝔅(X) × 𝔅(Y) = ⊔ 𝔅(W) over ample subobjects W of X×Y.
/// Returns the decomposition together with the indexing subobjects.
struct AtomProductResult {
    CObject obj;
    Product prod;                 // X×Y
    std::vector<Sub> amples;      // amples[i] labels obj.atoms in the same order
};

inline AtomProductResult atomProduct(const Atom& x, const Atom& y) {
    if (x.gamma || y.gamma)
        throw DomainError("atomProduct: quotient atoms do not participate in products");
    AtomProductResult R;
    R.prod = product(x.label, y.label);
    R.amples = ampleSubobjects(R.prod);
    std::vector<Atom> atoms;
    for (const auto& w : R.amples) atoms.push_back(makeAtom(subObject(R.prod.obj, w)));
    // keep atom order aligned with the ample list (no re-sorting here)
    R.obj.atoms = std::move(atoms);
    return R;
}

/// 𝔅(X) ×_𝔅(Z) 𝔅(Y) = ⊔ 𝔅(W) over ample subobjects W of X ×_Z Y.
struct AtomFiberProductResult {
    CObject obj;
    FiberProduct fp;              // X ×_Z Y inside X×Y
    std::vector<Sub> amples;
};

inline AtomFiberProductResult atomFiberProduct(const RCMor& f, const RCMor& g) {
    if (!isSurjection(f) || !isSurjection(g))
        throw DomainError("atomFiberProduct: inducing maps must be surjections");
    AtomFiberProductResult R;
    R.fp = fiberProduct(f, g);
    R.amples = ampleSubobjects(R.fp.prod, R.fp.sub);
    std::vector<Atom> atoms;
    for (const auto& w : R.amples) atoms.push_back(makeAtom(subObject(R.fp.prod.obj, w)));
    R.obj.atoms = std::move(atoms);
    return R;
}

// ---------------------------------------------------------------------------
// 𝔄₁(X)
// ---------------------------------------------------------------------------

/// Principal subobjects of x, sorted canonically.
inline std::vector<Sub> principalSubobjects(const RCObject& x) {
    std::vector<Sub> out;
    for (const auto& s : subobjects(x))
        if (isPrincipal(subObject(x, s))) out.push_back(s);
    return out;
}

struct A1Result {
    CObject obj;
    std::vector<Sub> subs;  // aligned with obj.atoms
};

/// 𝔄₁(X): one atom 𝔅(Y) per principal subobject Y of X.
inline A1Result buildA1(const RCObject& x) {
    if (!isPrincipal(x)) throw DomainError("buildA1: object must be principal");
    A1Result R;
    R.subs = principalSubobjects(x);
    for (const auto& s : R.subs) R.obj.atoms.push_back(makeAtom(subObject(x, s)));
    return R;
}

/// Product of C-objects: union of the pairwise atom products, canonical.
inline CObject cObjectProduct(const CObject& a, const CObject& b) {
    std::vector<Atom> atoms;
    for (const auto& x : a.atoms)
        for (const auto& y : b.atoms)
            for (auto& z : atomProduct(x, y).obj.atoms) atoms.push_back(std::move(z));
    return makeCObject(std::move(atoms));
}

/// The map 𝔄₁(Y) → 𝔄₁(X) induced by a surjection f: Y → X:
/// each principal Z ⊆ Y goes onto its image f(Z) ⊆ X.
inline CMor a1Map(const RCMor& f) {
    if (!isSurjection(f)) throw DomainError("a1Map: needs a surjection");
    A1Result src = buildA1(f.source);
    A1Result tgt = buildA1(f.target);
    CMor m;
    m.source = src.obj;
    m.target = tgt.obj;
    for (size_t i = 0; i < src.subs.size(); ++i) {
        RCMor restricted = composeMor(f, subMono(f.source, src.subs[i]));
        ImageFactorization I = imageFactorization(restricted);
        int ti = -1;
        for (size_t j = 0; j < tgt.subs.size(); ++j)
            if (tgt.subs[j] == I.image) {
                ti = static_cast<int>(j);
                break;
            }
        if (ti < 0) throw DomainError("a1Map: image is not a principal subobject");
        m.legs.emplace_back(ti, I.surj);
    }
    return m;
}

// ---------------------------------------------------------------------------
// Invariant relation sets on 𝔅(X)
// ---------------------------------------------------------------------------

/// A stable subset of 𝔅(X) × 𝔅(X), recorded as the set of ample subobjects
/// of X×X it decomposes into.
struct RelationSet {
    RCObject x;
    Product prod;              // X×X
    std::vector<Sub> members;  // sorted, deduplicated, each ample
};

inline RelationSet makeRelationSet(const RCObject& x, std::vector<Sub> members) {
    RelationSet r;
    r.x = x;
    r.prod = product(x, x);
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    std::vector<RCMor> projs{proj1(r.prod), proj2(r.prod)};
    for (const auto& m : members) {
        if (!isValidSub(r.prod.obj, m)) throw DomainError("relation set: invalid subobject");
        if (!detail::projectionsSurject(r.prod.obj, m, projs))
            throw DomainError("relation set: member is not ample");
    }
    r.members = std::move(members);
    return r;
}

inline bool relationSetHas(const RelationSet& r, const Sub& s) {
    return std::binary_search(r.members.begin(), r.members.end(), s);
}

/// The diagonal of X×X as a subobject.
inline Sub diagonalSub(const RCObject& x) { return diagonalRel(x).sub; }

/// Transpose of a subobject of the square X×X.
inline Sub subTranspose(const RCObject& x, const Sub& s) {
    Relation rel;
    rel.src = x;
    rel.tgt = x;
    rel.prod = product(x, x);
    rel.sub = s;
    return transposeRel(rel).sub;
}

/// Point-level composite of relations on the square (RC-A only):
/// (i,k) ∈ B∘A iff some j has (i,j) ∈ B and (j,k) ∈ A.  Agrees with
/// composeRel and avoids building the intermediate object.
inline Sub subComposePoints(const Product& P, const Sub& b, const Sub& a) {
    int n = P.nx;
    Sub out;
    out.data.assign(n * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!b.data[P.pairIndex(i, j)]) continue;
            for (int k = 0; k < n; ++k)
                if (a.data[P.pairIndex(j, k)]) out.data[P.pairIndex(i, k)] = 1;
        }
    return out;
}

struct RelationCheckResult {
    bool ok = true;
    std::string failedCondition;  // "a", "b", "c", "composition"
    std::string witness;
    std::string method;  // how condition (c) was decided
    int compositionPairsChecked = 0;
};

namespace detail {

/// Orbit bitmask of a subobject of an RC-A object (one bit per orbit).
inline uint64_t orbitMaskOf(const RCObject& obj, const Sub& s) {
    auto orbits = obj.gset->orbits();
    if (orbits.size() > 62) throw SizeLimitError("orbitMaskOf: too many orbits");
    uint64_t m = 0;
    for (size_t i = 0; i < orbits.size(); ++i)
        if (s.data[orbits[i][0]]) m |= uint64_t{1} << i;
    return m;
}

}  // namespace detail

/// Equivalence-relation criterion for a relation set:
/// (a) the diagonal is a member, (b) closure under transpose, (c) for every
/// subobject W of X×X×X whose first two projections are members, the third
/// projection is a member too.  Also verifies the resulting closure under
/// composition on member pairs (capped at compositionPairCap, deterministic).
///
/// Condition (c) is decided by one of three routes: direct enumeration of
/// Sub(X×X×X) when small; the shortcut for sets consisting of all amples of
/// their union (then (c) is equivalent to the union being closed under
/// point-level composition); or pair-by-pair enumeration of achievable third
/// projections at the orbit level.
inline RelationCheckResult relationSetCheck(const RelationSet& r,
                                            long long compositionPairCap = 4096) {
    RelationCheckResult res;
    const RCObject& x = r.x;
    const RCObject& pObj = r.prod.obj;

    Sub delta = diagonalSub(x);
    if (!relationSetHas(r, delta)) {
        res.ok = false;
        res.failedCondition = "a";
        res.witness = "diagonal missing";
        return res;
    }
    for (const auto& m : r.members)
        if (!relationSetHas(r, subTranspose(x, m))) {
            res.ok = false;
            res.failedCondition = "b";
            res.witness = "transpose of " + m.key() + " missing";
            return res;
        }

    bool isA = x.inst->kind == CatKind::FinGSet;

    // union of the members
    Sub rhat = r.members.front();
    for (const auto& m : r.members) rhat = subJoin(pObj, rhat, m);

    Product3 T = product3(x, x, x);
    bool cDecided = false;

    // Route 1: direct enumeration of the ternary subobject lattice.
    long long ternaryCount = -1;
    if (isA) {
        int k = static_cast<int>(T.obj.gset->orbits().size());
        if (k <= 16) ternaryCount = 1LL << k;
    } else if (x.size() <= 3) {
        ternaryCount = 1;  // partitions of at most 9 elements; fine
    }
    if (ternaryCount != 0 && ternaryCount > 0) {
        res.method = "ternary-enumeration";
        std::vector<Sub> allW;
        if (isA) {
            allW = detail::orbitSubsetSubs(T.obj, T.obj.gset->orbits(), false);
        } else {
            for (auto& p : detail::allPartitions(T.obj.size())) allW.push_back(Sub{std::move(p)});
        }
        for (const auto& w : allW) {
            Sub i12 = imageOfSub(T.p12, w), i23 = imageOfSub(T.p23, w);
            if (!relationSetHas(r, i12) || !relationSetHas(r, i23)) continue;
            Sub i13 = imageOfSub(T.p13, w);
            if (!relationSetHas(r, i13)) {
                res.ok = false;
                res.failedCondition = "c";
                res.witness = "ternary subobject " + w.key() + " projects to non-member " +
                              i13.key();
                return res;
            }
        }
        cDecided = true;
    }

    // Route 2: all-amples shortcut.
    if (!cDecided) {
        bool shortcutApplies = false;
        try {
            auto allAmples = ampleSubobjects(r.prod, rhat);
            shortcutApplies = (allAmples == r.members);
        } catch (const SizeLimitError&) {
        }
        if (shortcutApplies) {
            res.method = "all-amples-shortcut";
            Sub comp = subComposePoints(r.prod, rhat, rhat);
            if (!subLeq(pObj, comp, rhat)) {
                res.ok = false;
                res.failedCondition = "c";
                res.witness = "union composed with itself escapes the union";
                return res;
            }
            cDecided = true;
        }
    }

    // Route 3: orbit-level pair enumeration (RC-A).
    if (!cDecided) {
        if (!isA) throw SizeLimitError("relationSetCheck: set too large for enumeration");
        res.method = "pair-enumeration";
        std::vector<int> orbIdx2 = pObj.gset->orbitIndex();
        int nOrb2 = pObj.gset->orbitCount();
        if (nOrb2 > 62) throw SizeLimitError("relationSetCheck: too many square orbits");
        auto tripleOrbits = T.obj.gset->orbits();
        std::vector<int> r12, r13, r23;
        for (const auto& o : tripleOrbits) {
            r12.push_back(orbIdx2[T.p12.map[o[0]]]);
            r13.push_back(orbIdx2[T.p13.map[o[0]]]);
            r23.push_back(orbIdx2[T.p23.map[o[0]]]);
        }
        std::set<uint64_t> memberMasks;
        std::vector<uint64_t> memberMaskList;
        for (const auto& m : r.members) {
            uint64_t mm = detail::orbitMaskOf(pObj, m);
            memberMasks.insert(mm);
            memberMaskList.push_back(mm);
        }
        if (static_cast<long long>(memberMaskList.size()) * memberMaskList.size() > 4000000)
            throw SizeLimitError("relationSetCheck: too many member pairs");
        int nT = static_cast<int>(tripleOrbits.size());
        for (uint64_t bm : memberMaskList)
            for (uint64_t am : memberMaskList) {
                std::vector<int> region;
                uint64_t supp = 0;
                for (int t = 0; t < nT; ++t)
                    if ((bm >> r12[t]) & 1 && (am >> r23[t]) & 1) {
                        region.push_back(t);
                        supp |= uint64_t{1} << r13[t];
                    }
                if (__builtin_popcountll(supp) > 20)
                    throw SizeLimitError("relationSetCheck: achievable-image space too large");
                // every achievable exact third projection, via maximal witnesses
                uint64_t c = supp;
                while (true) {
                    uint64_t cov12 = 0, cov23 = 0, cov13 = 0;
                    for (int t : region)
                        if ((c >> r13[t]) & 1) {
                            cov12 |= uint64_t{1} << r12[t];
                            cov23 |= uint64_t{1} << r23[t];
                            cov13 |= uint64_t{1} << r13[t];
                        }
                    if (cov12 == bm && cov23 == am && cov13 == c && !memberMasks.count(c)) {
                        res.ok = false;
                        res.failedCondition = "c";
                        res.witness = "achievable third projection is not a member";
                        return res;
                    }
                    if (c == 0) break;
                    c = (c - 1) & supp;
                }
            }
    }

    // Stated consequence: closure under composition, on a deterministic
    // prefix of member pairs when the full square is too large.
    long long pairBudget = compositionPairCap;
    for (const auto& b : r.members) {
        if (pairBudget <= 0) break;
        for (const auto& a : r.members) {
            if (pairBudget-- <= 0) break;
            Sub comp = isA ? subComposePoints(r.prod, b, a)
                           : composeRel(makeRelation(x, x, b), makeRelation(x, x, a)).rel.sub;
            ++res.compositionPairsChecked;
            if (!relationSetHas(r, comp)) {
                res.ok = false;
                res.failedCondition = "composition";
                res.witness = b.key() + " o " + a.key() + " missing";
                return res;
            }
        }
    }
    return res;
}

/// The maximal diagonal-containing member, with the certificates of the
/// structure lemma: it is an equivalence relation, contains every
/// diagonal-containing member, and all of its ample subobjects are members.
struct MaximalReflexive {
    Sub rel;
    bool verified = false;
    std::string detail;
};

inline MaximalReflexive maximalReflexiveElement(const RelationSet& r) {
    const RCObject& pObj = r.prod.obj;
    Sub delta = diagonalSub(r.x);
    std::vector<const Sub*> reflexive;
    for (const auto& m : r.members)
        if (subLeq(pObj, delta, m)) reflexive.push_back(&m);
    if (reflexive.empty()) throw PreconditionError("no member contains the diagonal");
    const Sub* best = reflexive.front();
    for (const Sub* s : reflexive)
        if (subLeq(pObj, *best, *s)) best = s;
    MaximalReflexive R;
    R.rel = *best;
    for (const Sub* s : reflexive)
        if (!subLeq(pObj, *s, R.rel)) {
            R.detail = "does not contain member " + s->key();
            return R;
        }
    if (!isEquivalenceRelation(makeRelation(r.x, r.x, R.rel))) {
        R.detail = "not an equivalence relation";
        return R;
    }
    for (const auto& w : ampleSubobjects(r.prod, R.rel))
        if (!relationSetHas(r, w)) {
            R.detail = "ample subobject " + w.key() + " is not a member";
            return R;
        }
    R.verified = true;
    return R;
}

// ---------------------------------------------------------------------------
// Quotient-vs-subgroup dichotomy (RC-A)
// ---------------------------------------------------------------------------

struct DichotomyResult {
    bool isQuotient = false;
    RCMor quotient;                   // X → X/R when isQuotient
    std::optional<PermGroup> gamma;   // otherwise: the graph subgroup
    Sub maximalR;
};

/// Quotient of an RC-A object by an invariant equivalence relation on points.
inline RCMor quotientByRelation(const RCObject& x, const Sub& rel) {
    int n = x.size();
    Product P = product(x, x);
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (rel.data[P.pairIndex(i, j)]) {
                int a = find(i), b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
    std::map<int, int> classOf;
    std::vector<int> cls(n);
    for (int i = 0; i < n; ++i) {
        auto [it, inserted] = classOf.emplace(find(i), static_cast<int>(classOf.size()));
        cls[i] = it->second;
    }
    int k = static_cast<int>(classOf.size());
    std::vector<Permutation> action;
    for (const auto& gen : x.gset->action()) {
        Permutation p;
        p.images.assign(k, -1);
        for (int i = 0; i < n; ++i) p.images[cls[i]] = cls[gen(i)];
        action.push_back(std::move(p));
    }
    RCMor q;
    q.source = x;
    q.target = makeObjectA(x.inst, GSet(x.gset->group(), k, std::move(action)));
    q.map = std::move(cls);
    return q;
}

/// Either the relation set sits over a proper quotient (the maximal
/// reflexive member exceeds the diagonal) or every member is the graph of an
/// automorphism and the set is a subgroup of Aut(X).
inline DichotomyResult equivalenceDichotomy(const RelationSet& r) {
    if (r.x.inst->kind != CatKind::FinGSet)
        throw DomainError("the dichotomy needs the exact instance");
    MaximalReflexive mr = maximalReflexiveElement(r);
    if (!mr.verified) throw PreconditionError("maximal reflexive element failed: " + mr.detail);
    DichotomyResult out;
    out.maximalR = mr.rel;
    if (!(mr.rel == diagonalSub(r.x))) {
        out.isQuotient = true;
        out.quotient = quotientByRelation(r.x, mr.rel);
        return out;
    }
    int n = r.x.size();
    std::vector<Permutation> perms;
    for (const auto& m : r.members) {
        // graph of an automorphism: each column holds exactly one pair (γx, x)
        Permutation g;
        g.images.assign(n, -1);
        for (int col = 0; col < n; ++col)
            for (int row = 0; row < n; ++row)
                if (m.data[r.prod.pairIndex(row, col)]) {
                    if (g.images[col] != -1)
                        throw PreconditionError("member is not an automorphism graph: " + m.key());
                    g.images[col] = row;
                }
        for (int v : g.images)
            if (v < 0) throw PreconditionError("member is not an automorphism graph: " + m.key());
        if (!isEquivariant(*r.x.gset, *r.x.gset, g.images))
            throw PreconditionError("graph map is not equivariant: " + m.key());
        perms.push_back(std::move(g));
    }
    out.gamma = PermGroup::fromElements(n, perms);
    return out;
}

/// The relation set of automorphism graphs of the given elements.
inline RelationSet relationSetFromAutomorphisms(const RCObject& x,
                                                const std::vector<Permutation>& gamma) {
    std::vector<Sub> members;
    for (const auto& g : gamma) {
        RCMor f;
        f.source = x;
        f.target = x;
        f.map.assign(g.images.begin(), g.images.end());
        if (!isValidMor(f)) throw DomainError("relationSetFromAutomorphisms: not equivariant");
        members.push_back(graphRel(f).sub);
    }
    return makeRelationSet(x, std::move(members));
}

/// The relation set of all ample subobjects of the kernel pair of q.
inline RelationSet relationSetFromQuotient(const RCMor& q) {
    if (!isSurjection(q)) throw DomainError("relationSetFromQuotient: not a surjection");
    FiberProduct F = fiberProduct(q, q);
    return makeRelationSet(q.source, ampleSubobjects(F.prod, F.sub));
}

}  // namespace oligocat
