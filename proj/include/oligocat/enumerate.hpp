#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "oligocat/regcat.hpp"

namespace oligocat {

// ---------------------------------------------------------------------------
// Subgroups
// ---------------------------------------------------------------------------

inline std::vector<Permutation> closureOf(std::vector<Permutation> gens, int degree,
                                          size_t maxElements = PermGroup::kMaxElements) {
    std::set<Permutation> closed;
    closed.insert(Permutation::identity(degree));
    std::vector<Permutation> frontier(closed.begin(), closed.end());
    while (!frontier.empty()) {
        std::vector<Permutation> next;
        for (const auto& e : frontier)
            for (const auto& g : gens) {
                Permutation p = g * e;
                if (closed.insert(p).second) {
                    if (closed.size() > maxElements)
                        throw SizeLimitError("closure exceeds element bound");
                    next.push_back(p);
                }
            }
        frontier = std::move(next);
    }
    return {closed.begin(), closed.end()};
}

/// Every subgroup of g, as sorted element lists, by closure-extension BFS.
inline std::vector<std::vector<Permutation>> allSubgroups(const PermGroup& g) {
    std::set<std::vector<Permutation>> found;
    std::vector<std::vector<Permutation>> frontier;
    std::vector<Permutation> triv{Permutation::identity(g.degree())};
    found.insert(triv);
    frontier.push_back(triv);
    while (!frontier.empty()) {
        std::vector<std::vector<Permutation>> next;
        for (const auto& h : frontier)
            for (const auto& e : g.elements()) {
                if (std::binary_search(h.begin(), h.end(), e)) continue;
                std::vector<Permutation> gens = h;
                gens.push_back(e);
                auto bigger = closureOf(gens, g.degree());
                if (found.insert(bigger).second) next.push_back(std::move(bigger));
            }
        frontier = std::move(next);
    }
    return {found.begin(), found.end()};
}

/// Representatives of subgroup conjugacy classes.
inline std::vector<std::vector<Permutation>> subgroupConjugacyReps(const PermGroup& g) {
    auto subs = allSubgroups(g);
    std::set<std::vector<Permutation>> seen;
    std::vector<std::vector<Permutation>> reps;
    for (const auto& h : subs) {
        if (seen.count(h)) continue;
        reps.push_back(h);
        for (const auto& c : g.elements()) {
            std::vector<Permutation> conj;
            Permutation ci = c.inverse();
            for (const auto& e : h) conj.push_back(c * e * ci);
            std::sort(conj.begin(), conj.end());
            seen.insert(std::move(conj));
        }
    }
    return reps;
}

// ---------------------------------------------------------------------------
// G-sets up to isomorphism
// ---------------------------------------------------------------------------

/// Coset action of g on g/h (h given as a sorted element list).
inline GSet cosetAction(const PermGroupPtr& g, const std::vector<Permutation>& h) {
    // cosets as sorted element sets
    std::vector<std::vector<Permutation>> cosets;
    std::set<Permutation> assigned;
    for (const auto& e : g->elements()) {
        if (assigned.count(e)) continue;
        std::vector<Permutation> coset;
        for (const auto& s : h) {
            Permutation x = e * s;
            coset.push_back(x);
            assigned.insert(x);
        }
        std::sort(coset.begin(), coset.end());
        cosets.push_back(std::move(coset));
    }
    std::sort(cosets.begin(), cosets.end());
    auto cosetIndex = [&](const Permutation& e) {
        for (size_t i = 0; i < cosets.size(); ++i)
            if (std::binary_search(cosets[i].begin(), cosets[i].end(), e))
                return static_cast<int>(i);
        throw DomainError("cosetAction: element not covered");
    };
    std::vector<Permutation> action;
    for (const auto& gen : g->generators()) {
        Permutation p;
        p.images.resize(cosets.size());
        for (size_t i = 0; i < cosets.size(); ++i) p.images[i] = cosetIndex(gen * cosets[i][0]);
        action.push_back(std::move(p));
    }
    return GSet(g, static_cast<int>(cosets.size()), std::move(action));
}

/// Transitive G-sets up to isomorphism with at most maxPoints points,
/// ordered by size.
inline std::vector<GSet> transitiveGSets(const PermGroupPtr& g, int maxPoints) {
    std::vector<GSet> out;
    for (const auto& h : subgroupConjugacyReps(*g)) {
        if (g->order() / h.size() > static_cast<size_t>(maxPoints)) continue;
        out.push_back(cosetAction(g, h));
    }
    std::sort(out.begin(), out.end(),
              [](const GSet& a, const GSet& b) { return a.key() < b.key(); });
    std::stable_sort(out.begin(), out.end(),
                     [](const GSet& a, const GSet& b) { return a.points() < b.points(); });
    return out;
}

/// Non-empty (principal) objects up to isomorphism within the size bound.
/// RC-A: multisets of transitive G-sets; RC-B: one object per cardinality.
inline std::vector<RCObject> principalObjects(const RCInstancePtr& inst, int maxSize) {
    std::vector<RCObject> out;
    if (inst->kind == CatKind::OpFinSet) {
        for (int n = 1; n <= maxSize; ++n) out.push_back(makeSetObject(inst, n));
        return out;
    }
    auto trans = transitiveGSets(inst->group, maxSize);
    // multisets as non-decreasing index sequences
    std::vector<std::vector<int>> stack{{}};
    std::vector<std::vector<int>> all;
    std::function<void(std::vector<int>&, int, int)> go = [&](std::vector<int>& cur, int startIdx,
                                                              int sizeLeft) {
        if (!cur.empty()) all.push_back(cur);
        for (int i = startIdx; i < static_cast<int>(trans.size()); ++i) {
            if (trans[i].points() > sizeLeft) continue;
            cur.push_back(i);
            go(cur, i, sizeLeft - trans[i].points());
            cur.pop_back();
        }
    };
    std::vector<int> cur;
    go(cur, 0, maxSize);
    for (const auto& combo : all) {
        GSet acc = trans[combo[0]];
        for (size_t i = 1; i < combo.size(); ++i) acc = disjointUnion(acc, trans[combo[i]]);
        out.push_back(makeObjectA(inst, std::move(acc)));
    }
    std::sort(out.begin(), out.end(),
              [](const RCObject& a, const RCObject& b) { return a.key() < b.key(); });
    std::stable_sort(out.begin(), out.end(),
                     [](const RCObject& a, const RCObject& b) { return a.size() < b.size(); });
    return out;
}

// ---------------------------------------------------------------------------
// Morphism enumeration
// ---------------------------------------------------------------------------

/// All morphisms X → Y (RC-A: equivariant maps by orbit-representative
/// backtracking; RC-B: all set functions u(Y) → u(X)).
inline std::vector<RCMor> allMorphisms(const RCObject& x, const RCObject& y,
                                       size_t maxCount = 2000000) {
    std::vector<RCMor> out;
    if (x.inst->kind == CatKind::OpFinSet) {
        int n = y.size(), m = x.size();
        double total = 1;
        for (int i = 0; i < n; ++i) total *= m;
        if (total > static_cast<double>(maxCount))
            throw SizeLimitError("allMorphisms: too many functions");
        std::vector<int> f(n, 0);
        while (true) {
            RCMor mor;
            mor.source = x;
            mor.target = y;
            mor.map = f;
            out.push_back(std::move(mor));
            int i = n - 1;
            while (i >= 0 && f[i] == m - 1) f[i--] = 0;
            if (i < 0) break;
            ++f[i];
        }
        return out;
    }
    auto xOrbits = x.gset->orbits();
    std::vector<std::vector<Permutation>> repStabs;
    for (const auto& o : xOrbits) repStabs.push_back(x.gset->stabilizer(o[0]));
    std::vector<int> f(x.size(), -1);
    std::function<void(size_t)> go = [&](size_t oi) {
        if (oi == xOrbits.size()) {
            RCMor mor;
            mor.source = x;
            mor.target = y;
            mor.map = f;
            out.push_back(std::move(mor));
            if (out.size() > maxCount) throw SizeLimitError("allMorphisms: too many maps");
            return;
        }
        int rep = xOrbits[oi][0];
        for (int img = 0; img < y.size(); ++img) {
            bool ok = true;
            for (const auto& s : repStabs[oi])
                if (y.gset->act(s, img) != img) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            bool clash = false;
            std::vector<int> touched;
            for (const auto& g : x.gset->group()->elements()) {
                int from = x.gset->act(g, rep), to = y.gset->act(g, img);
                if (f[from] == -1) {
                    f[from] = to;
                    touched.push_back(from);
                } else if (f[from] != to) {
                    clash = true;
                    break;
                }
            }
            if (!clash) go(oi + 1);
            for (int p : touched) f[p] = -1;
        }
    };
    go(0);
    return out;
}

inline std::vector<RCMor> allSurjections(const RCObject& x, const RCObject& y,
                                         size_t maxCount = 2000000) {
    std::vector<RCMor> out;
    for (auto& f : allMorphisms(x, y, maxCount))
        if (isSurjection(f)) out.push_back(std::move(f));
    return out;
}

}  // namespace oligocat
