#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "oligocat/perm.hpp"

namespace oligocat {

/// Finite set with an action of a finite permutation group, given by one
/// point-permutation per group generator.  Construction validates that the
/// generator actions extend consistently to the whole group (every word
/// representing the same element acts identically) and materializes the
/// element -> point-permutation table.
class GSet {
public:
    GSet(PermGroupPtr group, int points, std::vector<Permutation> action)
        : group_(std::move(group)), points_(points), action_(std::move(action)) {
        if (!group_) throw DomainError("GSet needs a group");
        if (points_ < 0) throw DomainError("negative point count");
        if (action_.size() != group_->generators().size())
            throw DomainError("one action permutation per generator required");
        for (const auto& a : action_)
            if (a.degree() != points_ || !a.isValid())
                throw DomainError("action entry is not a permutation of the points");
        buildTable();
    }

    static GSet trivialAction(PermGroupPtr group, int points) {
        std::vector<Permutation> action(group->generators().size(),
                                        Permutation::identity(points));
        return GSet(std::move(group), points, std::move(action));
    }
    /// The group acting on itself by left translation.
    static GSet regularAction(PermGroupPtr group) {
        const auto& els = group->elements();
        std::vector<Permutation> action;
        for (const auto& g : group->generators()) {
            Permutation p;
            p.images.resize(els.size());
            for (size_t i = 0; i < els.size(); ++i) {
                Permutation gi = g * els[i];
                p.images[i] = static_cast<int>(
                    std::lower_bound(els.begin(), els.end(), gi) - els.begin());
            }
            action.push_back(std::move(p));
        }
        return GSet(group, static_cast<int>(els.size()), std::move(action));
    }

    const PermGroupPtr& group() const { return group_; }
    int points() const { return points_; }
    const std::vector<Permutation>& action() const { return action_; }

    /// Point permutation of an arbitrary group element.
    const Permutation& actionOf(const Permutation& g) const {
        auto it = table_.find(g);
        if (it == table_.end()) throw DomainError("element not in the acting group");
        return it->second;
    }
    int act(const Permutation& g, int x) const { return actionOf(g)(x); }

    /// Orbit partition, blocks sorted by minimum point.
    std::vector<std::vector<int>> orbits() const {
        std::vector<int> parent(points_);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& a : action_)
            for (int x = 0; x < points_; ++x) {
                int rx = find(x), ry = find(a(x));
                if (rx != ry) parent[std::max(rx, ry)] = std::min(rx, ry);
            }
        std::map<int, std::vector<int>> blocks;
        for (int x = 0; x < points_; ++x) blocks[find(x)].push_back(x);
        std::vector<std::vector<int>> out;
        for (auto& [root, blk] : blocks) out.push_back(std::move(blk));
        return out;
    }
    int orbitCount() const { return static_cast<int>(orbits().size()); }
    /// orbit index of each point, matching the order of orbits().
    std::vector<int> orbitIndex() const {
        auto obs = orbits();
        std::vector<int> idx(points_, -1);
        for (size_t i = 0; i < obs.size(); ++i)
            for (int x : obs[i]) idx[x] = static_cast<int>(i);
        return idx;
    }

    /// Group elements fixing the point, in sorted order.
    std::vector<Permutation> stabilizer(int x) const {
        std::vector<Permutation> out;
        for (const auto& [g, pg] : table_)
            if (pg(x) == x) out.push_back(g);
        return out;
    }

    friend bool operator==(const GSet& a, const GSet& b) {
        return a.points_ == b.points_ && a.action_ == b.action_ &&
               *a.group_ == *b.group_;
    }

    std::string key() const {
        std::ostringstream os;
        os << points_;
        for (const auto& a : action_) {
            os << "|";
            for (int v : a.images) os << v << ",";
        }
        return os.str();
    }

private:
    void buildTable() {
        table_[Permutation::identity(group_->degree())] = Permutation::identity(points_);
        std::vector<Permutation> frontier{Permutation::identity(group_->degree())};
        while (!frontier.empty()) {
            std::vector<Permutation> next;
            for (const auto& e : frontier) {
                const Permutation& pe = table_.at(e);
                for (size_t i = 0; i < group_->generators().size(); ++i) {
                    Permutation h = group_->generators()[i] * e;
                    Permutation ph = action_[i] * pe;
                    auto [it, inserted] = table_.emplace(h, ph);
                    if (inserted)
                        next.push_back(h);
                    else if (!(it->second == ph))
                        throw DomainError(
                            "inconsistent action: words for one group element act differently");
                }
            }
            frontier = std::move(next);
        }
        if (table_.size() != group_->order())
            throw DomainError("action table does not cover the group");
    }

    PermGroupPtr group_;
    int points_;
    std::vector<Permutation> action_;
    std::map<Permutation, Permutation> table_;
};

inline GSet disjointUnion(const GSet& x, const GSet& y) {
    if (!(*x.group() == *y.group())) throw DomainError("disjointUnion: different groups");
    int n = x.points() + y.points();
    std::vector<Permutation> action;
    for (size_t i = 0; i < x.action().size(); ++i) {
        Permutation p;
        p.images.resize(n);
        for (int a = 0; a < x.points(); ++a) p.images[a] = x.action()[i](a);
        for (int b = 0; b < y.points(); ++b) p.images[x.points() + b] = x.points() + y.action()[i](b);
        action.push_back(std::move(p));
    }
    return GSet(x.group(), n, std::move(action));
}

/// Restriction of the action to a stable subset (given sorted), reindexed.
inline GSet subGSet(const GSet& x, const std::vector<int>& pts) {
    std::vector<int> pos(x.points(), -1);
    for (size_t i = 0; i < pts.size(); ++i) pos[pts[i]] = static_cast<int>(i);
    std::vector<Permutation> action;
    for (const auto& a : x.action()) {
        Permutation p;
        p.images.resize(pts.size());
        for (size_t i = 0; i < pts.size(); ++i) {
            int img = a(pts[i]);
            if (img < 0 || pos[img] < 0) throw DomainError("subset not stable under the action");
            p.images[i] = pos[img];
        }
        action.push_back(std::move(p));
    }
    return GSet(x.group(), static_cast<int>(pts.size()), std::move(action));
}

/// Equivariant map between G-sets over the same group.
struct GMap {
    const GSet* source = nullptr;
    const GSet* target = nullptr;
    std::vector<int> map;
};

inline bool isEquivariant(const GSet& x, const GSet& y, const std::vector<int>& f) {
    if (f.size() != static_cast<size_t>(x.points())) return false;
    for (int v : f)
        if (v < 0 || v >= y.points()) return false;
    for (size_t i = 0; i < x.action().size(); ++i)
        for (int p = 0; p < x.points(); ++p)
            if (f[x.action()[i](p)] != y.action()[i](f[p])) return false;
    return true;
}

namespace detail {

/// Backtracking over orbit representatives: enumerate equivariant maps x -> y
/// that are bijections.  Used for both Aut(X) and isomorphism testing.
inline void equivariantBijections(const GSet& x, const GSet& y,
                                  const std::function<bool(const std::vector<int>&)>& emit) {
    if (x.points() != y.points()) return;
    auto xOrbits = x.orbits();
    auto yOrbitIdx = y.orbitIndex();
    auto yOrbits = y.orbits();
    std::vector<int> f(x.points(), -1);
    std::vector<char> used(y.points(), 0);
    // stabilizers of x's orbit representatives, precomputed
    std::vector<std::vector<Permutation>> repStabs;
    for (const auto& orb : xOrbits) repStabs.push_back(x.stabilizer(orb[0]));

    std::function<bool(size_t)> go = [&](size_t oi) -> bool {
        if (oi == xOrbits.size()) return emit(f);
        int rep = xOrbits[oi][0];
        for (int img = 0; img < y.points(); ++img) {
            if (used[img]) continue;
            if (yOrbits[yOrbitIdx[img]].size() != xOrbits[oi].size()) continue;
            bool stabOk = true;
            for (const auto& s : repStabs[oi])
                if (y.act(s, img) != img) {
                    stabOk = false;
                    break;
                }
            if (!stabOk) continue;
            // extend along the orbit: f(g . rep) = g . img
            bool clash = false;
            std::vector<int> placed;
            for (const auto& g : x.group()->elements()) {
                int from = x.act(g, rep), to = y.act(g, img);
                if (f[from] == -1) {
                    if (used[to]) {
                        clash = true;
                        break;
                    }
                    f[from] = to;
                    used[to] = 1;
                    placed.push_back(from);
                } else if (f[from] != to) {
                    clash = true;
                    break;
                }
            }
            if (!clash && go(oi + 1)) return true;
            for (int p : placed) {
                used[f[p]] = 0;
                f[p] = -1;
            }
        }
        return false;
    };
    go(0);
}

}  // namespace detail

/// All point-bijections commuting with the action, as a group on the points.
inline PermGroup autGSet(const GSet& x, int maxPoints = 12) {
    if (x.points() > maxPoints)
        throw SizeLimitError("autGSet: " + std::to_string(x.points()) + " points exceeds bound " +
                             std::to_string(maxPoints));
    if (x.points() == 0) return PermGroup::trivial();
    std::vector<Permutation> elems;
    detail::equivariantBijections(x, x, [&](const std::vector<int>& f) {
        Permutation p;
        p.images = f;
        elems.push_back(p);
        if (elems.size() > PermGroup::kMaxElements)
            throw SizeLimitError("autGSet: automorphism group exceeds element bound");
        return false;  // keep enumerating
    });
    return PermGroup::fromElements(x.points(), std::move(elems));
}

/// Equivariant bijection x -> y if one exists.
inline std::optional<std::vector<int>> areIsomorphicGSets(const GSet& x, const GSet& y,
                                                          int maxPoints = 12) {
    if (!(*x.group() == *y.group())) throw DomainError("areIsomorphicGSets: different groups");
    if (x.points() > maxPoints || y.points() > maxPoints)
        throw SizeLimitError("areIsomorphicGSets: point count exceeds bound");
    if (x.points() != y.points() || x.orbitCount() != y.orbitCount()) return std::nullopt;
    std::optional<std::vector<int>> witness;
    detail::equivariantBijections(x, y, [&](const std::vector<int>& f) {
        witness = f;
        return true;  // stop at the first witness
    });
    return witness;
}

}  // namespace oligocat
