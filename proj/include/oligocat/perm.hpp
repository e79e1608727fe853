#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace oligocat {

struct SizeLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct PreconditionError : std::runtime_error {
    PreconditionError(const std::string& msg, std::string witnessJson = "")
        : std::runtime_error(msg), witness(std::move(witnessJson)) {}
    std::string witness;
};

/// Bijection of {0..n-1}, stored as the image array.
struct Permutation {
    std::vector<int> images;

    static Permutation identity(int n) {
        Permutation p;
        p.images.resize(n);
        for (int i = 0; i < n; ++i) p.images[i] = i;
        return p;
    }
    static Permutation fromCycles(int n, const std::vector<std::vector<int>>& cycles) {
        Permutation p = identity(n);
        for (const auto& cyc : cycles) {
            for (size_t i = 0; i < cyc.size(); ++i) {
                int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
                if (a < 0 || a >= n || b < 0 || b >= n)
                    throw DomainError("cycle entry out of range");
                p.images[a] = b;
            }
        }
        if (!p.isValid()) throw DomainError("cycles do not define a permutation");
        return p;
    }

    int degree() const { return static_cast<int>(images.size()); }
    int operator()(int x) const { return images[x]; }
    bool isValid() const {
        std::vector<char> seen(images.size(), 0);
        for (int v : images) {
            if (v < 0 || v >= degree() || seen[v]) return false;
            seen[v] = 1;
        }
        return true;
    }
    bool isIdentity() const {
        for (int i = 0; i < degree(); ++i)
            if (images[i] != i) return false;
        return true;
    }
    /// (a*b)(x) = a(b(x))
    friend Permutation operator*(const Permutation& a, const Permutation& b) {
        Permutation r;
        r.images.resize(b.images.size());
        for (size_t i = 0; i < b.images.size(); ++i) r.images[i] = a.images[b.images[i]];
        return r;
    }
    Permutation inverse() const {
        Permutation r;
        r.images.resize(images.size());
        for (int i = 0; i < degree(); ++i) r.images[images[i]] = i;
        return r;
    }
    friend bool operator==(const Permutation& a, const Permutation& b) {
        return a.images == b.images;
    }
    friend bool operator<(const Permutation& a, const Permutation& b) {
        return a.images < b.images;
    }
    std::vector<std::vector<int>> cycles() const {
        std::vector<std::vector<int>> out;
        std::vector<char> seen(images.size(), 0);
        for (int i = 0; i < degree(); ++i) {
            if (seen[i] || images[i] == i) continue;
            std::vector<int> cyc;
            int j = i;
            while (!seen[j]) {
                seen[j] = 1;
                cyc.push_back(j);
                j = images[j];
            }
            out.push_back(std::move(cyc));
        }
        return out;
    }
};

/// Finite permutation group given by generators; the element set is
/// materialized eagerly by closure (desk-scale groups only).
class PermGroup {
public:
    static constexpr int kDefaultMaxDegree = 10;
    static constexpr size_t kMaxElements = 500000;

    PermGroup(int degree, std::vector<Permutation> generators,
              int maxDegree = kDefaultMaxDegree)
        : degree_(degree), generators_(std::move(generators)) {
        if (degree < 1) throw DomainError("group degree must be positive");
        if (degree > maxDegree)
            throw SizeLimitError("group degree " + std::to_string(degree) + " exceeds bound " +
                                 std::to_string(maxDegree));
        for (const auto& g : generators_)
            if (g.degree() != degree_ || !g.isValid())
                throw DomainError("generator is not a permutation of the stated degree");
        enumerate();
    }

    /// Builds a group from an explicit, already-closed element set (used for
    /// automorphism groups, whose degree may exceed the generator-path bound).
    static PermGroup fromElements(int degree, std::vector<Permutation> elements) {
        PermGroup g;
        g.degree_ = degree;
        std::sort(elements.begin(), elements.end());
        elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
        g.elements_ = std::move(elements);
        for (const auto& p : g.elements_) {
            if (p.degree() != degree || !p.isValid())
                throw DomainError("element is not a permutation of the stated degree");
            if (!p.isIdentity()) g.generators_.push_back(p);
        }
        if (!std::binary_search(g.elements_.begin(), g.elements_.end(),
                                Permutation::identity(degree)))
            throw DomainError("element set lacks the identity");
        return g;
    }

    static PermGroup trivial() { return PermGroup(1, {}); }
    static PermGroup fromCycleGenerators(int degree,
                                         const std::vector<std::vector<std::vector<int>>>& gens) {
        std::vector<Permutation> ps;
        ps.reserve(gens.size());
        for (const auto& cycles : gens) ps.push_back(Permutation::fromCycles(degree, cycles));
        return PermGroup(degree, ps);
    }
    static PermGroup symmetric(int n) {
        std::vector<Permutation> gens;
        if (n >= 2) gens.push_back(Permutation::fromCycles(n, {{0, 1}}));
        if (n >= 3) {
            std::vector<int> full(n);
            for (int i = 0; i < n; ++i) full[i] = i;
            gens.push_back(Permutation::fromCycles(n, {full}));
        }
        return PermGroup(n, gens);
    }

    int degree() const { return degree_; }
    const std::vector<Permutation>& generators() const { return generators_; }
    const std::vector<Permutation>& elements() const { return elements_; }
    size_t order() const { return elements_.size(); }

    bool contains(const Permutation& p) const {
        return std::binary_search(elements_.begin(), elements_.end(), p);
    }

    friend bool operator==(const PermGroup& a, const PermGroup& b) {
        return a.degree_ == b.degree_ && a.elements_ == b.elements_;
    }

private:
    PermGroup() : degree_(1) {}

    void enumerate() {
        std::set<Permutation> closed;
        std::vector<Permutation> frontier{Permutation::identity(degree_)};
        closed.insert(frontier[0]);
        while (!frontier.empty()) {
            std::vector<Permutation> next;
            for (const auto& e : frontier)
                for (const auto& g : generators_) {
                    Permutation p = g * e;
                    if (closed.insert(p).second) {
                        if (closed.size() > kMaxElements)
                            throw SizeLimitError("group closure exceeds element bound");
                        next.push_back(p);
                    }
                }
            frontier = std::move(next);
        }
        elements_.assign(closed.begin(), closed.end());
    }

    int degree_;
    std::vector<Permutation> generators_;
    std::vector<Permutation> elements_;  // sorted (set order = lexicographic)
};

using PermGroupPtr = std::shared_ptr<const PermGroup>;

}  // namespace oligocat
