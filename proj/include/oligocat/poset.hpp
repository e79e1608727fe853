#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "oligocat/perm.hpp"
#include "oligocat/ring.hpp"

namespace oligocat {

/// Finite poset over elements {0..n-1} with an explicit comparison table.
class FinitePoset {
public:
    explicit FinitePoset(std::vector<std::vector<char>> leq) : leq_(std::move(leq)) {
        n_ = static_cast<int>(leq_.size());
        for (const auto& row : leq_)
            if (row.size() != static_cast<size_t>(n_)) throw DomainError("leq table not square");
        for (int i = 0; i < n_; ++i) {
            if (!leq_[i][i]) throw DomainError("leq not reflexive");
            for (int j = 0; j < n_; ++j) {
                if (i != j && leq_[i][j] && leq_[j][i]) throw DomainError("leq not antisymmetric");
                if (!leq_[i][j]) continue;
                for (int k = 0; k < n_; ++k)
                    if (leq_[j][k] && !leq_[i][k]) throw DomainError("leq not transitive");
            }
        }
    }

    int size() const { return n_; }
    bool leq(int x, int y) const { return leq_[x][y] != 0; }

    /// Möbius function: μ̃(x,x)=1, μ̃(x,y) = −Σ_{x≤z<y} μ̃(x,z).  Memoized.
    BigInt moebius(int x, int y) const {
        if (!leq(x, y)) throw DomainError("moebius: x is not below y");
        auto key = std::make_pair(x, y);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        BigInt v;
        if (x == y) {
            v = 1;
        } else {
            v = 0;
            for (int z = 0; z < n_; ++z)
                if (leq(x, z) && leq(z, y) && z != y) v -= moebius(x, z);
        }
        memo_.emplace(key, v);
        return v;
    }

    /// g(y) = Σ_{x≤y} μ̃(x,y) f(x); the zeta transform of g recovers f.
    std::vector<RingElem> moebiusInvert(const std::vector<RingElem>& f) const {
        if (f.size() != static_cast<size_t>(n_)) throw DomainError("moebiusInvert: size mismatch");
        std::vector<RingElem> g;
        g.reserve(n_);
        for (int y = 0; y < n_; ++y) {
            RingElem acc = RingElem::zero(f.empty() ? RingKind::Rational : f[0].kind());
            for (int x = 0; x < n_; ++x)
                if (leq(x, y)) acc += moebius(x, y) * f[x];
            g.push_back(acc);
        }
        return g;
    }

    std::vector<RingElem> zetaTransform(const std::vector<RingElem>& g) const {
        if (g.size() != static_cast<size_t>(n_)) throw DomainError("zetaTransform: size mismatch");
        std::vector<RingElem> f;
        f.reserve(n_);
        for (int y = 0; y < n_; ++y) {
            RingElem acc = RingElem::zero(g.empty() ? RingKind::Rational : g[0].kind());
            for (int x = 0; x < n_; ++x)
                if (leq(x, y)) acc += g[x];
            f.push_back(acc);
        }
        return f;
    }

private:
    int n_;
    std::vector<std::vector<char>> leq_;
    mutable std::map<std::pair<int, int>, BigInt> memo_;
};

}  // namespace oligocat
