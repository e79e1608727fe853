#pragma once

#include <functional>
#include <optional>

#include "oligocat/atoms.hpp"
#include "oligocat/enumerate.hpp"
#include "oligocat/regcat.hpp"
#include "oligocat/ring.hpp"

namespace oligocat {

// ---------------------------------------------------------------------------
// Möbius weights of the subobject lattice (closed forms)
// ---------------------------------------------------------------------------

namespace detail {

inline BigInt factorial(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

}  // namespace detail

/// Number of atoms of a principal object: RC-A orbit count, RC-B element count.
inline int rankOf(const RCObject& x) {
    if (x.inst->kind == CatKind::FinGSet) return x.gset->orbitCount();
    return x.size();
}

/// μ̃(z, top) in Sub(y).  RC-A: Sub(y) is boolean on orbits, so the value is
/// (-1)^(number of orbits outside z).  RC-B: the interval [z, top] is a
/// product of partition lattices, one per block of z, giving
/// Π_B (-1)^(|B|-1) (|B|-1)!.  Both are cross-checked against the generic
/// poset recursion in the unit tests.
inline BigInt subMoebiusToTop(const RCObject& y, const Sub& z) {
    if (y.inst->kind == CatKind::FinGSet) {
        int missing = 0;
        for (const auto& o : y.gset->orbits())
            if (!z.data[o[0]]) ++missing;
        return (missing % 2 == 0) ? BigInt(1) : BigInt(-1);
    }
    std::map<int, int> blockSize;
    for (int b : z.data) ++blockSize[b];
    BigInt r = 1;
    for (const auto& [b, sz] : blockSize) {
        r *= detail::factorial(sz - 1);
        if ((sz - 1) % 2 != 0) r = -r;
    }
    return r;
}

namespace detail {

/// All subobjects of a principal object for measure sums.  Unlike
/// subobjects(), the RC-A path is not limited by the point bound — only by
/// the orbit-subset guard — so large objects with few orbits stay tractable.
inline std::vector<Sub> measureSubs(const RCObject& y) {
    if (y.inst->kind == CatKind::FinGSet)
        return orbitSubsetSubs(y, y.gset->orbits(), true);
    if (y.size() > 10) throw SizeLimitError("measureSubs: partition lattice too large");
    std::vector<Sub> out;
    for (auto& p : allPartitions(y.size())) out.push_back(Sub{std::move(p)});
    return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Degree functions
// ---------------------------------------------------------------------------

/// ν: multiplicative, base-change invariant assignment of ring values to
/// surjections of principal objects.
struct DegreeFunction {
    RingKind ring = RingKind::Rational;
    std::string name;
    std::function<RingElem(const RCMor&)> rule;

    RingElem operator()(const RCMor& f) const {
        if (!isPrincipal(f.source) || !isPrincipal(f.target))
            throw DomainError("degree: objects must be principal");
        if (!isSurjection(f)) throw DomainError("degree: not a surjection");
        return rule(f);
    }
};

inline DegreeFunction trivialDegree(RingKind k = RingKind::Rational) {
    return DegreeFunction{k, "trivial", [k](const RCMor&) { return RingElem::one(k); }};
}

/// ν_t on RC-B: t^(|u(Y)| - |u(X)|) for a surjection Y → X.  The exponent is
/// a pushout invariant, so base-change invariance holds on the nose; the
/// axiom checker validates the rest.
inline DegreeFunction nuT() {
    return DegreeFunction{RingKind::PolyT, "nu-t", [](const RCMor& f) {
                              if (f.source.inst->kind != CatKind::OpFinSet)
                                  throw DomainError("nu-t lives on the opposite-of-finite-sets instance");
                              return RingElem::t().pow(f.source.size() - f.target.size());
                          }};
}

// ---------------------------------------------------------------------------
// Check reports
// ---------------------------------------------------------------------------

struct CheckItem {
    std::string what;
    std::string detail;
};

struct CheckReport {
    bool pass = true;
    int checked = 0;
    int skipped = 0;
    std::vector<CheckItem> failures;
    std::vector<std::string> notes;

    void fail(std::string what, std::string detail) {
        pass = false;
        failures.push_back({std::move(what), std::move(detail)});
    }
};

// ---------------------------------------------------------------------------
// Degree axiom check
// ---------------------------------------------------------------------------

/// Exhaustive check of the degree axioms on principal objects up to maxSize:
/// (a) isomorphisms get 1, (b) multiplicativity under composition, (c)
/// invariance under base change.  Combinations whose enumeration cost would
/// exceed workLimit are counted as skipped.
inline CheckReport checkDegreeAxioms(const RCInstancePtr& inst, const DegreeFunction& nu,
                                     int maxSize, long long workLimit = 50000000) {
    CheckReport rep;
    auto objs = principalObjects(inst, maxSize);
    RingElem one = RingElem::one(nu.ring);

    // (a) isomorphisms
    for (const auto& x : objs)
        for (const auto& y : objs) {
            if (x.size() != y.size()) continue;
            for (const auto& f : allMorphisms(x, y)) {
                if (!isIsoMor(f)) continue;
                ++rep.checked;
                if (!(nu(f) == one))
                    rep.fail("iso-value", f.key() + " -> " + nu(f).str());
            }
        }

    // (b) composition
    for (const auto& x : objs)
        for (const auto& y : objs)
            for (const auto& z : objs) {
                auto fs = allSurjections(y, x);
                auto gs = allSurjections(z, y);
                if (fs.empty() || gs.empty()) continue;
                long long cost = static_cast<long long>(fs.size()) * gs.size() * z.size();
                if (cost > workLimit) {
                    ++rep.skipped;
                    continue;
                }
                for (const auto& f : fs)
                    for (const auto& g : gs) {
                        ++rep.checked;
                        if (!(nu(composeMor(f, g)) == nu(f) * nu(g)))
                            rep.fail("multiplicativity", g.key() + " then " + f.key());
                    }
            }

    // (c) base change
    for (const auto& x : objs)
        for (const auto& y : objs)
            for (const auto& xp : objs) {
                auto fs = allSurjections(y, x);
                if (fs.empty()) continue;
                auto gs = allMorphisms(xp, x);
                long long cost = static_cast<long long>(fs.size()) * gs.size() *
                                 (static_cast<long long>(y.size()) * xp.size());
                if (cost > workLimit) {
                    ++rep.skipped;
                    continue;
                }
                for (const auto& f : fs)
                    for (const auto& g : gs) {
                        FiberProduct F = fiberProduct(f, g);
                        ++rep.checked;
                        if (!(nu(F.toY) == nu(f)))
                            rep.fail("base-change", "f=" + f.key() + " g=" + g.key());
                    }
            }
    return rep;
}

// ---------------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------------

/// μ: ring values on surjections of principal objects.  Three flavors:
/// derived from a degree function via the Möbius sum, the power form
/// s^(rank difference) on RC-A, or a custom rule (mainly for negative tests).
class Measure {
public:
    enum class Form { Derived, RegularPower, Custom };

    static Measure derived(RCInstancePtr inst, DegreeFunction nu) {
        Measure m;
        m.inst_ = std::move(inst);
        m.ring_ = nu.ring;
        m.name_ = "derived:" + nu.name;
        m.form_ = Form::Derived;
        m.nu_ = std::move(nu);
        return m;
    }

    /// μ(f: Y→X) = base^(rank Y - rank X); RC-A only, base must be a unit.
    static Measure regularPower(RCInstancePtr inst, RingElem base, std::string name) {
        if (inst->kind != CatKind::FinGSet)
            throw DomainError("regularPower measures are an RC-A construction");
        if (!base.isUnit()) throw DomainError("regularPower: base must be a unit");
        Measure m;
        m.inst_ = std::move(inst);
        m.ring_ = base.kind();
        m.name_ = std::move(name);
        m.form_ = Form::RegularPower;
        m.base_ = std::move(base);
        return m;
    }

    static Measure custom(RCInstancePtr inst, RingKind ring, std::string name,
                          std::function<RingElem(const RCMor&)> rule) {
        Measure m;
        m.inst_ = std::move(inst);
        m.ring_ = ring;
        m.name_ = std::move(name);
        m.form_ = Form::Custom;
        m.rule_ = std::move(rule);
        return m;
    }

    const RCInstancePtr& instance() const { return inst_; }
    RingKind ring() const { return ring_; }
    const std::string& name() const { return name_; }
    Form form() const { return form_; }
    const RingElem& base() const {
        if (form_ != Form::RegularPower) throw DomainError("measure has no power base");
        return base_;
    }
    const DegreeFunction& degree() const {
        if (form_ != Form::Derived) throw DomainError("measure was not derived from a degree");
        return nu_;
    }

    RingElem value(const RCMor& f) const {
        if (!isPrincipal(f.source) || !isPrincipal(f.target))
            throw DomainError("measure: objects must be principal");
        if (!isSurjection(f)) throw DomainError("measure: not a surjection");
        switch (form_) {
            case Form::RegularPower:
                return base_.pow(rankOf(f.source) - rankOf(f.target));
            case Form::Custom:
                return rule_(f);
            case Form::Derived: break;
        }
        auto it = memo_->find(f.key());
        if (it != memo_->end()) return it->second;
        RingElem acc = RingElem::zero(ring_);
        Sub top = topSub(f.target);
        for (const auto& z : detail::measureSubs(f.source)) {
            if (!(imageOfSub(f, z) == top)) continue;
            RCMor restricted = composeMor(f, subMono(f.source, z));
            acc += subMoebiusToTop(f.source, z) * nu_(restricted);
        }
        memo_->emplace(f.key(), acc);
        return acc;
    }

    /// μ(𝔅(X)) = value of the map to the final object.
    RingElem objectValue(const RCObject& x) const { return value(terminalMor(x)); }

    /// RC-A: certify that the measure agrees with base^(rank difference) on
    /// every surjection within maxSize; returns the base on success.
    std::optional<RingElem> certifyRegularPower(int maxSize) const {
        if (inst_->kind != CatKind::FinGSet) return std::nullopt;
        if (form_ == Form::RegularPower) return base_;
        RCObject two = makeObjectA(inst_, GSet::trivialAction(inst_->group, 2));
        RingElem s = objectValue(two);
        if (!s.isUnit()) return std::nullopt;
        auto objs = principalObjects(inst_, maxSize);
        for (const auto& x : objs)
            for (const auto& y : objs)
                for (const auto& f : allSurjections(y, x))
                    if (!(value(f) == s.pow(rankOf(y) - rankOf(x)))) return std::nullopt;
        return s;
    }

private:
    RCInstancePtr inst_;
    RingKind ring_ = RingKind::Rational;
    std::string name_;
    Form form_ = Form::Custom;
    DegreeFunction nu_;
    RingElem base_;
    std::function<RingElem(const RCMor&)> rule_;
    std::shared_ptr<std::map<std::string, RingElem>> memo_ =
        std::make_shared<std::map<std::string, RingElem>>();
};

/// μ(f) = Σ over subobjects Z of Y with f(Z) = X of μ̃(Z, Y) · ν(f|_Z).
inline Measure deriveMeasure(const RCInstancePtr& inst, DegreeFunction nu) {
    return Measure::derived(inst, std::move(nu));
}

/// Inverse construction: ν(f) = Σ over subobjects Z of Y with f(Z) = X of
/// μ(f|_Z).  No Möbius inversion is needed; the sums are mutually inverse.
inline DegreeFunction recoverDegree(const Measure& mu) {
    DegreeFunction nu;
    nu.ring = mu.ring();
    nu.name = "recovered:" + mu.name();
    nu.rule = [mu](const RCMor& f) {
        RingElem acc = RingElem::zero(mu.ring());
        Sub top = topSub(f.target);
        for (const auto& z : detail::measureSubs(f.source)) {
            if (!(imageOfSub(f, z) == top)) continue;
            acc += mu.value(composeMor(f, subMono(f.source, z)));
        }
        return acc;
    };
    return nu;
}

// ---------------------------------------------------------------------------
// Measure axiom check
// ---------------------------------------------------------------------------

/// One fiber-product decomposition μ(f) =? Σ_W μ(W → X′) over ample
/// subobjects W of Y ×_X X′, with the per-term ranks kept for reporting.
struct Decomposition {
    RingElem lhs;                 // μ(f)
    std::vector<int> ranks;       // rank of each ample W
    std::vector<RingElem> terms;  // μ(W → X′)
    RingElem sum;
    bool matches = false;
};

inline Decomposition measureDecomposition(const Measure& mu, const RCMor& f, const RCMor& g) {
    if (!isSurjection(f) || !isSurjection(g))
        throw DomainError("measureDecomposition: both maps must be surjections");
    if (!(f.target == g.target)) throw DomainError("measureDecomposition: codomains differ");
    Decomposition d;
    d.lhs = mu.value(f);
    d.sum = RingElem::zero(mu.ring());
    FiberProduct F = fiberProduct(f, g);
    RCMor p2 = proj2(F.prod);
    for (const auto& w : ampleSubobjects(F.prod, F.sub)) {
        RCObject wObj = subObject(F.prod.obj, w);
        RCMor toXp = composeMor(p2, subMono(F.prod.obj, w));
        RingElem term = mu.value(toXp);
        d.ranks.push_back(rankOf(wObj));
        d.terms.push_back(term);
        d.sum += term;
    }
    d.matches = (d.sum == d.lhs);
    return d;
}

namespace detail {

/// Σ over ample subsets W of the fiber-product orbits of s^(rank W), by
/// inclusion–exclusion over uncovered Y-orbits and X′-orbits.  Valid for any
/// group; used when direct enumeration of 2^orbits is out of reach and the
/// measure is (certified) of power form.
inline RingElem amplePowerSum(const RingElem& s, const FiberProduct& F) {
    const RCObject& y = F.prod.x;
    const RCObject& xp = F.prod.y;
    int nr = y.gset->orbitCount(), nc = xp.gset->orbitCount();
    if (nr + nc > 24) throw SizeLimitError("amplePowerSum: too many factor orbits");
    std::vector<int> rowIdx = y.gset->orbitIndex(), colIdx = xp.gset->orbitIndex();
    std::vector<std::pair<int, int>> cells;  // (row orbit, col orbit) per fp orbit
    for (const auto& o : F.prod.obj.gset->orbits()) {
        if (!F.sub.data[o[0]]) continue;
        auto [a, b] = F.prod.unpair(o[0]);
        cells.emplace_back(rowIdx[a], colIdx[b]);
    }
    RingElem onePlusS = RingElem::one(s.kind()) + s;
    RingElem acc = RingElem::zero(s.kind());
    for (uint32_t A = 0; A < (uint32_t{1} << nr); ++A)
        for (uint32_t B = 0; B < (uint32_t{1} << nc); ++B) {
            long long n = 0;
            for (const auto& [r, c] : cells)
                if (!(A & (uint32_t{1} << r)) && !(B & (uint32_t{1} << c))) ++n;
            int sign = (__builtin_popcount(A) + __builtin_popcount(B)) % 2;
            RingElem term = onePlusS.pow(n);
            acc += sign ? -term : term;
        }
    return acc;
}

inline int fpOrbitCount(const FiberProduct& F) {
    int k = 0;
    for (const auto& o : F.prod.obj.gset->orbits())
        if (F.sub.data[o[0]]) ++k;
    return k;
}

}  // namespace detail

/// Checks the measure axioms on principal objects up to maxSize:
/// (a) isomorphisms get 1, (b) multiplicativity, (c) every fiber-product
/// decomposition over ample subobjects reproduces μ(f).  RC-A pairs whose
/// fiber product has too many orbits for direct enumeration fall back to a
/// closed-form covering sum when the measure has (certified) power form, and
/// are skipped otherwise.
inline CheckReport checkMeasureAxioms(const RCInstancePtr& inst, const Measure& mu, int maxSize,
                                      int genericOrbitLimit = 18) {
    CheckReport rep;
    auto objs = principalObjects(inst, maxSize);
    RingElem one = RingElem::one(mu.ring());

    // (a) isomorphisms
    for (const auto& x : objs)
        for (const auto& y : objs) {
            if (x.size() != y.size()) continue;
            for (const auto& f : allMorphisms(x, y)) {
                if (!isIsoMor(f)) continue;
                ++rep.checked;
                if (!(mu.value(f) == one)) rep.fail("iso-value", f.key());
            }
        }

    // (b) composition
    for (const auto& x : objs)
        for (const auto& y : objs)
            for (const auto& z : objs)
                for (const auto& f : allSurjections(y, x))
                    for (const auto& g : allSurjections(z, y)) {
                        ++rep.checked;
                        if (!(mu.value(composeMor(f, g)) == mu.value(f) * mu.value(g)))
                            rep.fail("multiplicativity", g.key() + " then " + f.key());
                    }

    // (c) fiber-product decompositions
    std::optional<RingElem> powerBase;
    bool powerBaseKnown = false;
    for (const auto& x : objs)
        for (const auto& y : objs)
            for (const auto& xp : objs)
                for (const auto& f : allSurjections(y, x))
                    for (const auto& g : allSurjections(xp, x)) {
                        FiberProduct F = fiberProduct(f, g);
                        bool direct = inst->kind == CatKind::OpFinSet ||
                                      detail::fpOrbitCount(F) <= genericOrbitLimit;
                        if (direct) {
                            Decomposition d = measureDecomposition(mu, f, g);
                            ++rep.checked;
                            if (!d.matches)
                                rep.fail("decomposition", "f=" + f.key() + " g=" + g.key() +
                                                              " sum=" + d.sum.str() +
                                                              " expected=" + d.lhs.str());
                            continue;
                        }
                        if (!powerBaseKnown) {
                            powerBase = mu.certifyRegularPower(maxSize);
                            powerBaseKnown = true;
                            if (powerBase)
                                rep.notes.push_back(
                                    "large fiber products handled via the power form, base " +
                                    powerBase->str());
                        }
                        if (!powerBase) {
                            ++rep.skipped;
                            continue;
                        }
                        const RingElem& s = *powerBase;
                        RingElem sum = detail::amplePowerSum(s, F) * s.pow(-rankOf(xp));
                        ++rep.checked;
                        if (!(sum == mu.value(f)))
                            rep.fail("decomposition(power)", "f=" + f.key() + " g=" + g.key());
                    }
    return rep;
}

// ---------------------------------------------------------------------------
// μ on general maps of C-objects; degree-origin test
// ---------------------------------------------------------------------------

/// Per-target-atom totals of μ over the incoming legs.
inline std::vector<RingElem> muOfGeneralMap(const Measure& mu, const CMor& f) {
    if (!isValidCMor(f)) throw DomainError("muOfGeneralMap: invalid map");
    std::vector<RingElem> out(f.target.atoms.size(), RingElem::zero(mu.ring()));
    for (const auto& [ti, mor] : f.legs) out[ti] += mu.value(mor);
    return out;
}

/// A map is μ-constant when every target atom receives the same total.
/// Returns that common value, or nullopt (an unhit target atom only passes
/// when the common value is zero).
inline std::optional<RingElem> isMuConstant(const Measure& mu, const CMor& f) {
    auto vals = muOfGeneralMap(mu, f);
    if (vals.empty()) return RingElem::zero(mu.ring());
    for (const auto& v : vals)
        if (!(v == vals[0])) return std::nullopt;
    return vals[0];
}

struct OriginResult {
    bool arises = false;
    std::string witness;  // on failure: the surjection whose induced map is not μ-constant
    std::optional<DegreeFunction> nu;
};

/// μ arises from a degree function iff for every surjection f the induced map
/// 𝔄₁(Y) → 𝔄₁(X) is μ-constant; the common values then form ν, and
/// deriving a measure from ν must give μ back.  Checked exhaustively on
/// principal objects up to maxSize.
inline OriginResult degreeOriginTest(const Measure& mu, int maxSize) {
    const RCInstancePtr& inst = mu.instance();
    auto objs = principalObjects(inst, maxSize);
    OriginResult R;
    for (const auto& x : objs)
        for (const auto& y : objs)
            for (const auto& f : allSurjections(y, x)) {
                auto c = isMuConstant(mu, a1Map(f));
                if (!c) {
                    R.witness = f.key();
                    return R;
                }
            }
    Measure muCopy = mu;
    DegreeFunction nu;
    nu.ring = mu.ring();
    nu.name = "induced:" + mu.name();
    nu.rule = [muCopy](const RCMor& f) {
        auto c = isMuConstant(muCopy, a1Map(f));
        if (!c) throw DomainError("induced degree: map is not mu-constant: " + f.key());
        return *c;
    };
    Measure derivedBack = Measure::derived(inst, nu);
    for (const auto& x : objs)
        for (const auto& y : objs)
            for (const auto& f : allSurjections(y, x))
                if (!(derivedBack.value(f) == mu.value(f))) {
                    R.witness = "re-derivation mismatch at " + f.key();
                    return R;
                }
    R.arises = true;
    R.nu = std::move(nu);
    return R;
}

// ---------------------------------------------------------------------------
// Oddness, the special RC-A measures, constraint solving
// ---------------------------------------------------------------------------

struct OddnessResult {
    bool odd = true;
    std::string witness;  // first fiber product of atom maps with an even atom count
    int pairsChecked = 0;
};

/// An RC-A instance is odd when every fiber product of two maps of atoms
/// (transitive G-sets) over a common atom has an odd number of orbits.
/// Checked exhaustively up to the size bound.
inline OddnessResult isOddCategory(const RCInstancePtr& inst, int maxSize) {
    if (inst->kind != CatKind::FinGSet)
        throw DomainError("oddness is an RC-A notion");
    OddnessResult R;
    auto atoms = transitiveGSets(inst->group, maxSize);
    for (const auto& xg : atoms)
        for (const auto& yg : atoms)
            for (const auto& zg : atoms) {
                RCObject x = makeObjectA(inst, xg), y = makeObjectA(inst, yg),
                         z = makeObjectA(inst, zg);
                for (const auto& f : allMorphisms(x, z))
                    for (const auto& g : allMorphisms(y, z)) {
                        FiberProduct F = fiberProduct(f, g);
                        ++R.pairsChecked;
                        if (F.obj.gset->orbitCount() % 2 == 0) {
                            R.odd = false;
                            R.witness = x.key() + " x_{" + z.key() + "} " + y.key() + " has " +
                                        std::to_string(F.obj.gset->orbitCount()) + " atoms";
                            return R;
                        }
                    }
            }
    return R;
}

/// μ(𝔅(X)) = (-1)^(rank-1); exists for every RC-A instance.
inline Measure alphaMeasure(const RCInstancePtr& inst) {
    return Measure::regularPower(inst, RingElem::fromInt(RingKind::Rational, -1), "alpha");
}

/// μ(𝔅(X)) = (-2)^(rank-1); requires the instance to be odd (checked up to
/// maxSize; throws PreconditionError with the offending fiber product).
inline Measure betaMeasure(const RCInstancePtr& inst, int maxSize) {
    OddnessResult odd = isOddCategory(inst, maxSize);
    if (!odd.odd)
        throw PreconditionError("betaMeasure requires an odd instance; witness: " + odd.witness);
    return Measure::regularPower(inst, RingElem::fromInt(RingKind::Rational, -2), "beta");
}

/// The all-ones regular measure over GF(2); exists exactly when the instance
/// is odd (same witness logic as betaMeasure).
inline std::optional<Measure> f2RegularMeasure(const RCInstancePtr& inst, int maxSize) {
    if (!isOddCategory(inst, maxSize).odd) return std::nullopt;
    return Measure::regularPower(inst, RingElem::one(RingKind::GF2), "f2");
}

// ---------------------------------------------------------------------------
// Regular constraint solving
// ---------------------------------------------------------------------------

/// Integer polynomial in s, coefficients by degree.
using IntPoly = std::vector<BigInt>;

struct RegularSolveResult {
    std::vector<BigRat> roots;               // common nonzero rational roots
    std::vector<IntPoly> constraints;        // deduplicated, lhs - rhs
    std::vector<std::string> constraintLabels;
    int skipped = 0;
};

namespace detail {

inline void trimPoly(IntPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline BigRat evalPoly(const IntPoly& p, const BigRat& s) {
    BigRat acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * s + BigRat(*it);
    return acc;
}

/// Nonzero rational roots of an integer polynomial (rational root theorem,
/// after stripping powers of s).
inline std::vector<BigRat> rationalRoots(IntPoly p) {
    trimPoly(p);
    size_t low = 0;
    while (low < p.size() && p[low] == 0) ++low;
    p.erase(p.begin(), p.begin() + low);
    std::vector<BigRat> roots;
    if (p.empty() || p.size() == 1) return roots;
    auto divisors = [](BigInt n) {
        if (n < 0) n = -n;
        std::vector<BigInt> out;
        for (BigInt d = 1; d * d <= n; ++d)
            if (n % d == 0) {
                out.push_back(d);
                out.push_back(n / d);
            }
        return out;
    };
    for (const BigInt& num : divisors(p.front()))
        for (const BigInt& den : divisors(p.back()))
            for (int sign : {1, -1}) {
                BigRat cand = BigRat(sign * num, den);
                if (evalPoly(p, cand) == 0 &&
                    std::find(roots.begin(), roots.end(), cand) == roots.end())
                    roots.push_back(cand);
            }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace detail

/// Under the ansatz μ(𝔅(X)) = s^(rank-1), every fiber-product decomposition
/// of a pair of surjections gives the polynomial constraint
/// s^(rank Y + rank X′ - 2) = Σ_W s^(rank X + rank W - 2); collects the
/// constraints on objects up to maxSize and intersects their nonzero
/// rational root sets.
inline RegularSolveResult regularConstraintSolve(const RCInstancePtr& inst, int maxSize) {
    if (inst->kind != CatKind::FinGSet)
        throw DomainError("regular constraint solving is an RC-A construction");
    RegularSolveResult R;
    auto objs = principalObjects(inst, maxSize);
    std::set<IntPoly> seen;
    for (const auto& x : objs)
        for (const auto& y : objs)
            for (const auto& xp : objs)
                for (const auto& f : allSurjections(y, x))
                    for (const auto& g : allSurjections(xp, x)) {
                        try {
                            FiberProduct F = fiberProduct(f, g);
                            auto amples = ampleSubobjects(F.prod, F.sub);
                            IntPoly p;
                            auto bump = [&p](int deg, const BigInt& c) {
                                if (deg >= static_cast<int>(p.size())) p.resize(deg + 1, 0);
                                p[deg] += c;
                            };
                            bump(rankOf(y) + rankOf(xp) - 2, 1);
                            for (const auto& w : amples)
                                bump(rankOf(x) + rankOf(subObject(F.prod.obj, w)) - 2, -1);
                            detail::trimPoly(p);
                            if (p.empty()) continue;
                            if (seen.insert(p).second) {
                                R.constraints.push_back(p);
                                R.constraintLabels.push_back("f=" + f.key() + " g=" + g.key());
                            }
                        } catch (const SizeLimitError&) {
                            ++R.skipped;
                        }
                    }
    bool first = true;
    for (const auto& p : R.constraints) {
        auto roots = detail::rationalRoots(p);
        if (first) {
            R.roots = roots;
            first = false;
        } else {
            std::vector<BigRat> kept;
            for (const auto& r : R.roots)
                if (std::find(roots.begin(), roots.end(), r) != roots.end()) kept.push_back(r);
            R.roots = std::move(kept);
        }
    }
    return R;
}

/// Whether s satisfies every collected constraint.
inline bool satisfiesConstraints(const RegularSolveResult& R, const BigRat& s) {
    for (const auto& p : R.constraints)
        if (detail::evalPoly(p, s) != 0) return false;
    return true;
}

}  // namespace oligocat
