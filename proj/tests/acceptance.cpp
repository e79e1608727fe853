// Acceptance suite: one timed pass/fail line per criterion; nonzero exit on
// any failure.  All arithmetic is exact.
#include <chrono>
#include <iostream>
#include <set>
#include <sstream>

#include "oligocat/deligne.hpp"
#include "oligocat/tensor.hpp"

using namespace oligocat;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int crit, bool pass, double secs, const std::string& detail) {
    std::ostringstream line;
    line << "criterion " << crit << ": " << (pass ? "PASS" : "FAIL") << " (" << std::fixed;
    line.precision(2);
    line << secs << "s)";
    if (!detail.empty()) line << " - " << detail;
    std::cout << line.str() << "\n";
    if (!pass) ++failures;
}

template <typename F>
void timed(int crit, F&& body) {
    auto t0 = Clock::now();
    bool pass = false;
    std::string detail;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    report(crit, pass, std::chrono::duration<double>(Clock::now() - t0).count(), detail);
}

RCInstancePtr instTrivial() {
    return RCInstance::finGSet(std::make_shared<PermGroup>(PermGroup::trivial()));
}
RCInstancePtr instZ2() {
    return RCInstance::finGSet(
        std::make_shared<PermGroup>(PermGroup::fromCycleGenerators(2, {{{0, 1}}})));
}
RCInstancePtr instS3() {
    return RCInstance::finGSet(
        std::make_shared<PermGroup>(PermGroup::fromCycleGenerators(3, {{{0, 1}}, {{0, 1, 2}}})));
}
RCInstancePtr instB() { return RCInstance::opFinSet(); }

RCObject plainSet(const RCInstancePtr& inst, int n) {
    return makeObjectA(inst, GSet::trivialAction(inst->group, n));
}

RCMor foldMap(const RCObject& y, const RCObject& x) {
    RCMor f;
    f.source = y;
    f.target = x;
    f.map.assign(y.size(), 0);
    return f;
}

RingElem Q(long long n) { return RingElem::fromInt(RingKind::Rational, n); }

/// All objects with at most maxRank atoms drawn from the instance's
/// transitive actions of size up to maxAtomSize.
std::vector<RCObject> objectsByRank(const RCInstancePtr& inst, int maxRank, int maxAtomSize) {
    auto atoms = transitiveGSets(inst->group, maxAtomSize);
    std::vector<RCObject> out;
    std::function<void(size_t, std::optional<GSet>, int)> rec = [&](size_t from,
                                                                    std::optional<GSet> acc,
                                                                    int rank) {
        if (acc) out.push_back(makeObjectA(inst, *acc));
        if (rank == maxRank) return;
        for (size_t i = from; i < atoms.size(); ++i)
            rec(i, acc ? disjointUnion(*acc, atoms[i]) : atoms[i], rank + 1);
    };
    rec(0, std::nullopt, 0);
    return out;
}

}  // namespace

int main() {
    // 1. seven ample subsets of [2]x[2]
    timed(1, [](std::string& d) {
        auto triv = instTrivial();
        RCObject two = plainSet(triv, 2);
        size_t n = ampleSubobjects(product(two, two)).size();
        d = "ample count " + std::to_string(n);
        return n == 7;
    });

    // 2. alpha(B(X)) = (-1)^(rank-1) on G in {1, Z/2, S3}, rank <= 4
    timed(2, [](std::string& d) {
        int checked = 0;
        for (const auto& inst : {instTrivial(), instZ2(), instS3()}) {
            Measure mu = deriveMeasure(inst, trivialDegree());
            for (const auto& x : objectsByRank(inst, 4, 6)) {
                RingElem want = Q(rankOf(x) % 2 == 1 ? 1 : -1);
                if (!(mu.objectValue(x) == want)) {
                    d = "mismatch at " + x.key();
                    return false;
                }
                ++checked;
            }
        }
        d = std::to_string(checked) + " objects";
        return true;
    });

    // 3. beta identities inside the axiom checks at sizes <= 4
    timed(3, [](std::string& d) {
        auto triv = instTrivial();
        Measure beta = betaMeasure(triv, 4);
        // the [2]-square: -2 = 2*(-2)^0 + 4*(-2)^1 + 1*(-2)^2 over the 7 amples
        RCObject two = plainSet(triv, 2), one = plainSet(triv, 1);
        Decomposition sq = measureDecomposition(beta, foldMap(two, one), foldMap(two, one));
        if (!(sq.terms.size() == 7 && sq.lhs == Q(-2) && sq.sum == Q(-2) && sq.matches)) {
            d = "[2]-square identity failed";
            return false;
        }
        // the m = 3 identity: 3*1 + 3*(-2) + 1*4 = 1
        CMor m = a1Map(foldMap(plainSet(triv, 3), one));
        auto vals = muOfGeneralMap(beta, m);
        if (!(m.source.atoms.size() == 7 && vals.size() == 1 && vals[0] == Q(1))) {
            d = "m=3 identity failed";
            return false;
        }
        auto rep = checkMeasureAxioms(triv, beta, 4);
        d = "axioms checked " + std::to_string(rep.checked) + ", skipped " +
            std::to_string(rep.skipped);
        return rep.pass;
    });

    // 4. oddness dichotomy and the measures gated by it
    timed(4, [](std::string& d) {
        auto triv = instTrivial();
        auto z2 = instZ2();
        auto oddT = isOddCategory(triv, 5);
        auto oddZ = isOddCategory(z2, 2);
        if (!oddT.odd || oddZ.odd) {
            d = "oddness values wrong";
            return false;
        }
        if (oddZ.witness.find("2 atoms") == std::string::npos) {
            d = "witness: " + oddZ.witness;
            return false;
        }
        bool betaThrew = false;
        try {
            betaMeasure(z2, 2);
        } catch (const PreconditionError&) {
            betaThrew = true;
        }
        bool f2ok = f2RegularMeasure(triv, 3).has_value() && !f2RegularMeasure(z2, 2).has_value();
        betaMeasure(triv, 4);  // must not throw
        d = "witness \"" + oddZ.witness + "\"";
        return betaThrew && f2ok;
    });

    // 5. degree/measure round trip, both instances
    timed(5, [](std::string& d) {
        auto triv = instTrivial();
        auto nu = trivialDegree();
        Measure mu = deriveMeasure(triv, nu);
        DegreeFunction back = recoverDegree(mu);
        long long n = 0;
        for (const auto& x : principalObjects(triv, 6))
            for (const auto& y : principalObjects(triv, 6))
                for (const auto& f : allSurjections(y, x)) {
                    if (!(back(f) == nu(f))) {
                        d = "exact-instance round trip failed";
                        return false;
                    }
                    ++n;
                }
        auto bi = instB();
        auto nut = nuT();
        Measure mut = deriveMeasure(bi, nut);
        DegreeFunction backt = recoverDegree(mut);
        for (const auto& x : principalObjects(bi, 4))
            for (const auto& y : principalObjects(bi, 4))
                for (const auto& f : allSurjections(y, x)) {
                    if (!(backt(f) == nut(f))) {
                        d = "partition-instance round trip failed";
                        return false;
                    }
                    ++n;
                }
        bool ax = checkDegreeAxioms(triv, nu, 4).pass && checkMeasureAxioms(triv, mu, 4).pass &&
                  checkDegreeAxioms(bi, nut, 3).pass && checkMeasureAxioms(bi, mut, 3).pass;
        d = std::to_string(n) + " surjections round-tripped";
        return ax;
    });

    // 6. the change of basis is a functor at desk scale
    timed(6, [](std::string& d) {
        auto r1 = verifyPhi(instTrivial(), trivialDegree(), 3);
        auto r2 = verifyPhi(instZ2(), trivialDegree(), 4);
        auto r3 = verifyPhi(instB(), nuT(), 3);
        std::ostringstream ss;
        ss << "certified " << (r1.pairsCertified + r2.pairsCertified) << ", direct "
           << (r1.pairsDirect + r2.pairsDirect + r3.pairsDirect) << ", matrix "
           << (r1.pairsMatrix + r2.pairsMatrix + r3.pairsMatrix);
        if (!r1.pass) d = "exact trivial-group: " + r1.failures.front();
        else if (!r2.pass) d = "exact two-element-group: " + r2.failures.front();
        else if (!r3.pass) d = "partition: " + r3.failures.front();
        else d = ss.str();
        return r1.pass && r2.pass && r3.pass;
    });

    // 7. diagram calculus recovery, layers <= 3
    timed(7, [](std::string& d) {
        PartitionDiagram s{1, 1, {0, 1}};
        auto dc = delignePartitionCompose(s, s);
        if (dc.middleOnlyBlocks != 1 || dc.diagram.blocks != std::vector<int>{0, 1}) {
            d = "singleton stacking wrong";
            return false;
        }
        auto rep = deligneCompareAll(3);
        d = std::to_string(rep.checked) + " diagram pairs" +
            (rep.failures.empty() ? "" : "; " + rep.failures.front());
        return rep.pass;
    });

    // 8. regular-measure classification: roots exactly {-1, -2}
    timed(8, [](std::string& d) {
        auto triv = instTrivial();
        auto r2 = regularConstraintSolve(triv, 2);
        bool roots = r2.roots.size() == 2 && r2.roots[0] == BigRat(-2) && r2.roots[1] == BigRat(-1);
        bool poly = false;
        for (const auto& p : r2.constraints)
            if (p == IntPoly{0, -2, -3, -1}) poly = true;  // s^2 = 2s + 4s^2 + s^3
        auto r4 = regularConstraintSolve(triv, 4);
        bool both = satisfiesConstraints(r4, BigRat(-1)) && satisfiesConstraints(r4, BigRat(-2));
        d = std::to_string(r4.constraints.size()) + " constraints at size 4";
        return roots && poly && both;
    });

    // 9. equivalence-relation calculus over G in {1, Z/2}, X <= 4 points
    timed(9, [](std::string& d) {
        long long subChecked = 0, quotChecked = 0;
        for (const auto& inst : {instTrivial(), instZ2()}) {
            auto objs = principalObjects(inst, 4);
            for (const auto& x : objs) {
                PermGroup aut = autGSet(*x.gset);
                for (const auto& gamma : allSubgroups(aut)) {
                    auto rset = relationSetFromAutomorphisms(x, gamma);
                    if (!relationSetCheck(rset).ok) {
                        d = "graph set failed the check on " + x.key();
                        return false;
                    }
                    auto dich = equivalenceDichotomy(rset);
                    if (dich.isQuotient ||
                        !(*dich.gamma == PermGroup::fromElements(x.size(), gamma))) {
                        d = "subgroup not recovered on " + x.key();
                        return false;
                    }
                    ++subChecked;
                }
                for (const auto& t : objs) {
                    if (t.size() >= x.size()) continue;
                    for (const auto& q : allSurjections(x, t)) {
                        auto rset = relationSetFromQuotient(q);
                        if (!relationSetCheck(rset).ok) {
                            d = "quotient set failed the check on " + x.key();
                            return false;
                        }
                        auto dich = equivalenceDichotomy(rset);
                        if (!dich.isQuotient ||
                            !(fiberProduct(dich.quotient, dich.quotient).sub ==
                              fiberProduct(q, q).sub)) {
                            d = "kernel pair mismatch on " + x.key();
                            return false;
                        }
                        ++quotChecked;
                    }
                }
            }
        }
        d = std::to_string(subChecked) + " subgroups, " + std::to_string(quotChecked) +
            " quotients";
        return true;
    });

    // 10. trace suite: dim = measure, cyclicity, nilpotent of nonzero trace
    timed(10, [](std::string& d) {
        auto triv = instTrivial();
        auto nu = trivialDegree();
        Measure alpha = deriveMeasure(triv, nu);
        for (int n = 1; n <= 4; ++n) {
            CObject b = makeCObject({makeAtom(plainSet(triv, n))});
            if (!(categoricalDim(b, alpha) == alpha.objectValue(plainSet(triv, n)) &&
                  permTrace(permIdentity(b, nu.ring), alpha) == categoricalDim(b, alpha))) {
                d = "dim mismatch at rank " + std::to_string(n);
                return false;
            }
        }
        CObject x = buildA1(plainSet(triv, 2)).obj;
        std::mt19937_64 rng(20260826);
        for (int s = 0; s < 100; ++s) {
            PermMatrix m = randomPermMatrix(x, rng, nu.ring);
            PermMatrix n2 = randomPermMatrix(x, rng, nu.ring);
            if (!(permTrace(permCompose(m, n2, alpha), alpha) ==
                  permTrace(permCompose(n2, m, alpha), alpha))) {
                d = "trace cyclicity failed at sample " + std::to_string(s);
                return false;
            }
        }
        // End(Vec of the 2-point atom union) is semisimple (its regular trace
        // form has full rank), so the search must exhaust there; the witness
        // lives one size up.
        if (findNilpotentNonzeroTrace(x, alpha).has_value() ||
            findNilpotentNonzeroTraceA1(plainSet(triv, 2), nu).has_value()) {
            d = "unexpected witness on the semisimple algebra";
            return false;
        }
        auto w = findNilpotentNonzeroTraceA1(plainSet(triv, 3), nu);
        if (!w || w->trace.isZero()) {
            d = "no nilpotent of nonzero trace found";
            return false;
        }
        std::ostringstream ss;
        ss << "witness on the 3-point atom union: M^" << w->power << " = 0, tr = "
           << w->trace.str() << " (2-point case exhausted: algebra semisimple)";
        d = ss.str();
        return true;
    });

    if (failures) std::cout << failures << " criterion(s) failed\n";
    return failures ? 1 : 0;
}
