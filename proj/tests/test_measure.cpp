#include <catch_amalgamated.hpp>

#include "oligocat/measure.hpp"

using namespace oligocat;

namespace {

RCInstancePtr instTrivial() {
    return RCInstance::finGSet(std::make_shared<PermGroup>(PermGroup::trivial()));
}
RCInstancePtr instZ2() {
    return RCInstance::finGSet(
        std::make_shared<PermGroup>(PermGroup::fromCycleGenerators(2, {{{0, 1}}})));
}
RCInstancePtr instB() { return RCInstance::opFinSet(); }

RCObject plainSet(const RCInstancePtr& inst, int n) {
    return makeObjectA(inst, GSet::trivialAction(inst->group, n));
}

RCMor foldMap(const RCObject& y, const RCObject& x) {
    // RC-A only: everything to point 0
    RCMor f;
    f.source = y;
    f.target = x;
    f.map.assign(y.size(), 0);
    return f;
}

RingElem Q(long long n) { return RingElem::fromInt(RingKind::Rational, n); }

}  // namespace

TEST_CASE("closed-form Möbius weights match the poset recursion") {
    auto check = [](const RCObject& x) {
        SubLattice L = subLattice(x);
        for (int i = 0; i < static_cast<int>(L.elems.size()); ++i) {
            if (!L.poset.leq(i, L.topIdx)) continue;
            CHECK(subMoebiusToTop(x, L.elems[i]) == L.poset.moebius(i, L.topIdx));
        }
    };
    check(plainSet(instTrivial(), 3));
    auto z2 = instZ2();
    check(makeObjectA(z2, disjointUnion(GSet::regularAction(z2->group),
                                        GSet::trivialAction(z2->group, 2))));
    check(makeSetObject(instB(), 4));
}

TEST_CASE("derived measure from the trivial degree") {
    auto inst = instTrivial();
    Measure mu = deriveMeasure(inst, trivialDegree());

    SECTION("fold of a 2-point set") {
        CHECK(mu.value(foldMap(plainSet(inst, 2), plainSet(inst, 1))) == Q(-1));
    }
    SECTION("object values alternate in sign") {
        for (int n = 1; n <= 4; ++n)
            CHECK(mu.objectValue(plainSet(inst, n)) == Q(n % 2 == 1 ? 1 : -1));
    }
    SECTION("matches the power form with base -1") {
        Measure alpha = alphaMeasure(inst);
        for (int n = 1; n <= 4; ++n)
            CHECK(mu.objectValue(plainSet(inst, n)) == alpha.objectValue(plainSet(inst, n)));
        auto base = mu.certifyRegularPower(3);
        REQUIRE(base.has_value());
        CHECK(*base == Q(-1));
    }
    SECTION("on the two-element group instance") {
        auto z2 = instZ2();
        Measure mu2 = deriveMeasure(z2, trivialDegree());
        RCObject mixed = makeObjectA(
            z2, disjointUnion(GSet::regularAction(z2->group), GSet::trivialAction(z2->group, 1)));
        CHECK(mu2.objectValue(mixed) == Q(-1));  // rank 2
        RCObject reg = makeObjectA(z2, GSet::regularAction(z2->group));
        CHECK(mu2.objectValue(reg) == Q(1));  // rank 1
    }
}

TEST_CASE("fiber-product decomposition of the free orbit squared") {
    // G = Z/2: G x_1 G has the diagonal, the antidiagonal and the full
    // subobject as its amples; values 1 + 1 + (-1) = 1.
    auto z2 = instZ2();
    Measure mu = deriveMeasure(z2, trivialDegree());
    RCObject reg = makeObjectA(z2, GSet::regularAction(z2->group));
    RCMor f = foldMap(reg, plainSet(z2, 1));
    Decomposition d = measureDecomposition(mu, f, f);
    REQUIRE(d.terms.size() == 3);
    CHECK(d.lhs == Q(1));
    CHECK(d.sum == Q(1));
    std::multiset<int> ranks(d.ranks.begin(), d.ranks.end());
    CHECK(ranks == std::multiset<int>{1, 1, 2});
    CHECK(d.matches);
}

TEST_CASE("degree axiom checks") {
    SECTION("trivial degree on RC-A") {
        auto rep = checkDegreeAxioms(instTrivial(), trivialDegree(), 3);
        CHECK(rep.pass);
        CHECK(rep.skipped == 0);
        CHECK(rep.checked > 0);
    }
    SECTION("t-power degree on RC-B") {
        auto rep = checkDegreeAxioms(instB(), nuT(), 3);
        CHECK(rep.pass);
        CHECK(rep.skipped == 0);
    }
    SECTION("constant 2 fails") {
        DegreeFunction bad{RingKind::Rational, "two", [](const RCMor&) { return Q(2); }};
        auto rep = checkDegreeAxioms(instTrivial(), bad, 3);
        CHECK(!rep.pass);
        REQUIRE(!rep.failures.empty());
    }
}

TEST_CASE("t-power degree and its derived measure on RC-B") {
    auto inst = instB();
    Measure mu = deriveMeasure(inst, nuT());
    RCObject two = makeSetObject(inst, 2), one = makeSetObject(inst, 1);
    RCMor fold;  // the RC-B surjection [2] -> [1] picking element 0
    fold.source = two;
    fold.target = one;
    fold.map = {0};

    SECTION("frozen value of the basic surjection") {
        RingElem expect = RingElem::t() - RingElem::one(RingKind::PolyT);
        CHECK(mu.value(fold) == expect);
        CHECK(mu.value(fold).str() == "-1 + t");
    }
    SECTION("round trip recovers the degree exactly") {
        DegreeFunction back = recoverDegree(mu);
        auto nu = nuT();
        auto objs = principalObjects(inst, 3);
        for (const auto& x : objs)
            for (const auto& y : objs)
                for (const auto& f : allSurjections(y, x)) CHECK(back(f) == nu(f));
    }
    SECTION("measure axioms hold") {
        auto rep = checkMeasureAxioms(inst, mu, 3);
        CHECK(rep.pass);
        CHECK(rep.skipped == 0);
    }
}

TEST_CASE("round trip on RC-A with the trivial degree") {
    auto inst = instTrivial();
    Measure mu = deriveMeasure(inst, trivialDegree());
    DegreeFunction back = recoverDegree(mu);
    auto objs = principalObjects(inst, 4);
    for (const auto& x : objs)
        for (const auto& y : objs)
            for (const auto& f : allSurjections(y, x)) CHECK(back(f) == Q(1));
}

TEST_CASE("measure axiom checks on RC-A") {
    auto inst = instTrivial();
    SECTION("alpha passes") {
        auto rep = checkMeasureAxioms(inst, alphaMeasure(inst), 3);
        CHECK(rep.pass);
        CHECK(rep.skipped == 0);
    }
    SECTION("beta passes") {
        auto rep = checkMeasureAxioms(inst, betaMeasure(inst, 3), 3);
        CHECK(rep.pass);
    }
    SECTION("a constant-2 assignment fails with a witness") {
        Measure bad = Measure::custom(inst, RingKind::Rational, "bad", [](const RCMor& f) {
            return isIsoMor(f) ? RingElem::one(RingKind::Rational) : Q(2);
        });
        auto rep = checkMeasureAxioms(inst, bad, 3);
        CHECK(!rep.pass);
        REQUIRE(!rep.failures.empty());
    }
}

TEST_CASE("mu on general maps and the degree-origin criterion") {
    auto inst = instTrivial();
    RCObject three = plainSet(inst, 3), one = plainSet(inst, 1);

    SECTION("the seven-atom sum collapses to 1 under beta") {
        Measure beta = betaMeasure(inst, 3);
        CMor m = a1Map(foldMap(three, one));
        REQUIRE(m.source.atoms.size() == 7);
        auto vals = muOfGeneralMap(beta, m);
        REQUIRE(vals.size() == 1);
        CHECK(vals[0] == Q(1));  // 3*1 + 3*(-2) + 1*4
    }
    SECTION("alpha arises from the trivial degree") {
        OriginResult r = degreeOriginTest(alphaMeasure(inst), 3);
        REQUIRE(r.arises);
        REQUIRE(r.nu.has_value());
        CHECK((*r.nu)(foldMap(three, one)) == Q(1));
    }
    SECTION("beta does not arise from a degree") {
        OriginResult r = degreeOriginTest(betaMeasure(inst, 3), 3);
        CHECK(!r.arises);
        CHECK(!r.witness.empty());
    }
}

TEST_CASE("oddness and the measures gated by it") {
    auto triv = instTrivial();
    auto z2 = instZ2();

    SECTION("the plain-sets instance is odd") {
        auto r = isOddCategory(triv, 4);
        CHECK(r.odd);
        CHECK(r.pairsChecked > 0);
    }
    SECTION("the two-element group instance is not") {
        auto r = isOddCategory(z2, 2);
        CHECK(!r.odd);
        CHECK(r.witness.find("2 atoms") != std::string::npos);
    }
    SECTION("beta refuses the even instance") {
        CHECK_THROWS_AS(betaMeasure(z2, 2), PreconditionError);
    }
    SECTION("the all-ones GF(2) measure exists exactly on the odd instance") {
        auto m = f2RegularMeasure(triv, 3);
        REQUIRE(m.has_value());
        auto rep = checkMeasureAxioms(triv, *m, 3);
        CHECK(rep.pass);
        CHECK(!f2RegularMeasure(z2, 2).has_value());
    }
}

TEST_CASE("power-form constraint solving") {
    auto inst = instTrivial();
    RegularSolveResult r = regularConstraintSolve(inst, 2);
    REQUIRE(!r.constraints.empty());
    REQUIRE(r.roots.size() == 2);
    CHECK(r.roots[0] == BigRat(-2));
    CHECK(r.roots[1] == BigRat(-1));
    CHECK(satisfiesConstraints(r, BigRat(-1)));
    CHECK(satisfiesConstraints(r, BigRat(-2)));
    CHECK(!satisfiesConstraints(r, BigRat(3)));

    // the square of the 2-point fold contributes s^2 = 2s + 4s^2 + s^3
    bool found = false;
    for (const auto& p : r.constraints)
        if (p == IntPoly{0, -2, -3, -1}) found = true;
    CHECK(found);
}
