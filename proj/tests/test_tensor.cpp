#include <catch_amalgamated.hpp>

#include "oligocat/deligne.hpp"
#include "oligocat/tensor.hpp"

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
    RCMor f;
    f.source = y;
    f.target = x;
    f.map.assign(y.size(), 0);
    return f;
}

RingElem Q(long long n) { return RingElem::fromInt(RingKind::Rational, n); }

}  // namespace

TEST_CASE("relation-basis algebra identities") {
    auto triv = instTrivial();
    auto nu = trivialDegree();
    RCObject two = plainSet(triv, 2);

    SECTION("the diagonal is a two-sided identity") {
        KnopMor id2 = knopIdentity(two, nu.ring);
        for (const auto& a : ampleSubobjects(product(two, two))) {
            KnopMor m = knopBasis(two, two, a, nu.ring);
            CHECK(knopCompose(id2, m, nu) == m);
            CHECK(knopCompose(m, id2, nu) == m);
        }
    }
    SECTION("associativity over all relations on the 2-point set") {
        Product P = product(two, two);
        std::vector<Sub> rels;
        auto orbits = P.obj.gset->orbits();
        for (uint64_t m = 1; m < (uint64_t{1} << orbits.size()); ++m)
            rels.push_back(detail::subFromOrbitMask(P.obj, orbits, m));
        REQUIRE(rels.size() == 15);
        for (size_t i = 0; i < rels.size(); i += 4)
            for (size_t j = 0; j < rels.size(); j += 5)
                for (size_t k = 0; k < rels.size(); k += 3) {
                    KnopMor a = knopBasis(two, two, rels[i], nu.ring);
                    KnopMor b = knopBasis(two, two, rels[j], nu.ring);
                    KnopMor c = knopBasis(two, two, rels[k], nu.ring);
                    CHECK(knopCompose(knopCompose(a, b, nu), c, nu) ==
                          knopCompose(a, knopCompose(b, c, nu), nu));
                }
    }
    SECTION("non-principal relations are rejected") {
        Sub empty;
        empty.data.assign(4, 0);
        CHECK_THROWS_AS(knopBasis(two, two, empty, nu.ring), DomainError);
    }
}

TEST_CASE("tensor of relation morphisms") {
    auto triv = instTrivial();
    auto nu = trivialDegree();
    RCObject one = plainSet(triv, 1), two = plainSet(triv, 2);

    SECTION("identity tensor identity is the identity") {
        KnopMor t = knopTensor(knopIdentity(one, nu.ring), knopIdentity(one, nu.ring));
        REQUIRE(t.terms.size() == 1);
        CHECK(t.terms.begin()->first == diagonalSub(product(one, one).obj));
    }
    SECTION("full relation tensor identity stays full") {
        KnopMor full = knopBasis(two, two, topSub(product(two, two).obj), nu.ring);
        KnopMor t = knopTensor(full, knopIdentity(one, nu.ring));
        REQUIRE(t.terms.size() == 1);
        RCObject p = product(two, one).obj;
        CHECK(t.terms.begin()->first == topSub(product(p, p).obj));
    }
    SECTION("partition blocks stay disjoint across the factors") {
        auto bi = instB();
        auto nut = nuT();
        RCObject b2 = makeSetObject(bi, 2), b1 = makeSetObject(bi, 1);
        Sub merge;  // the one-block partition of u([2]) ⊔ u([1])
        merge.data = {0, 0, 0};
        KnopMor a = knopBasis(b1, b2, merge, nut.ring);
        KnopMor t = knopTensor(a, knopIdentity(b1, nut.ring));
        REQUIRE(t.terms.size() == 1);
        // blocks: {all of A's points} and {the two identity points}
        CHECK(blockCount(t.terms.begin()->first) == 2);
    }
}

TEST_CASE("pushforward of orbit functions") {
    auto triv = instTrivial();
    Measure alpha = deriveMeasure(triv, trivialDegree());

    SECTION("the union-of-atoms indicator pushes to the degree") {
        // f_*(1_{A1(A)}) = nu(A -> B) . 1_{A1(B)}, trivial degree: coefficient 1
        for (int n = 2; n <= 3; ++n) {
            CMor m = a1Map(foldMap(plainSet(triv, n), plainSet(triv, 1)));
            OrbitFunction ones(m.source.atoms.size(), Q(1));
            auto out = pushforward(m, ones, alpha);
            REQUIRE(out.size() == 1);
            CHECK(out[0] == Q(1));
        }
    }
    SECTION("single-atom map gives the map's measure") {
        RCObject two = plainSet(triv, 2), one = plainSet(triv, 1);
        CMor m;
        m.source = makeCObject({makeAtom(two)});
        m.target = makeCObject({makeAtom(one)});
        m.legs = {{0, foldMap(two, one)}};
        auto out = pushforward(m, {Q(1)}, alpha);
        CHECK(out[0] == Q(-1));
    }
    SECTION("on partitions the coefficient is the t-degree") {
        auto bi = instB();
        Measure mu = deriveMeasure(bi, nuT());
        RCObject b2 = makeSetObject(bi, 2), b1 = makeSetObject(bi, 1);
        RCMor fold;
        fold.source = b2;
        fold.target = b1;
        fold.map = {0};
        CMor m = a1Map(fold);
        OrbitFunction ones(m.source.atoms.size(), RingElem::one(RingKind::PolyT));
        auto out = pushforward(m, ones, mu);
        REQUIRE(out.size() == 1);
        CHECK(out[0] == RingElem::t());  // nu_t([2] -> [1]) = t
    }
}

TEST_CASE("partition measure has falling-factorial values") {
    auto bi = instB();
    Measure mu = deriveMeasure(bi, nuT());
    // mu([w] -> [c]) = (t - c)(t - c - 1)...(t - w + 1)
    for (int w = 1; w <= 4; ++w)
        for (int c = 1; c <= w; ++c) {
            RCMor f;
            f.source = makeSetObject(bi, w);
            f.target = makeSetObject(bi, c);
            f.map.resize(c);
            std::iota(f.map.begin(), f.map.end(), 0);
            RingElem expect = RingElem::one(RingKind::PolyT);
            for (int j = c; j < w; ++j)
                expect *= RingElem::t() - RingElem::fromInt(RingKind::PolyT, j);
            CHECK(mu.value(f) == expect);
        }
}

TEST_CASE("matrix category structure") {
    auto triv = instTrivial();
    auto nu = trivialDegree();
    Measure alpha = deriveMeasure(triv, nu);
    RCObject two = plainSet(triv, 2);
    CObject x = buildA1(two).obj;
    std::mt19937_64 rng(2026);

    SECTION("identity law") {
        PermMatrix id = permIdentity(x, nu.ring);
        for (int s = 0; s < 3; ++s) {
            PermMatrix m = randomPermMatrix(x, rng, nu.ring);
            CHECK(permCompose(id, m, alpha) == m);
            CHECK(permCompose(m, id, alpha) == m);
        }
    }
    SECTION("associativity") {
        for (int s = 0; s < 3; ++s) {
            PermMatrix a = randomPermMatrix(x, rng, nu.ring);
            PermMatrix b = randomPermMatrix(x, rng, nu.ring);
            PermMatrix c = randomPermMatrix(x, rng, nu.ring);
            CHECK(permCompose(permCompose(a, b, alpha), c, alpha) ==
                  permCompose(a, permCompose(b, c, alpha), alpha));
        }
    }
    SECTION("bilinearity") {
        PermMatrix a = randomPermMatrix(x, rng, nu.ring);
        PermMatrix b = randomPermMatrix(x, rng, nu.ring);
        PermMatrix c = randomPermMatrix(x, rng, nu.ring);
        CHECK(permCompose(permAdd(a, b), c, alpha) ==
              permAdd(permCompose(a, c, alpha), permCompose(b, c, alpha)));
        CHECK(permCompose(permScale(Q(3), a), c, alpha) ==
              permScale(Q(3), permCompose(a, c, alpha)));
    }
    SECTION("trace is cyclic") {
        for (int s = 0; s < 10; ++s) {
            PermMatrix m = randomPermMatrix(x, rng, nu.ring);
            PermMatrix n = randomPermMatrix(x, rng, nu.ring);
            CHECK(permTrace(permCompose(m, n, alpha), alpha) ==
                  permTrace(permCompose(n, m, alpha), alpha));
        }
    }
    SECTION("dimension equals the measure") {
        CHECK(categoricalDim(x, alpha) == Q(1));  // 1 + 1 + (-1)
        CHECK(categoricalDim(makeCObject({makeAtom(plainSet(triv, 1))}), alpha) == Q(1));
        CHECK(permTrace(permIdentity(x, nu.ring), alpha) == categoricalDim(x, alpha));
    }
}

TEST_CASE("tensor product of matrices") {
    auto triv = instTrivial();
    auto nu = trivialDegree();
    Measure alpha = deriveMeasure(triv, nu);
    CObject x = buildA1(plainSet(triv, 2)).obj;
    CObject y = makeCObject({makeAtom(plainSet(triv, 1))});
    std::mt19937_64 rng(5);

    SECTION("identity tensor identity is the tensor identity") {
        TensorDecomposition D = tensorAtoms(x, y);
        PermMatrix t = permTensor(permIdentity(x, nu.ring), permIdentity(y, nu.ring));
        PermMatrix id = permIdentity(D.obj, nu.ring);
        CHECK(t.entries == id.entries);
    }
    SECTION("dimension is multiplicative") {
        CObject xx = tensorAtoms(x, x).obj;
        CHECK(categoricalDim(xx, alpha) == categoricalDim(x, alpha) * categoricalDim(x, alpha));
    }
    SECTION("interchange law") {
        for (int s = 0; s < 3; ++s) {
            PermMatrix a = randomPermMatrix(x, rng, nu.ring);
            PermMatrix c = randomPermMatrix(x, rng, nu.ring);
            PermMatrix b = randomPermMatrix(y, rng, nu.ring);
            PermMatrix d = randomPermMatrix(y, rng, nu.ring);
            PermMatrix lhs = permCompose(permTensor(a, b), permTensor(c, d), alpha);
            PermMatrix rhs = permTensor(permCompose(a, c, alpha), permCompose(b, d, alpha));
            CHECK(lhs == rhs);
        }
    }
    SECTION("trace is multiplicative under tensor") {
        for (int s = 0; s < 3; ++s) {
            PermMatrix a = randomPermMatrix(x, rng, nu.ring);
            PermMatrix b = randomPermMatrix(y, rng, nu.ring);
            CHECK(permTrace(permTensor(a, b), alpha) ==
                  permTrace(a, alpha) * permTrace(b, alpha));
        }
    }
}

TEST_CASE("indicator change of basis") {
    auto triv = instTrivial();
    auto nu = trivialDegree();
    RCObject two = plainSet(triv, 2);
    PhiPair pp = makePhiPair(two, two);

    SECTION("the identity maps to the identity matrix") {
        PermMatrix m = phiMatrix(pp, knopIdentity(two, nu.ring));
        CHECK(m.entries == permIdentity(pp.a1X.obj, nu.ring).entries);
    }
    SECTION("the full relation maps to the all-ones matrix") {
        KnopMor full = knopBasis(two, two, topSub(pp.P.obj), nu.ring);
        PermMatrix m = phiMatrix(pp, full);
        CHECK(m.entries.size() == 15);
        for (const auto& [k, v] : m.entries) CHECK(v == Q(1));
    }
    SECTION("decomposition is injective over all 15 relations") {
        auto orbits = pp.P.obj.gset->orbits();
        std::set<std::tuple<int, int, Sub>> seen;
        for (uint64_t mask = 1; mask < 16; ++mask) {
            Sub c = detail::subFromOrbitMask(pp.P.obj, orbits, mask);
            DecomposedRelation d = decomposeRelation(pp.P, c, pp.a1Y, pp.a1X);
            CHECK(seen.insert(std::make_tuple(d.tgtAtom, d.srcAtom, d.local)).second);
        }
        CHECK(seen.size() == 15);
    }
    SECTION("containment strictly decreases the point count") {
        Sub full = topSub(pp.P.obj);
        auto below = relationsBelow(pp.P.obj, full);
        CHECK(below.size() == 15);
        for (const auto& c : below)
            if (!(c == full)) CHECK(relationSize(pp.P.obj, c) < relationSize(pp.P.obj, full));
    }
}

TEST_CASE("functor verification at small bounds") {
    SECTION("exact instance, trivial group") {
        auto rep = verifyPhi(instTrivial(), trivialDegree(), 2);
        CHECK(rep.pass);
        CHECK(rep.pairsCertified > 0);
        CHECK(rep.pairsDirect > 0);
        CHECK(rep.pairsMatrix > 0);
        for (const auto& f : rep.failures) FAIL_CHECK(f);
    }
    SECTION("exact instance, two-element group") {
        auto rep = verifyPhi(instZ2(), trivialDegree(), 2);
        CHECK(rep.pass);
        CHECK(rep.pairsCertified > 0);
        for (const auto& f : rep.failures) FAIL_CHECK(f);
    }
    SECTION("partition instance with the t-degree") {
        auto rep = verifyPhi(instB(), nuT(), 2);
        CHECK(rep.pass);
        CHECK(rep.pairsDirect > 0);
        CHECK(rep.skipped == 0);
        for (const auto& f : rep.failures) FAIL_CHECK(f);
    }
}

TEST_CASE("endomorphism algebra and nilpotents") {
    auto triv = instTrivial();
    auto nu = trivialDegree();
    Measure alpha = deriveMeasure(triv, nu);

    SECTION("End of Vec over the 2-point atom union is 15-dimensional") {
        CObject x = buildA1(plainSet(triv, 2)).obj;
        EndAlgebra A = buildEndAlgebra(x, alpha);
        CHECK(A.basis.size() == 15);
    }
    SECTION("one-dimensional algebra: no witness") {
        CObject pt = makeCObject({makeAtom(plainSet(triv, 1))});
        CHECK(buildEndAlgebra(pt, alpha).basis.size() == 1);
        CHECK(!findNilpotentNonzeroTrace(pt, alpha).has_value());
    }
    SECTION("the 15-dimensional algebra is semisimple: search exhausts") {
        CObject x = buildA1(plainSet(triv, 2)).obj;
        CHECK(!findNilpotentNonzeroTrace(x, alpha).has_value());
        CHECK(!findNilpotentNonzeroTraceA1(plainSet(triv, 2), nu).has_value());
    }
    SECTION("relation-algebra route agrees with the matrix route on small objects") {
        KnopEndAlgebra A = buildKnopEndAlgebra(plainSet(triv, 2), nu);
        CHECK(A.basis.size() == 15);
        CHECK(A.unitCoeffs);
        // sanity: the diagonal is a two-sided unit in the composition table
        int id = A.index.at(diagonalSub(plainSet(triv, 2)));
        for (int q = 0; q < 15; ++q) {
            CHECK(A.compIdx[id][q] == q);
            CHECK(A.compIdx[q][id] == q);
        }
    }
}

TEST_CASE("partition-diagram composition") {
    SECTION("identity diagram is neutral") {
        // the identity on [2]: blocks {top_i, bottom_i}
        PartitionDiagram id2{2, 2, {0, 1, 0, 1}};
        PartitionDiagram d{2, 2, {0, 0, 1, 1}};
        auto c1 = delignePartitionCompose(id2, d);
        CHECK(c1.middleOnlyBlocks == 0);
        CHECK(c1.diagram.blocks == d.blocks);
        auto c2 = delignePartitionCompose(d, id2);
        CHECK(c2.middleOnlyBlocks == 0);
        CHECK(c2.diagram.blocks == d.blocks);
    }
    SECTION("singletons produce one middle-only block") {
        PartitionDiagram b{1, 1, {0, 1}}, a{1, 1, {0, 1}};
        auto c = delignePartitionCompose(b, a);
        CHECK(c.middleOnlyBlocks == 1);
        CHECK(c.diagram.blocks == std::vector<int>{0, 1});
    }
    SECTION("exhaustive agreement with the relation algebra, layers up to 2") {
        auto rep = deligneCompareAll(2);
        CHECK(rep.pass);
        CHECK(rep.checked == 449);
        for (const auto& f : rep.failures) FAIL_CHECK(f);
    }
}
