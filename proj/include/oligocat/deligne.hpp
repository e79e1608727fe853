#pragma once

#include <numeric>

#include "oligocat/tensor.hpp"

namespace oligocat {

/// A partition-diagram morphism [bottom] → [top]: a set partition of the
/// disjoint union of top points followed by bottom points, stored as a
/// restricted-growth string.  Data-identical to the relation subobjects of
/// the partition instance, which is what makes the comparison below sharp.
struct PartitionDiagram {
    int top = 0, bottom = 0;
    std::vector<int> blocks;  // RGS of length top + bottom
};

inline PartitionDiagram diagramFromSub(int top, int bottom, const Sub& s) {
    return PartitionDiagram{top, bottom, s.data};
}

inline Sub subFromDiagram(const PartitionDiagram& d) { return Sub{d.blocks}; }

struct DiagramComposite {
    PartitionDiagram diagram;
    int middleOnlyBlocks = 0;  // components lost in the middle layer
};

namespace detail {

inline int dsuFind(std::vector<int>& p, int i) {
    while (p[i] != i) {
        p[i] = p[p[i]];
        i = p[i];
    }
    return i;
}

inline void dsuUnion(std::vector<int>& p, int a, int b) { p[dsuFind(p, a)] = dsuFind(p, b); }

}  // namespace detail

/// Stack b on top of a: glue along the shared middle layer, count the
/// connected components that touch neither the top nor the bottom boundary,
/// and read off the induced partition of top ⊔ bottom.
inline DiagramComposite delignePartitionCompose(const PartitionDiagram& b,
                                                const PartitionDiagram& a) {
    if (b.bottom != a.top) throw DomainError("delignePartitionCompose: middle layers differ");
    int nz = b.top, ny = b.bottom, nx = a.bottom;
    int n = nz + ny + nx;
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    // b lives on Z ⊔ Y (global 0..nz+ny), a on Y ⊔ X (global nz..n)
    for (int i = 0; i < nz + ny; ++i)
        for (int j = i + 1; j < nz + ny; ++j)
            if (b.blocks[i] == b.blocks[j]) detail::dsuUnion(p, i, j);
    for (int i = 0; i < ny + nx; ++i)
        for (int j = i + 1; j < ny + nx; ++j)
            if (a.blocks[i] == a.blocks[j]) detail::dsuUnion(p, nz + i, nz + j);

    std::vector<char> touchesBoundary(n, 0);
    for (int i = 0; i < nz; ++i) touchesBoundary[detail::dsuFind(p, i)] = 1;
    for (int i = nz + ny; i < n; ++i) touchesBoundary[detail::dsuFind(p, i)] = 1;
    DiagramComposite out;
    std::vector<char> seenMiddle(n, 0);
    for (int i = nz; i < nz + ny; ++i) {
        int r = detail::dsuFind(p, i);
        if (!touchesBoundary[r] && !seenMiddle[r]) {
            seenMiddle[r] = 1;
            ++out.middleOnlyBlocks;
        }
    }

    out.diagram.top = nz;
    out.diagram.bottom = nx;
    out.diagram.blocks.resize(nz + nx);
    for (int i = 0; i < nz; ++i) out.diagram.blocks[i] = detail::dsuFind(p, i);
    for (int i = 0; i < nx; ++i) out.diagram.blocks[nz + i] = detail::dsuFind(p, nz + ny + i);
    canonicalizePartition(out.diagram.blocks);
    return out;
}

struct DeligneCompareReport {
    bool pass = true;
    long long checked = 0;
    std::vector<std::string> failures;
    std::vector<std::string> notes;

    void fail(std::string s) {
        pass = false;
        if (failures.size() < 50) failures.push_back(std::move(s));
    }
};

/// Exhaustively compare the diagram calculus against the relation algebra of
/// the partition instance with the t-power degree: for every triple of layer
/// sizes up to maxLayer and every pair of diagrams, composition in the
/// relation algebra must yield exactly the stacked diagram with coefficient
/// t^(middle-only blocks).
inline DeligneCompareReport deligneCompareAll(int maxLayer) {
    DeligneCompareReport rep;
    auto inst = RCInstance::opFinSet();
    DegreeFunction nu = nuT();
    RingElem t = RingElem::t();
    for (int nz = 1; nz <= maxLayer; ++nz)
        for (int ny = 1; ny <= maxLayer; ++ny)
            for (int nx = 1; nx <= maxLayer; ++nx) {
                RCObject z = makeSetObject(inst, nz);
                RCObject y = makeSetObject(inst, ny);
                RCObject x = makeSetObject(inst, nx);
                auto bParts = detail::allPartitions(nz + ny);
                auto aParts = detail::allPartitions(ny + nx);
                for (const auto& bp : bParts)
                    for (const auto& ap : aParts) {
                        PartitionDiagram bd{nz, ny, bp}, ad{ny, nx, ap};
                        DiagramComposite dc = delignePartitionCompose(bd, ad);
                        KnopMor comp = knopCompose(knopBasis(y, z, Sub{bp}, nu.ring),
                                                   knopBasis(x, y, Sub{ap}, nu.ring), nu);
                        ++rep.checked;
                        std::string at = "(" + std::to_string(nz) + "," + std::to_string(ny) +
                                         "," + std::to_string(nx) + ") b=" + Sub{bp}.key() +
                                         " a=" + Sub{ap}.key();
                        if (comp.terms.size() != 1) {
                            rep.fail("term count " + std::to_string(comp.terms.size()) + " at " +
                                     at);
                            continue;
                        }
                        const auto& [sub, coeff] = *comp.terms.begin();
                        if (!(sub == subFromDiagram(dc.diagram)))
                            rep.fail("composite diagram mismatch at " + at);
                        if (!(coeff == t.pow(dc.middleOnlyBlocks)))
                            rep.fail("coefficient " + coeff.str() + " != t^" +
                                     std::to_string(dc.middleOnlyBlocks) + " at " + at);
                        if (!rep.failures.empty() && rep.failures.size() >= 50) return rep;
                    }
            }
    rep.notes.push_back("layer sizes up to " + std::to_string(maxLayer));
    return rep;
}

}  // namespace oligocat
