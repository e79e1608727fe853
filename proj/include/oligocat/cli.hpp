#pragma once

#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "oligocat/deligne.hpp"
#include "oligocat/tensor.hpp"

namespace oligocat {
namespace cli {

using Json = nlohmann::ordered_json;

struct Scenario {
    RCInstancePtr inst;
    RingKind ring = RingKind::Rational;
    DegreeFunction nu;
    int maxPoints = 3;
    int maxElements = 3;
};

inline RingKind parseRing(const std::string& s) {
    if (s == "rational") return RingKind::Rational;
    if (s == "poly-t") return RingKind::PolyT;
    if (s == "gf2") return RingKind::GF2;
    throw DomainError("unknown ring: " + s);
}

inline Scenario loadScenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open scenario: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw DomainError(std::string("malformed scenario: ") + e.what());
    }
    Scenario sc;
    std::string kind = j.value("kind", "fin-gset");
    if (kind == "fin-gset") {
        std::shared_ptr<PermGroup> g;
        auto gj = j.value("group", nlohmann::json("trivial"));
        if (gj.is_string()) {
            std::string name = gj.get<std::string>();
            if (name == "trivial")
                g = std::make_shared<PermGroup>(PermGroup::trivial());
            else if (name == "z2")
                g = std::make_shared<PermGroup>(PermGroup::fromCycleGenerators(2, {{{0, 1}}}));
            else if (name == "s3")
                g = std::make_shared<PermGroup>(
                    PermGroup::fromCycleGenerators(3, {{{0, 1}}, {{0, 1, 2}}}));
            else
                throw DomainError("unknown group name: " + name);
        } else {
            int deg = gj.at("degree").get<int>();
            std::vector<std::vector<std::vector<int>>> gens;
            for (const auto& gen : gj.at("generators"))
                gens.push_back(gen.get<std::vector<std::vector<int>>>());
            g = std::make_shared<PermGroup>(PermGroup::fromCycleGenerators(deg, gens));
        }
        sc.inst = RCInstance::finGSet(g);
    } else if (kind == "op-finset") {
        sc.inst = RCInstance::opFinSet();
    } else {
        throw DomainError("unknown category kind: " + kind);
    }
    sc.ring = parseRing(j.value("ring", "rational"));
    std::string deg = j.value("degree", sc.ring == RingKind::PolyT ? "nu-t" : "trivial");
    if (deg == "trivial")
        sc.nu = trivialDegree(sc.ring);
    else if (deg == "nu-t")
        sc.nu = nuT();
    else
        throw DomainError("unknown degree: " + deg);
    sc.maxPoints = j.value("max-points", 3);
    sc.maxElements = j.value("max-elements", 3);
    if (sc.maxPoints <= 0 || sc.maxElements <= 0) throw DomainError("bounds must be positive");
    return sc;
}

/// Object specs: "[n]" is the n-point trivial-action set (exact instance) or
/// the n-element set (partition instance); exact-instance specs may join
/// "[n]" and "reg" (regular orbit) terms with '+'.
inline RCObject parseObject(const RCInstancePtr& inst, const std::string& spec) {
    if (spec.empty()) throw DomainError("empty object spec");
    if (inst->kind == CatKind::OpFinSet) {
        if (spec.front() != '[' || spec.back() != ']')
            throw DomainError("bad object spec: " + spec);
        int n = std::stoi(spec.substr(1, spec.size() - 2));
        if (n <= 0) throw DomainError("object must be non-empty");
        return makeSetObject(inst, n);
    }
    std::optional<GSet> acc;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, '+')) {
        GSet part = [&] {
            if (tok == "reg") return GSet::regularAction(inst->group);
            if (tok.size() >= 3 && tok.front() == '[' && tok.back() == ']') {
                int n = std::stoi(tok.substr(1, tok.size() - 2));
                if (n <= 0) throw DomainError("object must be non-empty");
                return GSet::trivialAction(inst->group, n);
            }
            throw DomainError("bad object term: " + tok);
        }();
        acc = acc ? disjointUnion(*acc, part) : part;
    }
    if (!acc) throw DomainError("bad object spec: " + spec);
    return makeObjectA(inst, *acc);
}

inline Sub parseSub(const RCObject& pObj, const std::string& digits) {
    Sub s;
    for (char c : digits) {
        if (c < '0' || c > '9') throw DomainError("bad relation digits: " + digits);
        s.data.push_back(c - '0');
    }
    if (!isValidSub(pObj, s)) throw DomainError("invalid relation for this object");
    return s;
}

struct Options {
    std::string object, object2, relA, relB;
    std::optional<int> maxPoints, maxElements;
    std::optional<std::string> ring;
    uint64_t seed = 1;
    bool text = false;
};

inline void emit(const Json& report, const Options& opt, std::ostream& os) {
    if (!opt.text) {
        os << report.dump(2) << "\n";
        return;
    }
    std::function<void(const Json&, const std::string&)> walk = [&](const Json& j,
                                                                    const std::string& prefix) {
        if (j.is_object()) {
            for (auto it = j.begin(); it != j.end(); ++it)
                walk(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
        } else if (j.is_array()) {
            int i = 0;
            for (const auto& v : j) walk(v, prefix + "[" + std::to_string(i++) + "]");
        } else {
            os << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
        }
    };
    walk(report, "");
}

inline Json checkReportJson(const CheckReport& rep) {
    Json j;
    j["pass"] = rep.pass;
    j["checked"] = rep.checked;
    j["skipped"] = rep.skipped;
    Json fails = Json::array();
    for (const auto& f : rep.failures) {
        Json row;
        row["what"] = f.what;
        row["detail"] = f.detail;
        fails.push_back(std::move(row));
    }
    j["failures"] = fails;
    j["notes"] = rep.notes;
    return j;
}

inline int finish(Json& report, bool pass, const Options& opt, std::ostream& os) {
    report["pass"] = pass;
    emit(report, opt, os);
    return pass ? 0 : 1;
}

inline int runCommandImpl(const std::string& cmd, const Scenario& sc, const Options& opt,
                          std::ostream& os) {
    bool isA = sc.inst->kind == CatKind::FinGSet;
    int boundA = opt.maxPoints.value_or(sc.maxPoints);
    int boundB = opt.maxElements.value_or(sc.maxElements);
    int bound = isA ? boundA : boundB;
    DegreeFunction nu = sc.nu;
    if (opt.ring) {
        RingKind k = parseRing(*opt.ring);
        nu = k == RingKind::PolyT ? nuT() : trivialDegree(k);
    }
    Json report;
    report["command"] = cmd;
    report["category"] = isA ? "fin-gset" : "op-finset";
    report["ring"] = ringName(nu.ring);

    if (cmd == "subobjects") {
        RCObject x = parseObject(sc.inst, opt.object);
        auto subs = subobjects(x);
        report["object"] = x.key();
        Json list = Json::array();
        for (const auto& s : subs) list.push_back(s.key());
        report["count"] = subs.size();
        report["subobjects"] = list;
        return finish(report, true, opt, os);
    }
    if (cmd == "mobius") {
        RCObject x = parseObject(sc.inst, opt.object);
        SubLattice L = subLattice(x);
        report["object"] = x.key();
        Json table = Json::array();
        for (int i = 0; i < static_cast<int>(L.elems.size()); ++i)
            for (int j = 0; j < static_cast<int>(L.elems.size()); ++j) {
                if (!L.poset.leq(i, j)) continue;
                Json row;
                row["from"] = L.elems[i].key();
                row["to"] = L.elems[j].key();
                row["value"] = L.poset.moebius(i, j).str();
                table.push_back(std::move(row));
            }
        report["table"] = table;
        if (L.bottomIdx >= 0 && L.topIdx >= 0)
            report["bottom-to-top"] = L.poset.moebius(L.bottomIdx, L.topIdx).str();
        return finish(report, true, opt, os);
    }
    if (cmd == "check-degree") {
        auto rep = checkDegreeAxioms(sc.inst, nu, bound);
        report["degree"] = nu.name;
        report["report"] = checkReportJson(rep);
        return finish(report, rep.pass, opt, os);
    }
    if (cmd == "derive-measure") {
        Measure mu = deriveMeasure(sc.inst, nu);
        report["degree"] = nu.name;
        Json vals = Json::array();
        for (const auto& x : principalObjects(sc.inst, bound)) {
            Json row;
            row["object"] = x.key();
            row["value"] = mu.objectValue(x).str();
            vals.push_back(std::move(row));
        }
        report["values"] = vals;
        if (isA && nu.ring == RingKind::Rational) {
            auto base = mu.certifyRegularPower(std::min(bound, 3));
            report["power-base"] = base ? base->str() : "none";
        }
        return finish(report, true, opt, os);
    }
    if (cmd == "check-measure") {
        Measure mu = deriveMeasure(sc.inst, nu);
        auto rep = checkMeasureAxioms(sc.inst, mu, bound);
        report["measure"] = mu.name();
        report["report"] = checkReportJson(rep);
        return finish(report, rep.pass, opt, os);
    }
    if (cmd == "oddness") {
        if (!isA) throw DomainError("oddness is defined for the exact instance");
        auto r = isOddCategory(sc.inst, bound);
        report["odd"] = r.odd;
        report["pairs-checked"] = r.pairsChecked;
        if (!r.odd) report["witness"] = r.witness;
        return finish(report, r.odd, opt, os);
    }
    if (cmd == "regular-solve") {
        if (!isA) throw DomainError("regular-solve is defined for the exact instance");
        auto r = regularConstraintSolve(sc.inst, bound);
        Json roots = Json::array();
        for (const auto& root : r.roots) {
            std::ostringstream ss;
            ss << root;
            roots.push_back(ss.str());
        }
        report["roots"] = roots;
        report["constraints"] = r.constraints.size();
        report["skipped"] = r.skipped;
        return finish(report, true, opt, os);
    }
    if (cmd == "atom-product") {
        RCObject x = parseObject(sc.inst, opt.object);
        RCObject y = parseObject(sc.inst, opt.object2.empty() ? opt.object : opt.object2);
        auto r = atomProduct(makeAtom(x), makeAtom(y));
        report["left"] = x.key();
        report["right"] = y.key();
        report["atom-count"] = r.obj.atoms.size();
        Json atoms = Json::array();
        for (size_t i = 0; i < r.obj.atoms.size(); ++i) {
            Json row;
            row["label"] = r.obj.atoms[i].label.key();
            row["ample"] = r.amples[i].key();
            atoms.push_back(std::move(row));
        }
        report["atoms"] = atoms;
        return finish(report, true, opt, os);
    }
    if (cmd == "dichotomy") {
        if (!isA) throw DomainError("dichotomy is defined for the exact instance");
        RCObject x = parseObject(sc.inst, opt.object);
        auto aut = autGSet(*x.gset);
        auto rset = relationSetFromAutomorphisms(x, aut.elements());
        auto chk = relationSetCheck(rset);
        report["object"] = x.key();
        report["relation-count"] = rset.members.size();
        report["set-valid"] = chk.ok;
        auto d = equivalenceDichotomy(rset);
        if (d.isQuotient) {
            report["kind"] = "quotient";
            report["quotient-target"] = d.quotient.target.key();
        } else {
            report["kind"] = "subgroup";
            report["group-order"] = d.gamma->order();
        }
        return finish(report, chk.ok, opt, os);
    }
    if (cmd == "knop-compose") {
        RCObject x = parseObject(sc.inst, opt.object);
        Product P = product(x, x);
        Sub b = opt.relB.empty() ? topSub(P.obj) : parseSub(P.obj, opt.relB);
        Sub a = opt.relA.empty() ? topSub(P.obj) : parseSub(P.obj, opt.relA);
        KnopMor comp =
            knopCompose(knopBasis(x, x, b, nu.ring), knopBasis(x, x, a, nu.ring), nu);
        report["object"] = x.key();
        report["rel-b"] = b.key();
        report["rel-a"] = a.key();
        Json terms = Json::array();
        for (const auto& [s, c] : comp.terms) {
            Json row;
            row["relation"] = s.key();
            row["coeff"] = c.str();
            terms.push_back(std::move(row));
        }
        report["terms"] = terms;
        return finish(report, true, opt, os);
    }
    if (cmd == "perm-compose") {
        RCObject x = parseObject(sc.inst, opt.object);
        Measure mu = deriveMeasure(sc.inst, nu);
        CObject v = buildA1(x).obj;
        std::mt19937_64 rng(opt.seed);
        PermMatrix m = randomPermMatrix(v, rng, nu.ring);
        PermMatrix n = randomPermMatrix(v, rng, nu.ring);
        PermMatrix mn = permCompose(m, n, mu), nm = permCompose(n, m, mu);
        RingElem tr1 = permTrace(mn, mu), tr2 = permTrace(nm, mu);
        report["object"] = x.key();
        report["atoms"] = v.atoms.size();
        report["dim"] = categoricalDim(v, mu).str();
        report["product-entries"] = mn.entries.size();
        report["trace-mn"] = tr1.str();
        report["trace-nm"] = tr2.str();
        bool cyc = tr1 == tr2;
        report["trace-cyclic"] = cyc;
        return finish(report, cyc, opt, os);
    }
    if (cmd == "phi-verify") {
        auto rep = verifyPhi(sc.inst, nu, bound);
        Json j;
        j["hom-spaces"] = rep.homSpaces;
        j["pairs-certified"] = rep.pairsCertified;
        j["pairs-direct"] = rep.pairsDirect;
        j["pairs-matrix"] = rep.pairsMatrix;
        j["skipped"] = rep.skipped;
        j["failures"] = rep.failures;
        j["notes"] = rep.notes;
        report["report"] = j;
        return finish(report, rep.pass, opt, os);
    }
    if (cmd == "deligne-compare") {
        if (isA) throw DomainError("deligne-compare runs on the partition instance");
        auto rep = deligneCompareAll(std::min(bound, 3));
        report["checked"] = rep.checked;
        report["failures"] = rep.failures;
        report["notes"] = rep.notes;
        return finish(report, rep.pass, opt, os);
    }
    if (cmd == "nilpotent-search") {
        RCObject x = parseObject(sc.inst, opt.object);
        if (nu.ring != RingKind::Rational)
            throw DomainError("nilpotent-search runs over the rationals");
        auto w = findNilpotentNonzeroTraceA1(x, nu);
        report["object"] = x.key();
        report["found"] = w.has_value();
        if (w) {
            report["power"] = w->power;
            report["trace"] = w->trace.str();
            report["entries"] = w->mat.entries.size();
            report["matrix-confirmed"] = w->matrixConfirmed;
        } else {
            report["note"] = "search exhausted: no nilpotent of nonzero trace";
        }
        return finish(report, true, opt, os);
    }
    if (cmd == "report-all") {
        Json checks = Json::array();
        bool all = true;
        auto add = [&](const std::string& name, bool pass, Json detail = Json::object()) {
            Json row;
            row["check"] = name;
            row["pass"] = pass;
            if (!detail.empty()) row["detail"] = detail;
            checks.push_back(std::move(row));
            all = all && pass;
        };
        Measure mu = deriveMeasure(sc.inst, nu);
        {
            auto rep = checkDegreeAxioms(sc.inst, nu, std::min(bound, 3));
            add("degree-axioms", rep.pass, checkReportJson(rep));
        }
        {
            auto rep = checkMeasureAxioms(sc.inst, mu, std::min(bound, 3));
            add("measure-axioms", rep.pass, checkReportJson(rep));
        }
        {
            DegreeFunction back = recoverDegree(mu);
            bool ok = true;
            auto objs = principalObjects(sc.inst, std::min(bound, 3));
            for (const auto& x : objs)
                for (const auto& y : objs)
                    for (const auto& f : allSurjections(y, x))
                        if (!(back(f) == nu(f))) ok = false;
            add("degree-round-trip", ok);
        }
        if (isA) {
            auto odd = isOddCategory(sc.inst, std::min(bound, 3));
            Json d;
            d["odd"] = odd.odd;
            if (!odd.odd) d["witness"] = odd.witness;
            add("oddness", true, d);  // informational: oddness itself is not a failure
            if (nu.ring == RingKind::Rational) {
                auto r = regularConstraintSolve(sc.inst, 2);
                bool ok = satisfiesConstraints(r, BigRat(-1));
                add("alpha-satisfies-constraints", ok);
            }
        }
        {
            auto rep = verifyPhi(sc.inst, nu, 2);
            Json d;
            d["pairs-certified"] = rep.pairsCertified;
            d["pairs-direct"] = rep.pairsDirect;
            d["failures"] = rep.failures;
            add("phi-functor", rep.pass, d);
        }
        if (!isA) {
            auto rep = deligneCompareAll(2);
            Json d;
            d["checked"] = rep.checked;
            add("deligne-recovery", rep.pass, d);
        }
        report["checks"] = checks;
        return finish(report, all, opt, os);
    }
    throw DomainError("unknown command: " + cmd);
}

/// Entry point shared by the binary and the tests.
/// args: command, scenario path, then flags.
inline int runCommand(const std::vector<std::string>& args, std::ostream& os, std::ostream& es) {
    if (args.size() < 2) {
        es << "usage: oligocat <command> <scenario.json> [--object SPEC] [--object2 SPEC]\n"
           << "  [--rel-a DIGITS] [--rel-b DIGITS] [--max-points N] [--max-elements N]\n"
           << "  [--ring rational|poly-t|gf2] [--seed N] [--json|--text]\n";
        return 2;
    }
    Options opt;
    std::string cmd = args[0], path = args[1];
    try {
        for (size_t i = 2; i < args.size(); ++i) {
            const std::string& a = args[i];
            auto next = [&]() -> const std::string& {
                if (++i >= args.size()) throw DomainError("missing value for " + a);
                return args[i];
            };
            if (a == "--object")
                opt.object = next();
            else if (a == "--object2")
                opt.object2 = next();
            else if (a == "--rel-a")
                opt.relA = next();
            else if (a == "--rel-b")
                opt.relB = next();
            else if (a == "--max-points")
                opt.maxPoints = std::stoi(next());
            else if (a == "--max-elements")
                opt.maxElements = std::stoi(next());
            else if (a == "--ring")
                opt.ring = next();
            else if (a == "--seed")
                opt.seed = std::stoull(next());
            else if (a == "--json")
                opt.text = false;
            else if (a == "--text")
                opt.text = true;
            else
                throw DomainError("unknown flag: " + a);
        }
        Scenario sc = loadScenario(path);
        return runCommandImpl(cmd, sc, opt, os);
    } catch (const SizeLimitError& e) {
        es << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        es << "error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        es << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        es << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace cli
}  // namespace oligocat
