#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "reltilt/bqa.hpp"
#include "reltilt/report.hpp"

using namespace rt;

namespace {

std::string readFixture(const std::string& name) {
  std::string path = std::string(RT_FIXTURES_DIR) + "/" + name;
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Workspace& ejem4() {
  static Workspace ws = buildWorkspace(parseAlgebraFile(readFixture("ejem4.bqa")));
  return ws;
}

Workspace& noFadm() {
  static Workspace ws = buildWorkspace(parseAlgebraFile(readFixture("noFadm.bqa")));
  return ws;
}

Workspace& a2() {
  static Workspace ws = buildWorkspace(parseAlgebraFile(readFixture("a2.bqa")));
  return ws;
}

Workspace& kronecker() {
  static Workspace ws = buildWorkspace(parseAlgebraFile(readFixture("kronecker.bqa")));
  return ws;
}

int entryOf(const Workspace& ws, const std::string& name) {
  for (int i = 0; i < ws.ctx.catalog().size(); ++i)
    if (ws.entryNames[i] == name) return i;
  FAIL("no catalog entry named ", name);
  return -1;
}

std::uint32_t maskOf(const Workspace& ws, const std::vector<std::string>& names) {
  std::uint32_t m = 0;
  for (const auto& n : names) m |= 1u << entryOf(ws, n);
  return m;
}

bool factorsThrough(const Map& h, const Map& through) {
  // Does h = r o through for some r?
  auto hb = homBasis(through.dst, h.dst);
  if (hb.empty()) return h.isZeroMap();
  std::vector<std::vector<Fel>> cols;
  for (const auto& b : hb) cols.push_back(flattenMap(compose(b, through)));
  Mat sys = Mat::fromCols(h.src.alg->field, static_cast<int>(cols[0].size()), cols);
  return solve(sys, flattenMap(h)).has_value();
}

}  // namespace

TEST_CASE("context construction and Gamma presentation") {
  auto& e4 = ejem4();
  CHECK(e4.ctx.n() == 4);
  CHECK(e4.ctx.gamma->dim() == 8);
  CHECK(e4.ctx.gamma->quiver.arrowCount() == 3);
  CHECK(e4.ctx.gamma->ideal.nilpotency == 3);

  auto& nf = noFadm();
  CHECK(nf.ctx.n() == 3);
  CHECK(nf.ctx.gamma->dim() == 8);
  CHECK(nf.ctx.gamma->quiver.arrowCount() == 3);

  // X = Lambda recovers a presentation of the algebra itself.
  auto& cl = a2();
  CHECK(cl.ctx.gamma->dim() == cl.pf.alg->dim());
  CHECK(cl.ctx.gamma->quiver.arrowCount() == cl.pf.alg->quiver.arrowCount());

  auto alg = a2().pf.alg;
  Rep p1 = standardModule(alg, StdKind::Proj, 0).rep;
  Rep p2 = standardModule(alg, StdKind::Proj, 1).rep;
  CHECK_THROWS_AS((void)buildFContext(alg, {p2}, {"P2"}, std::nullopt), Error);
  CHECK_THROWS_AS((void)buildFContext(alg, {p1, p2, p1}, {"P1", "P2", "P1"}, std::nullopt), Error);
}

TEST_CASE("evaluation functor") {
  auto& e4 = ejem4();
  const FContext& ctx = e4.ctx;
  for (int i = 0; i < ctx.n(); ++i) {
    EvalRep ev = evalModule(ctx, ctx.xs[i]);
    Rep pg = standardModule(ctx.gamma, StdKind::Proj, i).rep;
    ev.rep.validate();
    CHECK(isIsomorphic(ev.rep, pg).has_value());
  }
  Rep s1 = standardModule(ctx.alg, StdKind::Simple, 0).rep;
  EvalRep es1 = evalModule(ctx, s1);
  CHECK(es1.rep.total() == 1);

  Rep s2 = standardModule(ctx.alg, StdKind::Simple, 1).rep;
  auto sum = directSum(ctx.alg, {s1, s2});
  CHECK(evalModule(ctx, sum.rep).rep.total() == es1.rep.total() + evalModule(ctx, s2).rep.total());
  for (const auto& a : {s1, s2, ctx.xs[3]})
    for (const auto& b : {s1, s2, ctx.xs[3]}) {
      EvalRep ea = evalModule(ctx, a), eb = evalModule(ctx, b);
      auto hb = homBasis(a, b);
      CHECK(static_cast<int>(hb.size()) == homDim(ea.rep, eb.rep));
      Echelon span(ctx.gamma->field, static_cast<int>(flattenMap(Map::zero(ea.rep, eb.rep)).size()));
      for (const auto& h : hb) {
        Map eh = evalMap(ctx, h, ea, eb);
        eh.validate();
        CHECK(span.insert(flattenMap(eh)));
      }
    }
}

TEST_CASE("F-exactness") {
  auto& e4 = ejem4();
  const FContext& ctx = e4.ctx;
  Rep s1 = standardModule(ctx.alg, StdKind::Simple, 0).rep;
  Rep s2 = standardModule(ctx.alg, StdKind::Simple, 1).rep;

  auto sum = directSum(ctx.alg, {s2, s1});
  CHECK(isFExact(ctx, sum.inj[0], sum.proj[1]).has_value());

  Rep p1 = standardModule(ctx.alg, StdKind::Proj, 0).rep;
  auto emb = homBasis(s2, p1);
  REQUIRE(emb.size() == 1);
  auto tri = completeMono(ctx, emb[0]);
  CHECK(isFExact(ctx, tri.f, tri.g).has_value());
  CHECK(isFMonicMap(ctx, emb[0]));

  auto& cl = a2();
  Rep q1 = standardModule(cl.pf.alg, StdKind::Proj, 0).rep;
  Rep qs2 = standardModule(cl.pf.alg, StdKind::Simple, 1).rep;
  auto m = homBasis(qs2, q1);
  REQUIRE(m.size() == 1);
  auto t2 = completeMono(cl.ctx, m[0]);
  CHECK(isFExact(cl.ctx, t2.f, t2.g).has_value());
}

TEST_CASE("relative projectives and injectives") {
  auto& cl = a2();
  auto pi = fProjInj(cl.ctx);
  CHECK(pi.pMask == maskOf(cl, {"P1", "S2"}));  // P2 = S2 at the sink
  CHECK(pi.iMask == maskOf(cl, {"S1", "P1"}));  // I1 = S1, I2 = P1

  auto& e4 = ejem4();
  auto pi4 = fProjInj(e4.ctx);
  CHECK(pi4.pMask == maskOf(e4, {"P1", "P2", "S3", "S2"}));
  CHECK(pi4.iMask == maskOf(e4, {"S3", "S1", "P1", "P2"}));

  auto& nf = noFadm();
  auto pinf = fProjInj(nf.ctx);
  CHECK(pinf.pMask == maskOf(nf, {"P1", "P2", "K"}));
  CHECK(pinf.iMask == maskOf(nf, {"L", "S1", "I2"}));
}

TEST_CASE("minimal F-resolutions") {
  auto& e4 = ejem4();
  const FContext& ctx = e4.ctx;
  for (int i = 0; i < ctx.n(); ++i) {
    FRes r = minimalFResolution(ctx, ctx.xs[i], 2, true);
    CHECK(r.terms[0].gens == std::vector<int>{i});
    CHECK(r.terms[1].gens.empty());
    CHECK(r.aug.isIsoMap());
    for (char c : r.rightMinimalCert) CHECK(c == 1);
  }
  Rep s1 = standardModule(ctx.alg, StdKind::Simple, 0).rep;
  FRes rs1 = minimalFResolution(ctx, s1, 3, true);
  REQUIRE(rs1.terms.size() == 4);
  CHECK(isIsomorphic(rs1.terms[0].rep, standardModule(ctx.alg, StdKind::Proj, 0).rep).has_value());
  CHECK(isIsomorphic(rs1.terms[1].rep, standardModule(ctx.alg, StdKind::Simple, 1).rep).has_value());
  CHECK(rs1.terms[2].gens.empty());
  for (char c : rs1.rightMinimalCert) CHECK(c == 1);

  auto& nf = noFadm();
  Rep i2 = standardModule(nf.pf.alg, StdKind::Inj, 1).rep;
  FRes ri2 = minimalFResolution(nf.ctx, i2, 2, true);
  Rep p1k = directSum(nf.pf.alg, {standardModule(nf.pf.alg, StdKind::Proj, 0).rep,
                                  resolveModuleName(nf.pf, "K")})
                .rep;
  CHECK(isIsomorphic(ri2.terms[0].rep, p1k).has_value());
  CHECK(isIsomorphic(ri2.terms[1].rep, standardModule(nf.pf.alg, StdKind::Proj, 1).rep).has_value());
  CHECK(isIsomorphic(ri2.terms[2].rep, standardModule(nf.pf.alg, StdKind::Proj, 1).rep).has_value());
  for (char c : ri2.rightMinimalCert) CHECK(c == 1);
  auto kc = kernelCokernel(ri2.aug);
  CHECK(isFExact(nf.ctx, kc.kerIncl, ri2.aug).has_value());
}

TEST_CASE("relative ext") {
  auto& e4 = ejem4();
  const FContext& ctx = e4.ctx;
  const Catalog& cat = ctx.catalog();
  for (int i = 0; i < ctx.n(); ++i)
    for (const auto& n : cat.entries) CHECK(extFDim(ctx, ctx.xs[i], n, 1).dim == 0);
  for (const auto& m : cat.entries)
    for (const auto& n : cat.entries) CHECK(extFDim(ctx, m, n, 2).dim == 0);

  for (int i = 0; i < cat.size(); ++i)
    for (int j = 0; j < cat.size(); ++j) {
      Rep gi = entryEvalOf(ctx, i).rep, gj = entryEvalOf(ctx, j).rep;
      CHECK(extF1Entries(ctx, i, j) == extDim(gi, gj, 1));
      CHECK(extF2Entries(ctx, i, j) == extDim(gi, gj, 2));
    }

  auto& nf = noFadm();
  Rep i2 = standardModule(nf.pf.alg, StdKind::Inj, 1).rep;
  CHECK(extFDim(nf.ctx, i2, i2, 1).dim == 0);
  const Catalog& ncat = nf.ctx.catalog();
  for (int i = 0; i < ncat.size(); ++i)
    for (int j = 0; j < ncat.size(); ++j) {
      Rep gi = entryEvalOf(nf.ctx, i).rep, gj = entryEvalOf(nf.ctx, j).rep;
      CHECK(extF1Entries(nf.ctx, i, j) == extDim(gi, gj, 1));
      CHECK(extF2Entries(nf.ctx, i, j) == extDim(gi, gj, 2));
    }
}

TEST_CASE("relative projective dimension") {
  auto& e4 = ejem4();
  for (int i = 0; i < e4.ctx.n(); ++i) CHECK(pdF(e4.ctx, e4.ctx.xs[i], 4) == 0);
  Rep s1 = standardModule(e4.pf.alg, StdKind::Simple, 0).rep;
  CHECK(pdF(e4.ctx, s1, 4) == 1);
  CHECK(glDimF(e4.ctx, 4) == 1);

  auto& nf = noFadm();
  Rep i2 = standardModule(nf.pf.alg, StdKind::Inj, 1).rep;
  CHECK(!pdF(nf.ctx, i2, 6).has_value());  // periodic kernels, never terminates
}

TEST_CASE("middle terms of ext classes") {
  auto& e4 = ejem4();
  const FContext& ctx = e4.ctx;
  Rep s1 = standardModule(ctx.alg, StdKind::Simple, 0).rep;
  Rep s2 = standardModule(ctx.alg, StdKind::Simple, 1).rep;
  Rep p1 = standardModule(ctx.alg, StdKind::Proj, 0).rep;

  auto classes = extF1ClassReps(ctx, s1, s2);
  REQUIRE(classes.size() == 5);  // zero plus the multiples of one generator

  auto split = middleTerm(ctx, s1, s2, classes[0]);
  CHECK(isIsomorphic(split.b, directSum(ctx.alg, {s1, s2}).rep).has_value());

  for (size_t k = 1; k < classes.size(); ++k) {
    auto mt = middleTerm(ctx, s1, s2, classes[k]);
    CHECK(isIsomorphic(mt.b, p1).has_value());
    CHECK(isFExact(ctx, mt.triple.f, mt.triple.g).has_value());
  }

  FRes res = minimalFResolution(ctx, s1, 1, false);
  for (const auto& h : homBasis(res.terms[0].rep, s2)) {
    auto mt = middleTerm(ctx, s1, s2, compose(h, res.diffs[0]));
    CHECK(isIsomorphic(mt.b, directSum(ctx.alg, {s1, s2}).rep).has_value());
  }

  auto nz = middleTerm(ctx, s1, s2, classes[1]);
  for (const auto& a : homBasis(s2, ctx.xs[3])) {
    Triple po = pushoutTriple(nz.triple, a);
    CHECK(isFExact(ctx, po.f, po.g).has_value());
  }
  for (const auto& c : homBasis(p1, s1)) {
    Triple pb = pullbackTriple(nz.triple, c);
    CHECK(isFExact(ctx, pb.f, pb.g).has_value());
  }
}

TEST_CASE("genF closures") {
  auto& e4 = ejem4();
  const FContext& ctx = e4.ctx;
  for (int i = 0; i < ctx.catalog().size(); ++i)
    CHECK(genFContains(ctx, ctx.catalog().entries[i], ctx.catalog().entries[i]));

  CHECK(genFClosureMask(ctx, maskOf(e4, {"P1"})) == maskOf(e4, {"P1", "S1"}));
  CHECK(genFClosureMask(ctx, ctx.fProjMask) == ctx.fullMask());

  auto& nf = noFadm();
  CHECK(genFClosureMask(nf.ctx, maskOf(nf, {"I2"})) == maskOf(nf, {"I2", "S1"}));

  for (std::uint32_t m : {maskOf(e4, {"P1"}), maskOf(e4, {"P2", "S2"})}) {
    std::uint32_t clo = genFClosureMask(ctx, m);
    for (int z : maskToEntries(clo)) CHECK((genFClosureMask(ctx, 1u << z) & ~clo) == 0);
  }

  Rep p1 = ctx.catalog().entries[entryOf(e4, "P1")];
  Rep dbl = directSum(ctx.alg, {p1, p1}).rep;
  CHECK(genFClosureOfRep(ctx, dbl) == genFClosureMask(ctx, maskOf(e4, {"P1"})));
}

TEST_CASE("torsion classes") {
  auto& e4 = ejem4();
  const FContext& ctx = e4.ctx;
  CHECK(isFTorsionClass(ctx, ctx.fullMask()).isTorsion);
  CHECK(isFTorsionClass(ctx, 0).isTorsion);

  auto good = isFTorsionClass(ctx, maskOf(e4, {"P1", "S1"}));
  CHECK(good.isTorsion);
  CHECK(good.layersAgree);

  auto bad = isFTorsionClass(ctx, maskOf(e4, {"P1"}));
  CHECK(!bad.isTorsion);
  CHECK(bad.witnessEntry == entryOf(e4, "S1"));

  auto extFail = isFTorsionClass(ctx, maskOf(e4, {"S1", "S2"}));
  CHECK(!extFail.isTorsion);
  CHECK(extFail.witnessEntry == entryOf(e4, "P1"));

  CHECK(isFTorsionClass(ctx, maskOf(e4, {"S2"})).isTorsion);
}

TEST_CASE("F-preenveloping") {
  auto& e4 = ejem4();
  CHECK(isFPreenveloping(e4.ctx, e4.ctx.fullMask()));
  CHECK(!isFPreenveloping(e4.ctx, maskOf(e4, {"P1", "S1"})));
  CHECK(isFPreenveloping(e4.ctx, maskOf(e4, {"S3", "S1", "P1", "P2"})));

  auto& kr = kronecker();
  CHECK_THROWS_AS((void)isFPreenveloping(kr.ctx, 0), Error);
}

TEST_CASE("left approximations") {
  auto& e4 = ejem4();
  const FContext& ctx = e4.ctx;
  Rep s2 = standardModule(ctx.alg, StdKind::Simple, 1).rep;
  Rep p1 = standardModule(ctx.alg, StdKind::Proj, 0).rep;
  Rep s1 = standardModule(ctx.alg, StdKind::Simple, 0).rep;

  Map self = leftApproximation(s2, {s2, p1}, true);
  CHECK(self.vertexwiseInjective());
  CHECK(isMinimal(self, Side::Left));

  Map ap = leftApproximation(s2, {p1, s1}, true);
  CHECK(ap.dst.dims == p1.dims);
  CHECK(ap.vertexwiseInjective());
  for (const auto& t : {p1, s1})
    for (const auto& h : homBasis(s2, t)) CHECK(factorsThrough(h, ap));

  auto& kr = kronecker();
  Rep r10 = kroneckerR(kr.pf.alg, 1, 0, 1);
  Rep r11 = kroneckerR(kr.pf.alg, 1, 1, 1);
  Map zap = leftApproximation(r10, {r11}, true);
  CHECK(zap.dst.isZero());
}

TEST_CASE("preenvelope construction") {
  auto& e4 = ejem4();
  const FContext& ctx = e4.ctx;
  Rep s2 = standardModule(ctx.alg, StdKind::Simple, 1).rep;

  auto tri = constructPreenvelope(ctx, s2, ctx.fullMask());
  CHECK(isFExact(ctx, tri.f, tri.g).has_value());

  std::uint32_t s = maskOf(e4, {"S3", "S1", "P1", "P2"});
  auto tri2 = constructPreenvelope(ctx, s2, s);
  for (int t : maskToEntries(s)) {
    const Rep& tRep = ctx.catalog().entries[t];
    for (const auto& h : homBasis(s2, tRep)) CHECK(factorsThrough(h, tri2.f));
  }

  CHECK_THROWS_AS((void)constructPreenvelope(ctx, s2, maskOf(e4, {"P1", "S1"})), Error);
}

TEST_CASE("two-term homotopy vanishing") {
  auto& e4 = ejem4();
  Rep p1 = standardModule(e4.pf.alg, StdKind::Proj, 0).rep;
  TwoTerm tp1 = twoTermOf(e4.ctx, p1);
  CHECK(tp1.m1.isZero());
  CHECK(homotopyHomVanishes(tp1, tp1));

  Rep s1 = standardModule(e4.pf.alg, StdKind::Simple, 0).rep;
  TwoTerm ts1 = twoTermOf(e4.ctx, s1);
  for (int i = 0; i < e4.ctx.n(); ++i) {
    TwoTerm stalk{Rep::zero(e4.pf.alg), e4.ctx.xs[i], Map::zero(Rep::zero(e4.pf.alg), e4.ctx.xs[i])};
    bool vanish = homotopyHomVanishes(ts1, stalk);
    bool factor = true;
    for (const auto& h : homBasis(ts1.m1, e4.ctx.xs[i])) factor = factor && factorsThrough(h, ts1.d);
    CHECK(vanish == factor);
  }

  auto& nf = noFadm();
  Rep i2 = standardModule(nf.pf.alg, StdKind::Inj, 1).rep;
  TwoTerm ti2 = twoTermOf(nf.ctx, i2);
  CHECK(!homotopyHomVanishes(ti2, ti2));
}

TEST_CASE("direct sums of sequences and composition laws") {
  auto& e4 = ejem4();
  const FContext& ctx = e4.ctx;
  Rep s1 = standardModule(ctx.alg, StdKind::Simple, 0).rep;
  Rep s2 = standardModule(ctx.alg, StdKind::Simple, 1).rep;

  auto classes = extF1ClassReps(ctx, s1, s2);
  auto nz = middleTerm(ctx, s1, s2, classes[1]).triple;
  auto spl = middleTerm(ctx, s1, s2, classes[0]).triple;

  auto sumF = [&](const Triple& x, const Triple& y) {
    auto sA = directSum(ctx.alg, {x.f.src, y.f.src});
    auto sB = directSum(ctx.alg, {x.f.dst, y.f.dst});
    auto sC = directSum(ctx.alg, {x.g.dst, y.g.dst});
    Map f = compose(sB.inj[0], compose(x.f, sA.proj[0])).plus(compose(sB.inj[1], compose(y.f, sA.proj[1])));
    Map g = compose(sC.inj[0], compose(x.g, sB.proj[0])).plus(compose(sC.inj[1], compose(y.g, sB.proj[1])));
    return Triple{f, g};
  };
  auto both = sumF(nz, spl);
  CHECK(isFExact(ctx, both.f, both.g).has_value());

  // F-epic composition laws on a concrete pair.
  Rep p1 = standardModule(ctx.alg, StdKind::Proj, 0).rep;
  Map top = Map::zero(p1, s1);
  for (const auto& h : homBasis(p1, s1))
    if (h.vertexwiseSurjective()) top = h;
  REQUIRE(top.vertexwiseSurjective());
  CHECK(isFEpicMap(ctx, top));
  auto dbl = directSum(ctx.alg, {p1, p1});
  Map fold = dbl.proj[0];
  CHECK(isFEpicMap(ctx, fold));
  Map comp = compose(top, fold);
  CHECK(isFEpicMap(ctx, comp));  // composite of F-epics
  // Composite F-epic forces the outer map to be F-epic: use comp = top o fold.
  CHECK(isFEpicMap(ctx, top));
}

TEST_CASE("minimality transports through the evaluation") {
  auto& e4 = ejem4();
  const FContext& ctx = e4.ctx;
  Rep s1 = standardModule(ctx.alg, StdKind::Simple, 0).rep;
  auto cover = fCover(ctx, s1);
  EvalRep src = evalModule(ctx, cover.p.rep), dst = evalModule(ctx, s1);
  Map ev = evalMap(ctx, cover.aug, src, dst);
  CHECK(isMinimal(cover.aug, Side::Right) == isMinimal(ev, Side::Right));

  auto sum = directSum(ctx.alg, {cover.p.rep, ctx.xs[0]});
  Map padded = compose(cover.aug, sum.proj[0]);
  EvalRep src2 = evalModule(ctx, sum.rep);
  Map ev2 = evalMap(ctx, padded, src2, dst);
  CHECK(!isMinimal(padded, Side::Right));
  CHECK(!isMinimal(ev2, Side::Right));
}

TEST_CASE("definitional relative projectivity and injectivity") {
  auto& e4 = ejem4();
  const FContext& ctx = e4.ctx;
  const Catalog& cat = ctx.catalog();

  std::vector<Triple> sample;
  for (const auto& c : cat.entries)
    for (const auto& a : cat.entries) {
      auto classes = extF1ClassReps(ctx, c, a);
      for (size_t k = 0; k < classes.size(); ++k) sample.push_back(middleTerm(ctx, c, a, classes[k]).triple);
    }

  for (int i = 0; i < cat.size(); ++i) {
    bool defProj = true, defInj = true;
    for (const auto& t : sample) {
      auto hbB = homBasis(cat.entries[i], t.g.src);
      auto hbC = homBasis(cat.entries[i], t.g.dst);
      if (!hbC.empty() && rank(homInduced(hbB, hbC, t.g, std::nullopt)) != static_cast<int>(hbC.size()))
        defProj = false;
      auto hbBA = homBasis(t.g.src, cat.entries[i]);
      auto hbA = homBasis(t.f.src, cat.entries[i]);
      if (!hbA.empty() && rank(homInduced(hbBA, hbA, std::nullopt, t.f)) != static_cast<int>(hbA.size()))
        defInj = false;
    }
    CHECK(defProj == (((ctx.fProjMask >> i) & 1u) != 0));
    CHECK(defInj == (((ctx.fInjMask >> i) & 1u) != 0));
  }
}

TEST_CASE("approximations into classes admitting an F-monic embedding are F-monic") {
  // Whenever N embeds F-monically into a member of S, the left approximation
  // into S is itself F-monic.
  auto& e4 = ejem4();
  const FContext& ctx = e4.ctx;
  const Catalog& cat = ctx.catalog();
  for (std::uint32_t mask = 1; mask <= ctx.fullMask(); ++mask) {
    std::vector<Rep> targets;
    for (int e : maskToEntries(mask)) targets.push_back(cat.entries[e]);
    for (int n = 0; n < cat.size(); ++n) {
      bool embeds = false;
      for (const auto& t : targets) {
        for (const auto& h : homBasis(cat.entries[n], t))
          if (h.vertexwiseInjective() && isFMonicMap(ctx, h)) {
            embeds = true;
            break;
          }
        if (embeds) break;
      }
      if (!embeds) continue;
      Map ap = leftApproximation(cat.entries[n], targets, true, ctx.lim);
      CHECK(isFMonicMap(ctx, ap));
    }
  }
}

TEST_CASE("ordinary ext counts match realized middle terms in a regular context") {
  // X = Lambda on the two-vertex line: every nonzero class of the relative
  // ext group (which is the ordinary one here) has a non-split middle term.
  auto& cl = a2();
  const FContext& ctx = cl.ctx;
  const Catalog& cat = ctx.catalog();
  Fp f = ctx.alg->field;
  for (const auto& c : cat.entries)
    for (const auto& a : cat.entries) {
      int d = ext1Dim(c, a);
      CHECK(extFDim(ctx, c, a, 1).dim == d);
      auto classes = extF1ClassReps(ctx, c, a);
      std::uint64_t expected = 1;
      for (int k = 0; k < d; ++k) expected *= f.p;
      CHECK(classes.size() == expected);
      Rep split = directSum(ctx.alg, {a, c}).rep;
      for (size_t k = 0; k < classes.size(); ++k) {
        auto mt = middleTerm(ctx, c, a, classes[k]);
        CHECK(isIsomorphic(mt.b, split, ctx.lim).has_value() == (k == 0));
      }
    }
}
