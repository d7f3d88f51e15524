#include "reltilt/report.hpp"

#include <algorithm>
#include <chrono>

namespace rt {

namespace {

std::vector<std::string> nameCatalog(const ParsedFile& pf, const Catalog& cat, const Limits& lim) {
  std::vector<std::string> names(cat.size());
  std::vector<bool> taken(cat.size(), false);
  auto assign = [&](const Rep& rep, const std::string& name) {
    for (int i = 0; i < cat.size(); ++i) {
      if (taken[i] || cat.entries[i].dims != rep.dims) continue;
      if (isIsomorphic(cat.entries[i], rep, lim)) {
        names[i] = name;
        taken[i] = true;
        return;
      }
    }
  };
  const auto& q = pf.alg->quiver;
  for (int v = 0; v < q.vertexCount(); ++v) assign(standardModule(pf.alg, StdKind::Simple, v).rep, "S" + q.vertices[v]);
  for (int v = 0; v < q.vertexCount(); ++v) assign(standardModule(pf.alg, StdKind::Proj, v).rep, "P" + q.vertices[v]);
  for (int v = 0; v < q.vertexCount(); ++v) assign(standardModule(pf.alg, StdKind::Inj, v).rep, "I" + q.vertices[v]);
  for (const auto& [n, rep] : pf.namedModules) assign(rep, n);
  int u = 0;
  for (int i = 0; i < cat.size(); ++i)
    if (!taken[i]) names[i] = "U" + std::to_string(u++);
  return names;
}

}  // namespace

std::string Workspace::maskNames(std::uint32_t mask) const {
  std::string out = "{";
  bool first = true;
  for (int e : maskToEntries(mask)) {
    if (!first) out += ",";
    out += entryNames[e];
    first = false;
  }
  return out + "}";
}

Json Workspace::maskList(std::uint32_t mask) const {
  Json arr = Json::array();
  for (int e : maskToEntries(mask)) arr.push_back(entryNames[e]);
  return arr;
}

Workspace buildWorkspace(ParsedFile pf, const Limits& lim) {
  Workspace ws;

  std::optional<Catalog> cat;
  if (pf.catalogBound) {
    cat = enumerateIndecomposables(pf.alg, *pf.catalogBound, lim);
  } else if (pf.catalogExplicit) {
    Catalog c;
    c.alg = pf.alg;
    c.provenance = Provenance::UserSupplied;
    for (const auto& name : *pf.catalogExplicit) {
      Rep r = resolveModuleName(pf, name);
      if (!isIndecomposable(r, lim)) fail(Errc::BadInput, "explicit catalog entry is decomposable: " + name);
      if (c.findIso(r, lim) >= 0) fail(Errc::BadInput, "explicit catalog entries repeat: " + name);
      c.entries.push_back(std::move(r));
      c.names.push_back(name);
    }
    cat = std::move(c);
  }

  if (pf.generatorNames.empty()) fail(Errc::BadInput, "missing generator block");
  std::vector<Rep> xs;
  for (const auto& n : pf.generatorNames) xs.push_back(resolveModuleName(pf, n));

  // Canonical summand order: (total dim, dims lex, declaration order).
  std::vector<int> order(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (xs[a].total() != xs[b].total()) return xs[a].total() < xs[b].total();
    return xs[a].dims < xs[b].dims;
  });
  std::vector<Rep> xsOrdered;
  std::vector<std::string> namesOrdered;
  for (int i : order) {
    xsOrdered.push_back(xs[i]);
    namesOrdered.push_back(pf.generatorNames[i]);
  }

  ws.ctx = buildFContext(pf.alg, std::move(xsOrdered), namesOrdered, std::move(cat), lim);
  if (ws.ctx.cat) {
    ws.entryNames = nameCatalog(pf, *ws.ctx.cat, lim);
    ws.ctx.cat->names = ws.entryNames;
  }
  ws.pf = std::move(pf);
  return ws;
}

namespace {

Json header(const Workspace& ws, const RunOptions& opt) {
  Json j;
  j["schema"] = 1;
  j["tool"] = "reltilt";
  j["command"] = opt.command;
  j["field"] = ws.pf.field.p;
  Json gen = Json::array();
  for (const auto& n : ws.ctx.xNames) gen.push_back(n);
  j["generator"] = gen;
  if (ws.ctx.cat) {
    Json cat = Json::array();
    for (int i = 0; i < ws.ctx.cat->size(); ++i) {
      Json e;
      e["name"] = ws.entryNames[i];
      e["dims"] = ws.ctx.cat->entries[i].dims;
      cat.push_back(e);
    }
    j["catalog"] = cat;
    j["catalog_complete"] = ws.ctx.cat->complete();
  }
  return j;
}

std::string describeSum(const Workspace& ws, const std::vector<int>& gens) {
  if (gens.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < gens.size(); ++i) {
    if (i) s += "+";
    s += ws.ctx.xNames[gens[i]];
  }
  return s;
}

RunResult cmdCatalog(Workspace& ws, const RunOptions& opt) {
  RunResult out;
  out.report = header(ws, opt);
  const Catalog& cat = ws.ctx.catalog();
  out.text = "catalog: " + std::to_string(cat.size()) + " indecomposables";
  Json arr = Json::array();
  for (int i = 0; i < cat.size(); ++i) {
    Json e;
    e["name"] = ws.entryNames[i];
    e["dims"] = cat.entries[i].dims;
    arr.push_back(e);
  }
  out.report["entries"] = arr;
  return out;
}

RunResult cmdResolve(Workspace& ws, const RunOptions& opt) {
  if (opt.args.empty()) fail(Errc::BadInput, "resolve needs a module name");
  Rep m = resolveModuleName(ws.pf, opt.args[0]);
  FRes res = minimalFResolution(ws.ctx, m, opt.maxResLen, true);
  RunResult out;
  out.report = header(ws, opt);
  out.report["module"] = opt.args[0];
  Json terms = Json::array();
  for (const auto& t : res.terms) {
    Json names = Json::array();
    for (int g : t.gens) names.push_back(ws.ctx.xNames[g]);
    terms.push_back(names);
  }
  out.report["terms"] = terms;
  Json cert = Json::array();
  for (char c : res.rightMinimalCert) cert.push_back(c != 0);
  out.report["right_minimal"] = cert;
  out.text = "resolution of " + opt.args[0] + ":";
  for (size_t k = 0; k < res.terms.size(); ++k)
    out.text += " " + describeSum(ws, res.terms[k].gens) + (k + 1 < res.terms.size() ? " <-" : "");
  return out;
}

RunResult cmdPresilt(Workspace& ws, const RunOptions& opt) {
  if (opt.args.empty()) fail(Errc::BadInput, "presilt needs a module name");
  Rep m = resolveModuleName(ws.pf, opt.args[0]);
  PresiltingVerdict v = isFPresilting(ws.ctx, m);
  RunResult out;
  out.report = header(ws, opt);
  out.report["module"] = opt.args[0];
  out.report["via_presentation"] = v.viaPropB;
  out.report["via_endomorphism_algebra"] = v.viaGamma;
  out.report["via_homotopy"] = v.viaHomotopy;
  out.report["agreed"] = v.agreed();
  out.report["presilting"] = v.value();
  out.exitCode = v.value() ? 0 : 1;
  out.text = std::string("presilting(") + opt.args[0] + ") = " + (v.value() ? "true" : "false") +
             (v.agreed() ? " (oracles agree)" : " (ORACLES DISAGREE)");
  return out;
}

RunResult cmdTilt(Workspace& ws, const RunOptions& opt) {
  if (opt.args.empty()) fail(Errc::BadInput, "tilt needs a module name");
  Rep t = resolveModuleName(ws.pf, opt.args[0]);
  FTiltingResult r = isFTilting(ws.ctx, t);
  RunResult out;
  out.report = header(ws, opt);
  out.report["module"] = opt.args[0];
  out.report["tilting"] = r.ok;
  if (!r.ok) out.report["why"] = r.why;
  out.exitCode = r.ok ? 0 : 1;
  out.text = std::string("tilting(") + opt.args[0] + ") = " + (r.ok ? "true" : "false") +
             (r.ok ? "" : " (" + r.why + ")");
  return out;
}

RunResult cmdGenf(Workspace& ws, const RunOptions& opt) {
  if (opt.args.empty()) fail(Errc::BadInput, "genf needs a module name");
  Rep m = resolveModuleName(ws.pf, opt.args[0]);
  std::uint32_t mask = genFClosureOfRep(ws.ctx, m);
  RunResult out;
  out.report = header(ws, opt);
  out.report["module"] = opt.args[0];
  out.report["closure"] = ws.maskList(mask);
  out.text = "genF(" + opt.args[0] + ") = " + ws.maskNames(mask);
  return out;
}

RunResult cmdTorsion(Workspace& ws, const RunOptions& opt) {
  TorsionFilter filt;
  std::string spec = opt.filterSpec.empty() ? "all" : opt.filterSpec;
  size_t i = 0;
  while (i < spec.size()) {
    size_t j = spec.find(',', i);
    if (j == std::string::npos) j = spec.size();
    std::string t = spec.substr(i, j - i);
    if (t == "all") {
    } else if (t == "nonzero") {
      filt.nonzero = true;
    } else if (t == "preenveloping") {
      filt.preenveloping = true;
    } else if (t == "fPreenveloping") {
      filt.fPreenveloping = true;
    } else {
      fail(Errc::BadInput, "unknown torsion filter: " + t);
    }
    i = j + 1;
  }
  auto classes = enumerateTorsionClasses(ws.ctx, filt);
  RunResult out;
  out.report = header(ws, opt);
  out.report["filter"] = spec;
  Json arr = Json::array();
  for (std::uint32_t m : classes) arr.push_back(ws.maskList(m));
  out.report["classes"] = arr;
  out.text = "torsion classes (" + spec + "): " + std::to_string(classes.size());
  return out;
}

RunResult cmdAdmissible(Workspace& ws, const RunOptions& opt) {
  auto r = isFAdmissible(ws.ctx);
  RunResult out;
  out.report = header(ws, opt);
  out.report["admissible"] = r.admissible;
  if (!r.admissible) {
    Json cex = Json::array();
    for (int e : r.counterexampleEntries) cex.push_back(ws.entryNames[e]);
    out.report["counterexample"] = cex;
  }
  out.exitCode = r.admissible ? 0 : 1;
  out.text = std::string("admissible = ") + (r.admissible ? "true" : "false");
  if (!r.admissible) {
    out.text += " (counterexample ";
    for (size_t i = 0; i < r.counterexampleEntries.size(); ++i)
      out.text += (i ? "+" : "") + ws.entryNames[r.counterexampleEntries[i]];
    out.text += ")";
  }
  return out;
}

Json theoremJson(const Workspace& ws, const TheoremReport& rep) {
  Json j;
  Json left = Json::array(), right = Json::array(), mapping = Json::array();
  for (auto m : rep.leftMasks) left.push_back(ws.maskList(m));
  for (auto m : rep.rightMasks) right.push_back(ws.maskList(m));
  for (auto [m, c] : rep.mapping) {
    Json e;
    e["module"] = ws.maskList(m);
    e["class"] = ws.maskList(c);
    mapping.push_back(e);
  }
  j["left"] = left;
  j["right"] = right;
  j["mapping"] = mapping;
  j["bijection_holds"] = rep.bijectionHolds;
  if (!rep.failure.empty()) j["failure"] = rep.failure;
  return j;
}

RunResult cmdVerifyTilting(Workspace& ws, const RunOptions& opt) {
  TheoremReport rep = verifyTheoremTilting(ws.ctx);
  RunResult out;
  out.report = header(ws, opt);
  out.report.update(theoremJson(ws, rep));
  out.exitCode = rep.bijectionHolds ? 0 : 1;
  out.text = "tilting ~ torsion bijection: " + std::to_string(rep.leftMasks.size()) + " <-> " +
             std::to_string(rep.rightMasks.size()) + (rep.bijectionHolds ? " (holds)" : " (FAILS)");
  return out;
}

RunResult cmdVerifySpecial(Workspace& ws, const RunOptions& opt) {
  RunResult out;
  out.report = header(ws, opt);
  TheoremReport rep = verifyTheoremSpecial(ws.ctx);
  out.report.update(theoremJson(ws, rep));
  out.exitCode = rep.bijectionHolds ? 0 : 1;
  out.text = "special presilting ~ torsion bijection: " + std::to_string(rep.leftMasks.size()) + " <-> " +
             std::to_string(rep.rightMasks.size()) + (rep.bijectionHolds ? " (holds)" : " (FAILS)");
  return out;
}

RunResult cmdKroneckerShard(Workspace& ws, const RunOptions& opt) {
  if (!isKroneckerShaped(ws.pf.alg->quiver)) fail(Errc::BadInput, "kronecker-shard needs a double-arrow quiver");
  auto alg = ws.pf.alg;
  const FContext& ctx = ws.ctx;
  int bound = opt.kroneckerN;
  Fp f = alg->field;

  RunResult out;
  out.report = header(ws, opt);
  out.report["n_bound"] = bound;

  Rep r10 = kroneckerR(alg, 1, 0, 1);
  Rep r11 = kroneckerR(alg, 1, 1, 1);
  int homAcross = homDim(r10, r11);
  out.report["hom_R10_R11"] = homAcross;

  bool allOk = homAcross == 0;
  Json seqs = Json::array();
  Rep s2 = standardModule(alg, StdKind::Simple, alg->quiver.arrows[0].tgt).rep;

  for (int n = 0; n <= bound; ++n) {
    Json entry;
    entry["n"] = n;
    Rep mid = kroneckerR(alg, 1, 1, n + 1);
    Rep jn = kroneckerJ(alg, n);
    // Deterministic epi search over the hom space of the quotient map.
    auto hb = homBasis(mid, jn);
    std::optional<Map> epi;
    std::vector<Fel> coeff(hb.size(), 0);
    while (!epi) {
      bool adv = false;
      for (size_t k = 0; k < coeff.size(); ++k) {
        if (++coeff[k] < f.p) {
          adv = true;
          break;
        }
        coeff[k] = 0;
      }
      if (!adv) break;
      Map g = Map::zero(mid, jn);
      for (size_t k = 0; k < hb.size(); ++k)
        if (coeff[k]) g = g.plus(hb[k].scaled(coeff[k]));
      if (g.vertexwiseSurjective()) epi = g;
    }
    bool seqOk = false, kernelIsSimple = false, genfJ = false;
    if (epi) {
      Triple tr = completeEpi(ctx, *epi);
      seqOk = isFExact(ctx, tr.f, tr.g).has_value();
      kernelIsSimple = isIsomorphic(tr.f.src, s2, ctx.lim).has_value();
      genfJ = genFContains(ctx, mid, jn);
    }
    entry["sequence_exists"] = epi.has_value();
    entry["f_exact"] = seqOk;
    entry["kernel_is_simple_socle"] = kernelIsSimple;
    entry["genf_contains_J"] = genfJ;
    seqs.push_back(entry);
    allOk = allOk && epi.has_value() && seqOk && kernelIsSimple && genfJ;
  }
  out.report["sequences"] = seqs;
  bool genfR10 = genFContains(ctx, r11, r10);
  out.report["genf_R11_contains_R10"] = genfR10;
  allOk = allOk && !genfR10;
  out.report["note"] =
      "middle terms are the depth-(n+1) modules on the (1:1) tube; a sum of copies of R(1:1,1) "
      "admits no epimorphism onto J(n) for n >= 1 since dim Hom(R(1:1,1), J(n)) = 1";
  out.report["limitation"] =
      "the non-preenveloping conclusion quantifies over an infinite family and is NOT decided by "
      "this tool; only the finite ingredients above are verified";
  out.exitCode = allOk ? 0 : 1;
  out.text = std::string("kronecker shard up to n = ") + std::to_string(bound) + ": " +
             (allOk ? "all finite ingredients verified" : "FAILED");
  return out;
}

}  // namespace

RunResult runCommand(Workspace& ws, const RunOptions& opt) {
  auto started = std::chrono::steady_clock::now();
  RunResult out;
  if (opt.command == "catalog")
    out = cmdCatalog(ws, opt);
  else if (opt.command == "resolve")
    out = cmdResolve(ws, opt);
  else if (opt.command == "presilt")
    out = cmdPresilt(ws, opt);
  else if (opt.command == "tilt")
    out = cmdTilt(ws, opt);
  else if (opt.command == "genf")
    out = cmdGenf(ws, opt);
  else if (opt.command == "torsion")
    out = cmdTorsion(ws, opt);
  else if (opt.command == "admissible")
    out = cmdAdmissible(ws, opt);
  else if (opt.command == "verify-tilting")
    out = cmdVerifyTilting(ws, opt);
  else if (opt.command == "verify-special")
    out = cmdVerifySpecial(ws, opt);
  else if (opt.command == "kronecker-shard")
    out = cmdKroneckerShard(ws, opt);
  else
    fail(Errc::BadInput, "unknown command: " + opt.command);

  if (opt.timing) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    out.report["timing_ms"] = ms.count();
  }
  return out;
}

std::string emitDot(Workspace& ws, const std::string& target) {
  std::string out;
  if (target == "quiver") {
    out += "digraph quiver {\n";
    for (const auto& v : ws.pf.alg->quiver.vertices) out += "  \"" + v + "\";\n";
    for (const auto& a : ws.pf.alg->quiver.arrows)
      out += "  \"" + ws.pf.alg->quiver.vertices[a.src] + "\" -> \"" + ws.pf.alg->quiver.vertices[a.tgt] +
             "\" [label=\"" + a.name + "\"];\n";
    out += "}\n";
    return out;
  }
  if (target == "torsion-lattice") {
    auto classes = enumerateTorsionClasses(ws.ctx, TorsionFilter{});
    out += "digraph torsion_lattice {\n  rankdir=BT;\n";
    for (std::uint32_t m : classes) out += "  \"" + ws.maskNames(m) + "\";\n";
    // Hasse edges: covering inclusions.
    for (std::uint32_t a : classes)
      for (std::uint32_t b : classes) {
        if (a == b || (a & ~b)) continue;  // need a < b
        bool covering = true;
        for (std::uint32_t c : classes) {
          if (c == a || c == b) continue;
          if (!(a & ~c) && !(c & ~b)) {
            covering = false;
            break;
          }
        }
        if (covering) out += "  \"" + ws.maskNames(a) + "\" -> \"" + ws.maskNames(b) + "\";\n";
      }
    out += "}\n";
    return out;
  }
  fail(Errc::BadInput, "unknown dot target: " + target);
}

}  // namespace rt
