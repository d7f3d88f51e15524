#include "reltilt/analysis.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>

namespace rt {

std::vector<Map> homBasis(const Rep& m, const Rep& n) {
  if (m.alg != n.alg) fail(Errc::BadInput, "hom across different algebras");
  const auto& q = m.alg->quiver;
  Fp f = m.alg->field;

  std::vector<int> off(q.vertexCount() + 1, 0);
  for (int v = 0; v < q.vertexCount(); ++v) off[v + 1] = off[v] + n.dims[v] * m.dims[v];
  int unknowns = off[q.vertexCount()];

  int eqs = 0;
  for (int a = 0; a < q.arrowCount(); ++a) eqs += n.dims[q.arrows[a].tgt] * m.dims[q.arrows[a].src];

  // Intertwiner system f_w M(a) = N(a) f_v per arrow a: v -> w; unknowns are
  // the f_v entries in row-major order per vertex.
  Mat sys(f, eqs, unknowns);
  int row = 0;
  for (int a = 0; a < q.arrowCount(); ++a) {
    int v = q.arrows[a].src, w = q.arrows[a].tgt;
    for (int i = 0; i < n.dims[w]; ++i)
      for (int j = 0; j < m.dims[v]; ++j) {
        for (int k = 0; k < m.dims[w]; ++k) {
          int idx = off[w] + i * m.dims[w] + k;
          sys.at(row, idx) = f.add(sys.at(row, idx), m.arrow[a].at(k, j));
        }
        for (int k = 0; k < n.dims[v]; ++k) {
          int idx = off[v] + k * m.dims[v] + j;
          sys.at(row, idx) = f.sub(sys.at(row, idx), n.arrow[a].at(i, k));
        }
        ++row;
      }
  }

  Mat ker = kernelBasis(sys);
  std::vector<Map> out;
  for (int c = 0; c < ker.cols(); ++c) {
    Map g = Map::zero(m, n);
    for (int v = 0; v < q.vertexCount(); ++v)
      for (int i = 0; i < n.dims[v]; ++i)
        for (int j = 0; j < m.dims[v]; ++j) g.f[v].at(i, j) = ker.at(off[v] + i * m.dims[v] + j, c);
    out.push_back(std::move(g));
  }
  return out;
}

int homDim(const Rep& m, const Rep& n) { return static_cast<int>(homBasis(m, n).size()); }

std::vector<Fel> flattenMap(const Map& f) {
  std::vector<Fel> v;
  for (const auto& m : f.f)
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) v.push_back(m.at(i, j));
  return v;
}

Map unflattenMap(const Rep& src, const Rep& dst, const std::vector<Fel>& v) {
  Map g = Map::zero(src, dst);
  size_t k = 0;
  for (auto& m : g.f)
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) m.at(i, j) = v[k++];
  return g;
}

std::vector<Fel> homCoords(const std::vector<Map>& basis, const Map& g) {
  if (basis.empty()) {
    if (!g.isZeroMap()) fail(Errc::Internal, "homCoords: nonzero map against empty basis");
    return {};
  }
  Fp f = g.src.alg->field;
  std::vector<std::vector<Fel>> cols;
  for (const auto& b : basis) cols.push_back(flattenMap(b));
  Mat bm = Mat::fromCols(f, static_cast<int>(cols[0].size()), cols);
  auto x = solve(bm, flattenMap(g));
  if (!x) fail(Errc::Internal, "homCoords: map outside the span");
  return *x;
}

Mat homInduced(const std::vector<Map>& fromBasis, const std::vector<Map>& toBasis, const std::optional<Map>& post,
               const std::optional<Map>& pre) {
  Fp f = Fp{2};
  if (!fromBasis.empty())
    f = fromBasis[0].src.alg->field;
  else if (!toBasis.empty())
    f = toBasis[0].src.alg->field;
  Mat m(f, static_cast<int>(toBasis.size()), static_cast<int>(fromBasis.size()));
  for (size_t j = 0; j < fromBasis.size(); ++j) {
    Map g = fromBasis[j];
    if (pre) g = compose(g, *pre);
    if (post) g = compose(*post, g);
    auto c = homCoords(toBasis, g);
    for (size_t i = 0; i < c.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(j)) = c[i];
  }
  return m;
}

namespace {

// Odometer over coefficient vectors in F_p^d, skipping zero, ascending.
struct CoeffIter {
  Fp f;
  std::vector<Fel> c;
  CoeffIter(Fp f, size_t d) : f(f), c(d, 0) {}
  bool next() {
    for (size_t i = 0; i < c.size(); ++i) {
      if (++c[i] < f.p) return true;
      c[i] = 0;
    }
    return false;
  }
};

Map combine(const std::vector<Map>& basis, const std::vector<Fel>& coeffs, const Rep& src, const Rep& dst) {
  Map g = Map::zero(src, dst);
  for (size_t i = 0; i < basis.size(); ++i)
    if (coeffs[i]) g = g.plus(basis[i].scaled(coeffs[i]));
  return g;
}

std::uint64_t powCapped(std::uint64_t p, std::uint64_t d, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < d; ++i) {
    if (r > cap / p) return cap + 1;
    r *= p;
  }
  return r;
}

}  // namespace

std::optional<Map> isIsomorphic(const Rep& m, const Rep& n, const Limits& lim) {
  if (m.alg != n.alg) fail(Errc::BadInput, "iso test across different algebras");
  if (m.dims != n.dims) return std::nullopt;
  if (m.isZero()) return Map::zero(m, n);
  auto basis = homBasis(m, n);
  if (basis.empty()) return std::nullopt;
  if (powCapped(m.alg->field.p, basis.size(), lim.enumCap) > lim.enumCap)
    fail(Errc::CapExceeded, "isomorphism search space exceeds the enumeration cap");
  CoeffIter it(m.alg->field, basis.size());
  while (it.next()) {
    Map g = combine(basis, it.c, m, n);
    if (g.isIsoMap()) return g;
  }
  return std::nullopt;
}

std::vector<Map> endBasis(const Rep& m) { return homBasis(m, m); }

std::optional<Map> fittingProjector(const Map& phi) {
  const Rep& m = phi.src;
  Fp f = m.alg->field;
  int n = m.total();
  if (n == 0) return std::nullopt;
  Map e = Map::zero(m, m);
  bool zero = true, ident = true;
  for (size_t v = 0; v < phi.f.size(); ++v) {
    int dv = m.dims[v];
    if (dv == 0) continue;
    Mat u = phi.f[v].powN(n);  // stable power: im (+) ker splits the fibre
    Rref rc = rref(u.transpose());
    int r = static_cast<int>(rc.pivots.size());
    Mat ub(f, dv, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < dv; ++j) ub.at(j, i) = rc.m.at(i, j);
    Mat kb = kernelBasis(u);
    Mat basis = Mat::hcat(ub, kb);
    auto binv = invert(basis);
    if (!binv) return std::nullopt;
    Mat sel(f, dv, dv);
    for (int i = 0; i < r; ++i) sel.at(i, i) = 1;
    e.f[v] = basis * sel * *binv;
    if (!e.f[v].isZero()) zero = false;
    if (!e.f[v].isIdentity()) ident = false;
  }
  if (zero || ident) return std::nullopt;
  // The stable projector is a polynomial in phi, hence again a module map.
  if (!e.intertwines()) return std::nullopt;
  if (!(compose(e, e) == e)) return std::nullopt;
  return e;
}

namespace {

std::optional<Map> exhaustiveIdempotent(const std::vector<Map>& basis, const Rep& m, Fp f) {
  CoeffIter it(f, basis.size());
  while (it.next()) {
    Map g = combine(basis, it.c, m, m);
    if (g.isZeroMap()) continue;
    bool isId = true;
    for (const auto& mm : g.f)
      if (!mm.isIdentity()) {
        isId = false;
        break;
      }
    if (isId) continue;
    if (compose(g, g) == g) return g;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Map> findNontrivialIdempotent(const std::vector<Map>& basis, const Rep& m, const Limits& lim) {
  if (m.isZero() || basis.size() <= 1) return std::nullopt;
  Fp f = m.alg->field;

  // Small endomorphism spaces: scan directly.
  if (powCapped(f.p, basis.size(), 2000) <= 2000) return exhaustiveIdempotent(basis, m, f);

  for (const auto& b : basis)
    if (auto e = fittingProjector(b)) return e;
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t j = 0; j < basis.size(); ++j) {
      if (auto e = fittingProjector(compose(basis[i], basis[j]))) return e;
      if (i < j)
        for (Fel lam = 1; lam < f.p; ++lam)
          if (auto e = fittingProjector(basis[i].plus(basis[j].scaled(lam)))) return e;
    }
  std::mt19937 rng(0x5eed1234u);
  for (int t = 0; t < 24; ++t) {
    std::vector<Fel> c(basis.size());
    for (auto& x : c) x = static_cast<Fel>(rng() % f.p);
    if (auto e = fittingProjector(combine(basis, c, m, m))) return e;
  }

  if (powCapped(f.p, basis.size(), lim.enumCap) > lim.enumCap)
    fail(Errc::CapExceeded, "idempotent search space exceeds the enumeration cap");
  return exhaustiveIdempotent(basis, m, f);
}

namespace {

// A simple summand at vertex v exists iff the joint kernel of the outgoing
// arrows is not contained in the joint image of the incoming ones.
bool hasSimpleSummand(const Rep& m) {
  const auto& q = m.alg->quiver;
  Fp f = m.alg->field;
  for (int v = 0; v < q.vertexCount(); ++v) {
    if (m.dims[v] == 0) continue;
    int outRows = 0, inCols = 0;
    for (int a = 0; a < q.arrowCount(); ++a) {
      if (q.arrows[a].src == v) outRows += m.dims[q.arrows[a].tgt];
      if (q.arrows[a].tgt == v) inCols += m.dims[q.arrows[a].src];
    }
    Mat out(f, outRows, m.dims[v]);
    Mat in(f, m.dims[v], inCols);
    int ro = 0, co = 0;
    for (int a = 0; a < q.arrowCount(); ++a) {
      if (q.arrows[a].src == v) {
        const Mat& b = m.arrow[a];
        for (int i = 0; i < b.rows(); ++i)
          for (int j = 0; j < b.cols(); ++j) out.at(ro + i, j) = b.at(i, j);
        ro += b.rows();
      }
      if (q.arrows[a].tgt == v) {
        const Mat& b = m.arrow[a];
        for (int i = 0; i < b.rows(); ++i)
          for (int j = 0; j < b.cols(); ++j) in.at(i, co + j) = b.at(i, j);
        co += b.cols();
      }
    }
    Mat kb = kernelBasis(out);
    if (kb.cols() == 0) continue;
    if (rank(Mat::hcat(in, kb)) != rank(in)) return true;
  }
  return false;
}

}  // namespace

bool isIndecomposable(const Rep& m, const Limits& lim) {
  if (m.isZero()) return false;
  if (m.total() == 1) return true;
  if (hasSimpleSummand(m)) return false;
  auto basis = endBasis(m);
  return !findNontrivialIdempotent(basis, m, lim).has_value();
}

Decomposition decompose(const Rep& m, const Limits& lim) {
  Decomposition out;
  if (m.isZero()) return out;

  struct Item {
    Rep piece;
    Map incl, proj;
  };
  std::vector<Item> work;
  work.push_back({m, Map::identity(m), Map::identity(m)});
  std::vector<Factor> leaves;

  while (!work.empty()) {
    Item cur = std::move(work.back());
    work.pop_back();
    if (cur.piece.isZero()) continue;
    auto basis = endBasis(cur.piece);
    auto e = findNontrivialIdempotent(basis, cur.piece, lim);
    if (!e) {
      leaves.push_back({cur.piece, cur.incl, cur.proj});
      continue;
    }
    Map one = Map::identity(cur.piece);
    for (int half = 0; half < 2; ++half) {
      Map idem = half == 0 ? *e : one.minus(*e);
      auto kc = kernelCokernel(idem);
      // incl: img -> piece; corestriction of an idempotent restricts to the
      // identity on its image, so it serves as the retraction.
      Item next;
      next.piece = kc.img;
      next.incl = compose(cur.incl, kc.imgIncl);
      next.proj = compose(kc.corestriction, cur.proj);
      work.push_back(std::move(next));
    }
  }

  std::stable_sort(leaves.begin(), leaves.end(), [](const Factor& x, const Factor& y) {
    if (x.piece.total() != y.piece.total()) return x.piece.total() < y.piece.total();
    return x.piece.dims < y.piece.dims;
  });
  out.factors = std::move(leaves);

  std::vector<bool> used(out.factors.size(), false);
  for (size_t i = 0; i < out.factors.size(); ++i) {
    if (used[i]) continue;
    int mult = 1;
    used[i] = true;
    for (size_t j = i + 1; j < out.factors.size(); ++j) {
      if (used[j] || out.factors[j].piece.dims != out.factors[i].piece.dims) continue;
      if (isIsomorphic(out.factors[i].piece, out.factors[j].piece, lim)) {
        used[j] = true;
        ++mult;
      }
    }
    out.classes.emplace_back(static_cast<int>(i), mult);
  }
  return out;
}

std::vector<Rep> Decomposition::classReps() const {
  std::vector<Rep> out;
  for (auto [i, mult] : classes) {
    (void)mult;
    out.push_back(factors[i].piece);
  }
  return out;
}

Rep Decomposition::basicPart(std::shared_ptr<const BoundAlgebra> alg) const {
  auto reps = classReps();
  if (reps.empty()) return Rep::zero(alg);
  return directSum(alg, reps).rep;
}

int Catalog::findIso(const Rep& m, const Limits& lim) const {
  for (int i = 0; i < size(); ++i) {
    if (entries[i].dims != m.dims) continue;
    if (isIsomorphic(entries[i], m, lim)) return i;
  }
  return -1;
}

Catalog enumerateIndecomposables(std::shared_ptr<const BoundAlgebra> alg, const std::vector<int>& bound,
                                 const Limits& lim) {
  const auto& q = alg->quiver;
  if (static_cast<int>(bound.size()) != q.vertexCount()) fail(Errc::BadInput, "dimension bound length mismatch");

  Catalog cat;
  cat.alg = alg;
  cat.provenance = Provenance::EnumeratedToBound;
  cat.bound = bound;

  std::vector<std::vector<int>> dimVecs;
  std::vector<int> cur(q.vertexCount(), 0);
  std::function<void(int)> gen = [&](int v) {
    if (v == q.vertexCount()) {
      if (std::accumulate(cur.begin(), cur.end(), 0) > 0) dimVecs.push_back(cur);
      return;
    }
    for (int d = 0; d <= bound[v]; ++d) {
      cur[v] = d;
      gen(v + 1);
    }
    cur[v] = 0;
  };
  gen(0);
  std::sort(dimVecs.begin(), dimVecs.end(), [](const auto& a, const auto& b) {
    int ta = std::accumulate(a.begin(), a.end(), 0), tb = std::accumulate(b.begin(), b.end(), 0);
    if (ta != tb) return ta < tb;
    return a < b;
  });

  // Relations grouped by the last arrow they mention, so a depth-first sweep
  // over the arrow matrices can prune entire subtrees early.
  struct Check {
    std::vector<std::pair<Fel, std::vector<int>>> terms;
    int level = 0;
  };
  std::vector<Check> checks;
  for (const auto& g : alg->ideal.generators) {
    Check c;
    for (const auto& t : g.terms) {
      Fel coeff = alg->field.norm(static_cast<std::int64_t>(t.coeff));
      if (!coeff) continue;
      c.terms.push_back({coeff, t.arrows});
      for (int a : t.arrows) c.level = std::max(c.level, a);
    }
    if (!c.terms.empty()) checks.push_back(std::move(c));
  }
  for (const auto& p : alg->lengthLPaths) {
    Check c;
    c.terms.push_back({1, p.arrows});
    for (int a : p.arrows) c.level = std::max(c.level, a);
    checks.push_back(std::move(c));
  }

  for (const auto& dv : dimVecs) {
    std::uint64_t cells = 0;
    for (int a = 0; a < q.arrowCount(); ++a)
      cells += static_cast<std::uint64_t>(dv[q.arrows[a].tgt]) * dv[q.arrows[a].src];
    if (powCapped(alg->field.p, cells, lim.enumCap) > lim.enumCap) {
      std::string s = "enumeration budget exceeded at dimension vector (";
      for (size_t i = 0; i < dv.size(); ++i) s += (i ? "," : "") + std::to_string(dv[i]);
      fail(Errc::CapExceeded, s + ")");
    }

    Rep cand;
    cand.alg = alg;
    cand.dims = dv;
    for (int a = 0; a < q.arrowCount(); ++a)
      cand.arrow.push_back(Mat(alg->field, dv[q.arrows[a].tgt], dv[q.arrows[a].src]));

    auto passesLevel = [&](int level) {
      for (const auto& c : checks) {
        if (c.level != level) continue;
        Mat acc;
        bool first = true;
        for (const auto& [coeff, word] : c.terms) {
          Mat m = cand.evalWord(word).scaled(coeff);
          if (first) {
            acc = std::move(m);
            first = false;
          } else {
            acc = acc + m;
          }
        }
        if (!acc.isZero()) return false;
      }
      return true;
    };

    std::function<void(int)> sweep = [&](int a) {
      if (a == q.arrowCount()) {
        if (isIndecomposable(cand, lim)) {
          bool dup = false;
          for (const auto& e : cat.entries) {
            if (e.dims != cand.dims) continue;
            if (isIsomorphic(e, cand, lim)) {
              dup = true;
              break;
            }
          }
          if (!dup) cat.entries.push_back(cand);
        }
        return;
      }
      int nCells = cand.arrow[a].rows() * cand.arrow[a].cols();
      std::vector<std::pair<int, int>> pos;
      for (int i = 0; i < cand.arrow[a].rows(); ++i)
        for (int j = 0; j < cand.arrow[a].cols(); ++j) pos.push_back({i, j});
      while (true) {
        if (passesLevel(a)) sweep(a + 1);
        bool advanced = false;
        for (int k = nCells - 1; k >= 0; --k) {
          Fel& cell = cand.arrow[a].at(pos[k].first, pos[k].second);
          if (++cell < alg->field.p) {
            advanced = true;
            break;
          }
          cell = 0;
        }
        if (!advanced) break;
      }
      // leave the matrix zeroed for the caller
      for (auto [i, j] : pos) cand.arrow[a].at(i, j) = 0;
    };
    sweep(0);
  }

  for (size_t i = 0; i < cat.entries.size(); ++i) cat.names.push_back("M" + std::to_string(i));
  return cat;
}

std::vector<Map> radEndBasis(const Rep& m, const Limits& lim) {
  auto basis = endBasis(m);
  Fp f = m.alg->field;
  if (powCapped(f.p, basis.size(), lim.enumCap) > lim.enumCap)
    fail(Errc::CapExceeded, "endomorphism enumeration exceeds the cap");
  // For a local endomorphism ring the non-invertible elements are a subspace.
  Echelon span(f, static_cast<int>(flattenMap(Map::zero(m, m)).size()));
  std::vector<Map> out;
  CoeffIter it(f, basis.size());
  while (it.next()) {
    Map g = combine(basis, it.c, m, m);
    if (g.isIsoMap()) continue;
    auto v = flattenMap(g);
    if (span.insert(v)) out.push_back(std::move(g));
  }
  return out;
}

std::vector<Map> radHomBasis(const Rep& m, const Rep& n, const Limits& lim) {
  auto dm = decompose(m, lim);
  auto dn = decompose(n, lim);
  Fp f = m.alg->field;
  Echelon span(f, static_cast<int>(flattenMap(Map::zero(m, n)).size()));
  std::vector<Map> out;
  auto push = [&](Map g) {
    auto v = flattenMap(g);
    if (span.insert(v)) out.push_back(std::move(g));
  };
  for (const auto& fm : dm.factors)
    for (const auto& fn : dn.factors) {
      auto iso = isIsomorphic(fm.piece, fn.piece, lim);
      if (!iso) {
        for (const auto& h : homBasis(fm.piece, fn.piece)) push(compose(fn.incl, compose(h, fm.proj)));
      } else {
        for (const auto& r : radEndBasis(fm.piece, lim))
          push(compose(fn.incl, compose(*iso, compose(r, fm.proj))));
      }
    }
  return out;
}

std::vector<Map> radCompositeBasis(const Rep& m, const std::vector<Rep>& middles, const Rep& n, const Limits& lim) {
  Fp f = m.alg->field;
  Echelon span(f, static_cast<int>(flattenMap(Map::zero(m, n)).size()));
  std::vector<Map> out;
  for (const auto& z : middles) {
    auto r1 = radHomBasis(m, z, lim);
    auto r2 = radHomBasis(z, n, lim);
    for (const auto& g : r1)
      for (const auto& h : r2) {
        Map c = compose(h, g);
        auto v = flattenMap(c);
        if (span.insert(v)) out.push_back(std::move(c));
      }
  }
  return out;
}

Presentation minimalPresentation(const Rep& m) {
  Presentation out;
  Cover c0 = projCover(m);
  out.p0 = c0.p;
  out.aug = c0.aug;
  auto kc = kernelCokernel(c0.aug);
  Cover c1 = projCover(kc.ker);
  out.p1 = c1.p;
  out.d = compose(kc.kerIncl, c1.aug);
  return out;
}

OrdResolution ordinaryResolution(const Rep& m, int length) {
  OrdResolution out;
  Cover c = projCover(m);
  out.terms.push_back(c.p);
  out.aug = c.aug;
  Map cur = c.aug;
  for (int k = 0; k < length; ++k) {
    auto kc = kernelCokernel(cur);
    Cover ck = projCover(kc.ker);
    out.terms.push_back(ck.p);
    out.diffs.push_back(compose(kc.kerIncl, ck.aug));
    cur = ck.aug;
  }
  return out;
}

Rep tau(const Rep& m) {
  if (m.isZero()) return Rep::zero(m.alg);
  Presentation pr = minimalPresentation(m);
  if (pr.p1.empty()) return Rep::zero(m.alg);
  auto nk = nakayamaOnProjectives(pr.p1, pr.p0, pr.d);
  return kernelCokernel(nk.nu).ker;
}

int extDim(const Rep& m, const Rep& n, int i) {
  if (i < 1) fail(Errc::BadInput, "extDim needs i >= 1");
  OrdResolution res = ordinaryResolution(m, i + 1);
  auto bI = homBasis(res.terms[i].rep, n);
  auto bIm1 = homBasis(res.terms[i - 1].rep, n);
  auto bIp1 = homBasis(res.terms[i + 1].rep, n);
  Mat dIn = homInduced(bIm1, bI, std::nullopt, res.diffs[i - 1]);
  Mat dOut = homInduced(bI, bIp1, std::nullopt, res.diffs[i]);
  int kerDim = static_cast<int>(bI.size()) - rank(dOut);
  return kerDim - rank(dIn);
}

int ext1Dim(const Rep& m, const Rep& n) { return extDim(m, n, 1); }

bool isMinimal(const Map& f, Side side, const Limits& lim) {
  const Rep& endOf = side == Side::Right ? f.src : f.dst;
  if (endOf.isZero()) return true;
  if (f.isZeroMap()) return false;
  auto basis = endBasis(endOf);
  if (basis.empty()) return true;
  Fp fp = endOf.alg->field;

  // Annihilator { g : f o g = 0 } (right) or { g : g o f = 0 } (left); a
  // one-sided ideal, so stable powers of its elements stay inside it.
  std::vector<std::vector<Fel>> cols;
  for (const auto& b : basis) {
    Map c = side == Side::Right ? compose(f, b) : compose(b, f);
    cols.push_back(flattenMap(c));
  }
  Mat sys = Mat::fromCols(fp, static_cast<int>(cols[0].size()), cols);
  Mat ker = kernelBasis(sys);
  if (ker.cols() == 0) return true;
  std::vector<Map> ann;
  for (int c = 0; c < ker.cols(); ++c) {
    Map g = Map::zero(endOf, endOf);
    for (size_t i = 0; i < basis.size(); ++i)
      if (ker.at(static_cast<int>(i), c)) g = g.plus(basis[i].scaled(ker.at(static_cast<int>(i), c)));
    ann.push_back(std::move(g));
  }
  for (const auto& g : ann)
    if (fittingProjector(g)) return false;
  if (powCapped(fp.p, ann.size(), lim.enumCap) > lim.enumCap)
    fail(Errc::CapExceeded, "minimality idempotent search exceeds the cap");
  CoeffIter it(fp, ann.size());
  while (it.next()) {
    Map g = combine(ann, it.c, endOf, endOf);
    if (g.isZeroMap()) continue;
    if (compose(g, g) == g) return false;
  }
  return true;
}

}  // namespace rt
