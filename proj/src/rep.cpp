#include "reltilt/rep.hpp"

#include <algorithm>
#include <numeric>

namespace rt {

int Rep::total() const { return std::accumulate(dims.begin(), dims.end(), 0); }

Rep Rep::zero(std::shared_ptr<const BoundAlgebra> alg) {
  Rep r;
  r.alg = alg;
  r.dims.assign(alg->quiver.vertexCount(), 0);
  for (const auto& a : alg->quiver.arrows) r.arrow.push_back(Mat(alg->field, 0, 0)), (void)a;
  return r;
}

Mat Rep::evalWord(const std::vector<int>& word) const {
  if (word.empty()) fail(Errc::Internal, "evalWord: empty word");
  Mat m = arrow[word[0]];
  for (size_t k = 1; k < word.size(); ++k) m = arrow[word[k]] * m;
  return m;
}

Mat Rep::evalPath(const Path& p) const {
  if (p.arrows.empty()) return Mat::identity(alg->field, dims[p.src]);
  return evalWord(p.arrows);
}

bool Rep::satisfiesRelations() const {
  const auto& q = alg->quiver;
  for (const auto& g : alg->ideal.generators) {
    int src = -1, tgt = -1;
    Mat acc;
    bool first = true;
    for (const auto& t : g.terms) {
      Fel c = alg->field.norm(static_cast<std::int64_t>(t.coeff));
      if (!c) continue;
      Mat m = evalWord(t.arrows).scaled(c);
      if (first) {
        acc = m;
        first = false;
        src = q.arrows[t.arrows.front()].src;
        tgt = q.arrows[t.arrows.back()].tgt;
      } else {
        acc = acc + m;
      }
    }
    (void)src;
    (void)tgt;
    if (!first && !acc.isZero()) return false;
  }
  for (const auto& p : alg->lengthLPaths)
    if (!evalWord(p.arrows).isZero()) return false;
  return true;
}

void Rep::validate() const {
  const auto& q = alg->quiver;
  if (static_cast<int>(dims.size()) != q.vertexCount()) fail(Errc::BadInput, "dims length mismatch");
  if (static_cast<int>(arrow.size()) != q.arrowCount()) fail(Errc::BadInput, "arrow map count mismatch");
  for (int a = 0; a < q.arrowCount(); ++a)
    if (arrow[a].rows() != dims[q.arrows[a].tgt] || arrow[a].cols() != dims[q.arrows[a].src])
      fail(Errc::BadInput, "arrow matrix shape mismatch: " + q.arrows[a].name);
  if (!satisfiesRelations()) fail(Errc::BadInput, "module violates the relations");
}

Map Map::zero(const Rep& src, const Rep& dst) {
  Map m;
  m.src = src;
  m.dst = dst;
  for (int v = 0; v < src.alg->quiver.vertexCount(); ++v)
    m.f.push_back(Mat(src.alg->field, dst.dims[v], src.dims[v]));
  return m;
}

Map Map::identity(const Rep& r) {
  Map m;
  m.src = r;
  m.dst = r;
  for (int v = 0; v < r.alg->quiver.vertexCount(); ++v) m.f.push_back(Mat::identity(r.alg->field, r.dims[v]));
  return m;
}

bool Map::isZeroMap() const {
  for (const auto& m : f)
    if (!m.isZero()) return false;
  return true;
}

bool Map::intertwines() const {
  const auto& q = src.alg->quiver;
  for (int a = 0; a < q.arrowCount(); ++a) {
    int v = q.arrows[a].src, w = q.arrows[a].tgt;
    if (!(f[w] * src.arrow[a] == dst.arrow[a] * f[v])) return false;
  }
  return true;
}

void Map::validate() const {
  if (src.alg != dst.alg) fail(Errc::BadInput, "map across different algebras");
  for (int v = 0; v < src.alg->quiver.vertexCount(); ++v)
    if (f[v].rows() != dst.dims[v] || f[v].cols() != src.dims[v])
      fail(Errc::BadInput, "map vertex matrix shape mismatch");
  if (!intertwines()) fail(Errc::BadInput, "map does not intertwine the arrow actions");
}

Map Map::scaled(Fel c) const {
  Map m = *this;
  for (auto& x : m.f) x = x.scaled(c);
  return m;
}

Map Map::plus(const Map& o) const {
  Map m = *this;
  for (size_t v = 0; v < f.size(); ++v) m.f[v] = f[v] + o.f[v];
  return m;
}

Map Map::minus(const Map& o) const {
  Map m = *this;
  for (size_t v = 0; v < f.size(); ++v) m.f[v] = f[v] - o.f[v];
  return m;
}

bool Map::vertexwiseInjective() const {
  for (const auto& m : f)
    if (rank(m) != m.cols()) return false;
  return true;
}

bool Map::vertexwiseSurjective() const {
  for (const auto& m : f)
    if (rank(m) != m.rows()) return false;
  return true;
}

bool Map::isIsoMap() const {
  for (size_t v = 0; v < f.size(); ++v) {
    if (f[v].rows() != f[v].cols()) return false;
    if (rank(f[v]) != f[v].rows()) return false;
  }
  return true;
}

Map compose(const Map& g, const Map& f) {
  Map m;
  m.src = f.src;
  m.dst = g.dst;
  for (size_t v = 0; v < f.f.size(); ++v) m.f.push_back(g.f[v] * f.f[v]);
  return m;
}

SumRep directSum(std::shared_ptr<const BoundAlgebra> alg, const std::vector<Rep>& parts) {
  const auto& q = alg->quiver;
  SumRep out;
  out.rep.alg = alg;
  out.rep.dims.assign(q.vertexCount(), 0);
  std::vector<std::vector<int>> offs(parts.size(), std::vector<int>(q.vertexCount(), 0));
  for (size_t k = 0; k < parts.size(); ++k) {
    if (parts[k].alg != alg) fail(Errc::BadInput, "direct sum across different algebras");
    for (int v = 0; v < q.vertexCount(); ++v) {
      offs[k][v] = out.rep.dims[v];
      out.rep.dims[v] += parts[k].dims[v];
    }
  }
  for (int a = 0; a < q.arrowCount(); ++a) {
    int v = q.arrows[a].src, w = q.arrows[a].tgt;
    Mat m(alg->field, out.rep.dims[w], out.rep.dims[v]);
    for (size_t k = 0; k < parts.size(); ++k) {
      const Mat& blk = parts[k].arrow[a];
      for (int i = 0; i < blk.rows(); ++i)
        for (int j = 0; j < blk.cols(); ++j) m.at(offs[k][w] + i, offs[k][v] + j) = blk.at(i, j);
    }
    out.rep.arrow.push_back(std::move(m));
  }
  for (size_t k = 0; k < parts.size(); ++k) {
    Map in = Map::zero(parts[k], out.rep);
    Map pr = Map::zero(out.rep, parts[k]);
    for (int v = 0; v < q.vertexCount(); ++v)
      for (int i = 0; i < parts[k].dims[v]; ++i) {
        in.f[v].at(offs[k][v] + i, i) = 1;
        pr.f[v].at(i, offs[k][v] + i) = 1;
      }
    out.inj.push_back(std::move(in));
    out.proj.push_back(std::move(pr));
  }
  return out;
}

KerCoker kernelCokernel(const Map& f) {
  auto alg = f.src.alg;
  const auto& q = alg->quiver;
  Fp fp = alg->field;
  KerCoker out;

  std::vector<Mat> kerB, imgB;
  std::vector<Echelon> imgRowSpan;
  for (int v = 0; v < q.vertexCount(); ++v) {
    kerB.push_back(kernelBasis(f.f[v]));
    // Canonical image basis: RREF rows of the transpose, transposed back.
    Rref rr = rref(f.f[v].transpose());
    int r = static_cast<int>(rr.pivots.size());
    Mat img(fp, f.dst.dims[v], r);
    Echelon span(fp, f.dst.dims[v]);
    for (int i = 0; i < r; ++i) {
      auto row = rr.m.row(i);
      for (int j = 0; j < f.dst.dims[v]; ++j) img.at(j, i) = row[j];
      span.insert(row);
    }
    imgB.push_back(std::move(img));
    imgRowSpan.push_back(std::move(span));
  }

  out.ker.alg = alg;
  out.img.alg = alg;
  out.coker.alg = alg;
  for (int v = 0; v < q.vertexCount(); ++v) {
    out.ker.dims.push_back(kerB[v].cols());
    out.img.dims.push_back(imgB[v].cols());
    out.coker.dims.push_back(f.dst.dims[v] - imgB[v].cols());
  }

  // Complement coordinates for the cokernel.
  std::vector<std::vector<int>> cofree(q.vertexCount());
  for (int v = 0; v < q.vertexCount(); ++v)
    for (int j = 0; j < f.dst.dims[v]; ++j)
      if (!imgRowSpan[v].isPivot(j)) cofree[v].push_back(j);

  auto cokerCoordsOf = [&](int v, std::vector<Fel> x) {
    x = imgRowSpan[v].reduce(std::move(x));
    std::vector<Fel> c;
    for (int j : cofree[v]) c.push_back(x[j]);
    return c;
  };

  for (int a = 0; a < q.arrowCount(); ++a) {
    int v = q.arrows[a].src, w = q.arrows[a].tgt;
    {  // kernel action: solve K_w Y = M(a) K_v
      Mat rhs = f.src.arrow[a] * kerB[v];
      auto y = solveMatrix(kerB[w], rhs);
      if (!y) fail(Errc::Internal, "kernel is not arrow-stable");
      out.ker.arrow.push_back(std::move(*y));
    }
    {  // image action
      Mat rhs = f.dst.arrow[a] * imgB[v];
      auto y = solveMatrix(imgB[w], rhs);
      if (!y) fail(Errc::Internal, "image is not arrow-stable");
      out.img.arrow.push_back(std::move(*y));
    }
    {  // cokernel action on complement classes
      Mat m(fp, static_cast<int>(cofree[w].size()), static_cast<int>(cofree[v].size()));
      for (size_t jj = 0; jj < cofree[v].size(); ++jj) {
        std::vector<Fel> e(f.dst.dims[v], 0);
        e[cofree[v][jj]] = 1;
        auto img = f.dst.arrow[a].applyTo(e);
        auto c = cokerCoordsOf(w, std::move(img));
        for (size_t ii = 0; ii < c.size(); ++ii) m.at(static_cast<int>(ii), static_cast<int>(jj)) = c[ii];
      }
      out.coker.arrow.push_back(std::move(m));
    }
  }

  out.kerIncl.src = out.ker;
  out.kerIncl.dst = f.src;
  out.imgIncl.src = out.img;
  out.imgIncl.dst = f.dst;
  out.cokerProj.src = f.dst;
  out.cokerProj.dst = out.coker;
  out.corestriction.src = f.src;
  out.corestriction.dst = out.img;
  for (int v = 0; v < q.vertexCount(); ++v) {
    out.kerIncl.f.push_back(kerB[v]);
    out.imgIncl.f.push_back(imgB[v]);
    Mat proj(fp, out.coker.dims[v], f.dst.dims[v]);
    for (int j = 0; j < f.dst.dims[v]; ++j) {
      std::vector<Fel> e(f.dst.dims[v], 0);
      e[j] = 1;
      auto c = cokerCoordsOf(v, std::move(e));
      for (size_t ii = 0; ii < c.size(); ++ii) proj.at(static_cast<int>(ii), j) = c[ii];
    }
    out.cokerProj.f.push_back(std::move(proj));
    auto co = solveMatrix(imgB[v], f.f[v]);
    if (!co) fail(Errc::Internal, "corestriction solve failed");
    out.corestriction.f.push_back(std::move(*co));
  }
  return out;
}

StdModule standardModule(std::shared_ptr<const BoundAlgebra> alg, StdKind kind, int v) {
  const auto& q = alg->quiver;
  if (v < 0 || v >= q.vertexCount()) fail(Errc::BadInput, "unknown vertex");
  StdModule out;
  out.kind = kind;
  out.v = v;
  out.rep.alg = alg;
  out.basisAt.assign(q.vertexCount(), {});

  if (kind == StdKind::Simple) {
    out.rep.dims.assign(q.vertexCount(), 0);
    out.rep.dims[v] = 1;
    for (int a = 0; a < q.arrowCount(); ++a)
      out.rep.arrow.push_back(Mat(alg->field, out.rep.dims[q.arrows[a].tgt], out.rep.dims[q.arrows[a].src]));
    out.basisAt[v].push_back(alg->idemBasisPos[v]);
    return out;
  }

  for (int b = 0; b < alg->dim(); ++b) {
    const Path& p = alg->basisPath(b);
    if (kind == StdKind::Proj && p.src == v) out.basisAt[p.tgt].push_back(b);
    if (kind == StdKind::Inj && p.tgt == v) out.basisAt[p.src].push_back(b);
  }
  out.rep.dims.assign(q.vertexCount(), 0);
  for (int w = 0; w < q.vertexCount(); ++w) out.rep.dims[w] = static_cast<int>(out.basisAt[w].size());

  auto posWithin = [&](int w, int basisPos) {
    const auto& lst = out.basisAt[w];
    for (size_t i = 0; i < lst.size(); ++i)
      if (lst[i] == basisPos) return static_cast<int>(i);
    return -1;
  };

  for (int a = 0; a < q.arrowCount(); ++a) {
    int w = q.arrows[a].src, u = q.arrows[a].tgt;
    Mat m(alg->field, out.rep.dims[u], out.rep.dims[w]);
    int aPos = alg->arrowBasisPos[a];
    if (kind == StdKind::Proj) {
      // Left composition: q |-> class(a after q).
      for (size_t j = 0; j < out.basisAt[w].size(); ++j) {
        for (const auto& [b2, c] : alg->multiply(aPos, out.basisAt[w][j])) {
          int i = posWithin(u, b2);
          if (i < 0) fail(Errc::Internal, "projective action left its block");
          m.at(i, static_cast<int>(j)) = c;
        }
      }
    } else {
      // Dual path-shortening: entry[x][q'] = coeff of q' in class(x after a).
      for (size_t i = 0; i < out.basisAt[u].size(); ++i) {
        for (const auto& [b2, c] : alg->multiply(out.basisAt[u][i], aPos)) {
          int j = posWithin(w, b2);
          if (j < 0) fail(Errc::Internal, "injective action left its block");
          m.at(static_cast<int>(i), j) = c;
        }
      }
    }
    out.rep.arrow.push_back(std::move(m));
  }
  return out;
}

StdSum makeStdSum(std::shared_ptr<const BoundAlgebra> alg, StdKind kind, const std::vector<int>& verts) {
  StdSum out;
  out.kind = kind;
  out.verts = verts;
  std::vector<Rep> parts;
  for (int v : verts) {
    out.mods.push_back(standardModule(alg, kind, v));
    parts.push_back(out.mods.back().rep);
  }
  const auto& q = alg->quiver;
  out.colOffset.assign(verts.size(), std::vector<int>(q.vertexCount(), 0));
  std::vector<int> running(q.vertexCount(), 0);
  for (size_t k = 0; k < verts.size(); ++k)
    for (int w = 0; w < q.vertexCount(); ++w) {
      out.colOffset[k][w] = running[w];
      running[w] += out.mods[k].rep.dims[w];
    }
  out.rep = parts.empty() ? Rep::zero(alg) : directSum(alg, parts).rep;
  return out;
}

NakayamaResult nakayamaOnProjectives(const StdSum& from, const StdSum& to, const Map& d) {
  if (from.kind != StdKind::Proj || to.kind != StdKind::Proj)
    fail(Errc::BadInput, "nakayama transport needs explicit projective sums");
  auto alg = d.src.alg;
  const auto& q = alg->quiver;
  Fp fp = alg->field;

  NakayamaResult out;
  out.src = makeStdSum(alg, StdKind::Inj, from.verts);
  out.dst = makeStdSum(alg, StdKind::Inj, to.verts);
  out.nu = Map::zero(out.src.rep, out.dst.rep);

  auto posWithin = [&](const StdModule& m, int w, int basisPos) {
    const auto& lst = m.basisAt[w];
    for (size_t i = 0; i < lst.size(); ++i)
      if (lst[i] == basisPos) return static_cast<int>(i);
    return -1;
  };

  for (size_t a = 0; a < from.verts.size(); ++a) {
    int va = from.verts[a];
    // Column of e_{va} inside summand a.
    int eCol = from.colOffset[a][va] + posWithin(from.mods[a], va, alg->idemBasisPos[va]);
    for (size_t b = 0; b < to.verts.size(); ++b) {
      // z in e_{va} A e_{wb}: the image of e_{va} in summand b, read off in
      // the path basis of P(wb) at vertex va.
      std::vector<std::pair<int, Fel>> z;
      for (size_t r = 0; r < to.mods[b].basisAt[va].size(); ++r) {
        Fel c = d.f[va].at(to.colOffset[b][va] + static_cast<int>(r), eCol);
        if (c) z.emplace_back(to.mods[b].basisAt[va][r], c);
      }
      if (z.empty()) continue;
      // nu-block I(va) -> I(wb): at vertex u, entry[x][q'] = coeff of q' in
      // class(z after x) summed over the z-terms.
      for (int u = 0; u < q.vertexCount(); ++u) {
        const auto& rowsB = out.dst.mods[b].basisAt[u];  // paths u -> wb
        const auto& colsA = out.src.mods[a].basisAt[u];  // paths u -> va
        for (size_t xi = 0; xi < rowsB.size(); ++xi) {
          for (const auto& [zb, zc] : z) {
            for (const auto& [prod, pc] : alg->multiply(zb, rowsB[xi])) {
              int qj = -1;
              for (size_t t = 0; t < colsA.size(); ++t)
                if (colsA[t] == prod) qj = static_cast<int>(t);
              if (qj < 0) fail(Errc::Internal, "nakayama block left its path window");
              int row = out.dst.colOffset[b][u] + static_cast<int>(xi);
              int col = out.src.colOffset[a][u] + qj;
              out.nu.f[u].at(row, col) = fp.add(out.nu.f[u].at(row, col), fp.mul(zc, pc));
            }
          }
        }
      }
    }
  }
  return out;
}

TopData topOf(const Rep& m) {
  const auto& q = m.alg->quiver;
  TopData out;
  for (int v = 0; v < q.vertexCount(); ++v) out.rad.emplace_back(m.alg->field, m.dims[v]);
  for (int a = 0; a < q.arrowCount(); ++a) {
    int w = q.arrows[a].tgt;
    for (int j = 0; j < m.arrow[a].cols(); ++j) out.rad[w].insert(m.arrow[a].col(j));
  }
  out.topCoords.assign(q.vertexCount(), {});
  out.topDims.assign(q.vertexCount(), 0);
  for (int v = 0; v < q.vertexCount(); ++v) {
    for (int j = 0; j < m.dims[v]; ++j)
      if (!out.rad[v].isPivot(j)) out.topCoords[v].push_back(j);
    out.topDims[v] = static_cast<int>(out.topCoords[v].size());
  }
  return out;
}

Cover projCover(const Rep& m) {
  auto alg = m.alg;
  const auto& q = alg->quiver;
  TopData top = topOf(m);

  std::vector<int> verts;
  std::vector<std::vector<Fel>> gens;  // chosen top representatives, as coordinate vectors
  for (int v = 0; v < q.vertexCount(); ++v)
    for (int j : top.topCoords[v]) {
      verts.push_back(v);
      std::vector<Fel> e(m.dims[v], 0);
      e[j] = 1;
      gens.push_back(std::move(e));
    }

  Cover out;
  out.p = makeStdSum(alg, StdKind::Proj, verts);
  out.aug = Map::zero(out.p.rep, m);
  for (size_t k = 0; k < verts.size(); ++k) {
    // P(v) -> m, e_v |-> gen; a path q: v -> w sends to M(q) * gen.
    const StdModule& pm = out.p.mods[k];
    for (int w = 0; w < q.vertexCount(); ++w) {
      for (size_t col = 0; col < pm.basisAt[w].size(); ++col) {
        const Path& path = alg->basisPath(pm.basisAt[w][col]);
        auto val = m.evalPath(path).applyTo(gens[k]);
        for (int i = 0; i < m.dims[w]; ++i)
          out.aug.f[w].at(i, out.p.colOffset[k][w] + static_cast<int>(col)) = val[i];
      }
    }
  }
  return out;
}

}  // namespace rt
