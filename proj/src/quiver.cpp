#include "reltilt/quiver.hpp"

#include <algorithm>
#include <set>

namespace rt {

int Quiver::vertexIndex(const std::string& name) const {
  for (int i = 0; i < vertexCount(); ++i)
    if (vertices[i] == name) return i;
  return -1;
}

int Quiver::arrowIndex(const std::string& name) const {
  for (int i = 0; i < arrowCount(); ++i)
    if (arrows[i].name == name) return i;
  return -1;
}

void Quiver::validate() const {
  std::set<std::string> vn(vertices.begin(), vertices.end());
  if (vn.size() != vertices.size()) fail(Errc::BadInput, "duplicate vertex id");
  std::set<std::string> an;
  for (const auto& a : arrows) {
    if (!an.insert(a.name).second) fail(Errc::BadInput, "duplicate arrow name: " + a.name);
    if (a.src < 0 || a.src >= vertexCount() || a.tgt < 0 || a.tgt >= vertexCount())
      fail(Errc::BadInput, "arrow endpoint out of range: " + a.name);
    if (vn.count(a.name)) fail(Errc::BadInput, "arrow name collides with a vertex: " + a.name);
  }
}

std::vector<Path> enumeratePaths(const Quiver& q, int maxLen) {
  std::vector<Path> out;
  for (int v = 0; v < q.vertexCount(); ++v) out.push_back(Path{v, v, {}});
  std::vector<Path> layer = out;
  for (int len = 1; len <= maxLen; ++len) {
    std::vector<Path> next;
    for (const auto& p : layer)
      for (int a = 0; a < q.arrowCount(); ++a) {
        if (q.arrows[a].src != p.tgt) continue;
        Path np = p;
        np.arrows.push_back(a);
        np.tgt = q.arrows[a].tgt;
        next.push_back(std::move(np));
      }
    // Lexicographic within a fixed length (extension order already is).
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
    if (layer.empty()) break;
    if (out.size() > 200000) fail(Errc::BadInput, "path space too large for the nilpotency bound");
  }
  return out;
}

namespace {

int findPathIndex(const std::vector<Path>& paths, const std::vector<int>& arrows) {
  for (size_t i = 0; i < paths.size(); ++i)
    if (paths[i].arrows == arrows) return static_cast<int>(i);
  return -1;
}

bool composable(const Quiver& q, const std::vector<int>& arrows, int* src, int* tgt) {
  if (arrows.empty()) return false;
  for (size_t k = 0; k + 1 < arrows.size(); ++k)
    if (q.arrows[arrows[k]].tgt != q.arrows[arrows[k + 1]].src) return false;
  *src = q.arrows[arrows.front()].src;
  *tgt = q.arrows[arrows.back()].tgt;
  return true;
}

}  // namespace

std::vector<std::pair<int, Fel>> BoundAlgebra::classOfWord(const std::vector<int>& arrows) const {
  if (arrows.empty()) fail(Errc::Internal, "classOfWord: empty word (use an idempotent)");
  int src, tgt;
  if (!composable(quiver, arrows, &src, &tgt)) return {};
  if (static_cast<int>(arrows.size()) >= ideal.nilpotency) return {};
  int idx = findPathIndex(allPaths, arrows);
  if (idx < 0) fail(Errc::Internal, "classOfWord: path not enumerated");
  std::vector<Fel> v(allPaths.size(), 0);
  v[idx] = 1;
  v = idealSpan.reduce(std::move(v));
  std::vector<std::pair<int, Fel>> out;
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i]) out.emplace_back(posInBasis[i], v[i]);
  return out;
}

std::shared_ptr<const BoundAlgebra> buildAlgebra(const Quiver& q, const RelationIdeal& rel, Fp f) {
  q.validate();
  if (rel.nilpotency < 2) fail(Errc::BadInput, "nilpotency degree must be >= 2");

  auto algp = std::make_shared<BoundAlgebra>();
  BoundAlgebra& alg = *algp;
  alg.field = f;
  alg.quiver = q;
  alg.ideal = rel;

  const int L = rel.nilpotency;
  auto upTo = enumeratePaths(q, L);
  for (const auto& p : upTo) {
    if (p.length() < L)
      alg.allPaths.push_back(p);
    else
      alg.lengthLPaths.push_back(p);
  }
  const int n = static_cast<int>(alg.allPaths.size());

  // Validate relation generators and collect their coordinate vectors.
  struct Gen {
    int src, tgt;
    std::vector<std::pair<std::vector<int>, Fel>> terms;  // arrow word, coeff
  };
  std::vector<Gen> gens;
  for (const auto& g : rel.generators) {
    if (g.terms.empty()) fail(Errc::BadInput, "empty relation generator");
    Gen gg{-1, -1, {}};
    for (const auto& t : g.terms) {
      if (t.arrows.size() < 2) fail(Errc::BadInput, "relation generator contains a path of length < 2");
      int src, tgt;
      if (!composable(q, t.arrows, &src, &tgt)) fail(Errc::BadInput, "non-composable path in relation");
      if (gg.src < 0) {
        gg.src = src;
        gg.tgt = tgt;
      } else if (gg.src != src || gg.tgt != tgt) {
        fail(Errc::BadInput, "relation generator mixes non-parallel paths");
      }
      Fel c = f.norm(static_cast<std::int64_t>(t.coeff));
      if (c) gg.terms.emplace_back(t.arrows, c);
    }
    if (!gg.terms.empty()) gens.push_back(std::move(gg));
  }

  // Span of the two-sided ideal the generators produce inside paths < L.
  Echelon span(f, n);
  for (const auto& g : gens) {
    for (const auto& left : alg.allPaths) {
      if (left.src != g.tgt) continue;
      for (const auto& right : alg.allPaths) {
        if (right.tgt != g.src) continue;
        std::vector<Fel> vec(n, 0);
        bool any = false;
        for (const auto& [word, c] : g.terms) {
          std::vector<int> w = right.arrows;
          w.insert(w.end(), word.begin(), word.end());
          w.insert(w.end(), left.arrows.begin(), left.arrows.end());
          if (static_cast<int>(w.size()) >= L) continue;
          int idx = findPathIndex(alg.allPaths, w);
          if (idx < 0) fail(Errc::Internal, "ideal multiple not enumerated");
          vec[idx] = f.add(vec[idx], c);
          any = true;
        }
        if (any) span.insert(std::move(vec));
      }
    }
  }
  alg.idealSpan = span;

  alg.posInBasis.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    if (!span.isPivot(i)) {
      alg.posInBasis[i] = static_cast<int>(alg.basisOfAll.size());
      alg.basisOfAll.push_back(i);
    }
  }

  // Admissibility: the trivial paths and arrows must survive.
  alg.idemBasisPos.assign(q.vertexCount(), -1);
  alg.arrowBasisPos.assign(q.arrowCount(), -1);
  for (int b = 0; b < alg.dim(); ++b) {
    const Path& p = alg.basisPath(b);
    if (p.length() == 0) alg.idemBasisPos[p.src] = b;
    if (p.length() == 1) alg.arrowBasisPos[p.arrows[0]] = b;
  }
  for (int v = 0; v < q.vertexCount(); ++v)
    if (alg.idemBasisPos[v] < 0) fail(Errc::BadInput, "ideal eliminates a vertex idempotent (non-admissible)");
  for (int a = 0; a < q.arrowCount(); ++a)
    if (alg.arrowBasisPos[a] < 0) fail(Errc::BadInput, "ideal eliminates an arrow (non-admissible)");

  // Structure constants on the residue-class basis.
  const int d = alg.dim();
  alg.mult.assign(d, std::vector<std::vector<std::pair<int, Fel>>>(d));
  for (int i = 0; i < d; ++i) {
    const Path& pi = alg.basisPath(i);
    for (int j = 0; j < d; ++j) {
      const Path& pj = alg.basisPath(j);
      if (pj.tgt != pi.src) continue;  // path_j applied first
      if (pi.length() + pj.length() >= L) continue;
      if (pi.length() == 0 && pj.length() == 0) {
        alg.mult[i][j] = {{i, 1}};
        continue;
      }
      std::vector<int> w = pj.arrows;
      w.insert(w.end(), pi.arrows.begin(), pi.arrows.end());
      alg.mult[i][j] = alg.classOfWord(w);
    }
  }
  return algp;
}

}  // namespace rt
