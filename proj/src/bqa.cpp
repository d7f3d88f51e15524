#include "reltilt/bqa.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace rt {

namespace {

struct Tok {
  std::string s;
  int col = 0;
};

std::vector<Tok> tokenize(const std::string& line) {
  std::vector<Tok> out;
  size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#') ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i + 1)});
    i = j;
  }
  return out;
}

[[noreturn]] void perr(int line, int col, const std::string& msg) {
  fail(Errc::Parse, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
}

long long parseInt(const Tok& t, int line) {
  try {
    size_t pos = 0;
    long long v = std::stoll(t.s, &pos);
    if (pos != t.s.size()) perr(line, t.col, "expected an integer, got '" + t.s + "'");
    return v;
  } catch (const Error&) {
    throw;
  } catch (...) {
    perr(line, t.col, "expected an integer, got '" + t.s + "'");
  }
}

// Parses [[a,b],[c,d]] possibly containing spaces (already split into tokens);
// rejoins and walks characters.
Mat parseMatrix(const std::string& text, Fp f, int rows, int cols, int line, int col) {
  Mat m(f, rows, cols);
  size_t i = 0;
  auto skipWs = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto expect = [&](char c) {
    skipWs();
    if (i >= text.size() || text[i] != c) perr(line, col, std::string("expected '") + c + "' in matrix literal");
    ++i;
  };
  expect('[');
  for (int r = 0; r < rows; ++r) {
    expect('[');
    for (int c = 0; c < cols; ++c) {
      skipWs();
      size_t j = i;
      if (j < text.size() && (text[j] == '-' || text[j] == '+')) ++j;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j == i) perr(line, col, "expected a matrix entry");
      long long v = std::stoll(text.substr(i, j - i));
      m.at(r, c) = f.norm(v);
      i = j;
      if (c + 1 < cols) expect(',');
    }
    expect(']');
    if (r + 1 < rows) expect(',');
  }
  expect(']');
  skipWs();
  if (i != text.size()) perr(line, col, "trailing characters after matrix literal");
  return m;
}

}  // namespace

ParsedFile parseAlgebraFile(const std::string& text, std::optional<std::uint32_t> overrideP) {
  std::istringstream in(text);
  std::string raw;
  int lineNo = 0;

  std::optional<Fp> field;
  Quiver quiver;
  RelationIdeal ideal;
  bool sawRelations = false;
  struct PendingModule {
    std::string name;
    std::vector<int> dims;
    std::map<std::string, std::pair<std::string, std::pair<int, int>>> matrices;  // arrow -> (literal, (line, col))
    int line = 0;
  };
  std::vector<PendingModule> modules;
  std::vector<std::string> generator;
  std::optional<std::vector<int>> catalogBound;
  std::optional<std::vector<std::string>> catalogExplicit;

  enum class Sec { TopLevel, Quiver, Relations, Module, Generator };
  Sec sec = Sec::TopLevel;
  PendingModule curMod;

  while (std::getline(in, raw)) {
    ++lineNo;
    auto toks = tokenize(raw);
    if (toks.empty()) continue;
    const std::string& head = toks[0].s;

    if (sec == Sec::Quiver) {
      if (head == "end") {
        sec = Sec::TopLevel;
      } else if (head == "vertex") {
        if (toks.size() != 2) perr(lineNo, toks[0].col, "vertex takes one id");
        quiver.vertices.push_back(toks[1].s);
      } else if (head == "arrow") {
        // arrow <name> : <src> -> <tgt>
        if (toks.size() != 6 || toks[2].s != ":" || toks[4].s != "->")
          perr(lineNo, toks[0].col, "expected: arrow <name> : <src> -> <tgt>");
        int s = quiver.vertexIndex(toks[3].s), t = quiver.vertexIndex(toks[5].s);
        if (s < 0) perr(lineNo, toks[3].col, "unknown vertex '" + toks[3].s + "'");
        if (t < 0) perr(lineNo, toks[5].col, "unknown vertex '" + toks[5].s + "'");
        quiver.arrows.push_back(Arrow{toks[1].s, s, t});
      } else {
        perr(lineNo, toks[0].col, "unexpected directive in quiver block: " + head);
      }
      continue;
    }
    if (sec == Sec::Relations) {
      if (head == "end") {
        sec = Sec::TopLevel;
      } else if (head == "nilpotency") {
        if (toks.size() != 2) perr(lineNo, toks[0].col, "nilpotency takes one integer");
        ideal.nilpotency = static_cast<int>(parseInt(toks[1], lineNo));
      } else if (head == "rel") {
        // rel <coeff>*<arrow> <arrow>... [+ ...]; written paths apply right to
        // left. Signed coefficients are stashed (sign in bit 31) and reduced
        // against the field once it is pinned.
        Relation rel;
        size_t i = 1;
        while (i < toks.size()) {
          auto star = toks[i].s.find('*');
          if (star == std::string::npos) perr(lineNo, toks[i].col, "expected <coeff>*<arrow>");
          long long coeff = 0;
          try {
            coeff = std::stoll(toks[i].s.substr(0, star));
          } catch (...) {
            perr(lineNo, toks[i].col, "bad relation coefficient");
          }
          std::vector<std::string> written;
          written.push_back(toks[i].s.substr(star + 1));
          ++i;
          while (i < toks.size() && toks[i].s != "+") written.push_back(toks[i++].s);
          if (i < toks.size() && toks[i].s == "+") ++i;
          PathTerm term;
          for (auto it = written.rbegin(); it != written.rend(); ++it) {
            int a = quiver.arrowIndex(*it);
            if (a < 0) perr(lineNo, toks[0].col, "unknown arrow '" + *it + "' in relation");
            term.arrows.push_back(a);
          }
          std::uint32_t mag = static_cast<std::uint32_t>(coeff < 0 ? -coeff : coeff) & 0x7fffffffu;
          term.coeff = coeff < 0 ? (0x80000000u | mag) : mag;
          rel.terms.push_back(std::move(term));
        }
        ideal.generators.push_back(std::move(rel));
      } else {
        perr(lineNo, toks[0].col, "unexpected directive in relations block: " + head);
      }
      continue;
    }
    if (sec == Sec::Module) {
      if (head == "end") {
        modules.push_back(curMod);
        sec = Sec::TopLevel;
      } else if (head == "dims") {
        for (size_t i = 1; i < toks.size(); ++i) curMod.dims.push_back(static_cast<int>(parseInt(toks[i], lineNo)));
      } else if (head == "matrix") {
        // matrix <arrow> = [[..],[..]]
        if (toks.size() < 4 || toks[2].s != "=") perr(lineNo, toks[0].col, "expected: matrix <arrow> = [[...]]");
        std::string lit;
        for (size_t i = 3; i < toks.size(); ++i) lit += toks[i].s;
        curMod.matrices[toks[1].s] = {lit, {lineNo, toks[3].col}};
      } else {
        perr(lineNo, toks[0].col, "unexpected directive in module block: " + head);
      }
      continue;
    }
    if (sec == Sec::Generator) {
      if (head == "end") {
        sec = Sec::TopLevel;
      } else if (head == "summand") {
        if (toks.size() != 2) perr(lineNo, toks[0].col, "summand takes one module name");
        generator.push_back(toks[1].s);
      } else {
        perr(lineNo, toks[0].col, "unexpected directive in generator block: " + head);
      }
      continue;
    }

    // Top level.
    if (head == "field") {
      if (toks.size() != 2) perr(lineNo, toks[0].col, "field takes one prime");
      field = Fp::make(static_cast<std::uint32_t>(parseInt(toks[1], lineNo)));
    } else if (head == "quiver") {
      sec = Sec::Quiver;
    } else if (head == "relations") {
      sec = Sec::Relations;
      sawRelations = true;
    } else if (head == "module") {
      if (toks.size() != 2) perr(lineNo, toks[0].col, "module takes one name");
      curMod = PendingModule{};
      curMod.name = toks[1].s;
      curMod.line = lineNo;
      sec = Sec::Module;
    } else if (head == "generator") {
      sec = Sec::Generator;
    } else if (head == "catalog") {
      if (toks.size() >= 2 && toks[1].s == "bound") {
        std::vector<int> b;
        for (size_t i = 2; i < toks.size(); ++i) b.push_back(static_cast<int>(parseInt(toks[i], lineNo)));
        catalogBound = b;
      } else if (toks.size() >= 2 && toks[1].s == "explicit") {
        std::vector<std::string> names;
        for (size_t i = 2; i < toks.size(); ++i) names.push_back(toks[i].s);
        catalogExplicit = names;
      } else {
        perr(lineNo, toks[0].col, "expected: catalog bound ... | catalog explicit ...");
      }
    } else {
      perr(lineNo, toks[0].col, "unknown directive: " + head);
    }
  }
  if (sec != Sec::TopLevel) fail(Errc::Parse, "unterminated block at end of file");
  if (!field) fail(Errc::Parse, "missing field declaration");
  if (quiver.vertices.empty()) fail(Errc::Parse, "missing quiver block");
  if (!sawRelations) fail(Errc::Parse, "missing relations block");

  ParsedFile pf;
  pf.field = overrideP ? Fp::make(*overrideP) : *field;

  // Re-normalize relation coefficients (sign bit stashed during parsing).
  for (auto& g : ideal.generators)
    for (auto& t : g.terms) {
      bool neg = (t.coeff & 0x80000000u) != 0;
      std::int64_t v = static_cast<std::int64_t>(t.coeff & 0x7fffffffu);
      t.coeff = pf.field.norm(neg ? -v : v);
    }

  pf.alg = buildAlgebra(quiver, ideal, pf.field);

  for (const auto& pm : modules) {
    if (static_cast<int>(pm.dims.size()) != quiver.vertexCount())
      perr(pm.line, 1, "module '" + pm.name + "' dims length mismatch");
    Rep r;
    r.alg = pf.alg;
    r.dims = pm.dims;
    for (int a = 0; a < quiver.arrowCount(); ++a) {
      int rows = pm.dims[quiver.arrows[a].tgt], cols = pm.dims[quiver.arrows[a].src];
      auto it = pm.matrices.find(quiver.arrows[a].name);
      if (it == pm.matrices.end()) {
        if (rows > 0 && cols > 0)
          perr(pm.line, 1, "module '" + pm.name + "' misses matrix for arrow " + quiver.arrows[a].name);
        r.arrow.push_back(Mat(pf.field, rows, cols));
      } else {
        r.arrow.push_back(
            parseMatrix(it->second.first, pf.field, rows, cols, it->second.second.first, it->second.second.second));
      }
    }
    try {
      r.validate();
    } catch (const Error& e) {
      perr(pm.line, 1, "module '" + pm.name + "': " + e.what());
    }
    pf.namedModules.emplace_back(pm.name, std::move(r));
  }

  pf.generatorNames = generator;
  pf.catalogBound = catalogBound;
  pf.catalogExplicit = catalogExplicit;
  return pf;
}

std::string serializeAlgebraFile(const ParsedFile& pf) {
  std::ostringstream out;
  out << "field " << pf.field.p << "\n";
  out << "quiver\n";
  for (const auto& v : pf.alg->quiver.vertices) out << "  vertex " << v << "\n";
  for (const auto& a : pf.alg->quiver.arrows)
    out << "  arrow " << a.name << " : " << pf.alg->quiver.vertices[a.src] << " -> " << pf.alg->quiver.vertices[a.tgt]
        << "\n";
  out << "end\n";
  out << "relations\n  nilpotency " << pf.alg->ideal.nilpotency << "\n";
  for (const auto& g : pf.alg->ideal.generators) {
    out << "  rel ";
    for (size_t t = 0; t < g.terms.size(); ++t) {
      if (t) out << " + ";
      out << g.terms[t].coeff << "*";
      // Written form lists arrows right-to-left of application order.
      for (auto it = g.terms[t].arrows.rbegin(); it != g.terms[t].arrows.rend(); ++it) {
        if (it != g.terms[t].arrows.rbegin()) out << " ";
        out << pf.alg->quiver.arrows[*it].name;
      }
    }
    out << "\n";
  }
  out << "end\n";
  for (const auto& [name, rep] : pf.namedModules) {
    out << "module " << name << "\n  dims";
    for (int d : rep.dims) out << " " << d;
    out << "\n";
    for (int a = 0; a < pf.alg->quiver.arrowCount(); ++a) {
      const Mat& m = rep.arrow[a];
      if (m.rows() == 0 || m.cols() == 0) continue;
      out << "  matrix " << pf.alg->quiver.arrows[a].name << " = [";
      for (int i = 0; i < m.rows(); ++i) {
        if (i) out << ",";
        out << "[";
        for (int j = 0; j < m.cols(); ++j) {
          if (j) out << ",";
          out << m.at(i, j);
        }
        out << "]";
      }
      out << "]\n";
    }
    out << "end\n";
  }
  if (!pf.generatorNames.empty()) {
    out << "generator\n";
    for (const auto& g : pf.generatorNames) out << "  summand " << g << "\n";
    out << "end\n";
  }
  if (pf.catalogBound) {
    out << "catalog bound";
    for (int d : *pf.catalogBound) out << " " << d;
    out << "\n";
  }
  if (pf.catalogExplicit) {
    out << "catalog explicit";
    for (const auto& n : *pf.catalogExplicit) out << " " << n;
    out << "\n";
  }
  return out.str();
}

bool isKroneckerShaped(const Quiver& q) {
  if (q.vertexCount() != 2 || q.arrowCount() != 2) return false;
  return q.arrows[0].src == q.arrows[1].src && q.arrows[0].tgt == q.arrows[1].tgt && q.arrows[0].src != q.arrows[0].tgt;
}

Rep kroneckerJ(std::shared_ptr<const BoundAlgebra> alg, int n) {
  if (!isKroneckerShaped(alg->quiver)) fail(Errc::BadInput, "J(n) needs a two-vertex double-arrow quiver");
  if (n < 0) fail(Errc::BadInput, "J(n) needs n >= 0");
  int s = alg->quiver.arrows[0].src, t = alg->quiver.arrows[0].tgt;
  Rep r;
  r.alg = alg;
  r.dims.assign(2, 0);
  r.dims[s] = n + 1;
  r.dims[t] = n;
  Mat a(alg->field, n, n + 1), b(alg->field, n, n + 1);
  for (int i = 0; i < n; ++i) {
    a.at(i, i) = 1;      // drop the last coordinate
    b.at(i, i + 1) = 1;  // drop the first coordinate
  }
  r.arrow = {a, b};
  return r;
}

Rep kroneckerR(std::shared_ptr<const BoundAlgebra> alg, int p0, int p1, int n) {
  if (!isKroneckerShaped(alg->quiver)) fail(Errc::BadInput, "R(p,n) needs a two-vertex double-arrow quiver");
  if (n < 1) fail(Errc::BadInput, "R(p,n) needs n >= 1");
  Fp f = alg->field;
  Fel a0 = f.norm(p0), a1 = f.norm(p1);
  if (a0 == 0 && a1 == 0) fail(Errc::BadInput, "R(p,n) needs a projective point");
  Rep r;
  r.alg = alg;
  r.dims.assign(2, 0);
  int s = alg->quiver.arrows[0].src, t = alg->quiver.arrows[0].tgt;
  r.dims[s] = n;
  r.dims[t] = n;
  Mat first(f, n, n), second(f, n, n);
  if (a0 != 0) {
    Fel lam = f.mul(a1, f.inv(a0));
    first = Mat::identity(f, n);
    for (int i = 0; i < n; ++i) {
      second.at(i, i) = lam;
      if (i + 1 < n) second.at(i, i + 1) = 1;
    }
  } else {
    second = Mat::identity(f, n);
    for (int i = 0; i + 1 < n; ++i) first.at(i, i + 1) = 1;
  }
  r.arrow = {first, second};
  return r;
}

namespace {

std::optional<Rep> resolveAtom(const ParsedFile& pf, const std::string& name) {
  for (const auto& [n, rep] : pf.namedModules)
    if (n == name) return rep;
  if (name.size() >= 2) {
    char k = name[0];
    std::string v = name.substr(1);
    int vi = pf.alg->quiver.vertexIndex(v);
    if (vi >= 0) {
      if (k == 'P') return standardModule(pf.alg, StdKind::Proj, vi).rep;
      if (k == 'I') return standardModule(pf.alg, StdKind::Inj, vi).rep;
      if (k == 'S') return standardModule(pf.alg, StdKind::Simple, vi).rep;
    }
  }
  // J(n) and R(p0:p1,n)
  if (name.size() > 3 && name.substr(0, 2) == "J(" && name.back() == ')') {
    int n = std::stoi(name.substr(2, name.size() - 3));
    return kroneckerJ(pf.alg, n);
  }
  if (name.size() > 3 && name.substr(0, 2) == "R(" && name.back() == ')') {
    std::string body = name.substr(2, name.size() - 3);
    auto colon = body.find(':');
    auto comma = body.find(',');
    if (colon == std::string::npos || comma == std::string::npos || colon > comma) return std::nullopt;
    int p0 = std::stoi(body.substr(0, colon));
    int p1 = std::stoi(body.substr(colon + 1, comma - colon - 1));
    int n = std::stoi(body.substr(comma + 1));
    return kroneckerR(pf.alg, p0, p1, n);
  }
  return std::nullopt;
}

}  // namespace

Rep resolveModuleName(const ParsedFile& pf, const std::string& name) {
  std::vector<Rep> parts;
  size_t i = 0;
  while (i <= name.size()) {
    size_t j = i;
    int depth = 0;
    while (j < name.size() && (name[j] != '+' || depth > 0)) {
      if (name[j] == '(') ++depth;
      if (name[j] == ')') --depth;
      ++j;
    }
    std::string atom = name.substr(i, j - i);
    if (atom.empty()) fail(Errc::BadInput, "empty module name component");
    auto r = resolveAtom(pf, atom);
    if (!r) fail(Errc::BadInput, "unknown module name: " + atom);
    parts.push_back(std::move(*r));
    if (j >= name.size()) break;
    i = j + 1;
  }
  if (parts.size() == 1) return parts[0];
  return directSum(pf.alg, parts).rep;
}

}  // namespace rt
