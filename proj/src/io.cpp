#include "hwdesign/io.hpp"

#include <fstream>
#include <sstream>

namespace hwdesign::io {

namespace {

std::string join_ints(const std::vector<int>& xs) {
  std::ostringstream os;
  for (size_t i = 0; i < xs.size(); ++i) {
    if (i) os << ',';
    os << xs[i];
  }
  return os.str();
}

void write_space(std::ostringstream& os, const VertexSpace& sp) {
  os << "space";
  if (!sp.moduli.empty()) os << " mod=" << join_ints(sp.moduli);
  if (sp.has_infinity) os << " inf";
  if (!sp.labels.empty()) {
    os << " labels=";
    for (size_t i = 0; i < sp.labels.size(); ++i) {
      if (i) os << ',';
      os << sp.labels[i];
    }
  }
  os << "\n";
}

std::string kind_name(FactorKind k) { return to_string(k); }

FactorKind kind_from(const std::string& s, int line) {
  if (s == "two_factor_uniform") return FactorKind::TwoFactorUniform;
  if (s == "two_factor_mixed") return FactorKind::TwoFactorMixed;
  if (s == "almost_parallel") return FactorKind::AlmostParallel;
  if (s == "half_parallel") return FactorKind::HalfParallel;
  if (s == "one_factor") return FactorKind::OneFactor;
  throw DesignError("PARSE_ERROR",
                    "line " + std::to_string(line) + ": unknown class kind '" + s + "'");
}

struct Parser {
  std::vector<std::string> lines;
  int ln = 0;  // 1-based current line

  explicit Parser(const std::string& text) {
    std::istringstream is(text);
    std::string l;
    while (std::getline(is, l)) lines.push_back(l);
  }

  [[noreturn]] void fail(int col, const std::string& msg) const {
    throw DesignError("PARSE_ERROR", "line " + std::to_string(ln) + ", column " +
                                         std::to_string(col) + ": " + msg);
  }

  // next non-empty line split into whitespace tokens, or empty at EOF
  std::vector<std::string> next() {
    while (ln < static_cast<int>(lines.size())) {
      const std::string& raw = lines[ln];
      ++ln;
      std::istringstream is(raw);
      std::vector<std::string> toks;
      std::string t;
      while (is >> t) toks.push_back(t);
      if (!toks.empty()) return toks;
    }
    ++ln;
    return {};
  }
};

int parse_int(const std::string& s, Parser& p) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    p.fail(1, "bad integer '" + s + "'");
  }
}

std::vector<int> parse_int_list(const std::string& s, Parser& p) {
  std::vector<int> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (cur.empty()) p.fail(1, "empty integer in list");
      out.push_back(parse_int(cur, p));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

Vertex parse_vertex(const std::string& tok, Parser& p) {
  if (tok == "inf") return Vertex::infinity();
  if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
    return Vertex::named(tok.substr(1, tok.size() - 2));
  if (tok.size() >= 3 && tok.front() == '(' && tok.back() == ')')
    return Vertex::residue(parse_int_list(tok.substr(1, tok.size() - 2), p));
  p.fail(1, "bad vertex token '" + tok + "'");
}

// key=value helper: returns value or fails
std::string field(const std::string& tok, const std::string& key, Parser& p) {
  const std::string pre = key + "=";
  if (tok.rfind(pre, 0) != 0) p.fail(1, "expected " + key + "=..., got '" + tok + "'");
  return tok.substr(pre.size());
}

VertexSpace parse_space(const std::vector<std::string>& toks, Parser& p) {
  VertexSpace sp;
  for (size_t i = 1; i < toks.size(); ++i) {
    const std::string& t = toks[i];
    if (t == "inf") {
      sp.has_infinity = true;
    } else if (t.rfind("mod=", 0) == 0) {
      sp.moduli = parse_int_list(t.substr(4), p);
    } else if (t.rfind("labels=", 0) == 0) {
      std::string cur;
      for (char c : t.substr(7) + ",") {
        if (c == ',') {
          if (!cur.empty()) sp.labels.push_back(cur);
          cur.clear();
        } else {
          cur += c;
        }
      }
    } else {
      p.fail(1, "unknown space field '" + t + "'");
    }
  }
  return sp;
}

}  // namespace

std::string serialize(const Certificate& cert) {
  std::ostringstream os;
  os << "certificate v1\n";
  os << "host " << to_string(cert.host.kind);
  if (cert.host.kind == HostKind::LexCycle)
    os << " m=" << cert.host.m << " n=" << cert.host.n;
  os << "\n";
  switch (cert.host.kind) {
    case HostKind::Complete:
    case HostKind::CompleteMinusOneFactor:
    case HostKind::Cayley:
      write_space(os, cert.host.space);
      break;
    default:
      break;
  }
  if (cert.host.kind == HostKind::CompleteMinusOneFactor)
    for (const auto& e : cert.host.one_factor)
      os << "minus " << to_string(e.a) << " " << to_string(e.b) << "\n";
  if (cert.host.kind == HostKind::Multipartite)
    for (const auto& part : cert.host.parts) {
      os << "part";
      for (const auto& v : part) os << " " << to_string(v);
      os << "\n";
    }
  if (cert.host.kind == HostKind::Cayley)
    for (const auto& s : cert.host.connection) os << "gen (" << join_ints(s) << ")\n";

  if (!cert.provenance.name.empty()) os << "provenance " << cert.provenance.name << "\n";
  for (const auto& [k, v] : cert.provenance.params) os << "param " << k << " " << v << "\n";
  for (const auto& ing : cert.provenance.ingredients) os << "ingredient " << ing << "\n";
  for (const auto& pe : cert.profile)
    os << "profile " << kind_name(pe.kind) << " k=" << pe.length
       << " count=" << pe.count << "\n";
  for (const auto& f : cert.classes) {
    FactorClass c = f.canonical();
    os << "class " << kind_name(c.kind);
    if (c.kind != FactorKind::TwoFactorMixed && c.kind != FactorKind::OneFactor)
      os << " k=" << c.length;
    if (c.missing) os << " missing=" << to_string(*c.missing);
    os << "\n";
    for (const auto& cy : c.cycles) {
      os << "cycle";
      for (const auto& v : cy.vertices) os << " " << to_string(v);
      os << "\n";
    }
    for (const auto& e : c.pairs)
      os << "pair " << to_string(e.a) << " " << to_string(e.b) << "\n";
  }
  os << "end\n";
  return os.str();
}

Certificate parse(const std::string& text) {
  Parser p(text);
  auto toks = p.next();
  if (toks.size() != 2 || toks[0] != "certificate" || toks[1] != "v1")
    p.fail(1, "expected 'certificate v1' header");

  toks = p.next();
  if (toks.empty() || toks[0] != "host") p.fail(1, "expected host line");
  Certificate cert;
  HostGraph& host = cert.host;
  const std::string hk = toks.size() > 1 ? toks[1] : "";
  if (hk == "complete") host.kind = HostKind::Complete;
  else if (hk == "complete_minus_one_factor") host.kind = HostKind::CompleteMinusOneFactor;
  else if (hk == "multipartite") host.kind = HostKind::Multipartite;
  else if (hk == "cayley") host.kind = HostKind::Cayley;
  else if (hk == "lex_cycle") {
    host.kind = HostKind::LexCycle;
    if (toks.size() != 4) p.fail(1, "lex_cycle host needs m= and n=");
    host.m = parse_int(field(toks[2], "m", p), p);
    host.n = parse_int(field(toks[3], "n", p), p);
    host.space.moduli = {host.m, host.n};
  } else {
    p.fail(1, "unknown host kind '" + hk + "'");
  }

  bool ended = false;
  FactorClass* open_class = nullptr;
  while (!ended) {
    toks = p.next();
    if (toks.empty()) p.fail(1, "missing 'end' line");
    const std::string& kw = toks[0];
    if (kw == "end") {
      ended = true;
    } else if (kw == "space") {
      host.space = parse_space(toks, p);
      if (host.kind == HostKind::Multipartite || host.kind == HostKind::LexCycle)
        p.fail(1, "space line not allowed for this host kind");
    } else if (kw == "minus") {
      if (toks.size() != 3) p.fail(1, "minus line needs exactly 2 vertices");
      host.one_factor.emplace_back(parse_vertex(toks[1], p), parse_vertex(toks[2], p));
    } else if (kw == "part") {
      std::vector<Vertex> part;
      for (size_t i = 1; i < toks.size(); ++i) part.push_back(parse_vertex(toks[i], p));
      std::sort(part.begin(), part.end());
      host.parts.push_back(std::move(part));
    } else if (kw == "gen") {
      if (toks.size() != 2 || toks[1].size() < 3 || toks[1].front() != '(')
        p.fail(1, "gen line needs one (..) tuple");
      host.connection.push_back(
          parse_int_list(toks[1].substr(1, toks[1].size() - 2), p));
    } else if (kw == "provenance") {
      cert.provenance.name = toks.size() > 1 ? toks[1] : "";
    } else if (kw == "param") {
      if (toks.size() < 3) p.fail(1, "param needs key and value");
      std::string val = toks[2];
      for (size_t i = 3; i < toks.size(); ++i) val += " " + toks[i];
      cert.provenance.params.emplace_back(toks[1], val);
    } else if (kw == "ingredient") {
      std::string val;
      for (size_t i = 1; i < toks.size(); ++i) val += (i > 1 ? " " : "") + toks[i];
      cert.provenance.ingredients.push_back(val);
    } else if (kw == "profile") {
      if (toks.size() != 4) p.fail(1, "profile needs kind, k= and count=");
      ProfileEntry pe;
      pe.kind = kind_from(toks[1], p.ln);
      pe.length = parse_int(field(toks[2], "k", p), p);
      pe.count = parse_int(field(toks[3], "count", p), p);
      cert.profile.push_back(pe);
    } else if (kw == "class") {
      if (toks.size() < 2) p.fail(1, "class needs a kind");
      FactorClass f;
      f.kind = kind_from(toks[1], p.ln);
      for (size_t i = 2; i < toks.size(); ++i) {
        if (toks[i].rfind("k=", 0) == 0) f.length = parse_int(toks[i].substr(2), p);
        else if (toks[i].rfind("missing=", 0) == 0)
          f.missing = parse_vertex(toks[i].substr(8), p);
        else p.fail(1, "unknown class field '" + toks[i] + "'");
      }
      cert.classes.push_back(std::move(f));
      open_class = &cert.classes.back();
    } else if (kw == "cycle") {
      if (!open_class) p.fail(1, "cycle line outside a class");
      std::vector<Vertex> vs;
      for (size_t i = 1; i < toks.size(); ++i) vs.push_back(parse_vertex(toks[i], p));
      open_class->cycles.push_back(CycleSeq(std::move(vs)).canonical());
    } else if (kw == "pair") {
      if (!open_class) p.fail(1, "pair line outside a class");
      if (toks.size() != 3) p.fail(1, "pair line needs exactly 2 vertices");
      open_class->pairs.emplace_back(parse_vertex(toks[1], p), parse_vertex(toks[2], p));
    } else {
      p.fail(1, "unknown keyword '" + kw + "'");
    }
  }
  if (!p.next().empty()) p.fail(1, "content after 'end'");

  std::sort(host.one_factor.begin(), host.one_factor.end());
  std::sort(host.parts.begin(), host.parts.end());
  std::sort(host.connection.begin(), host.connection.end());
  for (auto& f : cert.classes) f = f.canonical();
  std::sort(cert.profile.begin(), cert.profile.end());
  return cert;
}

Certificate load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DesignError("PARSE_ERROR", "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse(os.str());
}

void save_file(const std::string& path, const Certificate& cert) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DesignError("PARSE_ERROR", "cannot write " + path);
  out << serialize(cert);
}

}  // namespace hwdesign::io
