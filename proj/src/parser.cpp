#include "oml/parser.hpp"

#include <cctype>
#include <optional>
#include <set>

#include "oml/error.hpp"

namespace oml {

namespace {

enum class Tok {
  Ident,   // lower-case / underscore initial
  ConId,   // upper-case initial
  Int,
  LParen, RParen, LBrace, RBrace,
  Comma, Semi, Colon, Equals, Dot, Lambda,
  Arrow, FatArrow, FdArrow,
  KwClass, KwInstance, KwFundep, KwWhere, KwForall, KwLet, KwIn, KwMu, KwTrue, KwFalse,
  End,
};

struct Token {
  Tok t;
  std::string text;
  int line, col;
};

[[noreturn]] void fail(const std::string& msg, int line, int col) {
  throw OmlError("parse", msg, line, col);
}

struct Lexer {
  std::string_view src;
  size_t pos = 0;
  int line = 1, col = 1;
  std::vector<Token> toks;
  std::set<std::string> idents;  // every identifier seen, for fresh-name generation

  void bump(char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void run() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump(c);
        continue;
      }
      if (c == '-' && pos + 1 < src.size() && src[pos + 1] == '-') {
        while (pos < src.size() && src[pos] != '\n') bump(src[pos]);
        continue;
      }
      int l = line, co = col;
      auto push = [&](Tok t, std::string text) { toks.push_back({t, std::move(text), l, co}); };
      if (c == '-' && pos + 1 < src.size() && src[pos + 1] == '>') {
        bump('-'); bump('>');
        push(Tok::Arrow, "->");
        continue;
      }
      if (c == '=' && pos + 1 < src.size() && src[pos + 1] == '>') {
        bump('='); bump('>');
        push(Tok::FatArrow, "=>");
        continue;
      }
      if (c == '~' && pos + 1 < src.size() && src[pos + 1] == '>') {
        bump('~'); bump('>');
        push(Tok::FdArrow, "~>");
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string n;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
          n += src[pos];
          bump(src[pos]);
        }
        push(Tok::Int, n);
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string n;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
          n += src[pos];
          bump(src[pos]);
        }
        if (n == "class") push(Tok::KwClass, n);
        else if (n == "instance") push(Tok::KwInstance, n);
        else if (n == "fundep") push(Tok::KwFundep, n);
        else if (n == "where") push(Tok::KwWhere, n);
        else if (n == "forall") push(Tok::KwForall, n);
        else if (n == "let") push(Tok::KwLet, n);
        else if (n == "in") push(Tok::KwIn, n);
        else if (n == "mu") push(Tok::KwMu, n);
        else if (n == "true") push(Tok::KwTrue, n);
        else if (n == "false") push(Tok::KwFalse, n);
        else {
          idents.insert(n);
          push(std::isupper(static_cast<unsigned char>(n[0])) ? Tok::ConId : Tok::Ident, n);
        }
        continue;
      }
      switch (c) {
        case '(': bump(c); push(Tok::LParen, "("); break;
        case ')': bump(c); push(Tok::RParen, ")"); break;
        case '{': bump(c); push(Tok::LBrace, "{"); break;
        case '}': bump(c); push(Tok::RBrace, "}"); break;
        case ',': bump(c); push(Tok::Comma, ","); break;
        case ';': bump(c); push(Tok::Semi, ";"); break;
        case ':': bump(c); push(Tok::Colon, ":"); break;
        case '=': bump(c); push(Tok::Equals, "="); break;
        case '.': bump(c); push(Tok::Dot, "."); break;
        case '\\': bump(c); push(Tok::Lambda, "\\"); break;
        default:
          fail(std::string("unexpected character '") + c + "'", line, col);
      }
    }
    toks.push_back({Tok::End, "", line, col});
  }
};

struct Parser {
  std::vector<Token> toks;
  size_t i = 0;
  std::set<std::string> idents;
  int fresh_counter = 0;

  const Token& cur() const { return toks[i]; }
  const Token& peek(size_t n = 1) const { return toks[std::min(i + n, toks.size() - 1)]; }
  Token eat() { return toks[i++]; }
  bool at(Tok t) const { return cur().t == t; }
  Token expect(Tok t, const char* what) {
    if (!at(t)) fail(std::string("expected ") + what + ", found '" + cur().text + "'", cur().line, cur().col);
    return eat();
  }

  std::string fresh(const std::string& base) {
    for (;;) {
      std::string cand = "_" + base + std::to_string(fresh_counter++);
      if (!idents.count(cand)) {
        idents.insert(cand);
        return cand;
      }
    }
  }

  // ----- types -----

  TypePtr parse_atype() {
    if (at(Tok::LParen)) {
      eat();
      TypePtr t = parse_type();
      expect(Tok::RParen, "')'");
      return t;
    }
    if (at(Tok::Ident)) return tvar(eat().text);
    if (at(Tok::ConId)) return tcon(eat().text);
    fail("expected a type", cur().line, cur().col);
  }

  TypePtr parse_type() {
    TypePtr lhs = parse_atype();
    if (at(Tok::Arrow)) {
      eat();
      return tarr(lhs, parse_type());
    }
    return lhs;
  }

  Pred parse_pred() {
    Token c = expect(Tok::ConId, "class name");
    Pred p{c.text, {}};
    while (at(Tok::Ident) || at(Tok::ConId) || at(Tok::LParen)) p.args.push_back(parse_atype());
    if (p.args.empty()) fail("predicate needs at least one argument", c.line, c.col);
    return p;
  }

  // preds := pred | "(" pred {"," pred} ")"
  PredList parse_pred_group() {
    PredList ps;
    if (at(Tok::LParen)) {
      eat();
      ps.push_back(parse_pred());
      while (at(Tok::Comma)) {
        eat();
        ps.push_back(parse_pred());
      }
      expect(Tok::RParen, "')'");
    } else {
      ps.push_back(parse_pred());
    }
    return ps;
  }

  // [preds "=>"] type, with backtracking over the optional context
  QualType parse_qual() {
    size_t save = i;
    if (at(Tok::LParen) || at(Tok::ConId)) {
      try {
        PredList ps = parse_pred_group();
        if (at(Tok::FatArrow)) {
          eat();
          return QualType{std::move(ps), parse_type()};
        }
      } catch (const OmlError&) {
      }
      i = save;
    }
    return QualType{{}, parse_type()};
  }

  Scheme parse_scheme() {
    std::vector<std::string> vars;
    if (at(Tok::KwForall)) {
      eat();
      while (at(Tok::Ident)) vars.push_back(eat().text);
      if (vars.empty()) fail("forall needs at least one variable", cur().line, cur().col);
      expect(Tok::Dot, "'.' after forall variables");
    }
    return Scheme{std::move(vars), parse_qual()};
  }

  // ----- expressions -----

  ExprPtr comp(const ExprPtr& f, const ExprPtr& g) {
    // a . b  ==  (\f. \g. \x. f (g x)) a b, with binders fresh for readability
    std::string fn = fresh("f"), gn = fresh("g"), xn = fresh("x");
    ExprPtr lam = elam(fn, elam(gn, elam(xn, eapp(evar(fn), eapp(evar(gn), evar(xn))))));
    return eapp(eapp(lam, f), g);
  }

  ExprPtr parse_atom() {
    const Token& t = cur();
    switch (t.t) {
      case Tok::Ident:
        eat();
        return evar(t.text, t.line, t.col);
      case Tok::Int:
        eat();
        return econst(t.text, t.line, t.col);
      case Tok::KwTrue:
      case Tok::KwFalse:
        eat();
        return econst(t.text, t.line, t.col);
      case Tok::LParen: {
        eat();
        ExprPtr e = parse_expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      default:
        fail("expected an expression, found '" + t.text + "'", t.line, t.col);
    }
  }

  bool at_atom_start() const {
    // an identifier directly followed by ':' or '=' opens the next top-level
    // declaration, never an argument
    if (at(Tok::Ident)) {
      Tok n = i + 1 < toks.size() ? toks[i + 1].t : Tok::End;
      return n != Tok::Colon && n != Tok::Equals;
    }
    return at(Tok::Int) || at(Tok::KwTrue) || at(Tok::KwFalse) || at(Tok::LParen);
  }

  ExprPtr parse_appexpr() {
    ExprPtr e = parse_atom();
    while (at_atom_start()) e = eapp(e, parse_atom());
    return e;
  }

  ExprPtr parse_opexpr() {
    std::vector<ExprPtr> parts{parse_appexpr()};
    while (at(Tok::Dot)) {
      eat();
      parts.push_back(parse_appexpr());
    }
    ExprPtr e = parts.back();
    for (size_t k = parts.size() - 1; k-- > 0;) e = comp(parts[k], e);
    return e;
  }

  ExprPtr parse_expr() {
    if (at(Tok::Lambda)) {
      eat();
      Token x = expect(Tok::Ident, "binder");
      expect(Tok::Dot, "'.' after binder");
      return elam(x.text, parse_expr());
    }
    if (at(Tok::KwMu)) {
      eat();
      Token x = expect(Tok::Ident, "binder");
      expect(Tok::Dot, "'.' after binder");
      return emu(x.text, parse_expr());
    }
    if (at(Tok::KwLet)) {
      eat();
      Token x = expect(Tok::Ident, "binder");
      expect(Tok::Equals, "'='");
      ExprPtr bound = parse_expr();
      expect(Tok::KwIn, "'in'");
      return elet(x.text, bound, parse_expr());
    }
    return parse_opexpr();
  }

  // ----- declarations -----

  std::vector<int> parse_idxset() {
    expect(Tok::LBrace, "'{'");
    std::vector<int> xs;
    if (at(Tok::Int)) {
      xs.push_back(std::stoi(eat().text));
      while (at(Tok::Comma)) {
        eat();
        xs.push_back(std::stoi(expect(Tok::Int, "index").text));
      }
    }
    expect(Tok::RBrace, "'}'");
    return xs;
  }

  Program parse_program() {
    Program prog;
    std::vector<std::pair<std::string, Scheme>> sigs;
    std::vector<std::tuple<std::string, ExprPtr, int>> binds;
    while (!at(Tok::End)) {
      const Token& t = cur();
      if (at(Tok::KwClass)) {
        eat();
        ClassDecl cd;
        cd.line = t.line;
        cd.name = expect(Tok::ConId, "class name").text;
        while (at(Tok::Ident)) cd.params.push_back(eat().text);
        if (cd.params.empty()) fail("class needs at least one parameter", t.line, t.col);
        expect(Tok::KwWhere, "'where'");
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace)) {
          Token m = expect(Tok::Ident, "method name");
          expect(Tok::Colon, "':'");
          cd.methods.emplace_back(m.text, parse_scheme());
          expect(Tok::Semi, "';'");
        }
        eat();
        prog.classes.push_back(std::move(cd));
        continue;
      }
      if (at(Tok::KwInstance)) {
        eat();
        InstanceDecl inst;
        inst.line = t.line;
        inst.axiom.name = expect(Tok::Ident, "instance name").text;
        expect(Tok::Colon, "':'");
        bool explicit_forall = false;
        if (at(Tok::KwForall)) {
          explicit_forall = true;
          eat();
          while (at(Tok::Ident)) inst.axiom.vars.push_back(eat().text);
          expect(Tok::Dot, "'.' after forall variables");
        }
        // [preds "=>"] pred
        size_t save = i;
        if (at(Tok::LParen) || at(Tok::ConId)) {
          try {
            PredList ps = parse_pred_group();
            if (at(Tok::FatArrow)) {
              eat();
              inst.axiom.context = std::move(ps);
            } else {
              i = save;
            }
          } catch (const OmlError&) {
            i = save;
          }
        }
        inst.axiom.head = parse_pred();
        if (!explicit_forall) {
          std::vector<std::string> vs;
          std::set<std::string> seen;
          for (const auto& p : inst.axiom.context) ftv_pred(p, vs, seen);
          ftv_pred(inst.axiom.head, vs, seen);
          inst.axiom.vars = std::move(vs);
        } else {
          std::set<std::string> quant(inst.axiom.vars.begin(), inst.axiom.vars.end());
          std::vector<std::string> vs;
          std::set<std::string> seen;
          for (const auto& p : inst.axiom.context) ftv_pred(p, vs, seen);
          ftv_pred(inst.axiom.head, vs, seen);
          for (const auto& v : vs)
            if (!quant.count(v))
              fail("instance variable '" + v + "' not quantified", t.line, t.col);
        }
        expect(Tok::KwWhere, "'where'");
        expect(Tok::LBrace, "'{'");
        while (!at(Tok::RBrace)) {
          Token m = expect(Tok::Ident, "method name");
          expect(Tok::Equals, "'='");
          inst.impls.emplace_back(m.text, parse_expr());
          expect(Tok::Semi, "';'");
        }
        eat();
        prog.instances.push_back(std::move(inst));
        continue;
      }
      if (at(Tok::KwFundep)) {
        eat();
        FundepDecl fd;
        fd.cls = expect(Tok::ConId, "class name").text;
        fd.from = parse_idxset();
        expect(Tok::FdArrow, "'~>'");
        fd.to = parse_idxset();
        prog.fundeps.push_back(std::move(fd));
        continue;
      }
      if (at(Tok::Ident)) {
        Token name = eat();
        if (at(Tok::Colon)) {
          eat();
          for (const auto& [n, s] : sigs)
            if (n == name.text) fail("duplicate signature for '" + name.text + "'", name.line, name.col);
          sigs.emplace_back(name.text, parse_scheme());
          continue;
        }
        if (at(Tok::Equals)) {
          eat();
          for (const auto& [n, e, l] : binds)
            if (n == name.text) fail("duplicate binding for '" + name.text + "'", name.line, name.col);
          binds.emplace_back(name.text, parse_expr(), name.line);
          continue;
        }
        fail("expected ':' or '=' after top-level name", name.line, name.col);
      }
      fail("expected a declaration, found '" + t.text + "'", t.line, t.col);
    }

    for (auto& [n, e, l] : binds) {
      const Scheme* sch = nullptr;
      for (const auto& [sn, s] : sigs)
        if (sn == n) sch = &s;
      if (!sch) fail("binding '" + n + "' has no type signature", l, 1);
      prog.binds.push_back(Binding{n, *sch, e, l});
    }
    for (const auto& [sn, s] : sigs) {
      bool found = false;
      for (const auto& b : prog.binds) found = found || b.name == sn;
      if (!found) fail("signature '" + sn + "' has no binding", 1, 1);
    }
    return prog;
  }
};

Parser make_parser(std::string_view src) {
  Lexer lx{src};
  lx.run();
  Parser p;
  p.toks = std::move(lx.toks);
  p.idents = std::move(lx.idents);
  return p;
}

}  // namespace

Program parse_program(std::string_view src) {
  Parser p = make_parser(src);
  Program prog = p.parse_program();
  p.expect(Tok::End, "end of input");
  return prog;
}

TypePtr parse_type(std::string_view src) {
  Parser p = make_parser(src);
  TypePtr t = p.parse_type();
  p.expect(Tok::End, "end of input");
  return t;
}

Pred parse_pred(std::string_view src) {
  Parser p = make_parser(src);
  Pred q = p.parse_pred();
  p.expect(Tok::End, "end of input");
  return q;
}

PredList parse_preds(std::string_view src) {
  Parser p = make_parser(src);
  PredList ps;
  // either a parenthesized group "(P, Q)" or a bare comma-separated list
  if (p.at(Tok::LParen)) {
    ps = p.parse_pred_group();
  } else {
    ps.push_back(p.parse_pred());
    while (p.at(Tok::Comma)) {
      p.eat();
      ps.push_back(p.parse_pred());
    }
  }
  p.expect(Tok::End, "end of input");
  return ps;
}

Scheme parse_scheme(std::string_view src) {
  Parser p = make_parser(src);
  Scheme s = p.parse_scheme();
  p.expect(Tok::End, "end of input");
  return s;
}

ExprPtr parse_expr(std::string_view src) {
  Parser p = make_parser(src);
  ExprPtr e = p.parse_expr();
  p.expect(Tok::End, "end of input");
  return e;
}

}  // namespace oml
