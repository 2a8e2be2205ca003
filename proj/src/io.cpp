#include "seqguess/io.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace seqguess {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : UsageError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                 what),
      line_(line),
      column_(column) {}

namespace {

// ---------------------------------------------------------------- parsing

struct Token {
  enum Kind { Number, Ident, Op, LParen, RParen, Sep, Open, Close, End } kind = End;
  std::string text;
  std::size_t line = 1, column = 1;
  bool spaceBefore = false;    // blank or newline directly before
  bool newlineBefore = false;  // a line break directly before
};

std::vector<Token> tokenize(const std::string& s, std::size_t line0 = 1, std::size_t col0 = 1) {
  std::vector<Token> out;
  std::size_t line = line0, col = col0;
  bool space = false, newline = false;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance(1);
      continue;
    }
    if (c == '\n') {
      space = newline = true;
      advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    t.spaceBefore = space;
    t.newlineBefore = newline;
    space = newline = false;
    std::size_t len = 1;
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < s.size() &&
                                                        std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      t.kind = Token::Number;
      len = 0;
      bool dot = false;
      while (i + len < s.size() &&
             (std::isdigit(static_cast<unsigned char>(s[i + len])) || (!dot && s[i + len] == '.'))) {
        dot |= s[i + len] == '.';
        ++len;
      }
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Ident;
      len = 0;
      while (i + len < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[i + len])) || s[i + len] == '_')) {
        ++len;
      }
    } else if (std::string("+-*/^").find(c) != std::string::npos) {
      t.kind = Token::Op;
    } else if (c == '(') {
      t.kind = Token::LParen;
    } else if (c == ')') {
      t.kind = Token::RParen;
    } else if (c == ',' || c == ';') {
      t.kind = Token::Sep;
    } else if (c == '[') {
      t.kind = Token::Open;
    } else if (c == ']') {
      t.kind = Token::Close;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    t.text = s.substr(i, len);
    advance(len);
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  end.spaceBefore = space;
  end.newlineBefore = newline;
  out.push_back(end);
  return out;
}

mpq_class parseNumber(const Token& t) {
  const auto dot = t.text.find('.');
  if (dot == std::string::npos) return mpq_class(mpz_class(t.text, 10));
  std::string digits = t.text.substr(0, dot) + t.text.substr(dot + 1);
  if (digits.empty()) throw ParseError("malformed number", t.line, t.column);
  mpz_class den = 1;
  for (std::size_t k = dot + 1; k < t.text.size(); ++k) den *= 10;
  mpq_class v(mpz_class(digits, 10), den);
  v.canonicalize();
  return v;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, std::string param) : t_(std::move(toks)), param_(std::move(param)) {}

  const Token& peek() const { return t_[pos_]; }
  const Token& next() { return t_[pos_++]; }
  bool atEnd() const { return peek().kind == Token::End; }

  [[noreturn]] void fail(const std::string& msg, const Token& at) const {
    throw ParseError(msg, at.line, at.column);
  }

  RatFun expr() {
    RatFun acc = term();
    while (peek().kind == Token::Op && (peek().text == "+" || peek().text == "-")) {
      // A line break before a sign starts a new term at top level.
      if (depth_ == 0 && peek().newlineBefore) break;
      const bool minus = next().text == "-";
      RatFun rhs = term();
      acc = minus ? acc - rhs : acc + rhs;
    }
    return acc;
  }

 private:
  bool startsFactor(const Token& tk) const {
    return tk.kind == Token::Number || tk.kind == Token::Ident || tk.kind == Token::LParen;
  }

  RatFun term() {
    RatFun acc = unary();
    for (;;) {
      const Token& tk = peek();
      if (tk.kind == Token::Op && (tk.text == "*" || tk.text == "/")) {
        const Token op = next();
        RatFun rhs = unary();
        if (op.text == "*") {
          acc *= rhs;
        } else {
          if (rhs.isZero()) fail("division by zero", op);
          acc = acc / rhs;
        }
      } else if (startsFactor(tk) && !tk.spaceBefore) {
        // Juxtaposition multiplies, but only when written without a blank.
        acc *= power();
      } else {
        return acc;
      }
    }
  }

  RatFun unary() {
    if (peek().kind == Token::Op && (peek().text == "-" || peek().text == "+")) {
      const bool minus = next().text == "-";
      RatFun v = unary();
      return minus ? -v : v;
    }
    return power();
  }

  RatFun power() {
    RatFun base = primary();
    if (peek().kind == Token::Op && peek().text == "^") {
      next();
      bool neg = false;
      if (peek().kind == Token::Op && (peek().text == "-" || peek().text == "+")) {
        neg = next().text == "-";
      }
      const Token& e = peek();
      if (e.kind != Token::Number || e.text.find('.') != std::string::npos) {
        fail("exponent must be an integer", e);
      }
      next();
      mpz_class ev(e.text, 10);
      if (ev > 100000) fail("exponent too large", e);
      RatFun v = base.pow(static_cast<unsigned>(ev.get_ui()));
      if (neg) {
        if (v.isZero()) fail("division by zero", e);
        v = v.inverse();
      }
      return v;
    }
    return base;
  }

  RatFun primary() {
    const Token& tk = peek();
    switch (tk.kind) {
      case Token::Number:
        return RatFun(parseNumber(next()));
      case Token::Ident: {
        if (param_.empty()) fail("unknown symbol '" + tk.text + "' (no parameter declared)", tk);
        if (tk.text != param_) fail("unknown symbol '" + tk.text + "', expected '" + param_ + "'", tk);
        next();
        return RatFun::parameter();
      }
      case Token::LParen: {
        next();
        ++depth_;
        RatFun v = expr();
        --depth_;
        if (peek().kind != Token::RParen) fail("expected ')'", peek());
        next();
        return v;
      }
      case Token::End:
        fail("unexpected end of input", tk);
      default:
        fail("unexpected '" + tk.text + "'", tk);
    }
  }

  std::vector<Token> t_;
  std::string param_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

RatFun parseTerm(const std::string& text, const std::string& param) {
  Parser p(tokenize(text), param);
  if (p.atEnd()) p.fail("empty term", p.peek());
  RatFun v = p.expr();
  if (!p.atEnd()) p.fail("unexpected '" + p.peek().text + "'", p.peek());
  return v;
}

ParsedSequence parseSequence(const std::string& text, const std::string& param) {
  Parser p(tokenize(text), param);
  ParsedSequence out;
  bool bracket = false;
  if (p.peek().kind == Token::Open) {
    p.next();
    bracket = true;
  }
  bool needTerm = true;  // after a comma a term is required
  for (;;) {
    const Token& tk = p.peek();
    if (tk.kind == Token::End) {
      if (bracket) p.fail("missing ']'", tk);
      break;
    }
    if (tk.kind == Token::Close) {
      if (!bracket) p.fail("unexpected ']'", tk);
      p.next();
      if (!p.atEnd()) p.fail("unexpected input after ']'", p.peek());
      break;
    }
    if (tk.kind == Token::Sep) {
      if (needTerm) p.fail("empty term", tk);
      p.next();
      needTerm = true;
      continue;
    }
    if (!needTerm && !tk.spaceBefore) p.fail("unexpected '" + tk.text + "'", tk);
    out.terms.push_back(p.expr());
    needTerm = false;
  }
  if (out.terms.empty()) throw ParseError("no terms", 1, 1);
  return out;
}

ParsedSequence parseBFile(const std::string& text, const std::string& param) {
  ParsedSequence out;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  long expected = 0;
  bool first = true;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw.substr(0, raw.find('#'));
    std::size_t a = 0;
    while (a < s.size() && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    if (a == s.size()) continue;
    std::size_t b = a;
    while (b < s.size() && !std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    const std::string idx = s.substr(a, b - a);
    long index = 0;
    try {
      std::size_t used = 0;
      index = std::stol(idx, &used);
      if (used != idx.size()) throw std::invalid_argument(idx);
    } catch (const std::exception&) {
      throw ParseError("bad index '" + idx + "'", line, a + 1);
    }
    std::size_t c = b;
    while (c < s.size() && std::isspace(static_cast<unsigned char>(s[c]))) ++c;
    if (c == s.size()) throw ParseError("missing value", line, b + 1);
    if (first) {
      out.offset = index;
      expected = index;
      first = false;
    }
    if (index != expected) {
      throw ParseError("gap in indices: expected " + std::to_string(expected) + ", found " +
                           std::to_string(index),
                       line, a + 1);
    }
    ++expected;
    Parser p(tokenize(s.substr(c), line, c + 1), param);
    RatFun v = p.expr();
    if (!p.atEnd()) p.fail("unexpected '" + p.peek().text + "'", p.peek());
    out.terms.push_back(std::move(v));
  }
  if (out.terms.empty()) throw ParseError("no terms", line == 0 ? 1 : line, 1);
  return out;
}

// -------------------------------------------------------------- rendering

namespace {

// One summand: sign and absolute text ("" stands for 1).
struct Piece {
  bool neg = false;
  std::string body;
};

std::string joinPieces(const std::vector<Piece>& ps) {
  if (ps.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const std::string body = ps[i].body.empty() ? "1" : ps[i].body;
    if (i == 0) {
      s += (ps[i].neg ? "-" : "") + body;
    } else {
      s += (ps[i].neg ? " - " : " + ") + body;
    }
  }
  return s;
}

std::size_t nonzeroCount(const PolyQ& p) {
  return static_cast<std::size_t>(std::count_if(p.coeffs().begin(), p.coeffs().end(),
                                                [](const mpq_class& c) { return c != 0; }));
}

// A coefficient is atomic when it is a single signed monomial in the parameter.
bool atomic(const RatFun& c) { return c.isPolynomial() && nonzeroCount(c.num()) <= 1; }

std::string ratString(const mpq_class& a) { return a.get_str(); }

// Multiplies a coefficient into `rest` (which may be empty, meaning 1).
Piece scaled(const RatFun& c, const std::string& rest, const std::string& param) {
  Piece p;
  std::string cs;
  if (atomic(c)) {
    p.neg = c.num().lead() < 0;
    RatFun a = p.neg ? -c : c;
    if (a.isRational()) {
      const mpq_class v = a.rational();
      if (v != 1) cs = ratString(v);
    } else {
      cs = a.toString(param);
    }
  } else {
    cs = "(" + c.toString(param) + ")";
  }
  if (cs.empty()) {
    p.body = rest;
  } else if (rest.empty()) {
    p.body = cs;
  } else if (cs.back() == ')' || (std::all_of(cs.begin(), cs.end(), ::isdigit))) {
    p.body = cs + rest;
  } else {
    p.body = cs + "*" + rest;
  }
  return p;
}

enum class PointVar { Index, QIndex, Series };

PointVar pointVarOf(const Schema& s) {
  if (s.interp != Interpretation::Shift) return PointVar::Series;
  return s.q && !s.mixedMode() ? PointVar::QIndex : PointVar::Index;
}

std::string qPower(const std::string& q, const std::string& n, std::size_t d) {
  if (d == 0) return "";
  if (d == 1) return q + "^" + n;
  return q + "^(" + std::to_string(d) + n + ")";
}

std::string varPower(PointVar pv, const Names& nm, const std::string& index, std::size_t d) {
  if (d == 0) return "";
  if (pv == PointVar::QIndex) return qPower(nm.param, index, d);
  const std::string& v = pv == PointVar::Series ? nm.variable : index;
  return d == 1 ? v : v + "^" + std::to_string(d);
}

std::vector<Piece> polyPieces(const ExactPoly& p, PointVar pv, const Names& nm,
                              const std::string& index) {
  std::vector<Piece> out;
  for (std::size_t d = p.size(); d-- > 0;) {
    if (p[d].isZero()) continue;
    out.push_back(scaled(p[d], varPower(pv, nm, index, d), nm.param));
  }
  return out;
}

std::string shiftArg(const std::string& n, int s) {
  return s == 0 ? n : n + " + " + std::to_string(s);
}

std::string factorString(Interpretation in, const Names& nm, int part) {
  const int r = part - 1;
  const std::string& f = nm.function;
  switch (in) {
    case Interpretation::Shift:
      return f + "(" + shiftArg(nm.index, r) + ")";
    case Interpretation::Derivative: {
      std::string d = r <= 3 ? std::string(static_cast<std::size_t>(r), '\'')
                             : "^(" + std::to_string(r) + ")";
      return f + d + "(" + nm.variable + ")";
    }
    case Interpretation::QDilation: {
      if (r == 0) return f + "(" + nm.variable + ")";
      std::string qs = r == 1 ? nm.param : nm.param + "^" + std::to_string(r);
      return f + "(" + qs + "*" + nm.variable + ")";
    }
    case Interpretation::Mahler:
      if (part == 1) return f + "(" + nm.variable + ")";
      return f + "(" + nm.variable + "^" + std::to_string(part) + ")";
  }
  return f;
}

std::string monomialString(const Schema& s, const Monomial& m, const Names& nm) {
  std::vector<std::string> fs;
  if (m.mixed > 0) fs.push_back(qPower(nm.param, nm.index, static_cast<std::size_t>(m.mixed)));
  std::map<int, int, std::greater<>> mult;
  for (int p : m.parts) ++mult[p];
  for (auto [part, e] : mult) {
    std::string x = factorString(s.interp, nm, part);
    if (e > 1) x += "^" + std::to_string(e);
    fs.push_back(x);
  }
  std::string out;
  for (std::size_t i = 0; i < fs.size(); ++i) out += (i ? "*" : "") + fs[i];
  return out;
}

std::string seriesPrefix(const std::vector<RatFun>& c, const Names& nm) {
  ExactPoly p(c.begin(), c.end());
  auto ps = polyPieces(p, PointVar::Series, nm, nm.index);
  std::reverse(ps.begin(), ps.end());
  std::string o = "O(" + nm.variable + "^" + std::to_string(c.size()) + ")";
  return ps.empty() ? o : joinPieces(ps) + " + " + o;
}

// Text of an ExactPoly quotient num/den; den is nonzero.
std::string quotientString(const ExactPoly& num, const ExactPoly& den, PointVar pv,
                           const Names& nm, const std::string& index) {
  std::size_t denTerms = 0;
  for (const auto& c : den) denTerms += !c.isZero();
  if (den.size() == 1 && den[0].isRational()) {
    ExactPoly q = num;
    for (auto& c : q) c = c / den[0];
    return joinPieces(polyPieces(q, pv, nm, index));
  }
  auto np = polyPieces(num, pv, nm, index);
  auto dp = polyPieces(den, pv, nm, index);
  std::string n = joinPieces(np), d = joinPieces(dp);
  if (np.size() > 1) n = "(" + n + ")";
  if (dp.size() > 1 || denTerms > 1 || dp.front().neg || d.find('*') != std::string::npos) {
    d = "(" + d + ")";
  }
  return n + "/" + d;
}

std::string header(const GuessResult& r) {
  const Names& nm = r.names;
  if (isSeriesClass(r.cls)) {
    return "[" + nm.variable + "^" + nm.index + "]" + nm.function + "(" + nm.variable + ")";
  }
  return nm.function + "(" + nm.index + ")";
}

std::string checkSuffix(CheckStatus c) {
  switch (c) {
    case CheckStatus::Verified: return "";
    case CheckStatus::Probable: return " (probable)";
    case CheckStatus::Unchecked: return " (unchecked)";
  }
  return "";
}

bool trivialDenominator(const ExactPoly& den) {
  std::size_t nz = 0;
  for (const auto& c : den) nz += !c.isZero();
  return nz == 1 && den.size() == 1 && den[0].isRational();
}

// Body of the equation without header, brackets or initial values.
std::string equationBody(const GuessResult& r, const std::string& index) {
  const Names& nm = r.names;
  const PointVar pv = pointVarOf(r.schema);
  if (r.cls == GuessClass::Rat || (r.cls == GuessClass::Pade && r.equation.size() == 2)) {
    auto [num, den] = ratClosedForm(r);
    if (r.cls == GuessClass::Rat || trivialDenominator(den)) {
      std::string lhs = r.cls == GuessClass::Rat
                            ? nm.function + "(" + index + ")"
                            : nm.function + "(" + nm.variable + ")";
      return lhs + " = " + quotientString(num, den, pv, nm, index);
    }
  }
  Names local = nm;
  local.index = index;
  std::vector<Piece> pieces;
  for (std::size_t l = r.equation.size(); l-- > 0;) {
    ExactPoly p = r.equation[l];
    while (!p.empty() && p.back().isZero()) p.pop_back();
    if (p.empty()) continue;
    const std::string mono = monomialString(r.schema, r.schema.monomials[l], local);
    auto ps = polyPieces(p, pv, nm, index);
    if (mono.empty()) {
      pieces.insert(pieces.end(), ps.begin(), ps.end());
    } else if (ps.size() == 1) {
      Piece q = ps[0];
      if (q.body.empty()) {
        q.body = mono;
      } else if (q.body.back() == ')' ||
                 std::all_of(q.body.begin(), q.body.end(), ::isdigit)) {
        q.body += mono;
      } else {
        q.body += " " + mono;
      }
      pieces.push_back(q);
    } else {
      pieces.push_back(Piece{false, "(" + joinPieces(ps) + ")" + mono});
    }
  }
  return joinPieces(pieces) + " = 0";
}

std::string initialText(const GuessResult& r) {
  const Names& nm = r.names;
  std::string s;
  if (r.initial.empty()) return s;
  switch (r.schema.interp) {
    case Interpretation::Shift:
      for (std::size_t k = 0; k < r.initial.size(); ++k) {
        s += ", " + nm.function + "(" + std::to_string(k) + ") = " + r.initial[k].toString(nm.param);
      }
      break;
    case Interpretation::Derivative:
      for (std::size_t k = 0; k < r.initial.size(); ++k) {
        Names z = nm;
        z.variable = "0";
        s += ", " + factorString(Interpretation::Derivative, z, static_cast<int>(k) + 1) + " = " +
             r.initial[k].toString(nm.param);
      }
      break;
    case Interpretation::QDilation:
    case Interpretation::Mahler:
      s += ", " + nm.function + "(" + nm.variable + ") = " + seriesPrefix(r.initial, nm);
      break;
  }
  return s;
}

// Worst check status over the leaves.
CheckStatus weakest(const OperatorExpr& e) {
  if (e.kind == OperatorExpr::Kind::Leaf) return e.leaf.check;
  return weakest(*e.child);
}

struct ExprPrinter {
  Names names;
  std::vector<std::string> used;
  std::vector<std::string> where;

  std::string fresh(const std::vector<std::string>& pool) {
    for (const auto& v : pool) {
      if (std::find(used.begin(), used.end(), v) == used.end() && v != names.function &&
          v != names.param) {
        used.push_back(v);
        return v;
      }
    }
    std::string v = pool.front() + std::to_string(used.size());
    used.push_back(v);
    return v;
  }

  // Value of e at `index`.
  std::string value(const OperatorExpr& e, const std::string& index) {
    switch (e.kind) {
      case OperatorExpr::Kind::Leaf: {
        GuessResult r = e.leaf;
        if (r.cls == GuessClass::Rat) {
          std::string b = equationBody(r, index);
          return b.substr(b.find(" = ") + 3);
        }
        std::string g = "g" + std::to_string(where.size() + 1);
        r.names = names;
        r.names.function = g;
        where.push_back(renderText(r));
        return g + "(" + index + ")";
      }
      case OperatorExpr::Kind::Sum: {
        std::string s = fresh({"s", "t", "u", "v"});
        std::string body =
            "sum(" + s + "=0.." + index + "-1, " + value(*e.child, s) + ")";
        if (e.start.isZero()) return body;
        return e.start.toString(names.param) + " + " + body;
      }
      case OperatorExpr::Kind::Product: {
        std::string p = fresh({"p", "l", "k", "j"});
        std::string upper = e.offset == 0 ? index + "-1"
                                          : index + "-" + std::to_string(e.offset + 1);
        std::string body = "prod(" + p + "=0.." + upper + ", " + value(*e.child, p) + ")";
        if (!e.start.isOne()) {
          std::string c = e.start.toString(names.param);
          if (!atomic(e.start)) c = "(" + c + ")";
          body = c + "*" + body;
        }
        if (e.offset > 0) {
          body += " for " + index + " >= " + std::to_string(e.offset) + ", 0 before";
        }
        return body;
      }
    }
    return "";
  }
};

}  // namespace

std::string renderText(const GuessResult& r) {
  return "[" + header(r) + ": " + equationBody(r, r.names.index) + initialText(r) + "]" +
         checkSuffix(r.check);
}

std::string renderText(const OperatorExpr& e, const Names& names) {
  if (e.kind == OperatorExpr::Kind::Leaf) {
    GuessResult r = e.leaf;
    r.names = names;
    return renderText(r);
  }
  ExprPrinter pr;
  pr.names = names;
  pr.used = {names.index};
  std::string v = pr.value(e, names.index);
  std::string s = "[" + names.function + "(" + names.index + "): " + names.function + "(" +
                  names.index + ") = " + v + "]";
  for (const auto& w : pr.where) s += ", where " + w;
  return s + checkSuffix(weakest(e));
}

// ------------------------------------------------------------------- JSON

namespace {

std::string checkName(CheckStatus c) {
  switch (c) {
    case CheckStatus::Verified: return "verified";
    case CheckStatus::Probable: return "probable";
    case CheckStatus::Unchecked: return "unchecked";
  }
  return "unchecked";
}

CheckStatus parseCheck(const std::string& s) {
  if (s == "verified") return CheckStatus::Verified;
  if (s == "probable") return CheckStatus::Probable;
  if (s == "unchecked") return CheckStatus::Unchecked;
  throw UsageError("unknown check status '" + s + "'");
}

std::string pointName(const Schema& s) {
  switch (pointVarOf(s)) {
    case PointVar::Index: return "n";
    case PointVar::QIndex: return "q^n";
    case PointVar::Series: return "x";
  }
  return "n";
}

void requireVersion(const nlohmann::json& j) {
  if (j.contains("schema_version") && j.at("schema_version").get<int>() != kJsonSchemaVersion) {
    throw UsageError("unsupported schema_version " + j.at("schema_version").dump());
  }
}

}  // namespace

nlohmann::json toJson(const GuessResult& r) {
  using nlohmann::json;
  const std::string& q = r.names.param;
  json j;
  j["schema_version"] = kJsonSchemaVersion;
  j["class"] = className(r.cls);
  j["q"] = r.schema.q;
  j["names"] = {{"function", r.names.function},
                {"index", r.names.index},
                {"variable", r.names.variable},
                {"param", r.names.param}};
  j["point"] = pointName(r.schema);
  json monos = json::array();
  for (std::size_t l = 0; l < r.schema.monomials.size(); ++l) {
    const Monomial& m = r.schema.monomials[l];
    std::vector<int> ex(m.parts.empty() ? 0 : static_cast<std::size_t>(m.parts.front()), 0);
    for (int p : m.parts) ++ex[static_cast<std::size_t>(p - 1)];
    json coeffs = json::array();
    if (l < r.equation.size()) {
      for (const auto& c : r.equation[l]) coeffs.push_back(c.toString(q));
    }
    monos.push_back({{"exponents", ex}, {"mixed", m.mixed}, {"coefficients", coeffs}});
  }
  j["monomials"] = monos;
  j["bounds"] = r.bounds;
  json init = json::array();
  for (const auto& v : r.initial) init.push_back(v.toString(q));
  j["initial"] = init;
  j["check"] = checkName(r.check);
  if (r.conditionLimit == kUnbounded) {
    j["condition_limit"] = nullptr;
  } else {
    j["condition_limit"] = r.conditionLimit;
  }
  j["text"] = renderText(r);
  return j;
}

GuessResult resultFromJson(const nlohmann::json& j) {
  requireVersion(j);
  GuessResult r;
  auto cls = parseClassName(j.at("class").get<std::string>());
  if (!cls) throw UsageError("unknown class " + j.at("class").dump());
  r.cls = *cls;
  if (j.contains("names")) {
    const auto& n = j.at("names");
    r.names.function = n.value("function", r.names.function);
    r.names.index = n.value("index", r.names.index);
    r.names.variable = n.value("variable", r.names.variable);
    r.names.param = n.value("param", r.names.param);
  }
  const std::string& q = r.names.param;
  r.schema.cls = r.cls;
  r.schema.q = j.value("q", false);
  r.schema.interp = interpretationOf(r.cls, r.schema.q);
  for (const auto& m : j.at("monomials")) {
    Monomial mono;
    const auto ex = m.at("exponents").get<std::vector<int>>();
    for (std::size_t i = ex.size(); i-- > 0;) {
      if (ex[i] < 0) throw UsageError("negative exponent in monomial");
      mono.parts.insert(mono.parts.end(), static_cast<std::size_t>(ex[i]), static_cast<int>(i + 1));
    }
    mono.mixed = m.value("mixed", 0);
    r.schema.monomials.push_back(mono);
    ExactPoly p;
    for (const auto& c : m.at("coefficients")) p.push_back(parseTerm(c.get<std::string>(), q));
    r.equation.push_back(std::move(p));
  }
  if (j.contains("bounds")) r.bounds = j.at("bounds").get<std::vector<int>>();
  if (j.contains("initial")) {
    for (const auto& v : j.at("initial")) r.initial.push_back(parseTerm(v.get<std::string>(), q));
  }
  r.check = parseCheck(j.value("check", std::string("unchecked")));
  if (j.contains("condition_limit") && !j.at("condition_limit").is_null()) {
    r.conditionLimit = j.at("condition_limit").get<std::size_t>();
  }
  return r;
}

nlohmann::json toJson(const OperatorExpr& e) {
  nlohmann::json j;
  j["schema_version"] = kJsonSchemaVersion;
  switch (e.kind) {
    case OperatorExpr::Kind::Leaf:
      j["kind"] = "leaf";
      j["result"] = toJson(e.leaf);
      break;
    case OperatorExpr::Kind::Sum:
    case OperatorExpr::Kind::Product: {
      const bool sum = e.kind == OperatorExpr::Kind::Sum;
      j["kind"] = sum ? "sum" : "product";
      // Starting values are written in the parameter of the innermost leaf.
      const OperatorExpr* leaf = &e;
      while (leaf->kind != OperatorExpr::Kind::Leaf) leaf = leaf->child.get();
      j["start"] = e.start.toString(leaf->leaf.names.param);
      j["offset"] = e.offset;
      j["child"] = toJson(*e.child);
      break;
    }
  }
  return j;
}

OperatorExpr exprFromJson(const nlohmann::json& j) {
  requireVersion(j);
  OperatorExpr e;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "leaf") {
    e.leaf = resultFromJson(j.at("result"));
    return e;
  }
  if (kind != "sum" && kind != "product") throw UsageError("unknown expression kind '" + kind + "'");
  e.kind = kind == "sum" ? OperatorExpr::Kind::Sum : OperatorExpr::Kind::Product;
  e.child = std::make_shared<OperatorExpr>(exprFromJson(j.at("child")));
  const OperatorExpr* leaf = e.child.get();
  while (leaf->kind != OperatorExpr::Kind::Leaf) leaf = leaf->child.get();
  e.start = parseTerm(j.at("start").get<std::string>(), leaf->leaf.names.param);
  e.offset = j.value("offset", std::size_t{0});
  return e;
}

}  // namespace seqguess
