#include <cctype>
#include <functional>

#include "loopm/errors.hpp"
#include "loopm/frontend.hpp"

namespace loopm {

namespace {

struct Token {
  enum class Type { Ident, Number, Op, Star, End };
  Type type = Type::End;
  std::string text;
  int line = 1, col = 1;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  static const char* two_char[] = {"**", "==", "!=", "<=", ">=", "&&", "||"};
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (src.compare(i, 3, "\xE2\x8B\x86") == 0) {  // U+22C6 STAR OPERATOR
      t.type = Token::Type::Star;
      t.text = "*";
      out.push_back(t);
      i += 3;
      ++col;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) ++j;
      t.type = Token::Type::Number;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(t);
      // "2x" is 2*x
      if (i < src.size() && (std::isalpha(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        Token mul;
        mul.type = Token::Type::Op;
        mul.text = "*";
        mul.line = line;
        mul.col = col;
        out.push_back(mul);
      }
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.type = Token::Type::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
      out.push_back(t);
      continue;
    }
    t.type = Token::Type::Op;
    bool matched = false;
    for (const char* op : two_char) {
      if (src.compare(i, 2, op) == 0) {
        t.text = op;
        advance(2);
        matched = true;
        break;
      }
    }
    if (!matched) {
      if (std::string_view("+-*/(),=<>{}:;!").find(c) == std::string_view::npos)
        throw SyntaxError(std::string("unexpected character '") + c + "'", line, col);
      t.text = std::string(1, c);
      advance(1);
    }
    out.push_back(t);
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

const std::set<std::string> kKeywords = {"while", "if", "else", "elif", "end", "true", "false", "not", "and", "or"};

struct RawBranch {
  ExprPtr value;
  ExprPtr prob;  // nullptr: implicit remainder
  int line, col;
};

class Parser {
 public:
  /// Without a context the parser only records assigned names and
  /// leaves probabilities unresolved.
  Parser(std::vector<Token> tokens, const Ast* context) : toks_(std::move(tokens)), ctx_(context) {}

  Ast program() {
    Ast ast;
    while (!is_keyword("while")) {
      if (peek().type == Token::Type::End) error("expected 'while'");
      ast.init.push_back(statement());
    }
    next();
    BoolPtr guard = bexpr(true);
    expect(":");
    if (guard->kind != BoolExpr::Kind::True) ast.guard = guard;
    ast.body = block();
    if (ast.body.empty()) error("loop body must contain at least one statement");
    expect_keyword("end");
    while (is_op(";")) next();
    if (peek().type != Token::Type::End) error("unexpected input after the loop");
    return ast;
  }

  const std::set<std::string>& assigned() const { return assigned_; }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  bool is_op(const char* op, std::size_t k = 0) const {
    return peek(k).type == Token::Type::Op && peek(k).text == op;
  }
  bool is_keyword(const char* kw, std::size_t k = 0) const {
    return peek(k).type == Token::Type::Ident && peek(k).text == kw;
  }
  [[noreturn]] void error(const std::string& msg) const {
    const Token& t = peek();
    std::string near = t.type == Token::Type::End ? "end of input" : "'" + t.text + "'";
    throw SyntaxError(msg + " near " + near, t.line, t.col);
  }
  void expect(const char* op) {
    if (!is_op(op)) error(std::string("expected '") + op + "'");
    next();
  }
  void expect_keyword(const char* kw) {
    if (!is_keyword(kw)) error(std::string("expected '") + kw + "'");
    next();
  }

  Block block() {
    Block out;
    while (true) {
      while (is_op(";")) next();
      if (is_keyword("end") || is_keyword("else") || is_keyword("elif") || peek().type == Token::Type::End) break;
      out.push_back(statement());
    }
    return out;
  }

  Statement statement() {
    int line = peek().line;
    if (is_keyword("if")) {
      next();
      return if_rest(line);
    }
    return assignment_statement();
  }

  Statement if_rest(int line) {
    BoolPtr cond = bexpr(false);
    expect(":");
    Block then_body = block();
    if (then_body.empty()) error("empty if-branch");
    Block else_body;
    if (is_keyword("elif") || (is_keyword("else") && is_keyword("if", 1))) {
      int l = peek().line;
      next();
      if (is_keyword("if")) next();
      else_body.push_back(if_rest(l));
      return Statement::if_stmt(cond, std::move(then_body), std::move(else_body), line);
    }
    if (is_keyword("else")) {
      next();
      expect(":");
      else_body = block();
      if (else_body.empty()) error("empty else-branch");
    }
    expect_keyword("end");
    return Statement::if_stmt(cond, std::move(then_body), std::move(else_body), line);
  }

  std::string identifier(const char* what) {
    const Token& t = peek();
    if (t.type != Token::Type::Ident || kKeywords.count(t.text) || parse_dist_kind(t.text))
      error(std::string("expected ") + what);
    return next().text;
  }

  Statement assignment_statement() {
    int line = peek().line;
    Assignment a;
    a.targets.push_back(identifier("a variable"));
    while (is_op(",")) {
      next();
      a.targets.push_back(identifier("a variable"));
    }
    expect("=");
    for (std::size_t k = 0; k < a.targets.size(); ++k) {
      if (k > 0) expect(",");
      a.rhs.push_back(rhs());
    }
    if (is_op(",")) error("more right-hand sides than targets");
    std::set<std::string> distinct(a.targets.begin(), a.targets.end());
    if (distinct.size() != a.targets.size()) error("duplicate target in simultaneous assignment");
    for (const auto& t : a.targets) assigned_.insert(t);
    return Statement::assignment(std::move(a), line);
  }

  Rhs rhs() {
    Rhs out;
    if (peek().type == Token::Type::Ident && is_op("(", 1)) {
      if (auto kind = parse_dist_kind(peek().text)) {
        next();
        next();
        DistributionDraw d;
        d.kind = *kind;
        if (!is_op(")")) {
          d.args.push_back(expr());
          while (is_op(",")) {
            next();
            d.args.push_back(expr());
          }
        }
        expect(")");
        std::size_t arity = dist_arity(d.kind);
        bool ok = d.kind == DistKind::Categorical ? d.args.size() >= arity : d.args.size() == arity;
        if (!ok) error(to_string(d.kind) + " expects " + std::to_string(arity) + " argument(s)");
        out.draw = std::move(d);
        return out;
      }
    }
    std::vector<RawBranch> raw;
    const Token& start = peek();
    raw.push_back({expr(), nullptr, start.line, start.col});
    while (is_op("{")) {
      next();
      raw.back().prob = expr();
      expect("}");
      if (starts_expr()) {
        const Token& t = peek();
        raw.push_back({expr(), nullptr, t.line, t.col});
      } else {
        break;
      }
    }
    resolve(raw, out);
    return out;
  }

  bool starts_expr() const {
    const Token& t = peek();
    if (t.type == Token::Type::Number) return true;
    if (t.type == Token::Type::Ident) {
      // A new statement starts with "ident =" or "ident ,".
      if (kKeywords.count(t.text)) return false;
      return !(is_op("=", 1) || is_op(",", 1));
    }
    return is_op("(") || is_op("-") || is_op("+");
  }

  void resolve(const std::vector<RawBranch>& raw, Rhs& out) {
    if (!ctx_) {
      for (const auto& b : raw) out.choices.push_back({b.value, RatFunc(0)});
      return;
    }
    RatFunc total(0);
    const RawBranch* implicit = nullptr;
    for (const auto& b : raw) {
      if (!b.prob) {
        if (implicit) throw SyntaxError("only the last choice may omit its probability", b.line, b.col);
        implicit = &b;
        continue;
      }
      RatFunc p = ctx_->constant(*b.prob, "choice probability");
      if (auto q = p.as_rational(); q && sgn(*q) < 0)
        throw AnalysisError(ErrorKind::ProbabilityError, "frontend",
                            "negative probability " + to_string(*q) + " at line " + std::to_string(b.line));
      total += p;
      out.choices.push_back({b.value, p});
    }
    if (auto q = total.as_rational(); q && *q > 1)
      throw AnalysisError(ErrorKind::ProbabilityError, "frontend",
                          "probabilities sum to " + to_string(*q) + " > 1 at line " + std::to_string(raw.front().line));
    if (implicit) {
      out.choices.push_back({implicit->value, RatFunc(1) - total});
    } else if (!(total == RatFunc(1))) {
      throw AnalysisError(ErrorKind::ProbabilityError, "frontend",
                          "probabilities sum to " + total.str() + " instead of 1 at line " +
                              std::to_string(raw.front().line));
    }
  }

  // --- boolean expressions -------------------------------------------------

  BoolPtr bexpr(bool guard) {
    if (guard && (peek().type == Token::Type::Star || is_op("*")) && is_op(":", 1)) {
      next();
      return std::make_shared<BoolExpr>();
    }
    return bool_or();
  }

  BoolPtr combine(BoolExpr::Kind kind, BoolPtr a, BoolPtr b) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = kind;
    e->left = std::move(a);
    e->right = std::move(b);
    return e;
  }

  BoolPtr bool_or() {
    BoolPtr left = bool_and();
    while (is_keyword("or") || is_op("||")) {
      next();
      left = combine(BoolExpr::Kind::Or, left, bool_and());
    }
    return left;
  }

  BoolPtr bool_and() {
    BoolPtr left = bool_not();
    while (is_keyword("and") || is_op("&&")) {
      next();
      left = combine(BoolExpr::Kind::And, left, bool_not());
    }
    return left;
  }

  BoolPtr bool_not() {
    if (is_keyword("not") || is_op("!")) {
      next();
      return combine(BoolExpr::Kind::Not, bool_not(), nullptr);
    }
    return bool_atom();
  }

  BoolPtr bool_atom() {
    if (is_keyword("true") || is_keyword("false")) {
      auto e = std::make_shared<BoolExpr>();
      e->kind = next().text == "true" ? BoolExpr::Kind::True : BoolExpr::Kind::False;
      return e;
    }
    if (is_op("(")) {
      std::size_t save = pos_;
      try {
        return comparison();
      } catch (const SyntaxError&) {
        pos_ = save;
      }
      next();
      BoolPtr inner = bool_or();
      expect(")");
      return inner;
    }
    return comparison();
  }

  BoolPtr comparison() {
    auto e = std::make_shared<BoolExpr>();
    e->kind = BoolExpr::Kind::Cmp;
    e->lhs = expr();
    static const std::map<std::string, BoolExpr::Op> ops = {
        {"==", BoolExpr::Op::Eq}, {"!=", BoolExpr::Op::Ne}, {"<", BoolExpr::Op::Lt},
        {"<=", BoolExpr::Op::Le}, {">", BoolExpr::Op::Gt}, {">=", BoolExpr::Op::Ge},
    };
    if (peek().type != Token::Type::Op || !ops.count(peek().text)) error("expected a comparison operator");
    e->op = ops.at(next().text);
    e->rhs = expr();
    return e;
  }

  // --- arithmetic ----------------------------------------------------------

  ExprPtr expr() {
    ExprPtr left = term();
    while (is_op("+") || is_op("-")) {
      auto kind = next().text == "+" ? Expr::Kind::Add : Expr::Kind::Sub;
      left = Expr::binary(kind, left, term());
    }
    return left;
  }

  ExprPtr term() {
    ExprPtr left = unary();
    while ((is_op("*") && !is_op(":", 1)) || is_op("/")) {
      auto kind = next().text == "*" ? Expr::Kind::Mul : Expr::Kind::Div;
      left = Expr::binary(kind, left, unary());
    }
    return left;
  }

  ExprPtr unary() {
    if (is_op("-")) {
      next();
      return Expr::neg(unary());
    }
    if (is_op("+")) {
      next();
      return unary();
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (is_op("**")) {
      next();
      const Token& t = peek();
      if (t.type != Token::Type::Number || t.text.find('.') != std::string::npos)
        error("exponent must be a natural number literal");
      unsigned long e = std::stoul(next().text);
      if (e > 64) error("exponent too large");
      return Expr::power(base, static_cast<unsigned>(e));
    }
    return base;
  }

  ExprPtr atom() {
    const Token& t = peek();
    if (t.type == Token::Type::Number) {
      next();
      try {
        return Expr::number(parse_rational(t.text));
      } catch (const std::exception&) {
        throw SyntaxError("malformed number '" + t.text + "'", t.line, t.col);
      }
    }
    if (t.type == Token::Type::Ident) {
      if (parse_dist_kind(t.text)) error("distributions may only appear as a whole right-hand side");
      return Expr::var(identifier("an expression"));
    }
    if (is_op("(")) {
      next();
      ExprPtr inner = expr();
      expect(")");
      return inner;
    }
    error("expected an expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Ast* ctx_;
  std::set<std::string> assigned_;
};

void check_definitions(const Ast& ast) {
  std::set<std::string> defined;
  auto check_expr = [&](const Expr& e, int line) {
    std::set<std::string> vars;
    e.collect_vars(vars);
    for (const auto& v : vars)
      if (!ast.is_param(v) && !defined.count(v))
        throw AnalysisError(ErrorKind::SyntaxError, "frontend",
                            "line " + std::to_string(line) + ": variable '" + v + "' is read before it is assigned");
  };
  std::function<void(const Block&)> walk = [&](const Block& block) {
    for (const auto& s : block) {
      if (s.kind == Statement::Kind::If) {
        std::set<std::string> vars;
        s.cond->collect_vars(vars);
        for (const auto& v : vars)
          if (!ast.is_param(v) && !defined.count(v))
            throw AnalysisError(ErrorKind::SyntaxError, "frontend",
                                "line " + std::to_string(s.line) + ": condition reads '" + v + "' before it is assigned");
        walk(s.then_body);
        walk(s.else_body);
        continue;
      }
      for (const auto& r : s.assign.rhs) {
        if (r.draw) {
          for (const auto& a : r.draw->args) check_expr(*a, s.line);
          if (r.draw->shift) check_expr(*r.draw->shift, s.line);
        }
        for (const auto& c : r.choices) check_expr(*c.value, s.line);
      }
      for (const auto& t : s.assign.targets) defined.insert(t);
    }
  };
  walk(ast.init);
  if (ast.guard) {
    std::set<std::string> vars;
    ast.guard->collect_vars(vars);
    for (const auto& v : vars)
      if (!ast.is_param(v) && !defined.count(v))
        throw AnalysisError(ErrorKind::SyntaxError, "frontend", "loop guard reads '" + v + "' which is not initialized");
  }
  walk(ast.body);
}

}  // namespace

Ast parse(std::string_view source) {
  std::vector<Token> tokens = tokenize(source);
  Parser first(tokens, nullptr);
  first.program();

  Ast context;
  for (const auto& t : tokens)
    if (t.type == Token::Type::Ident && !kKeywords.count(t.text) && !parse_dist_kind(t.text) &&
        !first.assigned().count(t.text))
      context.params.insert(t.text);

  Parser second(std::move(tokens), &context);
  Ast ast = second.program();
  ast.params = context.params;
  std::set<std::string> seen;
  auto order = [&](const Block& b) {
    for_each_statement(b, [&](const Statement& s) {
      if (s.kind != Statement::Kind::Assign) return;
      for (const auto& t : s.assign.targets)
        if (seen.insert(t).second) ast.variables.push_back(t);
    });
  };
  order(ast.init);
  order(ast.body);
  check_definitions(ast);
  return ast;
}

}  // namespace loopm
