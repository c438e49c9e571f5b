#include "vex/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>

namespace vex {

double sgnpow(double t, double q) {
  if (t == 0.0) return 0.0;
  double m = std::pow(std::abs(t), q);
  return t < 0.0 ? -m : m;
}

namespace {

class Num : public Expr {
public:
  explicit Num(double v) : v_(v) {}
  double eval(const EvalEnv&) const override { return v_; }
  void print(std::string& out) const override {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v_);
    out += buf;
  }
  ExprPtr substitute(const std::string&, const ExprPtr&) const override {
    return std::make_shared<Num>(v_);
  }
  void collect_fields(std::vector<std::string>&) const override {}

private:
  double v_;
};

class Var : public Expr {
public:
  explicit Var(std::string name) : name_(std::move(name)) {}
  double eval(const EvalEnv& env) const override {
    if (name_ == "x") return env.x;
    if (name_ == "y") return env.y;
    if (name_ == "pi") return 3.14159265358979323846;
    if (name_ == "u") {
      if (!env.has_u)
        throw domain_error("expression uses 'u' but no solution argument is bound");
      return env.u;
    }
    if (env.fields) {
      auto it = env.fields->find(name_);
      if (it != env.fields->end()) return it->second;
    }
    throw config_error("unbound identifier '" + name_ + "' in expression");
  }
  void print(std::string& out) const override { out += name_; }
  ExprPtr substitute(const std::string& name, const ExprPtr& repl) const override {
    if (name_ == name) return repl;
    return std::make_shared<Var>(name_);
  }
  void collect_fields(std::vector<std::string>& out) const override {
    if (name_ != "x" && name_ != "y" && name_ != "u" && name_ != "pi")
      out.push_back(name_);
  }

private:
  std::string name_;
};

class Unary : public Expr {
public:
  explicit Unary(ExprPtr a) : a_(std::move(a)) {}
  double eval(const EvalEnv& env) const override { return -a_->eval(env); }
  void print(std::string& out) const override {
    out += "(-";
    a_->print(out);
    out += ")";
  }
  ExprPtr substitute(const std::string& n, const ExprPtr& r) const override {
    return std::make_shared<Unary>(a_->substitute(n, r));
  }
  void collect_fields(std::vector<std::string>& out) const override {
    a_->collect_fields(out);
  }

private:
  ExprPtr a_;
};

class BinOp : public Expr {
public:
  BinOp(char op, ExprPtr a, ExprPtr b) : op_(op), a_(std::move(a)), b_(std::move(b)) {}
  double eval(const EvalEnv& env) const override {
    double a = a_->eval(env);
    double b = b_->eval(env);
    switch (op_) {
      case '+': return a + b;
      case '-': return a - b;
      case '*': return a * b;
      case '/': return a / b;
      default:  return std::pow(a, b);
    }
  }
  void print(std::string& out) const override {
    out += "(";
    a_->print(out);
    out += ' ';
    out += op_;
    out += ' ';
    b_->print(out);
    out += ")";
  }
  ExprPtr substitute(const std::string& n, const ExprPtr& r) const override {
    return std::make_shared<BinOp>(op_, a_->substitute(n, r), b_->substitute(n, r));
  }
  void collect_fields(std::vector<std::string>& out) const override {
    a_->collect_fields(out);
    b_->collect_fields(out);
  }

private:
  char op_;
  ExprPtr a_, b_;
};

class Call : public Expr {
public:
  Call(std::string name, std::vector<ExprPtr> args)
      : name_(std::move(name)), args_(std::move(args)) {}
  double eval(const EvalEnv& env) const override {
    if (name_ == "sgnpow") return sgnpow(args_[0]->eval(env), args_[1]->eval(env));
    double a = args_[0]->eval(env);
    if (name_ == "sin") return std::sin(a);
    if (name_ == "cos") return std::cos(a);
    if (name_ == "exp") return std::exp(a);
    if (name_ == "log") return std::log(a);
    return std::abs(a);
  }
  void print(std::string& out) const override {
    out += name_;
    out += "(";
    for (size_t i = 0; i < args_.size(); ++i) {
      if (i) out += ", ";
      args_[i]->print(out);
    }
    out += ")";
  }
  ExprPtr substitute(const std::string& n, const ExprPtr& r) const override {
    std::vector<ExprPtr> args;
    args.reserve(args_.size());
    for (const auto& a : args_) args.push_back(a->substitute(n, r));
    return std::make_shared<Call>(name_, std::move(args));
  }
  void collect_fields(std::vector<std::string>& out) const override {
    for (const auto& a : args_) a->collect_fields(out);
  }

private:
  std::string name_;
  std::vector<ExprPtr> args_;
};

struct Parser {
  const std::string& s;
  size_t pos = 0;

  explicit Parser(const std::string& text) : s(text) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw config_error("expression parse error at offset " + std::to_string(pos) +
                       ": " + what + " in \"" + s + "\"");
  }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }

  ExprPtr parse() {
    ExprPtr e = expr();
    skip_ws();
    if (pos != s.size()) fail("trailing characters");
    return e;
  }

  ExprPtr expr() {
    ExprPtr a = term();
    for (;;) {
      if (eat('+')) a = std::make_shared<BinOp>('+', a, term());
      else if (eat('-')) a = std::make_shared<BinOp>('-', a, term());
      else return a;
    }
  }

  ExprPtr term() {
    ExprPtr a = unary();
    for (;;) {
      if (eat('*')) a = std::make_shared<BinOp>('*', a, unary());
      else if (eat('/')) a = std::make_shared<BinOp>('/', a, unary());
      else return a;
    }
  }

  ExprPtr unary() {
    if (eat('-')) return std::make_shared<Unary>(unary());
    return power();
  }

  ExprPtr power() {
    ExprPtr a = primary();
    if (eat('^')) return std::make_shared<BinOp>('^', a, unary());
    return a;
  }

  ExprPtr primary() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      ExprPtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
    fail("unexpected character");
  }

  ExprPtr number() {
    size_t start = pos;
    while (pos < s.size() &&
           (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '.'))
      ++pos;
    if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
      size_t mark = pos++;
      if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
      if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      } else {
        pos = mark;  // 'e' belongs to a following identifier, not this literal
      }
    }
    try {
      return std::make_shared<Num>(std::stod(s.substr(start, pos - start)));
    } catch (const std::exception&) {
      pos = start;
      fail("malformed number");
    }
  }

  ExprPtr ident() {
    size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    std::string name = s.substr(start, pos - start);
    static const char* fns1[] = {"sin", "cos", "exp", "log", "abs"};
    bool is_fn1 = std::find_if(std::begin(fns1), std::end(fns1),
                               [&](const char* f) { return name == f; }) != std::end(fns1);
    if (is_fn1 || name == "sgnpow") {
      if (!eat('(')) fail("function '" + name + "' needs an argument list");
      std::vector<ExprPtr> args;
      args.push_back(expr());
      while (eat(',')) args.push_back(expr());
      if (!eat(')')) fail("expected ')'");
      size_t want = name == "sgnpow" ? 2 : 1;
      if (args.size() != want)
        fail("function '" + name + "' takes " + std::to_string(want) + " argument(s)");
      return std::make_shared<Call>(name, std::move(args));
    }
    if (peek() == '(') fail("unknown function '" + name + "'");
    return std::make_shared<Var>(name);
  }
};

}  // namespace

ExprPtr parse_expression(const std::string& text) {
  Parser p(text);
  return p.parse();
}

}  // namespace vex
