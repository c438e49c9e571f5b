#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vex/errors.hpp"

namespace vex {

// Closed-form scalar expressions, used for exponent fields, coefficient
// fields, sources and nonlinearities in problem files.
//
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?            (right associative)
//   primary := number | ident | ident '(' expr {',' expr} ')' | '(' expr ')'
//
// Identifiers: 'x', 'y' (coordinates), 'u' (solution argument), 'pi', or the
// name of a nodal field bound in the evaluation environment.  Functions:
// sin, cos, exp, log, abs, and sgnpow(t, q) = |t|^q * sgn(t), the odd power
// map with sgnpow(0, q) = 0 for q > 0.

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct EvalEnv {
  double x = 0.0;
  double y = 0.0;
  double u = 0.0;
  bool has_u = false;
  // Field values at the current node, bound by name.
  const std::map<std::string, double>* fields = nullptr;
};

class Expr {
public:
  virtual ~Expr() = default;
  virtual double eval(const EvalEnv& env) const = 0;
  virtual void print(std::string& out) const = 0;
  virtual ExprPtr substitute(const std::string& name, const ExprPtr& repl) const = 0;
  // Free identifiers that are not coordinates, 'u' or 'pi'.
  virtual void collect_fields(std::vector<std::string>& out) const = 0;

  std::string to_string() const {
    std::string s;
    print(s);
    return s;
  }
};

ExprPtr parse_expression(const std::string& text);

// |t|^q * sgn(t); exact zero at t = 0.
double sgnpow(double t, double q);

}  // namespace vex
