#pragma once

#include <memory>
#include <string>

#include "photon_ur/momentum_space.hpp"

namespace photon_ur {

/// Complex-valued expression over k, theta, phi and the parameter a.
///
/// Grammar (usual precedence, ^ right-associative and binding tighter than
/// unary minus):
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('+' | '-') unary | power
///   power   := primary ('^' unary)?
///   primary := number | name | name '(' expr ')' | '(' expr ')'
/// Names: k, theta, phi, a, pi, i. Functions: sin, cos, exp, sqrt.
class AmplitudeExpression {
public:
  struct Node;

  static AmplitudeExpression parse(const std::string &source);

  const std::string &source() const { return source_; }

  /// Canonical, fully parenthesized form; parses back to the same tree.
  std::string to_string() const;

  cplx evaluate(const SphericalPoint &p, double a) const;

  /// Helicity component with finite-difference partials.
  HelicityComponent component(double a) const;

private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

} // namespace photon_ur
