#include "photon_ur/expression.hpp"

#include <cctype>
#include <cmath>
#include <vector>

#include "photon_ur/report_io.hpp"

namespace photon_ur {

struct AmplitudeExpression::Node {
  enum class Kind { number, variable, negate, add, sub, mul, div, pow, call };
  enum class Var { k, theta, phi, a };
  enum class Fn { sin, cos, exp, sqrt };

  Kind kind;
  cplx number{};
  Var var{};
  Fn fn{};
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = AmplitudeExpression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_number(cplx v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::number;
  n->number = v;
  return n;
}

NodePtr make_binary(Node::Kind kind, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
public:
  explicit Parser(const std::string &text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expr();
    skip_space();
    if (pos_ != text_.size())
      fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

private:
  const std::string &text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string &what) const {
    throw Error(ErrorKind::syntax, "syntax error at position " +
                                       std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make_binary(Node::Kind::add, lhs, term());
      else if (accept('-'))
        lhs = make_binary(Node::Kind::sub, lhs, term());
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make_binary(Node::Kind::mul, lhs, unary());
      else if (accept('/'))
        lhs = make_binary(Node::Kind::div, lhs, unary());
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::negate;
      n->lhs = unary();
      return n;
    }
    if (accept('+'))
      return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^'))
      return make_binary(Node::Kind::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size())
      fail("expected an expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')'))
        fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return name();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '.'))
      ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-'))
        ++look;
      if (look < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_])))
          ++pos_;
      }
    }
    const std::string token = text_.substr(start, pos_ - start);
    double value = 0.0;
    if (!parse_double(token, value)) {
      pos_ = start;
      fail("malformed number '" + token + "'");
    }
    return make_number(value);
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    const std::string id = text_.substr(start, pos_ - start);

    static const std::pair<const char *, Node::Fn> functions[] = {
        {"sin", Node::Fn::sin},
        {"cos", Node::Fn::cos},
        {"exp", Node::Fn::exp},
        {"sqrt", Node::Fn::sqrt}};
    for (const auto &[fname, fn] : functions) {
      if (id == fname) {
        if (!accept('('))
          fail("expected '(' after " + id);
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::call;
        n->fn = fn;
        n->lhs = expr();
        if (!accept(')'))
          fail("expected ')'");
        return n;
      }
    }

    static const std::pair<const char *, Node::Var> variables[] = {
        {"k", Node::Var::k},
        {"theta", Node::Var::theta},
        {"phi", Node::Var::phi},
        {"a", Node::Var::a}};
    for (const auto &[vname, var] : variables) {
      if (id == vname) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::variable;
        n->var = var;
        return n;
      }
    }
    if (id == "pi")
      return make_number(kPi);
    if (id == "i")
      return make_number(kI);
    throw Error(ErrorKind::unknown_identifier,
                "unknown identifier '" + id + "' at position " +
                    std::to_string(start));
  }
};

cplx eval(const Node &n, const SphericalPoint &p, double a) {
  switch (n.kind) {
  case Node::Kind::number:
    return n.number;
  case Node::Kind::variable:
    switch (n.var) {
    case Node::Var::k:
      return p.k;
    case Node::Var::theta:
      return p.theta;
    case Node::Var::phi:
      return p.phi;
    case Node::Var::a:
      return a;
    }
    break;
  case Node::Kind::negate:
    // 0 - z rather than -z: no signed zeros, so sqrt(-4) stays on the
    // principal branch.
    return cplx{} - eval(*n.lhs, p, a);
  case Node::Kind::add:
    return eval(*n.lhs, p, a) + eval(*n.rhs, p, a);
  case Node::Kind::sub:
    return eval(*n.lhs, p, a) - eval(*n.rhs, p, a);
  case Node::Kind::mul:
    return eval(*n.lhs, p, a) * eval(*n.rhs, p, a);
  case Node::Kind::div:
    return eval(*n.lhs, p, a) / eval(*n.rhs, p, a);
  case Node::Kind::pow: {
    const cplx base = eval(*n.lhs, p, a);
    const cplx exponent = eval(*n.rhs, p, a);
    // Real integer powers stay exact for negative bases.
    if (exponent.imag() == 0.0 && exponent.real() == std::round(exponent.real()) &&
        std::abs(exponent.real()) <= 64.0) {
      const int e = static_cast<int>(exponent.real());
      cplx result = 1.0;
      cplx factor = e >= 0 ? base : 1.0 / base;
      for (int i = 0; i < std::abs(e); ++i)
        result *= factor;
      return result;
    }
    return std::pow(base, exponent);
  }
  case Node::Kind::call: {
    const cplx arg = eval(*n.lhs, p, a);
    switch (n.fn) {
    case Node::Fn::sin:
      return std::sin(arg);
    case Node::Fn::cos:
      return std::cos(arg);
    case Node::Fn::exp:
      return std::exp(arg);
    case Node::Fn::sqrt:
      return std::sqrt(arg);
    }
    break;
  }
  }
  return {};
}

std::string format_number(cplx v) {
  if (v == kI)
    return "i";
  if (v.imag() == 0.0)
    return format_double(v.real());
  // Only produced by folding-free parsing of `i`; keep a parseable form.
  return "(" + format_double(v.real()) + "+" + format_double(v.imag()) + "*i)";
}

std::string print(const Node &n) {
  switch (n.kind) {
  case Node::Kind::number:
    return format_number(n.number);
  case Node::Kind::variable:
    switch (n.var) {
    case Node::Var::k:
      return "k";
    case Node::Var::theta:
      return "theta";
    case Node::Var::phi:
      return "phi";
    case Node::Var::a:
      return "a";
    }
    break;
  case Node::Kind::negate:
    return "(-" + print(*n.lhs) + ")";
  case Node::Kind::add:
    return "(" + print(*n.lhs) + "+" + print(*n.rhs) + ")";
  case Node::Kind::sub:
    return "(" + print(*n.lhs) + "-" + print(*n.rhs) + ")";
  case Node::Kind::mul:
    return "(" + print(*n.lhs) + "*" + print(*n.rhs) + ")";
  case Node::Kind::div:
    return "(" + print(*n.lhs) + "/" + print(*n.rhs) + ")";
  case Node::Kind::pow:
    return "(" + print(*n.lhs) + "^" + print(*n.rhs) + ")";
  case Node::Kind::call: {
    static const char *names[] = {"sin", "cos", "exp", "sqrt"};
    return std::string(names[static_cast<int>(n.fn)]) + "(" + print(*n.lhs) +
           ")";
  }
  }
  return "";
}

} // namespace

AmplitudeExpression AmplitudeExpression::parse(const std::string &source) {
  AmplitudeExpression out;
  out.source_ = source;
  out.root_ = Parser(source).parse();
  return out;
}

std::string AmplitudeExpression::to_string() const { return print(*root_); }

cplx AmplitudeExpression::evaluate(const SphericalPoint &p, double a) const {
  return eval(*root_, p, a);
}

HelicityComponent AmplitudeExpression::component(double a) const {
  HelicityComponent c;
  c.value = [root = root_, a](const SphericalPoint &p) {
    return eval(*root, p, a);
  };
  return c;
}

} // namespace photon_ur
