#include "internal/expression.hpp"

#include <algorithm>

namespace cfcm::detail {

struct Expression::Node {
  enum class Op { literal, name, error, negate, add, sub, mul, mod, bxor, eq, ne };
  Op op = Op::literal;
  long long value = 0;    // literal value or name slot
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, std::size_t pos, std::vector<Diagnostic>& diagnostics,
         std::vector<std::string>& names, bool& uses_error)
      : tokens_(tokens), pos_(pos), diagnostics_(diagnostics), names_(names), uses_error_(uses_error) {}

  NodePtr parse_all() {
    NodePtr root = comparison();
    if (root && peek().kind != Token::Kind::end) fail(peek(), "unexpected '" + peek().text + "' in expression");
    return failed_ ? nullptr : root;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_ == tokens_.size() - 1 ? pos_ : pos_++]; }
  void fail(const Token& at, std::string message) {
    if (!failed_) diagnostics_.push_back({std::move(message), "", at.line, at.column});
    failed_ = true;
  }
  static NodePtr binary(Node::Op op, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
  }

  NodePtr comparison() {
    NodePtr lhs = modulo();
    while (lhs && (peek().is("==") || peek().is("!="))) {
      const Node::Op op = take().text == "==" ? Node::Op::eq : Node::Op::ne;
      NodePtr rhs = modulo();
      if (!rhs) return nullptr;
      lhs = binary(op, lhs, rhs);
    }
    return lhs;
  }
  NodePtr modulo() {
    NodePtr lhs = exclusive_or();
    while (lhs && peek().kind == Token::Kind::identifier && peek().text == "mod") {
      take();
      NodePtr rhs = exclusive_or();
      if (!rhs) return nullptr;
      lhs = binary(Node::Op::mod, lhs, rhs);
    }
    return lhs;
  }
  NodePtr exclusive_or() {
    NodePtr lhs = additive();
    while (lhs && peek().kind == Token::Kind::identifier && peek().text == "xor") {
      take();
      NodePtr rhs = additive();
      if (!rhs) return nullptr;
      lhs = binary(Node::Op::bxor, lhs, rhs);
    }
    return lhs;
  }
  NodePtr additive() {
    NodePtr lhs = multiplicative();
    while (lhs && (peek().is("+") || peek().is("-"))) {
      const Node::Op op = take().text == "+" ? Node::Op::add : Node::Op::sub;
      NodePtr rhs = multiplicative();
      if (!rhs) return nullptr;
      lhs = binary(op, lhs, rhs);
    }
    return lhs;
  }
  NodePtr multiplicative() {
    NodePtr lhs = unary();
    while (lhs && peek().is("*")) {
      take();
      NodePtr rhs = unary();
      if (!rhs) return nullptr;
      lhs = binary(Node::Op::mul, lhs, rhs);
    }
    return lhs;
  }
  NodePtr unary() {
    if (peek().is("-")) {
      take();
      NodePtr operand = unary();
      if (!operand) return nullptr;
      auto n = std::make_shared<Node>();
      n->op = Node::Op::negate;
      n->lhs = std::move(operand);
      return n;
    }
    return primary();
  }
  NodePtr primary() {
    const Token& t = take();
    auto n = std::make_shared<Node>();
    switch (t.kind) {
      case Token::Kind::integer: {
        long long value = 0;
        for (char c : t.text) {
          if (__builtin_mul_overflow(value, 10LL, &value) || __builtin_add_overflow(value, c - '0', &value)) {
            fail(t, "integer literal too large");
            return nullptr;
          }
        }
        n->value = value;
        return n;
      }
      case Token::Kind::identifier: {
        if (t.text == "xor" || t.text == "mod") {
          fail(t, "expected an operand before '" + t.text + "'");
          return nullptr;
        }
        if (t.text == "u") {
          n->op = Node::Op::error;
          uses_error_ = true;
          return n;
        }
        auto it = std::find(names_.begin(), names_.end(), t.text);
        if (it == names_.end()) it = names_.insert(names_.end(), t.text);
        n->op = Node::Op::name;
        n->value = it - names_.begin();
        return n;
      }
      case Token::Kind::symbol:
        if (t.text == "(") {
          NodePtr inner = comparison();
          if (!inner) return nullptr;
          if (!peek().is(")")) {
            fail(peek(), "expected ')'");
            return nullptr;
          }
          take();
          return inner;
        }
        fail(t, "unexpected '" + t.text + "' in expression");
        return nullptr;
      case Token::Kind::end:
        fail(t, "expression is incomplete");
        return nullptr;
    }
    return nullptr;
  }

  const std::vector<Token>& tokens_;
  std::size_t pos_;
  std::vector<Diagnostic>& diagnostics_;
  std::vector<std::string>& names_;
  bool& uses_error_;
  bool failed_ = false;
};

std::optional<long long> eval(const Node& n, std::span<const long long> values, long long u, std::string& error) {
  using Op = Node::Op;
  switch (n.op) {
    case Op::literal:
      return n.value;
    case Op::name:
      return values[static_cast<std::size_t>(n.value)];
    case Op::error:
      return u;
    case Op::negate: {
      auto a = eval(*n.lhs, values, u, error);
      if (!a) return std::nullopt;
      long long r = 0;
      if (__builtin_sub_overflow(0LL, *a, &r)) {
        error = "integer overflow";
        return std::nullopt;
      }
      return r;
    }
    default:
      break;
  }
  auto a = eval(*n.lhs, values, u, error);
  if (!a) return std::nullopt;
  auto b = eval(*n.rhs, values, u, error);
  if (!b) return std::nullopt;
  long long r = 0;
  bool overflow = false;
  switch (n.op) {
    case Op::add:
      overflow = __builtin_add_overflow(*a, *b, &r);
      break;
    case Op::sub:
      overflow = __builtin_sub_overflow(*a, *b, &r);
      break;
    case Op::mul:
      overflow = __builtin_mul_overflow(*a, *b, &r);
      break;
    case Op::bxor:
      r = *a ^ *b;
      break;
    case Op::eq:
      r = *a == *b ? 1 : 0;
      break;
    case Op::ne:
      r = *a != *b ? 1 : 0;
      break;
    case Op::mod:
      if (*b <= 0) {
        error = "mod by non-positive number " + std::to_string(*b);
        return std::nullopt;
      }
      r = *a % *b;
      if (r < 0) r += *b;
      break;
    default:
      break;
  }
  if (overflow) {
    error = "integer overflow";
    return std::nullopt;
  }
  return r;
}

}  // namespace

std::optional<Expression> Expression::parse(const std::vector<Token>& tokens, std::size_t begin,
                                            std::vector<Diagnostic>& diagnostics) {
  Expression e;
  Parser parser(tokens, begin, diagnostics, e.names_, e.uses_error_);
  e.root_ = parser.parse_all();
  if (!e.root_) return std::nullopt;
  return e;
}

std::optional<long long> Expression::evaluate(std::span<const long long> values, long long u,
                                              std::string& error) const {
  return eval(*root_, values, u, error);
}

std::optional<Mechanism> compile_expression(const Expression& expr, const DirectedGraph& g,
                                            const std::vector<Alphabet>& alphabets, const ErrorVariable& error,
                                            VertexIndex v, const Token& where, std::vector<Diagnostic>& diagnostics) {
  const std::string& label = g.label(v);
  auto report = [&](std::string message) {
    diagnostics.push_back({std::move(message), label, where.line, where.column});
    return std::nullopt;
  };
  const std::vector<VertexIndex>& parents = g.parents(v);
  std::vector<std::size_t> slot;  // names()[i] -> position in parents
  for (const std::string& name : expr.names()) {
    auto found = g.find(name);
    if (!found) return report("unknown name '" + name + "' in expression for '" + label + "'");
    auto it = std::find(parents.begin(), parents.end(), *found);
    if (it == parents.end()) return report("'" + name + "' is not a parent of '" + label + "'");
    if (!alphabets[*found].is_numeric())
      return report("'" + name + "' has a non-numeric alphabet and cannot appear in an expression");
    slot.push_back(static_cast<std::size_t>(it - parents.begin()));
  }
  if (expr.uses_error() && !error.alphabet.is_numeric())
    return report("error alphabet of '" + label + "' is not numeric; 'u' cannot be used");
  if (!alphabets[v].is_numeric()) return report("alphabet of '" + label + "' is not numeric; use a table");

  std::vector<long long> values(slot.size());
  std::optional<std::string> failure;
  Mechanism m = tabulate_mechanism(g, alphabets, v, error.alphabet.size(),
                                   [&](std::span<const std::size_t> pa, std::size_t u) -> std::size_t {
                                     if (failure) return 0;
                                     for (std::size_t i = 0; i < slot.size(); ++i)
                                       values[i] = alphabets[parents[slot[i]]].numeric_value(pa[slot[i]]);
                                     const long long uv = expr.uses_error() ? error.alphabet.numeric_value(u) : 0;
                                     std::string why;
                                     auto r = expr.evaluate(values, uv, why);
                                     auto describe = [&] {
                                       std::string s = "(";
                                       for (std::size_t i = 0; i < parents.size(); ++i) {
                                         if (i > 0) s += ", ";
                                         s += g.label(parents[i]) + "=" + alphabets[parents[i]].symbol(pa[i]);
                                       }
                                       s += ")";
                                       if (!error.is_deterministic()) s += " u=" + error.alphabet.symbol(u);
                                       return s;
                                     };
                                     if (!r) {
                                       failure = why + " evaluating '" + label + "' at " + describe();
                                       return 0;
                                     }
                                     auto out = alphabets[v].find_numeric(*r);
                                     if (!out) {
                                       failure = "value " + std::to_string(*r) + " outside the alphabet of '" + label +
                                                 "' at " + describe();
                                       return 0;
                                     }
                                     return *out;
                                   });
  if (failure) return report(*failure);
  return m;
}

}  // namespace cfcm::detail
