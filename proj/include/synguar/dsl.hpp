#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace synguar {

enum class Sort : std::uint8_t
{
  String,
  Int,
  Bool,
};

std::string_view sort_name(Sort sort);
std::optional<Sort> parse_sort(std::string_view name);

/// A runtime value. The alternative index always agrees with the value's Sort.
using Value = std::variant<std::string, std::int64_t, bool>;

Sort sort_of(const Value& v);
/// Program-text rendering: quoted strings, decimal integers, true/false.
std::string value_text(const Value& v);

enum class Op : std::uint8_t
{
  // leaves
  Input,
  StrConst,
  IntConst,
  // string-valued
  Concat,
  Replace,
  At,
  Substr,
  IntToStr,
  // int-valued
  Plus,
  Minus,
  Length,
  StrToInt,
  IndexOf,
  // bool-valued
  StrEq,
  IntLe,
  PrefixOf,
  SuffixOf,
  Contains,
  // top-level conditional; not a component
  Ite,
};

struct OpInfo
{
  std::string_view name;
  std::vector<Sort> args;
  Sort result;
};

/// Signature of a function op. Undefined for leaves and Ite.
const OpInfo& op_info(Op op);
bool is_function(Op op);
/// All function ops in their canonical order.
std::span<const Op> function_ops();
std::optional<Op> function_by_name(std::string_view name);

/// Primitive semantics shared by eval and the enumerator. All total.
namespace prim {
std::string concat(std::string_view a, std::string_view b);
std::string replace(std::string_view s, std::string_view pattern,
                    std::string_view with);
std::string at(std::string_view s, std::int64_t i);
std::string substr(std::string_view s, std::int64_t start, std::int64_t len);
std::string int_to_str(std::int64_t n);
std::int64_t plus(std::int64_t a, std::int64_t b);
std::int64_t minus(std::int64_t a, std::int64_t b);
std::int64_t length(std::string_view s);
std::int64_t str_to_int(std::string_view s);
std::int64_t indexof(std::string_view s, std::string_view t, std::int64_t start);
bool prefixof(std::string_view prefix, std::string_view s);
bool suffixof(std::string_view suffix, std::string_view s);
bool contains(std::string_view s, std::string_view t);
}  // namespace prim

/// Applies a function op to argument values of the declared sorts.
Value apply_op(Op op, std::span<const Value> args);

struct InputDecl
{
  std::string name;
  Sort sort;
};

using Signature = std::vector<InputDecl>;

/// Identifier ([A-Za-z_][A-Za-z0-9_]*) that is not "if" or a function name.
bool valid_input_name(std::string_view name);

/// Ordered bindings of input names to values.
class Env
{
 public:
  Env() = default;
  explicit Env(std::vector<std::pair<std::string, Value>> bindings);

  std::size_t size() const { return d_bindings.size(); }
  const std::string& name(std::size_t i) const { return d_bindings[i].first; }
  const Value& value(std::size_t i) const { return d_bindings[i].second; }
  const Value* find(std::string_view name) const;
  void bind(std::string name, Value value);

  /// Throws InputError unless each declared input is bound once, in order,
  /// with a value of its sort.
  void check_against(const Signature& sig) const;

  friend bool operator==(const Env&, const Env&) = default;

 private:
  std::vector<std::pair<std::string, Value>> d_bindings;
};

/// Immutable, shared program tree.
class Expr
{
 public:
  static Expr input(std::size_t index, std::string name, Sort sort);
  static Expr str_const(std::string s);
  static Expr int_const(std::int64_t n);
  static Expr literal(const Value& v);
  /// Throws std::invalid_argument on arity or sort mismatches.
  static Expr apply(Op op, std::vector<Expr> args);
  /// Conditional nodes may only nest in the else branch, up to depth 2.
  /// Throws std::invalid_argument otherwise.
  static Expr ite(Expr cond, Expr then_branch, Expr else_branch);

  Op op() const { return d_node->op; }
  Sort sort() const { return d_node->sort; }
  std::span<const Expr> children() const { return d_node->children; }
  std::size_t input_index() const { return d_node->input_index; }
  const std::string& input_name() const { return d_node->name; }
  const Value& literal_value() const { return d_node->literal; }

  /// Number of non-conditional nodes.
  std::size_t component_size() const { return d_node->size; }
  /// Number of conditional nodes (0 for straight-line programs).
  int conditions() const { return d_node->conditions; }

  /// Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);
  bool same_node(const Expr& other) const { return d_node == other.d_node; }

 private:
  struct Node
  {
    Op op;
    Sort sort;
    std::vector<Expr> children;
    std::size_t input_index = 0;
    std::string name;
    Value literal;
    std::size_t size = 0;
    int conditions = 0;
  };

  explicit Expr(std::shared_ptr<const Node> node) : d_node(std::move(node)) {}

  std::shared_ptr<const Node> d_node;
};

/// Preorder comparison over node tokens (op, then input index or literal).
/// A total order on programs; smaller means preferred among equal sizes.
int compare_preorder(const Expr& a, const Expr& b);

/// Three-way comparison of the would-be node `op(args...)` against `b`
/// without constructing it.
int compare_application(Op op, std::span<const Expr* const> args, const Expr& b);

/// Total evaluation. Input leaves read env by position.
Value eval(const Expr& e, const Env& env);

std::string pretty(const Expr& e);

/// Parses a parenthesized prefix term. Throws ParseError.
Expr parse_expr(std::string_view text, const Signature& sig);

class ParseError : public std::runtime_error
{
 public:
  enum class Kind
  {
    Syntax,
    UnknownComponent,
    ArityMismatch,
    SortMismatch,
    Nesting,
  };

  ParseError(Kind kind, std::size_t position, const std::string& message);

  Kind kind() const { return d_kind; }
  std::size_t position() const { return d_position; }

 private:
  Kind d_kind;
  std::size_t d_position;
};

/// A leaf or function usable by the enumerator.
struct Component
{
  std::string name;
  Op op;
  std::vector<Sort> arg_sorts;
  Sort result_sort;
  /// Set for leaves.
  std::optional<Expr> leaf;

  std::size_t arity() const { return arg_sorts.size(); }
  bool is_leaf() const { return leaf.has_value(); }
};

struct LanguageConfig
{
  Signature inputs;
  std::vector<std::string> string_constants;
  std::vector<std::int64_t> int_constants;
  /// Function allowlist by name; all functions when unset.
  std::optional<std::vector<std::string>> functions;
};

/// Leaves first (inputs, string constants, integer constants including 0 and
/// 1), then functions in canonical order. Throws InputError on an empty
/// signature or unknown function names.
std::vector<Component> default_component_set(const LanguageConfig& lang);

/// An input-output pair.
struct Example
{
  Env inputs;
  Value output;

  friend bool operator==(const Example&, const Example&) = default;
};

}  // namespace synguar
