#include "synguar/dsl.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "synguar/errors.hpp"

namespace synguar {

std::string_view sort_name(Sort sort)
{
  switch (sort)
  {
    case Sort::String: return "string";
    case Sort::Int: return "int";
    case Sort::Bool: return "bool";
  }
  return "?";
}

std::optional<Sort> parse_sort(std::string_view name)
{
  if (name == "string") return Sort::String;
  if (name == "int") return Sort::Int;
  if (name == "bool") return Sort::Bool;
  return std::nullopt;
}

Sort sort_of(const Value& v)
{
  switch (v.index())
  {
    case 0: return Sort::String;
    case 1: return Sort::Int;
    default: return Sort::Bool;
  }
}

std::string value_text(const Value& v)
{
  if (const auto* s = std::get_if<std::string>(&v))
  {
    std::string out = "\"";
    for (char c : *s)
    {
      if (c == '"' || c == '\\') out.push_back('\\');
      out.push_back(c);
    }
    out.push_back('"');
    return out;
  }
  if (const auto* n = std::get_if<std::int64_t>(&v))
  {
    return std::to_string(*n);
  }
  return std::get<bool>(v) ? "true" : "false";
}

namespace {

constexpr std::array kFunctionOps = {
    Op::Concat, Op::Replace,  Op::At,     Op::Substr,   Op::IntToStr,
    Op::Plus,   Op::Minus,    Op::Length, Op::StrToInt, Op::IndexOf,
    Op::StrEq,  Op::IntLe,    Op::PrefixOf, Op::SuffixOf, Op::Contains,
};

const std::vector<OpInfo>& op_table()
{
  using S = Sort;
  static const std::vector<OpInfo> table = {
      {"concat", {S::String, S::String}, S::String},
      {"replace", {S::String, S::String, S::String}, S::String},
      {"at", {S::String, S::Int}, S::String},
      {"substr", {S::String, S::Int, S::Int}, S::String},
      {"int_to_str", {S::Int}, S::String},
      {"+", {S::Int, S::Int}, S::Int},
      {"-", {S::Int, S::Int}, S::Int},
      {"len", {S::String}, S::Int},
      {"str_to_int", {S::String}, S::Int},
      {"indexof", {S::String, S::String, S::Int}, S::Int},
      {"=", {S::String, S::String}, S::Bool},
      {"<=", {S::Int, S::Int}, S::Bool},
      {"prefixof", {S::String, S::String}, S::Bool},
      {"suffixof", {S::String, S::String}, S::Bool},
      {"contains", {S::String, S::String}, S::Bool},
  };
  return table;
}

}  // namespace

bool is_function(Op op) { return op >= Op::Concat && op <= Op::Contains; }

const OpInfo& op_info(Op op)
{
  if (!is_function(op))
  {
    throw std::logic_error("op_info on a non-function op");
  }
  return op_table()[static_cast<std::size_t>(op)
                    - static_cast<std::size_t>(Op::Concat)];
}

std::span<const Op> function_ops() { return kFunctionOps; }

std::optional<Op> function_by_name(std::string_view name)
{
  for (Op op : kFunctionOps)
  {
    if (op_info(op).name == name) return op;
  }
  return std::nullopt;
}

namespace prim {

std::string concat(std::string_view a, std::string_view b)
{
  std::string out;
  out.reserve(a.size() + b.size());
  out.append(a);
  out.append(b);
  return out;
}

std::string replace(std::string_view s, std::string_view pattern,
                    std::string_view with)
{
  std::size_t pos = s.find(pattern);
  if (pos == std::string_view::npos) return std::string(s);
  std::string out;
  out.reserve(s.size() + with.size());
  out.append(s.substr(0, pos));
  out.append(with);
  out.append(s.substr(pos + pattern.size()));
  return out;
}

std::string at(std::string_view s, std::int64_t i)
{
  if (i < 0 || static_cast<std::uint64_t>(i) >= s.size()) return {};
  return std::string(1, s[static_cast<std::size_t>(i)]);
}

std::string substr(std::string_view s, std::int64_t start, std::int64_t len)
{
  if (start < 0 || len <= 0 || static_cast<std::uint64_t>(start) >= s.size())
  {
    return {};
  }
  auto first = static_cast<std::size_t>(start);
  auto n = std::min<std::uint64_t>(static_cast<std::uint64_t>(len),
                                   s.size() - first);
  return std::string(s.substr(first, static_cast<std::size_t>(n)));
}

std::string int_to_str(std::int64_t n)
{
  if (n < 0) return {};
  return std::to_string(n);
}

// Two's-complement wraparound; keeps arithmetic total.
std::int64_t plus(std::int64_t a, std::int64_t b)
{
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a)
                                   + static_cast<std::uint64_t>(b));
}

std::int64_t minus(std::int64_t a, std::int64_t b)
{
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a)
                                   - static_cast<std::uint64_t>(b));
}

std::int64_t length(std::string_view s) { return static_cast<std::int64_t>(s.size()); }

// Digit strings beyond int64 saturate.
std::int64_t str_to_int(std::string_view s)
{
  if (s.empty()) return -1;
  constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
  std::int64_t n = 0;
  for (char c : s)
  {
    if (c < '0' || c > '9') return -1;
    int d = c - '0';
    n = (n > (kMax - d) / 10) ? kMax : n * 10 + d;
  }
  return n;
}

std::int64_t indexof(std::string_view s, std::string_view t, std::int64_t start)
{
  if (start < 0 || static_cast<std::uint64_t>(start) > s.size()) return -1;
  std::size_t pos = s.find(t, static_cast<std::size_t>(start));
  return pos == std::string_view::npos ? -1 : static_cast<std::int64_t>(pos);
}

bool prefixof(std::string_view prefix, std::string_view s) { return s.starts_with(prefix); }

bool suffixof(std::string_view suffix, std::string_view s) { return s.ends_with(suffix); }

bool contains(std::string_view s, std::string_view t)
{
  return s.find(t) != std::string_view::npos;
}

}  // namespace prim

Value apply_op(Op op, std::span<const Value> a)
{
  auto str = [&](std::size_t i) -> std::string_view { return std::get<std::string>(a[i]); };
  auto num = [&](std::size_t i) { return std::get<std::int64_t>(a[i]); };
  switch (op)
  {
    case Op::Concat: return prim::concat(str(0), str(1));
    case Op::Replace: return prim::replace(str(0), str(1), str(2));
    case Op::At: return prim::at(str(0), num(1));
    case Op::Substr: return prim::substr(str(0), num(1), num(2));
    case Op::IntToStr: return prim::int_to_str(num(0));
    case Op::Plus: return prim::plus(num(0), num(1));
    case Op::Minus: return prim::minus(num(0), num(1));
    case Op::Length: return prim::length(str(0));
    case Op::StrToInt: return prim::str_to_int(str(0));
    case Op::IndexOf: return prim::indexof(str(0), str(1), num(2));
    case Op::StrEq: return str(0) == str(1);
    case Op::IntLe: return num(0) <= num(1);
    case Op::PrefixOf: return prim::prefixof(str(0), str(1));
    case Op::SuffixOf: return prim::suffixof(str(0), str(1));
    case Op::Contains: return prim::contains(str(0), str(1));
    default: break;
  }
  throw std::logic_error("apply_op on a non-function op");
}

bool valid_input_name(std::string_view name)
{
  if (name.empty() || name == "if" || function_by_name(name)) return false;
  auto alpha = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
  };
  if (!alpha(name[0])) return false;
  return std::all_of(name.begin(), name.end(),
                     [&](char c) { return alpha(c) || (c >= '0' && c <= '9'); });
}

// ---------------------------------------------------------------------------
// Env

Env::Env(std::vector<std::pair<std::string, Value>> bindings)
    : d_bindings(std::move(bindings))
{
}

const Value* Env::find(std::string_view name) const
{
  for (const auto& [n, v] : d_bindings)
  {
    if (n == name) return &v;
  }
  return nullptr;
}

void Env::bind(std::string name, Value value)
{
  d_bindings.emplace_back(std::move(name), std::move(value));
}

void Env::check_against(const Signature& sig) const
{
  if (d_bindings.size() != sig.size())
  {
    throw InputError("expected " + std::to_string(sig.size())
                     + " input bindings, got "
                     + std::to_string(d_bindings.size()));
  }
  for (std::size_t i = 0; i < sig.size(); ++i)
  {
    if (d_bindings[i].first != sig[i].name)
    {
      throw InputError("input " + std::to_string(i) + " should be '"
                       + sig[i].name + "', got '" + d_bindings[i].first + "'");
    }
    if (sort_of(d_bindings[i].second) != sig[i].sort)
    {
      throw InputError("input '" + sig[i].name + "' should have sort "
                       + std::string(sort_name(sig[i].sort)));
    }
  }
}

// ---------------------------------------------------------------------------
// Expr

Expr Expr::input(std::size_t index, std::string name, Sort sort)
{
  auto n = std::make_shared<Node>();
  n->op = Op::Input;
  n->sort = sort;
  n->input_index = index;
  n->name = std::move(name);
  n->size = 1;
  return Expr(std::move(n));
}

Expr Expr::str_const(std::string s)
{
  auto n = std::make_shared<Node>();
  n->op = Op::StrConst;
  n->sort = Sort::String;
  n->literal = std::move(s);
  n->size = 1;
  return Expr(std::move(n));
}

Expr Expr::int_const(std::int64_t v)
{
  auto n = std::make_shared<Node>();
  n->op = Op::IntConst;
  n->sort = Sort::Int;
  n->literal = v;
  n->size = 1;
  return Expr(std::move(n));
}

Expr Expr::literal(const Value& v)
{
  if (const auto* s = std::get_if<std::string>(&v)) return str_const(*s);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return int_const(*i);
  throw std::invalid_argument("boolean literals are not components");
}

Expr Expr::apply(Op op, std::vector<Expr> args)
{
  if (!is_function(op))
  {
    throw std::invalid_argument("not a function component");
  }
  const OpInfo& info = op_info(op);
  if (args.size() != info.args.size())
  {
    throw std::invalid_argument(std::string(info.name) + " expects "
                                + std::to_string(info.args.size())
                                + " arguments");
  }
  auto n = std::make_shared<Node>();
  n->op = op;
  n->sort = info.result;
  n->size = 1;
  for (std::size_t i = 0; i < args.size(); ++i)
  {
    if (args[i].sort() != info.args[i])
    {
      throw std::invalid_argument(std::string(info.name) + " argument "
                                  + std::to_string(i + 1) + " must be "
                                  + std::string(sort_name(info.args[i])));
    }
    if (args[i].conditions() != 0)
    {
      throw std::invalid_argument("conditionals are only allowed at top level");
    }
    n->size += args[i].component_size();
  }
  n->children = std::move(args);
  return Expr(std::move(n));
}

Expr Expr::ite(Expr cond, Expr then_branch, Expr else_branch)
{
  if (cond.sort() != Sort::Bool)
  {
    throw std::invalid_argument("condition must be bool");
  }
  if (then_branch.sort() != else_branch.sort())
  {
    throw std::invalid_argument("branches must have the same sort");
  }
  if (cond.conditions() != 0 || then_branch.conditions() != 0)
  {
    throw std::invalid_argument("conditionals may only nest in the else branch");
  }
  if (else_branch.conditions() > 1)
  {
    throw std::invalid_argument("conditional nesting deeper than 2");
  }
  auto n = std::make_shared<Node>();
  n->op = Op::Ite;
  n->sort = then_branch.sort();
  n->size = cond.component_size() + then_branch.component_size()
            + else_branch.component_size();
  n->conditions = 1 + else_branch.conditions();
  n->children = {std::move(cond), std::move(then_branch), std::move(else_branch)};
  return Expr(std::move(n));
}

bool operator==(const Expr& a, const Expr& b)
{
  if (a.d_node == b.d_node) return true;
  return compare_preorder(a, b) == 0;
}

namespace {

int compare_token(const Expr& a, const Expr& b)
{
  if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
  switch (a.op())
  {
    case Op::Input:
      if (a.input_index() != b.input_index())
      {
        return a.input_index() < b.input_index() ? -1 : 1;
      }
      return 0;
    case Op::StrConst:
    {
      int c = std::get<std::string>(a.literal_value())
                  .compare(std::get<std::string>(b.literal_value()));
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Op::IntConst:
    {
      auto x = std::get<std::int64_t>(a.literal_value());
      auto y = std::get<std::int64_t>(b.literal_value());
      return x < y ? -1 : (x > y ? 1 : 0);
    }
    default: return 0;
  }
}

}  // namespace

int compare_preorder(const Expr& a, const Expr& b)
{
  if (a.same_node(b)) return 0;
  if (int c = compare_token(a, b); c != 0) return c;
  auto ca = a.children();
  auto cb = b.children();
  for (std::size_t i = 0; i < ca.size(); ++i)
  {
    if (int c = compare_preorder(ca[i], cb[i]); c != 0) return c;
  }
  return 0;
}

int compare_application(Op op, std::span<const Expr* const> args, const Expr& b)
{
  if (op != b.op()) return op < b.op() ? -1 : 1;
  auto cb = b.children();
  for (std::size_t i = 0; i < args.size(); ++i)
  {
    if (int c = compare_preorder(*args[i], cb[i]); c != 0) return c;
  }
  return 0;
}

Value eval(const Expr& e, const Env& env)
{
  switch (e.op())
  {
    case Op::Input: return env.value(e.input_index());
    case Op::StrConst:
    case Op::IntConst: return e.literal_value();
    case Op::Ite:
    {
      auto c = e.children();
      return std::get<bool>(eval(c[0], env)) ? eval(c[1], env) : eval(c[2], env);
    }
    default: break;
  }
  std::array<Value, 3> args;
  auto children = e.children();
  for (std::size_t i = 0; i < children.size(); ++i)
  {
    args[i] = eval(children[i], env);
  }
  return apply_op(e.op(), std::span<const Value>(args.data(), children.size()));
}

// ---------------------------------------------------------------------------
// Components

std::vector<Component> default_component_set(const LanguageConfig& lang)
{
  if (lang.inputs.empty())
  {
    throw InputError("task has no inputs");
  }
  std::vector<Component> out;
  for (std::size_t i = 0; i < lang.inputs.size(); ++i)
  {
    const auto& in = lang.inputs[i];
    if (!valid_input_name(in.name))
    {
      throw InputError("invalid input name '" + in.name + "'");
    }
    if (in.sort == Sort::Bool)
    {
      throw InputError("input '" + in.name + "': bool inputs are not supported");
    }
    out.push_back({in.name, Op::Input, {}, in.sort, Expr::input(i, in.name, in.sort)});
  }

  std::vector<std::string> strs;
  for (const auto& s : lang.string_constants)
  {
    if (std::find(strs.begin(), strs.end(), s) == strs.end()) strs.push_back(s);
  }
  for (const auto& s : strs)
  {
    Expr leaf = Expr::str_const(s);
    out.push_back({pretty(leaf), Op::StrConst, {}, Sort::String, leaf});
  }

  std::vector<std::int64_t> ints = {0, 1};
  for (auto n : lang.int_constants)
  {
    if (std::find(ints.begin(), ints.end(), n) == ints.end()) ints.push_back(n);
  }
  for (auto n : ints)
  {
    Expr leaf = Expr::int_const(n);
    out.push_back({pretty(leaf), Op::IntConst, {}, Sort::Int, leaf});
  }

  std::vector<Op> enabled;
  if (lang.functions)
  {
    for (const auto& name : *lang.functions)
    {
      auto op = function_by_name(name);
      if (!op)
      {
        throw InputError("unknown function component '" + name + "'");
      }
      enabled.push_back(*op);
    }
  }
  for (Op op : function_ops())
  {
    if (lang.functions
        && std::find(enabled.begin(), enabled.end(), op) == enabled.end())
    {
      continue;
    }
    const OpInfo& info = op_info(op);
    out.push_back({std::string(info.name), op, info.args, info.result, std::nullopt});
  }
  return out;
}

}  // namespace synguar
