#include <cctype>
#include <charconv>

#include "synguar/dsl.hpp"

namespace synguar {

ParseError::ParseError(Kind kind, std::size_t position, const std::string& message)
    : std::runtime_error("at offset " + std::to_string(position) + ": " + message),
      d_kind(kind),
      d_position(position)
{
}

namespace {

void pretty_into(const Expr& e, std::string& out)
{
  switch (e.op())
  {
    case Op::Input: out += e.input_name(); return;
    case Op::StrConst:
    case Op::IntConst: out += value_text(e.literal_value()); return;
    default: break;
  }
  out += '(';
  out += e.op() == Op::Ite ? std::string_view("if") : op_info(e.op()).name;
  for (const Expr& c : e.children())
  {
    out += ' ';
    pretty_into(c, out);
  }
  out += ')';
}

class Parser
{
 public:
  Parser(std::string_view text, const Signature& sig) : d_text(text), d_sig(sig) {}

  Expr parse_all()
  {
    Expr e = parse_term();
    skip_space();
    if (d_pos != d_text.size())
    {
      fail(ParseError::Kind::Syntax, "trailing input");
    }
    return e;
  }

 private:
  using Kind = ParseError::Kind;

  [[noreturn]] void fail(Kind kind, const std::string& msg, std::size_t at) const
  {
    throw ParseError(kind, at, msg);
  }
  [[noreturn]] void fail(Kind kind, const std::string& msg) const
  {
    fail(kind, msg, d_pos);
  }

  void skip_space()
  {
    while (d_pos < d_text.size()
           && std::isspace(static_cast<unsigned char>(d_text[d_pos])))
    {
      ++d_pos;
    }
  }

  static bool is_delim(char c)
  {
    return c == '(' || c == ')' || c == '"'
           || std::isspace(static_cast<unsigned char>(c));
  }

  std::string_view atom()
  {
    std::size_t start = d_pos;
    while (d_pos < d_text.size() && !is_delim(d_text[d_pos])) ++d_pos;
    return d_text.substr(start, d_pos - start);
  }

  Expr parse_string()
  {
    std::size_t start = d_pos++;
    std::string s;
    while (true)
    {
      if (d_pos >= d_text.size())
      {
        fail(Kind::Syntax, "unterminated string literal", start);
      }
      char c = d_text[d_pos++];
      if (c == '"') break;
      if (c == '\\')
      {
        if (d_pos >= d_text.size()) fail(Kind::Syntax, "dangling escape");
        char next = d_text[d_pos++];
        if (next != '"' && next != '\\')
        {
          fail(Kind::Syntax, "unsupported escape", d_pos - 2);
        }
        c = next;
      }
      s.push_back(c);
    }
    return Expr::str_const(std::move(s));
  }

  Expr parse_term()
  {
    skip_space();
    if (d_pos >= d_text.size()) fail(Kind::Syntax, "unexpected end of input");
    char c = d_text[d_pos];
    if (c == '"') return parse_string();
    if (c == ')') fail(Kind::Syntax, "unexpected ')'");
    if (c != '(') return parse_atom();

    std::size_t open = d_pos++;
    skip_space();
    std::size_t head_pos = d_pos;
    std::string_view head = atom();
    if (head.empty()) fail(Kind::Syntax, "expected a component name");

    std::vector<Expr> args;
    std::vector<std::size_t> arg_pos;
    while (true)
    {
      skip_space();
      if (d_pos >= d_text.size()) fail(Kind::Syntax, "unbalanced '('", open);
      if (d_text[d_pos] == ')')
      {
        ++d_pos;
        break;
      }
      arg_pos.push_back(d_pos);
      args.push_back(parse_term());
    }

    if (head == "if")
    {
      if (args.size() != 3)
      {
        fail(Kind::ArityMismatch, "if expects 3 arguments, got "
                 + std::to_string(args.size()), head_pos);
      }
      if (args[0].sort() != Sort::Bool)
      {
        fail(Kind::SortMismatch, "if condition must be bool", arg_pos[0]);
      }
      if (args[1].sort() != args[2].sort())
      {
        fail(Kind::SortMismatch, "if branches must have the same sort", arg_pos[2]);
      }
      try
      {
        return Expr::ite(args[0], args[1], args[2]);
      }
      catch (const std::invalid_argument& e)
      {
        fail(Kind::Nesting, e.what(), open);
      }
    }

    auto op = function_by_name(head);
    if (!op)
    {
      fail(Kind::UnknownComponent, "unknown component '" + std::string(head) + "'",
           head_pos);
    }
    const OpInfo& info = op_info(*op);
    if (args.size() != info.args.size())
    {
      fail(Kind::ArityMismatch,
           std::string(head) + " expects " + std::to_string(info.args.size())
               + " arguments, got " + std::to_string(args.size()),
           head_pos);
    }
    for (std::size_t i = 0; i < args.size(); ++i)
    {
      if (args[i].sort() != info.args[i])
      {
        fail(Kind::SortMismatch,
             std::string(head) + " argument " + std::to_string(i + 1) + " must be "
                 + std::string(sort_name(info.args[i])) + ", got "
                 + std::string(sort_name(args[i].sort())),
             arg_pos[i]);
      }
      if (args[i].conditions() != 0)
      {
        fail(Kind::Nesting, "conditionals are only allowed at top level", arg_pos[i]);
      }
    }
    return Expr::apply(*op, std::move(args));
  }

  Expr parse_atom()
  {
    std::size_t start = d_pos;
    std::string_view tok = atom();
    bool numeric = !tok.empty()
                   && (std::isdigit(static_cast<unsigned char>(tok[0]))
                       || (tok[0] == '-' && tok.size() > 1));
    if (numeric)
    {
      std::int64_t n = 0;
      auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), n);
      if (ec != std::errc() || ptr != tok.data() + tok.size())
      {
        fail(Kind::Syntax, "malformed integer literal '" + std::string(tok) + "'",
             start);
      }
      return Expr::int_const(n);
    }
    for (std::size_t i = 0; i < d_sig.size(); ++i)
    {
      if (d_sig[i].name == tok) return Expr::input(i, d_sig[i].name, d_sig[i].sort);
    }
    if (function_by_name(tok) || tok == "if")
    {
      fail(Kind::ArityMismatch, "'" + std::string(tok) + "' applied to no arguments",
           start);
    }
    fail(Kind::UnknownComponent, "unknown component '" + std::string(tok) + "'", start);
  }

  std::string_view d_text;
  const Signature& d_sig;
  std::size_t d_pos = 0;
};

}  // namespace

std::string pretty(const Expr& e)
{
  std::string out;
  pretty_into(e, out);
  return out;
}

Expr parse_expr(std::string_view text, const Signature& sig)
{
  return Parser(text, sig).parse_all();
}

}  // namespace synguar
