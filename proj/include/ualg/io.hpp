#pragma once

// Text formats.
//
//   algebra B
//   elements b1 b2
//   op zero/0 = b1
//   op and/2 = b1 b1 b1 b2    # row-major, leftmost argument most significant
//   end
//
//   name group
//   vars x y z
//   label associativity
//   eq mul(mul(x, y), z) = mul(x, mul(y, z))
//
// `#` starts a comment. `vars` and `label` stay in force until replaced;
// a bare `label` clears it.

#include <cstddef>
#include <fstream>
#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "algebra.hpp"
#include "error.hpp"
#include "signature.hpp"
#include "term.hpp"

namespace ualg {

  namespace detail {
    struct Token {
      std::string text;
      std::size_t column;  // 1-based
    };

    inline std::string_view strip_comment(std::string_view line) {
      auto hash = line.find('#');
      return hash == std::string_view::npos ? line : line.substr(0, hash);
    }

    inline std::vector<Token> split_tokens(std::string_view line) {
      std::vector<Token> out;
      std::size_t        i = 0;
      while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
          ++i;
        }
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
          ++i;
        }
        if (i > start) {
          out.push_back({std::string(line.substr(start, i - start)), start + 1});
        }
      }
      return out;
    }

    inline std::vector<std::string> split_lines(std::string_view text) {
      std::vector<std::string> lines;
      std::size_t              start = 0;
      while (start <= text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
          if (start < text.size()) {
            lines.emplace_back(text.substr(start));
          }
          break;
        }
        lines.emplace_back(text.substr(start, nl - start));
        start = nl + 1;
      }
      return lines;
    }

    inline void require_identifier(Token const& t, std::size_t line, char const* what) {
      if (!is_identifier(t.text)) {
        throw ParseError(line, t.column,
                         std::string("invalid ") + what + " '" + t.text + "'");
      }
    }
  }  // namespace detail

  inline std::vector<FiniteAlgebra> parse_algebra_file(std::string_view text) {
    using detail::Token;
    std::vector<FiniteAlgebra> out;
    auto                       lines = detail::split_lines(text);

    std::optional<RawAlgebra> current;
    bool                      have_elements = false;
    std::size_t               line_no       = 0;

    auto finish = [&](std::size_t line) {
      if (!have_elements) {
        throw ParseError(line, 1, "algebra " + current->name + " has no elements line");
      }
      auto result = validate_algebra(*current);
      if (!result.ok()) {
        std::string msg;
        for (auto const& issue : result.issues) {
          msg += (msg.empty() ? "" : "; ") + issue.message;
        }
        auto const& first = result.issues.front();
        throw ParseError(first.line ? first.line : current->line, 1, msg);
      }
      out.push_back(std::move(*result.algebra));
      current.reset();
    };

    for (auto const& raw_line : lines) {
      ++line_no;
      auto toks = detail::split_tokens(detail::strip_comment(raw_line));
      if (toks.empty()) {
        continue;
      }
      Token const& head = toks.front();
      if (!current) {
        if (head.text != "algebra") {
          throw ParseError(line_no, head.column,
                           "expected 'algebra <Name>', found '" + head.text + "'");
        }
        if (toks.size() != 2) {
          throw ParseError(line_no, head.column, "expected 'algebra <Name>'");
        }
        detail::require_identifier(toks[1], line_no, "algebra name");
        current       = RawAlgebra{toks[1].text, {}, {}, line_no};
        have_elements = false;
        continue;
      }
      if (head.text == "elements") {
        if (have_elements) {
          throw ParseError(line_no, head.column, "second elements line");
        }
        for (std::size_t i = 1; i < toks.size(); ++i) {
          detail::require_identifier(toks[i], line_no, "element");
          current->elements.push_back(toks[i].text);
        }
        current->elements_line = line_no;
        have_elements          = true;
      } else if (head.text == "op") {
        if (!have_elements) {
          throw ParseError(line_no, head.column, "op line before elements line");
        }
        if (toks.size() < 3 || toks[2].text != "=") {
          throw ParseError(line_no, head.column,
                           "expected 'op <name>/<arity> = <values>'");
        }
        auto const& sym   = toks[1];
        auto        slash = sym.text.find('/');
        if (slash == std::string::npos) {
          throw ParseError(line_no, sym.column, "expected <name>/<arity>");
        }
        std::string name = sym.text.substr(0, slash);
        std::string ar   = sym.text.substr(slash + 1);
        if (!is_identifier(name)) {
          throw ParseError(line_no, sym.column, "invalid symbol '" + name + "'");
        }
        if (ar.empty() || ar.size() > 2
            || ar.find_first_not_of("0123456789") != std::string::npos) {
          throw ParseError(line_no, sym.column + slash + 1,
                           "invalid arity '" + ar + "'");
        }
        RawOperation op{name, std::stoul(ar), {}, line_no};
        for (std::size_t i = 3; i < toks.size(); ++i) {
          detail::require_identifier(toks[i], line_no, "element");
          if (std::find(current->elements.begin(), current->elements.end(), toks[i].text)
              == current->elements.end()) {
            throw ParseError(line_no, toks[i].column,
                             "unknown element '" + toks[i].text + "' in table of "
                                 + sym.text);
          }
          op.values.push_back(toks[i].text);
        }
        auto expected = detail::checked_power(current->elements.size(), op.arity,
                                              max_table_cells);
        if (!expected) {
          throw ParseError(line_no, sym.column, "table for " + sym.text + " too large");
        }
        if (op.values.size() != *expected) {
          throw ParseError(line_no, toks.size() > 3 ? toks[3].column : toks[2].column,
                           "expected " + std::to_string(*expected) + " values, found "
                               + std::to_string(op.values.size()));
        }
        current->ops.push_back(std::move(op));
      } else if (head.text == "end") {
        if (toks.size() != 1) {
          throw ParseError(line_no, toks[1].column, "unexpected text after 'end'");
        }
        finish(line_no);
      } else {
        throw ParseError(line_no, head.column,
                         "expected 'elements', 'op' or 'end', found '" + head.text + "'");
      }
    }
    if (current) {
      throw ParseError(line_no + 1, 1, "missing 'end' for algebra " + current->name);
    }
    return out;
  }

  inline std::string serialize(FiniteAlgebra const& alg) {
    std::string out = "algebra " + alg.name() + "\nelements";
    for (auto const& e : alg.carrier()) {
      out += " " + e;
    }
    out += "\n";
    for (std::size_t op = 0; op < alg.signature().size(); ++op) {
      out += "op " + alg.signature()[op].to_string() + " =";
      for (Element v : alg.table(op)) {
        out += " " + alg.element_name(v);
      }
      out += "\n";
    }
    out += "end\n";
    return out;
  }

  inline std::string serialize(std::vector<FiniteAlgebra> const& algs) {
    std::string out;
    for (std::size_t i = 0; i < algs.size(); ++i) {
      out += (i ? "\n" : "") + serialize(algs[i]);
    }
    return out;
  }

  inline EquationSet parse_equation_file(std::string_view text,
                                         std::string      default_name = "equations") {
    EquationSet              set{std::move(default_name), {}};
    std::vector<std::string> vars;
    std::string              label;
    bool                     named  = false;
    std::size_t              line_no = 0;
    for (auto const& raw_line : detail::split_lines(text)) {
      ++line_no;
      std::string_view line = detail::strip_comment(raw_line);
      auto             toks = detail::split_tokens(line);
      if (toks.empty()) {
        continue;
      }
      auto const& head = toks.front();
      if (head.text == "vars") {
        vars.clear();
        for (std::size_t i = 1; i < toks.size(); ++i) {
          detail::require_identifier(toks[i], line_no, "variable");
          for (auto const& v : vars) {
            if (v == toks[i].text) {
              throw ParseError(line_no, toks[i].column,
                               "duplicate variable '" + v + "'");
            }
          }
          vars.push_back(toks[i].text);
        }
      } else if (head.text == "name") {
        if (named || toks.size() != 2) {
          throw ParseError(line_no, head.column, "expected one 'name <id>' line");
        }
        set.name = toks[1].text;
        named    = true;
      } else if (head.text == "label") {
        auto rest = line.substr(head.column - 1 + 5);
        auto b    = rest.find_first_not_of(" \t");
        auto e    = rest.find_last_not_of(" \t\r");
        label     = b == std::string_view::npos ? "" : std::string(rest.substr(b, e - b + 1));
      } else if (head.text == "eq") {
        std::size_t col = head.column + 2;
        auto        eq  = parse_equation(line.substr(col - 1), vars, line_no, col);
        eq.label        = label;
        set.equations.push_back(std::move(eq));
      } else {
        throw ParseError(line_no, head.column,
                         "expected 'vars', 'eq', 'name' or 'label', found '"
                             + head.text + "'");
      }
    }
    return set;
  }

  inline std::string serialize(EquationSet const& set) {
    std::string              out = "name " + set.name + "\n";
    std::vector<std::string> vars;
    std::string              label;
    bool                     first = true;
    for (auto const& eq : set.equations) {
      if (first || eq.variables != vars) {
        vars = eq.variables;
        out += "vars";
        for (auto const& v : vars) {
          out += " " + v;
        }
        out += "\n";
      }
      if (eq.label != label) {
        label = eq.label;
        out += label.empty() ? "label\n" : "label " + label + "\n";
      }
      out += "eq " + eq.to_string() + "\n";
      first = false;
    }
    return out;
  }

  inline std::string read_file(std::string const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw InputError("file not found: " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  inline FiniteAlgebra const& select_algebra(std::vector<FiniteAlgebra> const& algs,
                                             std::string const&                name) {
    if (name.empty()) {
      if (algs.size() == 1) {
        return algs.front();
      }
      throw InputError(algs.empty() ? "file holds no algebras"
                                    : "file holds several algebras; choose one with --algebra");
    }
    for (auto const& a : algs) {
      if (a.name() == name) {
        return a;
      }
    }
    throw InputError("no algebra named '" + name + "'");
  }

}  // namespace ualg
