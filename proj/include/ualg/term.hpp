#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "error.hpp"
#include "signature.hpp"

namespace ualg {

  // A term over a declared variable list: either a variable (by index) or a
  // symbol applied to subterms.
  class Term {
   public:
    static Term var(std::size_t index) {
      Term t;
      t.is_var_ = true;
      t.var_    = index;
      return t;
    }

    static Term app(std::string symbol, std::vector<Term> args = {}) {
      Term t;
      t.is_var_ = false;
      t.symbol_ = std::move(symbol);
      t.args_   = std::move(args);
      return t;
    }

    bool is_variable() const noexcept {
      return is_var_;
    }
    std::size_t variable() const noexcept {
      return var_;
    }
    std::string const& symbol() const noexcept {
      return symbol_;
    }
    std::vector<Term> const& args() const noexcept {
      return args_;
    }

    std::size_t depth() const {
      std::size_t d = 0;
      for (auto const& a : args_) {
        d = std::max(d, a.depth() + 1);
      }
      return is_var_ ? 0 : std::max<std::size_t>(d, 1);
    }

    // Number of application nodes.
    std::size_t applications() const {
      if (is_var_) {
        return 0;
      }
      std::size_t n = 1;
      for (auto const& a : args_) {
        n += a.applications();
      }
      return n;
    }

    // Largest variable index used plus one (0 if none).
    std::size_t variable_bound() const {
      if (is_var_) {
        return var_ + 1;
      }
      std::size_t n = 0;
      for (auto const& a : args_) {
        n = std::max(n, a.variable_bound());
      }
      return n;
    }

    // Collects (name, arity) of every application; throws on an arity clash.
    void collect_symbols(std::map<std::string, std::size_t>& out) const {
      if (is_var_) {
        return;
      }
      auto [it, fresh] = out.emplace(symbol_, args_.size());
      if (!fresh && it->second != args_.size()) {
        throw SignatureError("symbol '" + symbol_ + "' used with arities "
                             + std::to_string(it->second) + " and "
                             + std::to_string(args_.size()));
      }
      for (auto const& a : args_) {
        a.collect_symbols(out);
      }
    }

    std::string to_string(std::vector<std::string> const& vars) const {
      if (is_var_) {
        return var_ < vars.size() ? vars[var_] : "_" + std::to_string(var_);
      }
      std::string out = symbol_ + "(";
      for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i != 0) {
          out += ", ";
        }
        out += args_[i].to_string(vars);
      }
      return out + ")";
    }

    bool operator==(Term const&) const = default;

   private:
    Term() = default;

    bool              is_var_ = true;
    std::size_t       var_    = 0;
    std::string       symbol_;
    std::vector<Term> args_;
  };

  // lhs ≈ rhs, quantified over exactly `variables`.
  struct Equation {
    Term                     lhs;
    Term                     rhs;
    std::vector<std::string> variables;
    std::string              label;

    Equation(Term l, Term r, std::vector<std::string> vars, std::string lab = {})
        : lhs(std::move(l)),
          rhs(std::move(r)),
          variables(std::move(vars)),
          label(std::move(lab)) {
      if (std::max(lhs.variable_bound(), rhs.variable_bound())
          > variables.size()) {
        throw InputError("equation uses an undeclared variable");
      }
    }

    std::string to_string() const {
      return lhs.to_string(variables) + " = " + rhs.to_string(variables);
    }
  };

  struct EquationSet {
    std::string           name;
    std::vector<Equation> equations;

    // Symbols used by the equations, sorted by name.
    Signature symbols() const {
      std::map<std::string, std::size_t> seen;
      for (auto const& e : equations) {
        e.lhs.collect_symbols(seen);
        e.rhs.collect_symbols(seen);
      }
      std::vector<OpSymbol> out;
      for (auto const& [n, a] : seen) {
        out.push_back({n, a});
      }
      return Signature(std::move(out));
    }
  };

  ////////////////////////////////////////////////////////////////////////
  // Evaluation
  ////////////////////////////////////////////////////////////////////////

  // Instrumentation for term evaluation.
  struct EvalStats {
    std::uint64_t table_lookups = 0;
  };

  // A term resolved against one algebra: symbols replaced by table indices,
  // flattened into postfix order.
  class CompiledTerm {
   public:
    CompiledTerm(FiniteAlgebra const& alg, Term const& term) : alg_(alg) {
      compile(term);
    }

    std::size_t variable_bound() const noexcept {
      return bound_;
    }

    // Structural evaluation: variables project, applications evaluate their
    // subterms and then perform one table lookup.
    Element evaluate(std::span<Element const> binding,
                     EvalStats*               stats = nullptr) const {
      if (binding.size() < bound_) {
        throw InputError("unbound variable in term evaluation");
      }
      std::vector<Element> stack;
      stack.reserve(program_.size());
      for (auto const& step : program_) {
        if (step.is_var) {
          stack.push_back(binding[step.index]);
          continue;
        }
        std::size_t arity = alg_.arity(step.index);
        std::size_t base  = stack.size() - arity;
        Element     out   = alg_.apply(
            step.index, std::span<Element const>(stack.data() + base, arity));
        if (stats != nullptr) {
          ++stats->table_lookups;
        }
        stack.resize(base);
        stack.push_back(out);
      }
      return stack.back();
    }

   private:
    struct Step {
      bool        is_var;
      std::size_t index;
    };

    void compile(Term const& t) {
      if (t.is_variable()) {
        program_.push_back({true, t.variable()});
        bound_ = std::max(bound_, t.variable() + 1);
        return;
      }
      auto op = alg_.signature().find(t.symbol());
      if (!op) {
        throw SignatureError("unknown symbol '" + t.symbol() + "' in algebra "
                             + alg_.name());
      }
      if (alg_.arity(*op) != t.args().size()) {
        throw SignatureError("arity mismatch for '" + t.symbol()
                             + "': algebra " + alg_.name() + " has arity "
                             + std::to_string(alg_.arity(*op)) + ", term has "
                             + std::to_string(t.args().size()));
      }
      for (auto const& a : t.args()) {
        compile(a);
      }
      program_.push_back({false, *op});
    }

    FiniteAlgebra                alg_;
    std::vector<Step>            program_;
    std::size_t                  bound_ = 0;
  };

  // The term mapping of `term` on `alg` at `binding` (indexed by variable).
  inline Element eval_term(FiniteAlgebra const&     alg,
                           Term const&              term,
                           std::span<Element const> binding,
                           EvalStats*               stats = nullptr) {
    return CompiledTerm(alg, term).evaluate(binding, stats);
  }

  inline Element eval_term(FiniteAlgebra const&        alg,
                           Term const&                 term,
                           std::vector<Element> const& binding,
                           EvalStats*                  stats = nullptr) {
    return eval_term(alg, term, std::span<Element const>(binding), stats);
  }

  ////////////////////////////////////////////////////////////////////////
  // Parsing: prefix syntax, `name(arg, ...)`, nullaries `name()`, bare
  // identifiers are variables.
  ////////////////////////////////////////////////////////////////////////

  namespace detail {
    class TermParser {
     public:
      TermParser(std::string_view                text,
                 std::vector<std::string> const& vars,
                 std::size_t                     line,
                 std::size_t                     column0)
          : text_(text), vars_(vars), line_(line), column0_(column0) {}

      Term parse_term() {
        skip_ws();
        std::size_t start = pos_;
        std::string name  = identifier();
        skip_ws();
        if (peek() != '(') {
          for (std::size_t i = 0; i < vars_.size(); ++i) {
            if (vars_[i] == name) {
              return Term::var(i);
            }
          }
          fail(start, "undeclared variable '" + name + "'");
        }
        ++pos_;
        std::vector<Term> args;
        skip_ws();
        if (peek() == ')') {
          ++pos_;
          return Term::app(std::move(name));
        }
        while (true) {
          args.push_back(parse_term());
          skip_ws();
          char c = peek();
          if (c == ',') {
            ++pos_;
            continue;
          }
          if (c == ')') {
            ++pos_;
            break;
          }
          fail(pos_, "expected ',' or ')'");
        }
        return Term::app(std::move(name), std::move(args));
      }

      void expect(char c) {
        skip_ws();
        if (peek() != c) {
          fail(pos_, std::string("expected '") + c + "'");
        }
        ++pos_;
      }

      void expect_end() {
        skip_ws();
        if (pos_ != text_.size()) {
          fail(pos_, "unexpected trailing input");
        }
      }

     private:
      char peek() const {
        return pos_ < text_.size() ? text_[pos_] : '\0';
      }

      void skip_ws() {
        while (pos_ < text_.size()
               && (text_[pos_] == ' ' || text_[pos_] == '\t'
                   || text_[pos_] == '\r')) {
          ++pos_;
        }
      }

      std::string identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size()
               && (std::isalnum(static_cast<unsigned char>(text_[pos_]))
                   || text_[pos_] == '_')) {
          ++pos_;
        }
        std::string id(text_.substr(start, pos_ - start));
        if (!is_identifier(id)) {
          fail(start, id.empty() ? "expected identifier"
                                 : "invalid identifier '" + id + "'");
        }
        return id;
      }

      [[noreturn]] void fail(std::size_t at, std::string const& msg) const {
        throw ParseError(line_, column0_ + at, msg);
      }

      std::string_view                text_;
      std::vector<std::string> const& vars_;
      std::size_t                     line_;
      std::size_t                     column0_;
      std::size_t                     pos_ = 0;
    };
  }  // namespace detail

  inline Term parse_term(std::string_view                text,
                         std::vector<std::string> const& vars,
                         std::size_t                     line    = 1,
                         std::size_t                     column0 = 1) {
    detail::TermParser p(text, vars, line, column0);
    Term               t = p.parse_term();
    p.expect_end();
    return t;
  }

  // "lhs = rhs"
  inline Equation parse_equation(std::string_view                text,
                                 std::vector<std::string> const& vars,
                                 std::size_t                     line    = 1,
                                 std::size_t                     column0 = 1) {
    detail::TermParser p(text, vars, line, column0);
    Term               lhs = p.parse_term();
    p.expect('=');
    Term rhs = p.parse_term();
    p.expect_end();
    return Equation(std::move(lhs), std::move(rhs), vars);
  }

}  // namespace ualg
