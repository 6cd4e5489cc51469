#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "error.hpp"
#include "parallel.hpp"
#include "term.hpp"

namespace ualg {

  // Variable index -> carrier element.
  using Binding = std::vector<Element>;

  struct SatisfactionResult {
    bool holds = true;
    // First violating binding in lexicographic order (first variable most
    // significant), with both sides' values.
    std::optional<Binding> counterexample;
    Element                lhs_value = 0;
    Element                rhs_value = 0;

    explicit operator bool() const noexcept {
      return holds;
    }
  };

  namespace detail {
    inline Binding decode_binding(std::uint64_t index,
                                  std::size_t   vars,
                                  std::size_t   k) {
      Binding b(vars, 0);
      for (std::size_t i = vars; i > 0; --i) {
        b[i - 1] = static_cast<Element>(index % k);
        index /= k;
      }
      return b;
    }

    inline void increment(Binding& b, std::size_t k) {
      for (std::size_t i = b.size(); i > 0; --i) {
        if (++b[i - 1] < k) {
          return;
        }
        b[i - 1] = 0;
      }
    }
  }  // namespace detail

  // A ⊨ lhs ≈ rhs: both term mappings agree on every binding of the declared
  // variables.
  inline SatisfactionResult satisfies(FiniteAlgebra const& alg,
                                      Equation const&      eq,
                                      Exec const&          exec = {}) {
    CompiledTerm lhs(alg, eq.lhs);
    CompiledTerm rhs(alg, eq.rhs);

    auto total = detail::checked_power(
        alg.size(), eq.variables.size(), std::uint64_t{1} << 40);
    if (!total) {
      throw BudgetExceeded("too many bindings for equation " + eq.to_string());
    }
    std::size_t const vars = eq.variables.size();
    std::size_t const k    = alg.size();
    constexpr auto    none = std::numeric_limits<std::uint64_t>::max();

    std::vector<std::uint64_t> first(detail::chunk_count(exec, *total), none);
    detail::parallel_chunks(
        exec, *total, [&](std::size_t chunk, std::uint64_t lo, std::uint64_t hi) {
          if (lo >= hi) {
            return;
          }
          Binding b = detail::decode_binding(lo, vars, k);
          for (std::uint64_t i = lo; i < hi; ++i) {
            if (lhs.evaluate(b) != rhs.evaluate(b)) {
              first[chunk] = i;
              return;
            }
            detail::increment(b, k);
          }
        });

    SatisfactionResult result;
    for (auto f : first) {
      if (f != none) {
        Binding b             = detail::decode_binding(f, vars, k);
        result.holds          = false;
        result.lhs_value      = lhs.evaluate(b);
        result.rhs_value      = rhs.evaluate(b);
        result.counterexample = std::move(b);
        break;
      }
    }
    return result;
  }

  struct EquationVerdict {
    std::string            label;
    std::string            text;
    std::vector<std::string> variables;
    SatisfactionResult     result;
  };

  struct SatisfactionReport {
    std::string                  algebra;
    std::string                  equations;
    std::vector<EquationVerdict> verdicts;

    // "variety member": every equation holds.
    bool all_pass() const noexcept {
      for (auto const& v : verdicts) {
        if (!v.result.holds) {
          return false;
        }
      }
      return true;
    }
  };

  // Throws SignatureError naming every symbol the equations use but `alg`
  // lacks (by name and arity).
  inline void require_symbols(FiniteAlgebra const& alg, EquationSet const& eqs) {
    auto missing = eqs.symbols().missing_from(alg.signature());
    if (!missing.empty()) {
      throw SignatureError("algebra " + alg.name() + " is missing symbol(s) "
                           + describe(missing) + " used by " + eqs.name);
    }
  }

  inline SatisfactionReport satisfies_all(FiniteAlgebra const& alg,
                                          EquationSet const&   eqs,
                                          Exec const&          exec = {}) {
    require_symbols(alg, eqs);
    SatisfactionReport report{alg.name(), eqs.name, {}};
    for (auto const& eq : eqs.equations) {
      report.verdicts.push_back(
          {eq.label, eq.to_string(), eq.variables, satisfies(alg, eq, exec)});
    }
    return report;
  }

}  // namespace ualg
