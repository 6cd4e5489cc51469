#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "error.hpp"
#include "term.hpp"

namespace ualg {

  // The n-ary part of the clone: every n-ary term operation, as a full
  // value table over carrier^n (row-major, first variable most
  // significant), each with one witnessing term over x1..xn.
  struct CloneFragment {
    std::size_t                       arity = 0;
    std::vector<std::string>          variables;
    std::vector<std::vector<Element>> tables;
    std::vector<Term>                 witnesses;
    // False when the member budget stopped the closure early.
    bool complete = true;

    std::size_t size() const noexcept {
      return tables.size();
    }
  };

  inline std::vector<std::string> clone_variables(std::size_t n) {
    std::vector<std::string> vars;
    for (std::size_t i = 1; i <= n; ++i) {
      vars.push_back("x" + std::to_string(i));
    }
    return vars;
  }

  // Closure of the n projections under "apply a basic operation to members",
  // until nothing new appears. Members are listed in discovery order:
  // projections, then by round, symbol, and argument tuple. Stops with
  // complete = false once `max_members` is reached.
  inline CloneFragment clone_n(FiniteAlgebra const& alg,
                               std::size_t          n,
                               std::size_t          max_members = 1u << 16) {
    if (n == 0) {
      throw InputError("clone arity must be positive");
    }
    auto cells = detail::checked_power(alg.size(), n, std::uint64_t{1} << 20);
    if (!cells) {
      throw BudgetExceeded("clone tables too large for arity "
                           + std::to_string(n));
    }
    std::size_t const points = static_cast<std::size_t>(*cells);

    CloneFragment frag;
    frag.arity     = n;
    frag.variables = clone_variables(n);
    std::map<std::vector<Element>, std::size_t> seen;

    auto add = [&](std::vector<Element> table, Term witness) {
      if (seen.contains(table)) {
        return true;
      }
      if (frag.tables.size() >= max_members) {
        frag.complete = false;
        return false;
      }
      seen.emplace(table, frag.tables.size());
      frag.tables.push_back(std::move(table));
      frag.witnesses.push_back(std::move(witness));
      return true;
    };

    for (std::size_t v = 0; v < n; ++v) {
      std::vector<Element> table(points);
      for (std::size_t p = 0; p < points; ++p) {
        std::size_t rest = p;
        for (std::size_t j = n; j > 0; --j) {
          if (j - 1 == v) {
            table[p] = static_cast<Element>(rest % alg.size());
          }
          rest /= alg.size();
        }
      }
      add(std::move(table), Term::var(v));
    }

    // Semi-naive rounds: a tuple is only tried if it uses a member found in
    // the previous round, except in the first round.
    std::size_t old_end = 0;
    bool        first   = true;
    while (frag.complete) {
      std::size_t const end = frag.tables.size();
      for (std::size_t op = 0; op < alg.signature().size() && frag.complete;
           ++op) {
        std::size_t arity = alg.arity(op);
        if (arity == 0) {
          if (first) {
            add(std::vector<Element>(points, alg.table(op)[0]),
                Term::app(alg.signature()[op].name));
          }
          continue;
        }
        std::vector<std::size_t> pick(arity, 0);
        std::vector<Element>     args(arity);
        while (frag.complete) {
          bool uses_new = first;
          for (auto i : pick) {
            uses_new = uses_new || i >= old_end;
          }
          if (uses_new) {
            std::vector<Element> table(points);
            for (std::size_t p = 0; p < points; ++p) {
              for (std::size_t j = 0; j < arity; ++j) {
                args[j] = frag.tables[pick[j]][p];
              }
              table[p] = alg.apply(op, std::span<Element const>(args));
            }
            if (!seen.contains(table)) {
              std::vector<Term> sub;
              for (auto i : pick) {
                sub.push_back(frag.witnesses[i]);
              }
              add(std::move(table),
                  Term::app(alg.signature()[op].name, std::move(sub)));
            }
          }
          std::size_t j = arity;
          while (j > 0 && ++pick[j - 1] == end) {
            pick[j - 1] = 0;
            --j;
          }
          if (j == 0) {
            break;
          }
        }
      }
      if (frag.tables.size() == end) {
        break;
      }
      old_end = end;
      first   = false;
    }
    return frag;
  }

}  // namespace ualg
