#pragma once

// Shared fixtures and brute-force oracles. The oracles deliberately avoid
// the library's search code: they enumerate everything and compare tables
// cell by cell.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <ualg/ualg.hpp>

namespace testing_support {

  using namespace ualg;

  inline std::string data_path(std::string const& rel) {
    return std::string(UALG_DATA_DIR) + "/" + rel;
  }

  inline std::vector<FiniteAlgebra> load_file(std::string const& rel) {
    return parse_algebra_file(read_file(data_path(rel)));
  }

  inline FiniteAlgebra const& by_name(std::vector<FiniteAlgebra> const& algs,
                                      std::string const&                name) {
    return select_algebra(algs, name);
  }

  struct Fixtures {
    std::vector<FiniteAlgebra> paper = load_file("algebras/paper_BO.alg");
    std::vector<FiniteAlgebra> small = load_file("algebras/small.alg");

    FiniteAlgebra const& B = by_name(paper, "B");
    FiniteAlgebra const& O = by_name(paper, "O");
    FiniteAlgebra const& L2 = by_name(small, "L2");
    FiniteAlgebra const& SL2 = by_name(small, "SL2");
    FiniteAlgebra const& Z2 = by_name(small, "Z2");
    FiniteAlgebra const& One = by_name(small, "One");

    std::vector<FiniteAlgebra> shipped() const {
      auto all = paper;
      all.insert(all.end(), small.begin(), small.end());
      return all;
    }
  };

  inline Fixtures const& fixtures() {
    static Fixtures f;
    return f;
  }

  inline FiniteAlgebra lattice_reduct(FiniteAlgebra const& a) {
    return reduct(a, {"and", "or"}, a.name() + "lat");
  }

  // ---- random algebras ------------------------------------------------

  inline FiniteAlgebra random_algebra(std::mt19937_64& rng, std::size_t max_size = 5,
                                      std::size_t max_arity = 2,
                                      std::string name = "R") {
    std::uniform_int_distribution<std::size_t> size_d(1, max_size);
    std::size_t                                n = size_d(rng);
    std::vector<std::string>                   carrier;
    for (std::size_t i = 0; i < n; ++i) {
      carrier.push_back("e" + std::to_string(i));
    }
    std::uniform_int_distribution<std::size_t> ops_d(0, 3);
    std::uniform_int_distribution<std::size_t> ar_d(0, max_arity);
    std::uniform_int_distribution<Element>     el_d(0, static_cast<Element>(n - 1));
    std::vector<OpSymbol>                      syms;
    std::vector<FiniteAlgebra::Table>          tables;
    std::size_t                                k = ops_d(rng);
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t ar = ar_d(rng);
      syms.push_back({"f" + std::to_string(i), ar});
      std::size_t cells = 1;
      for (std::size_t j = 0; j < ar; ++j) {
        cells *= n;
      }
      FiniteAlgebra::Table t(cells);
      for (auto& c : t) {
        c = el_d(rng);
      }
      tables.push_back(std::move(t));
    }
    return FiniteAlgebra(std::move(name), std::move(carrier), Signature(std::move(syms)),
                         std::move(tables));
  }

  // Random algebra with a fixed signature.
  inline FiniteAlgebra random_algebra_of(std::mt19937_64& rng, Signature const& sig,
                                         std::size_t n, std::string name = "R") {
    std::vector<std::string> carrier;
    for (std::size_t i = 0; i < n; ++i) {
      carrier.push_back("e" + std::to_string(i));
    }
    std::uniform_int_distribution<Element> el_d(0, static_cast<Element>(n - 1));
    std::vector<FiniteAlgebra::Table>      tables;
    for (auto const& s : sig) {
      std::size_t cells = 1;
      for (std::size_t j = 0; j < s.arity; ++j) {
        cells *= n;
      }
      FiniteAlgebra::Table t(cells);
      for (auto& c : t) {
        c = el_d(rng);
      }
      tables.push_back(std::move(t));
    }
    return FiniteAlgebra(std::move(name), std::move(carrier), sig, std::move(tables));
  }

  // ---- table access without library helpers -----------------------------

  inline Element lookup(FiniteAlgebra const& a, std::size_t op,
                        std::vector<Element> const& args) {
    std::size_t idx = 0;
    for (Element x : args) {
      idx = idx * a.size() + x;
    }
    return a.tables()[op][idx];
  }

  // Calls fn on every tuple in pool^arity, last position fastest.
  inline void all_tuples(std::size_t arity, std::vector<Element> const& pool,
                         std::function<void(std::vector<Element> const&)> const& fn) {
    std::vector<Element> t(arity);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == arity) {
        fn(t);
        return;
      }
      for (Element e : pool) {
        t[i] = e;
        rec(i + 1);
      }
    };
    rec(0);
  }

  inline std::vector<Element> carrier_of(FiniteAlgebra const& a) {
    std::vector<Element> v(a.size());
    for (Element i = 0; i < a.size(); ++i) {
      v[i] = i;
    }
    return v;
  }

  // ---- oracles ----------------------------------------------------------

  // Naive fixpoint: add every op output over the current set until stable.
  inline std::set<Element> oracle_generate(FiniteAlgebra const& a, std::set<Element> s) {
    while (true) {
      std::set<Element>    next = s;
      std::vector<Element> pool(s.begin(), s.end());
      for (std::size_t op = 0; op < a.signature().size(); ++op) {
        all_tuples(a.arity(op), pool,
                   [&](auto const& t) { next.insert(lookup(a, op, t)); });
      }
      if (next == s) {
        return s;
      }
      s = std::move(next);
    }
  }

  inline bool oracle_closed(FiniteAlgebra const& a, std::set<Element> const& s) {
    return oracle_generate(a, s) == s;
  }

  // Every subset that is closed (including the empty one when closed).
  inline std::vector<std::set<Element>> oracle_subuniverses(FiniteAlgebra const& a) {
    std::vector<std::set<Element>> out;
    for (std::uint32_t mask = 0; mask < (1u << a.size()); ++mask) {
      std::set<Element> s;
      for (Element e = 0; e < a.size(); ++e) {
        if (mask >> e & 1u) {
          s.insert(e);
        }
      }
      if (oracle_closed(a, s)) {
        out.push_back(s);
      }
    }
    return out;
  }

  inline std::size_t symbol_index(FiniteAlgebra const& a, OpSymbol const& s) {
    for (std::size_t i = 0; i < a.signature().size(); ++i) {
      if (a.signature()[i] == s) {
        return i;
      }
    }
    throw std::runtime_error("symbol missing");
  }

  inline bool oracle_is_hom(FiniteAlgebra const& src, FiniteAlgebra const& dst,
                            std::vector<Element> const& m) {
    bool ok = true;
    for (std::size_t op = 0; op < src.signature().size() && ok; ++op) {
      std::size_t dop = symbol_index(dst, src.signature()[op]);
      all_tuples(src.arity(op), carrier_of(src), [&](auto const& t) {
        std::vector<Element> mt;
        for (Element x : t) {
          mt.push_back(m[x]);
        }
        ok = ok && m[lookup(src, op, t)] == lookup(dst, dop, mt);
      });
    }
    return ok;
  }

  // All maps src -> dst in lexicographic order (first element most
  // significant) that are homomorphisms.
  inline std::vector<std::vector<Element>> oracle_homs(FiniteAlgebra const& src,
                                                       FiniteAlgebra const& dst) {
    std::vector<std::vector<Element>> out;
    all_tuples(src.size(), carrier_of(dst), [&](auto const& m) {
      if (oracle_is_hom(src, dst, m)) {
        out.push_back(m);
      }
    });
    return out;
  }

  inline bool oracle_isomorphic(FiniteAlgebra const& a, FiniteAlgebra const& b) {
    if (a.size() != b.size()) {
      return false;
    }
    std::vector<Element> perm = carrier_of(b);
    do {
      if (oracle_is_hom(a, b, perm)) {
        return true;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
  }

  // Structural recursion on a term, independent of CompiledTerm.
  inline Element oracle_eval(FiniteAlgebra const& a, Term const& t,
                             std::vector<Element> const& binding) {
    if (t.is_variable()) {
      return binding.at(t.variable());
    }
    std::vector<Element> args;
    for (auto const& s : t.args()) {
      args.push_back(oracle_eval(a, s, binding));
    }
    for (std::size_t op = 0; op < a.signature().size(); ++op) {
      if (a.signature()[op].name == t.symbol()) {
        return lookup(a, op, args);
      }
    }
    throw std::runtime_error("unknown symbol " + t.symbol());
  }

  inline bool oracle_satisfies(FiniteAlgebra const& a, Equation const& eq) {
    bool ok = true;
    all_tuples(eq.variables.size(), carrier_of(a), [&](auto const& b) {
      ok = ok && oracle_eval(a, eq.lhs, b) == oracle_eval(a, eq.rhs, b);
    });
    return ok;
  }

  inline bool has_symbols(FiniteAlgebra const& a, EquationSet const& eqs) {
    return eqs.symbols().missing_from(a.signature()).empty();
  }

  inline bool oracle_satisfies_all(FiniteAlgebra const& a, EquationSet const& eqs) {
    for (auto const& e : eqs.equations) {
      if (!oracle_satisfies(a, e)) {
        return false;
      }
    }
    return true;
  }

  // Presets with a fixed signature (vector spaces only for q = 2).
  inline std::vector<EquationSet> small_presets() {
    std::vector<EquationSet> out;
    for (auto const* n : {"group", "abelian-group", "semigroup", "ring", "lattice",
                          "boolean-algebra", "vector-space(2)"}) {
      out.push_back(preset(n));
    }
    return out;
  }

  inline std::set<Element> to_set(ElementSet const& s) {
    return {s.begin(), s.end()};
  }

  // Raw eventually periodic representatives and the window oracle.

  struct Raw {
    std::vector<Element> pre, per;

    Element at(std::size_t i) const {
      return i < pre.size() ? pre[i] : per[(i - pre.size()) % per.size()];
    }
  };

  // Two raw representatives agree cofinitely iff they agree on one full
  // common period after both preperiods.
  inline bool window_equal(Raw const& a, Raw const& b) {
    std::size_t start = std::max(a.pre.size(), b.pre.size());
    std::size_t len   = std::lcm(a.per.size(), b.per.size());
    for (std::size_t i = start; i < start + 2 * len; ++i) {
      if (a.at(i) != b.at(i)) {
        return false;
      }
    }
    return true;
  }

  inline Raw random_raw(std::mt19937_64& rng, std::size_t n, std::size_t max_pre = 3,
                 std::size_t max_per = 4) {
    Raw r;
    r.pre.resize(rng() % (max_pre + 1));
    r.per.resize(1 + rng() % max_per);
    for (auto& e : r.pre) {
      e = static_cast<Element>(rng() % n);
    }
    for (auto& e : r.per) {
      e = static_cast<Element>(rng() % n);
    }
    return r;
  }

  // Another representative of the same sequence: repeat the period, move
  // some of it into the preperiod.
  inline Raw disguise(std::mt19937_64& rng, Raw r) {
    std::size_t reps = 1 + rng() % 3;
    Raw         out{r.pre, {}};
    for (std::size_t k = 0; k < reps; ++k) {
      out.per.insert(out.per.end(), r.per.begin(), r.per.end());
    }
    std::size_t shift = rng() % (out.per.size() + 2);
    for (std::size_t i = 0; i < shift; ++i) {
      out.pre.push_back(out.per.front());
      std::rotate(out.per.begin(), out.per.begin() + 1, out.per.end());
    }
    return out;
  }

  inline EpSequence ep(FiniteAlgebra const& a, Raw const& r) {
    return EpSequence(a, r.pre, r.per);
  }

  inline FiniteAlgebra ring_mod(std::size_t n) {
    auto                     sig = preset("ring").symbols();
    std::vector<std::string> carrier;
    for (std::size_t i = 0; i < n; ++i) {
      carrier.push_back("n" + std::to_string(i));
    }
    std::vector<FiniteAlgebra::Table> tables;
    for (auto const& s : sig) {
      FiniteAlgebra::Table t;
      if (s.name == "zero") {
        t = {0};
      } else if (s.name == "one") {
        t = {static_cast<Element>(1 % n)};
      } else if (s.name == "neg") {
        for (std::size_t x = 0; x < n; ++x) {
          t.push_back(static_cast<Element>((n - x) % n));
        }
      } else {
        for (std::size_t x = 0; x < n; ++x) {
          for (std::size_t y = 0; y < n; ++y) {
            t.push_back(static_cast<Element>(s.name == "add" ? (x + y) % n : (x * y) % n));
          }
        }
      }
      tables.push_back(t);
    }
    return FiniteAlgebra("Zmod" + std::to_string(n), carrier, sig, tables);
  }

  // Distinct canonical forms of sequences with preperiod <= 1 and
  // period <= 2, constants included, in first-seen order.
  inline std::vector<EpSequence> short_sequences(FiniteAlgebra const& a) {
    std::vector<EpSequence> out;
    for (std::size_t pre = 0; pre <= 1; ++pre) {
      for (std::size_t per = 1; per <= 2; ++per) {
        std::vector<Element> digits(pre + per, 0);
        while (true) {
          EpSequence s(a, {digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(pre)},
                       {digits.begin() + static_cast<std::ptrdiff_t>(pre), digits.end()});
          if (std::find(out.begin(), out.end(), s) == out.end()) {
            out.push_back(s);
          }
          std::size_t i = 0;
          while (i < digits.size() && ++digits[i] == a.size()) {
            digits[i++] = 0;
          }
          if (i == digits.size()) {
            break;
          }
        }
      }
    }
    return out;
  }

  // Subsets and term tables for the closure and clone oracles.
  inline std::vector<ElementSet> all_subsets(std::size_t n) {
    std::vector<ElementSet> out;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      ElementSet s;
      for (Element e = 0; e < n; ++e) {
        if (mask >> e & 1u) {
          s.push_back(e);
        }
      }
      out.push_back(s);
    }
    return out;
  }

  inline bool subset_of(ElementSet const& a, ElementSet const& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  }

  // Value tables of every term of depth <= d over n variables, by levels.
  inline std::set<std::vector<Element>> term_tables(FiniteAlgebra const& a, std::size_t n,
                                             std::size_t depth) {
    std::size_t points = 1;
    for (std::size_t i = 0; i < n; ++i) {
      points *= a.size();
    }
    std::set<std::vector<Element>> level;
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<Element> t(points);
      all_tuples(n, carrier_of(a), [&, idx = std::size_t{0}](auto const& b) mutable {
        t[idx++] = b[v];
      });
      level.insert(t);
    }
    for (std::size_t d = 0; d < depth; ++d) {
      auto                 next = level;
      std::vector<std::vector<Element>> pool(level.begin(), level.end());
      std::vector<Element> idx(pool.size());
      for (Element i = 0; i < pool.size(); ++i) {
        idx[i] = i;
      }
      for (std::size_t op = 0; op < a.signature().size(); ++op) {
        all_tuples(a.arity(op), idx, [&](auto const& pick) {
          std::vector<Element> t(points), args(pick.size());
          for (std::size_t p = 0; p < points; ++p) {
            for (std::size_t j = 0; j < pick.size(); ++j) {
              args[j] = pool[pick[j]][p];
            }
            t[p] = lookup(a, op, args);
          }
          next.insert(t);
        });
      }
      level = std::move(next);
    }
    return level;
  }

  // Whitespace-separated rows of a golden file, comments skipped.
  inline std::vector<std::vector<std::string>> golden_rows(std::string const& file) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream                    in(read_file(data_path("tests/golden/" + file)));
    std::string                           line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') {
        continue;
      }
      std::istringstream       ls(line);
      std::vector<std::string> row;
      std::string              tok;
      while (ls >> tok) {
        row.push_back(tok);
      }
      rows.push_back(row);
    }
    return rows;
  }

}  // namespace testing_support
