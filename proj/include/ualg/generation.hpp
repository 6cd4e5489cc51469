#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "algebra.hpp"
#include "error.hpp"
#include "parallel.hpp"

namespace ualg {

  // Stages A_0 ⊆ A_1 ⊆ ... ⊆ A_k of the closure iteration. A_0 is the seed
  // together with every nullary value; each later stage adds all outputs of
  // operations on the previous one. Only strictly growing stages are kept,
  // so the last stage is the fixpoint.
  struct GenerationTrace {
    ElementSet              seed;
    std::vector<ElementSet> stages;
    bool                    fixpoint = false;
  };

  struct Generated {
    Subuniverse     subuniverse;
    GenerationTrace trace;

    ElementSet const& members() const noexcept {
      return subuniverse.members();
    }
    // No seed and no nullary symbols: the empty set, which is not an algebra.
    bool empty() const noexcept {
      return subuniverse.empty();
    }
  };

  namespace detail {
    // Outputs of every operation on tuples over `stage`, using `mask` to drop
    // elements already present. The tuple space of each symbol is split
    // across workers and merged in order.
    inline ElementSet expand_stage(FiniteAlgebra const&     alg,
                                   ElementSet const&        stage,
                                   std::vector<char> const& mask,
                                   Exec const&              exec) {
      ElementSet fresh;
      for (std::size_t op = 0; op < alg.signature().size(); ++op) {
        std::size_t arity = alg.arity(op);
        if (arity == 0) {
          continue;  // already in A_0
        }
        auto total = checked_power(stage.size(), arity, max_table_cells);
        if (!total || *total == 0) {
          continue;
        }
        std::vector<ElementSet> found(chunk_count(exec, *total));
        parallel_chunks(
            exec,
            *total,
            [&](std::size_t chunk, std::uint64_t lo, std::uint64_t hi) {
              std::vector<Element> args(arity);
              for (std::uint64_t i = lo; i < hi; ++i) {
                std::uint64_t rest = i;
                for (std::size_t j = arity; j > 0; --j) {
                  args[j - 1] = stage[rest % stage.size()];
                  rest /= stage.size();
                }
                Element out = alg.apply(op, std::span<Element const>(args));
                if (!mask[out]) {
                  found[chunk].push_back(out);
                }
              }
            });
        for (auto& f : found) {
          fresh.insert(fresh.end(), f.begin(), f.end());
        }
      }
      return normalize(std::move(fresh));
    }
  }  // namespace detail

  // The least subuniverse containing `seed` and all nullary values, with the
  // stage trace. Terminates after at most |carrier| stages.
  inline Generated generate(FiniteAlgebra const& alg,
                            ElementSet const&    seed,
                            Exec const&          exec = {}) {
    GenerationTrace trace;
    trace.seed = detail::normalize(seed);
    auto mask  = detail::mask_of(alg, trace.seed);

    ElementSet stage = trace.seed;
    for (std::size_t op = 0; op < alg.signature().size(); ++op) {
      if (alg.arity(op) == 0) {
        Element c = alg.table(op)[0];
        if (!mask[c]) {
          mask[c] = 1;
          stage.push_back(c);
        }
      }
    }
    stage = detail::normalize(std::move(stage));
    trace.stages.push_back(stage);

    while (true) {
      ElementSet fresh = detail::expand_stage(alg, stage, mask, exec);
      if (fresh.empty()) {
        break;
      }
      for (Element e : fresh) {
        mask[e] = 1;
      }
      ElementSet next;
      std::merge(stage.begin(),
                 stage.end(),
                 fresh.begin(),
                 fresh.end(),
                 std::back_inserter(next));
      stage = std::move(next);
      trace.stages.push_back(stage);
    }
    trace.fixpoint = true;
    return Generated{Subuniverse(alg, stage), std::move(trace)};
  }

  // Finite-case check that ⟨seed⟩ is the union of ⟨F⟩ over finite F ⊆ seed.
  // All subsets are enumerated when |seed| <= 12; otherwise every subset of
  // size <= 2, the seed itself, and `samples` random subsets are used.
  inline bool directed_union_check(FiniteAlgebra const& alg,
                                   ElementSet const&    seed,
                                   std::size_t          samples  = 256,
                                   std::uint64_t        rng_seed = 0) {
    ElementSet s     = detail::normalize(seed);
    ElementSet whole = generate(alg, s).members();
    std::vector<char> united(alg.size(), 0);

    auto add = [&](ElementSet const& subset) {
      auto g = generate(alg, subset);
      for (Element e : g.members()) {
        united[e] = 1;
      }
    };

    if (s.size() <= 12) {
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << s.size());
           ++bits) {
        ElementSet subset;
        for (std::size_t i = 0; i < s.size(); ++i) {
          if (bits >> i & 1u) {
            subset.push_back(s[i]);
          }
        }
        add(subset);
      }
    } else {
      add({});
      add(s);
      for (std::size_t i = 0; i < s.size(); ++i) {
        add({s[i]});
        for (std::size_t j = i + 1; j < s.size(); ++j) {
          add({s[i], s[j]});
        }
      }
      std::mt19937_64 rng(rng_seed);
      for (std::size_t n = 0; n < samples; ++n) {
        ElementSet subset;
        for (Element e : s) {
          if (rng() & 1u) {
            subset.push_back(e);
          }
        }
        add(subset);
      }
    }

    ElementSet unioned;
    for (Element e = 0; e < alg.size(); ++e) {
      if (united[e]) {
        unioned.push_back(e);
      }
    }
    return unioned == whole;
  }

  // Every subuniverse (the empty set included when it is closed), sorted by
  // size and then lexicographically, with the covering relation.
  struct SubuniverseLattice {
    std::vector<ElementSet>                          members;
    std::vector<std::pair<std::size_t, std::size_t>> covers;  // (lower, upper)
  };

  inline SubuniverseLattice subuniverse_lattice(FiniteAlgebra const& alg,
                                                std::size_t max_size = 5) {
    if (alg.size() > max_size) {
      throw BudgetExceeded("subuniverse lattice refused for "
                           + std::to_string(alg.size())
                           + " elements (limit " + std::to_string(max_size)
                           + ")");
    }
    SubuniverseLattice lat;
    std::size_t        n = alg.size();
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      ElementSet subset;
      for (std::size_t i = 0; i < n; ++i) {
        if (bits >> i & 1u) {
          subset.push_back(static_cast<Element>(i));
        }
      }
      if (is_subuniverse(alg, subset).closed) {
        lat.members.push_back(std::move(subset));
      }
    }
    std::stable_sort(lat.members.begin(),
                     lat.members.end(),
                     [](ElementSet const& a, ElementSet const& b) {
                       return a.size() != b.size() ? a.size() < b.size()
                                                   : a < b;
                     });
    auto subset_of = [](ElementSet const& a, ElementSet const& b) {
      return std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    for (std::size_t i = 0; i < lat.members.size(); ++i) {
      for (std::size_t j = 0; j < lat.members.size(); ++j) {
        if (i == j || lat.members[i].size() >= lat.members[j].size()
            || !subset_of(lat.members[i], lat.members[j])) {
          continue;
        }
        bool cover = true;
        for (std::size_t m = 0; m < lat.members.size() && cover; ++m) {
          if (m != i && m != j
              && lat.members[i].size() < lat.members[m].size()
              && lat.members[m].size() < lat.members[j].size()
              && subset_of(lat.members[i], lat.members[m])
              && subset_of(lat.members[m], lat.members[j])) {
            cover = false;
          }
        }
        if (cover) {
          lat.covers.emplace_back(i, j);
        }
      }
    }
    return lat;
  }

  struct FinitenessReport {
    // Smallest generating set: lexicographically first among the smallest.
    ElementSet minimum_generating_set;
    // Finite-case instances of "locally finite" and "finitely generated":
    // every subset generates a finite subalgebra, and the carrier itself is
    // generated by a finite set.
    bool locally_finite     = true;
    bool finitely_generated = true;
    // Present when |carrier| <= lattice_limit.
    std::optional<SubuniverseLattice> lattice;
  };

  inline FinitenessReport finiteness_report(FiniteAlgebra const& alg,
                                            std::size_t lattice_limit = 5) {
    FinitenessReport report;
    std::size_t      n     = alg.size();
    bool             found = false;
    for (std::size_t k = 0; k <= n && !found; ++k) {
      // Combinations of size k in lexicographic order.
      std::vector<Element> pick(k);
      for (std::size_t i = 0; i < k; ++i) {
        pick[i] = static_cast<Element>(i);
      }
      while (true) {
        if (generate(alg, pick).members().size() == n) {
          report.minimum_generating_set = pick;
          found                         = true;
          break;
        }
        std::size_t i = k;
        while (i > 0 && pick[i - 1] == n - k + i - 1) {
          --i;
        }
        if (i == 0) {
          break;
        }
        ++pick[i - 1];
        for (std::size_t j = i; j < k; ++j) {
          pick[j] = pick[j - 1] + 1;
        }
      }
    }
    if (n <= lattice_limit) {
      report.lattice = subuniverse_lattice(alg, lattice_limit);
    }
    return report;
  }

}  // namespace ualg
