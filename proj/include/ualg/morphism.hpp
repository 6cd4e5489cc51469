#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "error.hpp"
#include "generation.hpp"
#include "parallel.hpp"

namespace ualg {

  // Source element index -> target element index.
  using Map = std::vector<Element>;

  // Source element -> target element, or nullopt outside the domain.
  using PartialMap = std::vector<std::optional<Element>>;

  struct HomWitness {
    std::size_t          op;  // symbol index in the source signature
    std::vector<Element> args;
    Element              lhs;  // f(o(args))
    Element              rhs;  // o(f(args))
  };

  struct HomCheck {
    bool                      ok = true;
    std::optional<HomWitness> witness;
    // Number of (symbol, tuple) conditions actually tested.
    std::uint64_t checked = 0;

    explicit operator bool() const noexcept {
      return ok;
    }
  };

  namespace detail {
    inline void require_total(FiniteAlgebra const& source,
                              FiniteAlgebra const& target,
                              Map const&           map) {
      if (map.size() != source.size()) {
        throw InputError("map is not total: expected "
                         + std::to_string(source.size()) + " images, found "
                         + std::to_string(map.size()));
      }
      for (Element v : map) {
        if (v >= target.size()) {
          throw InputError("map image outside the carrier of "
                           + target.name());
        }
      }
    }

    // Checks f(o(z)) = o(f(z)) for every symbol and tuple over `domain`
    // whose output also lies in `domain`. Symbols in source order, tuples
    // lexicographic.
    inline HomCheck check_guarded(FiniteAlgebra const& source,
                                  FiniteAlgebra const& target,
                                  PartialMap const&    map) {
      auto       to_target = align(source.signature(), target.signature());
      ElementSet domain;
      for (Element e = 0; e < map.size(); ++e) {
        if (map[e]) {
          if (*map[e] >= target.size()) {
            throw InputError("map image outside the carrier of "
                             + target.name());
          }
          domain.push_back(e);
        }
      }
      HomCheck             result;
      std::vector<Element> image;
      for (std::size_t op = 0; op < source.signature().size() && result.ok;
           ++op) {
        for_each_tuple(
            source.arity(op), domain, [&](std::span<Element const> args) {
              Element out = source.apply(op, args);
              if (!map[out]) {
                return true;
              }
              image.clear();
              for (Element a : args) {
                image.push_back(*map[a]);
              }
              Element lhs = *map[out];
              Element rhs = target.apply(to_target[op],
                                         std::span<Element const>(image));
              ++result.checked;
              if (lhs != rhs) {
                result.ok      = false;
                result.witness = HomWitness{op, {args.begin(), args.end()}, lhs, rhs};
                return false;
              }
              return true;
            });
      }
      return result;
    }
  }  // namespace detail

  // f(o(z)) = o(f(z)) for every symbol (matched by name and arity) and tuple.
  inline HomCheck check_homomorphism(FiniteAlgebra const& source,
                                     FiniteAlgebra const& target,
                                     Map const&           map) {
    detail::require_total(source, target, map);
    PartialMap partial(map.begin(), map.end());
    return detail::check_guarded(source, target, partial);
  }

  // The guarded condition: only tuples whose arguments and output all lie in
  // the domain of `map` are constrained.
  inline HomCheck check_partial_homomorphism(FiniteAlgebra const& source,
                                             FiniteAlgebra const& target,
                                             PartialMap const&    map) {
    if (map.size() != source.size()) {
      throw InputError("partial map must have one slot per source element");
    }
    return detail::check_guarded(source, target, map);
  }

  // A total map between carriers. Property flags are recomputed on demand.
  class Morphism {
   public:
    Morphism(FiniteAlgebra source, FiniteAlgebra target, Map map)
        : source_(std::move(source)),
          target_(std::move(target)),
          map_(std::move(map)) {
      detail::require_total(source_, target_, map_);
    }

    FiniteAlgebra const& source() const noexcept {
      return source_;
    }
    FiniteAlgebra const& target() const noexcept {
      return target_;
    }
    Map const& map() const noexcept {
      return map_;
    }
    Element operator()(Element e) const {
      return map_.at(e);
    }

    HomCheck check() const {
      return check_homomorphism(source_, target_, map_);
    }
    bool is_homomorphism() const {
      return check().ok;
    }
    bool is_injective() const {
      return image().size() == map_.size();
    }
    bool is_surjective() const {
      return image().size() == target_.size();
    }
    bool is_endomorphism() const {
      return source_ == target_;
    }
    // r∘r = r; only meaningful for endomorphisms.
    bool is_idempotent() const {
      if (!is_endomorphism()) {
        return false;
      }
      for (Element e = 0; e < map_.size(); ++e) {
        if (map_[map_[e]] != map_[e]) {
          return false;
        }
      }
      return true;
    }
    ElementSet image() const {
      return detail::normalize(map_);
    }

    bool operator==(Morphism const& other) const {
      return source_ == other.source_ && target_ == other.target_
             && map_ == other.map_;
    }

   private:
    FiniteAlgebra source_;
    FiniteAlgebra target_;
    Map           map_;
  };

  // g ∘ f
  inline Morphism compose(Morphism const& g, Morphism const& f) {
    if (!(f.target() == g.source())) {
      throw InputError("cannot compose: codomain of the first map is not the "
                       "domain of the second");
    }
    Map m(f.map().size());
    for (Element e = 0; e < m.size(); ++e) {
      m[e] = g(f(e));
    }
    return Morphism(f.source(), g.target(), std::move(m));
  }

  ////////////////////////////////////////////////////////////////////////
  // Backtracking search for homomorphisms
  ////////////////////////////////////////////////////////////////////////

  enum class SearchMode { count, list, first };

  struct SearchOptions {
    SearchMode    mode = SearchMode::list;
    std::uint64_t budget = 10'000'000;  // search nodes (value choices)
    Exec          exec   = {};
  };

  struct HomSearchResult {
    std::uint64_t    count = 0;
    std::vector<Map> maps;  // lexicographic; empty in count mode
  };

  namespace detail {
    inline constexpr Element unassigned = std::numeric_limits<Element>::max();

    // Backtracking over source elements with forward checking: once every
    // argument of a table cell is assigned, the image of the cell's output
    // is forced. Nullary symbols force their images up front.
    class HomSearch {
     public:
      HomSearch(FiniteAlgebra const& src,
                FiniteAlgebra const& dst,
                std::vector<std::vector<char>> allowed,
                bool                 injective)
          : src_(src),
            dst_(dst),
            to_dst_(align(src.signature(), dst.signature())),
            allowed_(std::move(allowed)),
            injective_(injective),
            touching_(src.size()) {
        if (allowed_.empty()) {
          allowed_.assign(src.size(), std::vector<char>(dst.size(), 1));
        }
        std::vector<std::uint64_t> degree(src.size(), 0);
        for (std::size_t op = 0; op < src.signature().size(); ++op) {
          std::size_t arity = src.arity(op);
          if (arity == 0) {
            nullary_.push_back(op);
            continue;
          }
          for_each_tuple(
              arity, src.all_elements(), [&](std::span<Element const> args) {
                std::size_t id = cells_.size();
                Element     out = src.apply(op, args);
                cells_.push_back({op, {args.begin(), args.end()}, out});
                for (Element a : args) {
                  if (touching_[a].empty() || touching_[a].back() != id) {
                    touching_[a].push_back(id);
                  }
                  ++degree[a];
                }
                ++degree[out];
                return true;
              });
        }
        natural_order_.resize(src.size());
        for (Element e = 0; e < src.size(); ++e) {
          natural_order_[e] = e;
        }
        degree_order_ = natural_order_;
        std::stable_sort(degree_order_.begin(),
                         degree_order_.end(),
                         [&](Element a, Element b) {
                           return degree[a] > degree[b];
                         });
      }

      HomSearchResult run(SearchOptions const& opts) {
        State root(src_.size(), dst_.size());
        for (std::size_t op : nullary_) {
          Element s = src_.table(op)[0];
          Element d = dst_.table(to_dst_[op])[0];
          if (!assign(root, s, d)) {
            return {};
          }
        }
        // `first` needs the lexicographically least map, which natural order
        // with ascending values yields directly. Other modes sort at the end.
        auto const& order = opts.mode == SearchMode::first ? natural_order_
                                                           : degree_order_;
        nodes_ = 0;
        budget_ = opts.budget;

        Element branch = next_unassigned(root, order);
        if (branch == unassigned) {
          HomSearchResult r;
          r.count = 1;
          if (opts.mode != SearchMode::count) {
            r.maps.push_back(root.map);
          }
          return r;
        }
        std::vector<Element> values;
        for (Element v = 0; v < dst_.size(); ++v) {
          if (allowed_[branch][v]) {
            values.push_back(v);
          }
        }
        std::vector<HomSearchResult> parts(
            chunk_count(opts.exec, values.size()));
        parallel_chunks(
            opts.exec,
            values.size(),
            [&](std::size_t chunk, std::uint64_t lo, std::uint64_t hi) {
              for (std::uint64_t i = lo; i < hi; ++i) {
                if (opts.mode == SearchMode::first && parts[chunk].count > 0) {
                  return;
                }
                State s = root;
                if (!charge() || !assign(s, branch, values[i])) {
                  continue;
                }
                dfs(s, order, opts.mode, parts[chunk]);
              }
            });
        if (exhausted_) {
          throw BudgetExceeded("homomorphism search exceeded "
                               + std::to_string(opts.budget) + " nodes");
        }
        HomSearchResult out;
        for (auto& p : parts) {
          if (opts.mode == SearchMode::first && out.count > 0) {
            break;
          }
          out.count += p.count;
          out.maps.insert(out.maps.end(), p.maps.begin(), p.maps.end());
        }
        std::sort(out.maps.begin(), out.maps.end());
        return out;
      }

     private:
      struct Cell {
        std::size_t          op;
        std::vector<Element> args;
        Element              out;
      };

      struct State {
        State(std::size_t n, std::size_t m) : map(n, unassigned), used(m, 0) {}
        Map               map;
        std::vector<char> used;
      };

      bool charge() {
        if (++nodes_ > budget_) {
          exhausted_ = true;
          return false;
        }
        return true;
      }

      Element next_unassigned(State const& s, std::vector<Element> const& order) {
        for (Element e : order) {
          if (s.map[e] == unassigned) {
            return e;
          }
        }
        return unassigned;
      }

      // Assigns e := v and propagates forced outputs. Returns false on
      // contradiction (the state is then discarded by the caller).
      bool assign(State& s, Element e, Element v) {
        std::vector<std::pair<Element, Element>> queue{{e, v}};
        std::vector<Element>                     image;
        while (!queue.empty()) {
          auto [x, y] = queue.back();
          queue.pop_back();
          if (s.map[x] != unassigned) {
            if (s.map[x] != y) {
              return false;
            }
            continue;
          }
          if (!allowed_[x][y] || (injective_ && s.used[y])) {
            return false;
          }
          s.map[x]  = y;
          s.used[y] = 1;
          for (std::size_t id : touching_[x]) {
            Cell const& c = cells_[id];
            image.clear();
            bool ready = true;
            for (Element a : c.args) {
              if (s.map[a] == unassigned) {
                ready = false;
                break;
              }
              image.push_back(s.map[a]);
            }
            if (!ready) {
              continue;
            }
            Element w = dst_.apply(to_dst_[c.op], std::span<Element const>(image));
            if (s.map[c.out] != unassigned) {
              if (s.map[c.out] != w) {
                return false;
              }
            } else {
              queue.emplace_back(c.out, w);
            }
          }
        }
        return true;
      }

      void dfs(State&                      s,
               std::vector<Element> const& order,
               SearchMode                  mode,
               HomSearchResult&            out) {
        if (exhausted_) {
          return;
        }
        Element e = next_unassigned(s, order);
        if (e == unassigned) {
          ++out.count;
          if (mode != SearchMode::count) {
            out.maps.push_back(s.map);
          }
          return;
        }
        for (Element v = 0; v < dst_.size(); ++v) {
          if (!allowed_[e][v] || (injective_ && s.used[v])) {
            continue;
          }
          if (!charge()) {
            return;
          }
          State next = s;
          if (assign(next, e, v)) {
            dfs(next, order, mode, out);
            if (mode == SearchMode::first && out.count > 0) {
              return;
            }
          }
        }
      }

      FiniteAlgebra const&             src_;
      FiniteAlgebra const&             dst_;
      std::vector<std::size_t>         to_dst_;
      std::vector<std::vector<char>>   allowed_;
      bool                             injective_;
      std::vector<std::vector<std::size_t>> touching_;
      std::vector<Cell>                cells_;
      std::vector<std::size_t>         nullary_;
      std::vector<Element>             natural_order_;
      std::vector<Element>             degree_order_;
      std::atomic<std::uint64_t>       nodes_{0};
      std::uint64_t                    budget_ = 0;
      std::atomic<bool>                exhausted_{false};
    };
  }  // namespace detail

  // All homomorphisms src -> dst (signatures matched by name and arity).
  inline HomSearchResult enumerate_homomorphisms(FiniteAlgebra const& src,
                                                 FiniteAlgebra const& dst,
                                                 SearchOptions const& opts = {}) {
    detail::HomSearch search(src, dst, {}, false);
    return search.run(opts);
  }

  // Endomorphisms r with r(s) = s on `image` and range exactly `image`.
  // Empty means `image` is not a retract.
  inline std::vector<Morphism> find_retractions(FiniteAlgebra const& alg,
                                                ElementSet const&    image,
                                                SearchOptions        opts = {}) {
    Subuniverse sub(alg, image);
    if (sub.empty()) {
      return {};
    }
    std::vector<std::vector<char>> allowed(alg.size(),
                                           std::vector<char>(alg.size(), 0));
    std::vector<char> in_image(alg.size(), 0);
    for (Element s : sub.members()) {
      in_image[s] = 1;
    }
    for (Element e = 0; e < alg.size(); ++e) {
      for (Element v : sub.members()) {
        allowed[e][v] = in_image[e] ? static_cast<char>(v == e) : 1;
      }
    }
    if (opts.mode == SearchMode::count) {
      opts.mode = SearchMode::list;
    }
    detail::HomSearch search(alg, alg, std::move(allowed), false);
    std::vector<Morphism> out;
    for (auto& m : search.run(opts).maps) {
      out.emplace_back(alg, alg, std::move(m));
    }
    return out;
  }

  namespace detail {
    // Per-element data preserved by every isomorphism: size of the generated
    // subuniverse (the orbit under unary term operations), and per symbol
    // the number of table cells producing the element and whether the
    // element is idempotent for it.
    inline std::vector<std::vector<std::uint64_t>>
    element_invariants(FiniteAlgebra const& alg, Signature const& order) {
      std::vector<std::vector<std::uint64_t>> inv(alg.size());
      for (Element e = 0; e < alg.size(); ++e) {
        inv[e].push_back(generate(alg, {e}).members().size());
      }
      for (auto const& sym : order) {
        std::size_t           op = *alg.signature().find(sym);
        std::vector<std::uint64_t> hits(alg.size(), 0);
        for (Element v : alg.table(op)) {
          ++hits[v];
        }
        for (Element e = 0; e < alg.size(); ++e) {
          inv[e].push_back(hits[e]);
          if (sym.arity > 0) {
            std::vector<Element> diag(sym.arity, e);
            inv[e].push_back(alg.apply(op, std::span<Element const>(diag)) == e);
          }
        }
      }
      return inv;
    }
  }  // namespace detail

  // One isomorphism a -> b (the lexicographically least), if any.
  inline std::optional<Morphism> check_isomorphism(FiniteAlgebra const& a,
                                                   FiniteAlgebra const& b,
                                                   SearchOptions opts = {}) {
    align(a.signature(), b.signature());
    if (a.size() != b.size()) {
      return std::nullopt;
    }
    auto ia = detail::element_invariants(a, a.signature());
    auto ib = detail::element_invariants(b, a.signature());
    {
      auto sa = ia, sb = ib;
      std::sort(sa.begin(), sa.end());
      std::sort(sb.begin(), sb.end());
      if (sa != sb) {
        return std::nullopt;
      }
    }
    std::vector<std::vector<char>> allowed(a.size(),
                                           std::vector<char>(b.size(), 0));
    for (Element x = 0; x < a.size(); ++x) {
      for (Element y = 0; y < b.size(); ++y) {
        allowed[x][y] = ia[x] == ib[y];
      }
    }
    opts.mode = SearchMode::first;
    detail::HomSearch search(a, b, std::move(allowed), true);
    auto              found = search.run(opts);
    if (found.maps.empty()) {
      return std::nullopt;
    }
    return Morphism(a, b, std::move(found.maps.front()));
  }

}  // namespace ualg
