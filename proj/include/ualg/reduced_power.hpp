#pragma once

// A computable proper extension of a finite algebra A: the eventually
// periodic elements of A^ℕ modulo the cofinite (Fréchet) filter. Two
// sequences are identified when they agree at all but finitely many indices.
// Operations act index by index.
//
// This is a reduced power, not an enlargement. The cofinite filter is not
// an ultrafilter, so first-order sentences in general do not transfer.
// Equations (and Horn sentences) do, and that is the phenomenon this module
// exposes: any finitely generated piece is a subalgebra of a finite power
// of A and therefore lies in every variety A lies in. Unlike an ultrapower
// of a finite algebra, which is isomorphic to the algebra itself, this
// extension is proper as soon as |A| >= 2.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "algebra.hpp"
#include "error.hpp"
#include "morphism.hpp"
#include "parallel.hpp"
#include "product.hpp"
#include "satisfaction.hpp"

namespace ualg {

  // An eventually periodic sequence pre · per · per · ... over a base
  // algebra, held in canonical form. Modulo the cofinite filter a finite
  // prefix carries no information, so the canonical form keeps only the
  // eventual behaviour: the primitive period, rotated into phase with index
  // 0, and an empty preperiod. Canonical forms are equal exactly when the
  // sequences agree on a cofinite set of indices.
  class EpSequence {
   public:
    EpSequence(FiniteAlgebra base, std::vector<Element> pre, std::vector<Element> per)
        : base_(std::move(base)), pre_(std::move(pre)), per_(std::move(per)) {
      if (per_.empty()) {
        throw InputError("empty period");
      }
      for (auto const* part : {&pre_, &per_}) {
        for (Element e : *part) {
          if (e >= base_.size()) {
            throw InputError("sequence element outside the carrier of "
                             + base_.name());
          }
        }
      }
      canonicalize();
    }

    FiniteAlgebra const& base() const noexcept {
      return base_;
    }
    std::vector<Element> const& preperiod() const noexcept {
      return pre_;
    }
    std::vector<Element> const& period() const noexcept {
      return per_;
    }
    bool is_constant() const noexcept {
      return pre_.empty() && per_.size() == 1;
    }

    // Value at index i (0-based).
    Element at(std::uint64_t i) const {
      if (i < pre_.size()) {
        return pre_[i];
      }
      return per_[(i - pre_.size()) % per_.size()];
    }

    // Same base and same canonical form.
    bool operator==(EpSequence const& other) const {
      return pre_ == other.pre_ && per_ == other.per_ && base_ == other.base_;
    }

    // Total order on canonical forms over one base: period length, then
    // contents.
    bool operator<(EpSequence const& other) const {
      if (per_.size() != other.per_.size()) {
        return per_.size() < other.per_.size();
      }
      return per_ < other.per_;
    }

    // `per b2 b1`; a preperiod never survives canonicalization.
    std::string to_string() const {
      std::string out = "per";
      for (Element e : per_) {
        out += " " + base_.element_name(e);
      }
      return out;
    }

   private:
    void canonicalize() {
      // Primitive period: the least divisor d of |per| with per d-periodic.
      std::size_t n = per_.size();
      for (std::size_t d = 1; d <= n; ++d) {
        if (n % d != 0) {
          continue;
        }
        bool periodic = true;
        for (std::size_t i = d; i < n && periodic; ++i) {
          periodic = per_[i] == per_[i - d];
        }
        if (periodic) {
          per_.resize(d);
          break;
        }
      }
      // Drop the preperiod: the tail from index |pre| on is per repeated, so
      // the period in phase with index 0 is per rotated right by |pre|.
      std::size_t shift = pre_.size() % per_.size();
      std::rotate(per_.rbegin(),
                  per_.rbegin() + static_cast<std::ptrdiff_t>(shift),
                  per_.rend());
      pre_.clear();
    }

    FiniteAlgebra        base_;
    std::vector<Element> pre_;
    std::vector<Element> per_;
  };

  inline EpSequence canonicalize(FiniteAlgebra const&        base,
                                 std::vector<Element> const& pre,
                                 std::vector<Element> const& per) {
    return EpSequence(base, pre, per);
  }

  // The constant sequence at e: the image of e under the standard embedding.
  inline EpSequence std_embed(FiniteAlgebra const& alg, Element e) {
    if (e >= alg.size()) {
      throw InputError("unknown element index in std_embed");
    }
    return EpSequence(alg, {}, {e});
  }

  inline EpSequence std_embed(FiniteAlgebra const& alg, std::string const& e) {
    return std_embed(alg, alg.element(e));
  }

  // Parses `pre b1 b2 | per b2 b1` or `per b1 b2`.
  inline EpSequence parse_ep(FiniteAlgebra const& alg, std::string_view text) {
    std::istringstream       in{std::string(text)};
    std::string              tok;
    std::vector<Element>     pre, per;
    std::vector<Element>*    target = nullptr;
    bool                     saw_per = false;
    while (in >> tok) {
      if (tok == "pre" && target == nullptr) {
        target = &pre;
      } else if (tok == "|" && target == &pre) {
        target = nullptr;
      } else if (tok == "per" && !saw_per && target != &pre) {
        target  = &per;
        saw_per = true;
      } else if (target != nullptr) {
        auto e = alg.find_element(tok);
        if (!e) {
          throw InputError("unknown element '" + tok + "' in sequence");
        }
        target->push_back(*e);
      } else {
        throw InputError("malformed sequence '" + std::string(text)
                         + "' (expected 'pre ... | per ...' or 'per ...')");
      }
    }
    if (!saw_per || per.empty()) {
      throw InputError("empty period in sequence '" + std::string(text) + "'");
    }
    return EpSequence(alg, std::move(pre), std::move(per));
  }

  namespace detail {
    inline void require_same_base(FiniteAlgebra const& base,
                                  std::vector<EpSequence> const& seqs) {
      for (auto const& s : seqs) {
        if (!(s.base() == base)) {
          throw InputError("sequences over different base algebras");
        }
      }
    }

    // max preperiod and lcm of periods over a set of sequences.
    inline std::pair<std::size_t, std::size_t>
    window_shape(std::vector<EpSequence> const& seqs) {
      std::size_t pre = 0, per = 1;
      for (auto const& s : seqs) {
        pre = std::max(pre, s.preperiod().size());
        per = std::lcm(per, s.period().size());
      }
      return {pre, per};
    }
  }  // namespace detail

  // Applies symbol `op` of the base index by index. The output is
  // eventually periodic with preperiod at most max-preperiod and period
  // dividing the lcm of the periods, so one window of that length decides it.
  inline EpSequence pointwise_apply(std::size_t                    op,
                                    std::vector<EpSequence> const& args) {
    if (args.empty()) {
      throw InputError("pointwise_apply needs the base algebra; use the "
                       "overload taking it for nullary symbols");
    }
    FiniteAlgebra const& base = args.front().base();
    detail::require_same_base(base, args);
    if (op >= base.signature().size() || base.arity(op) != args.size()) {
      throw SignatureError("arity mismatch in pointwise_apply");
    }
    auto [pre, per] = detail::window_shape(args);
    std::vector<Element> values(pre + per), tuple(args.size());
    for (std::size_t i = 0; i < pre + per; ++i) {
      for (std::size_t j = 0; j < args.size(); ++j) {
        tuple[j] = args[j].at(i);
      }
      values[i] = base.apply(op, std::span<Element const>(tuple));
    }
    return EpSequence(base,
                      {values.begin(), values.begin() + static_cast<std::ptrdiff_t>(pre)},
                      {values.begin() + static_cast<std::ptrdiff_t>(pre), values.end()});
  }

  inline EpSequence pointwise_apply(FiniteAlgebra const&           base,
                                    std::string const&             symbol,
                                    std::vector<EpSequence> const& args) {
    std::size_t op = base.op(symbol);
    if (base.arity(op) != args.size()) {
      throw SignatureError("arity mismatch for '" + symbol + "': expected "
                           + std::to_string(base.arity(op)) + " arguments, found "
                           + std::to_string(args.size()));
    }
    if (args.empty()) {
      return std_embed(base, base.table(op)[0]);
    }
    detail::require_same_base(base, args);
    return pointwise_apply(op, args);
  }

  // The closure of the constants and `generators` under pointwise
  // operations, materialised as an ordinary finite algebra over fresh
  // urelements. Members are ordered with the constants first (in carrier
  // order, so member e is the constant at e) followed by the rest in
  // canonical order; view element i is member i.
  struct GeneratedExtension {
    FiniteAlgebra           base;
    std::vector<EpSequence> generators;
    std::vector<EpSequence> members;
    FiniteAlgebra           view;
    // Window (max preperiod, lcm of periods) of the generators.
    std::size_t window_pre = 0;
    std::size_t window_per = 1;

    std::optional<Element> find(EpSequence const& s) const {
      for (Element i = 0; i < members.size(); ++i) {
        if (members[i] == s) {
          return i;
        }
      }
      return std::nullopt;
    }

    // The standard copy: constants, as view elements 0..|base|-1.
    ElementSet standard_copy() const {
      ElementSet out(base.size());
      std::iota(out.begin(), out.end(), Element{0});
      return out;
    }
  };

  inline GeneratedExtension adjoin_generate(FiniteAlgebra const&           alg,
                                            std::vector<EpSequence> const& gens,
                                            std::size_t max_members = 100'000,
                                            std::string const& prefix = "r",
                                            Exec const&        exec   = {}) {
    detail::require_same_base(alg, gens);
    auto [pre, per]    = detail::window_shape(gens);
    std::size_t const W = pre + per;

    // Every member is decided by its values on [0, W).
    using Window = std::vector<Element>;
    std::map<Window, std::size_t> index;
    std::vector<Window>           windows;
    auto add = [&](Window w) {
      if (index.contains(w)) {
        return;
      }
      if (windows.size() >= max_members) {
        throw BudgetExceeded("generated extension exceeds "
                             + std::to_string(max_members) + " members");
      }
      index.emplace(w, windows.size());
      windows.push_back(std::move(w));
    };
    for (Element e = 0; e < alg.size(); ++e) {
      add(Window(W, e));
    }
    for (auto const& g : gens) {
      Window w(W);
      for (std::size_t i = 0; i < W; ++i) {
        w[i] = g.at(i);
      }
      add(std::move(w));
    }

    std::size_t old_end = 0;
    while (true) {
      std::size_t const end = windows.size();
      for (std::size_t op = 0; op < alg.signature().size(); ++op) {
        std::size_t arity = alg.arity(op);
        if (arity == 0) {
          continue;  // constants are already members
        }
        auto total = detail::checked_power(end, arity, std::uint64_t{1} << 36);
        if (!total) {
          throw BudgetExceeded("generated extension closure too large");
        }
        std::vector<std::vector<Window>> found(detail::chunk_count(exec, *total));
        detail::parallel_chunks(
            exec, *total, [&](std::size_t chunk, std::uint64_t lo, std::uint64_t hi) {
              std::vector<std::size_t> pick(arity);
              std::vector<Element>     tuple(arity);
              for (std::uint64_t t = lo; t < hi; ++t) {
                std::uint64_t rest     = t;
                bool          uses_new = false;
                for (std::size_t j = arity; j > 0; --j) {
                  pick[j - 1] = static_cast<std::size_t>(rest % end);
                  rest /= end;
                  uses_new = uses_new || pick[j - 1] >= old_end;
                }
                if (!uses_new) {
                  continue;
                }
                Window w(W);
                for (std::size_t i = 0; i < W; ++i) {
                  for (std::size_t j = 0; j < arity; ++j) {
                    tuple[j] = windows[pick[j]][i];
                  }
                  w[i] = alg.apply(op, std::span<Element const>(tuple));
                }
                if (!index.contains(w)) {
                  found[chunk].push_back(std::move(w));
                }
              }
            });
        for (auto& chunk : found) {
          for (auto& w : chunk) {
            add(std::move(w));
          }
        }
      }
      if (windows.size() == end) {
        break;
      }
      old_end = end;
    }

    // Canonical members, with the closure bound asserted.
    std::vector<EpSequence> members;
    for (auto const& w : windows) {
      EpSequence s(alg,
                   {w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pre)},
                   {w.begin() + static_cast<std::ptrdiff_t>(pre), w.end()});
      if (s.preperiod().size() > pre || per % s.period().size() != 0) {
        throw Error("closure bound violated by " + s.to_string());
      }
      members.push_back(std::move(s));
    }
    std::vector<std::size_t> order(members.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(alg.size()),
              order.end(),
              [&](std::size_t a, std::size_t b) { return members[a] < members[b]; });
    std::vector<std::size_t> position(members.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      position[order[i]] = i;
    }

    std::vector<std::string> carrier;
    for (std::size_t i = 0; i < members.size(); ++i) {
      carrier.push_back(prefix + std::to_string(i));
    }
    std::vector<FiniteAlgebra::Table> tables;
    ElementSet                        all(members.size());
    std::iota(all.begin(), all.end(), Element{0});
    for (std::size_t op = 0; op < alg.signature().size(); ++op) {
      std::size_t          arity = alg.arity(op);
      FiniteAlgebra::Table table;
      std::vector<Element> tuple(arity);
      detail::for_each_tuple(arity, all, [&](std::span<Element const> args) {
        Window w(W);
        for (std::size_t i = 0; i < W; ++i) {
          for (std::size_t j = 0; j < arity; ++j) {
            tuple[j] = windows[order[args[j]]][i];
          }
          w[i] = alg.apply(op, std::span<Element const>(tuple));
        }
        if (arity == 0) {
          w.assign(W, alg.table(op)[0]);
        }
        table.push_back(static_cast<Element>(position[index.at(w)]));
        return true;
      });
      tables.push_back(std::move(table));
    }

    std::vector<EpSequence> sorted;
    for (auto i : order) {
      sorted.push_back(members[i]);
    }
    FiniteAlgebra view(alg.name() + "_ext", std::move(carrier), alg.signature(),
                       std::move(tables));
    return GeneratedExtension{alg, gens, std::move(sorted), std::move(view), pre, per};
  }

  struct CoordinateRetraction {
    Morphism map;
    HomCheck check;
    // Every constant is fixed and the range is exactly the constants.
    bool fixes_standard_copy = false;
  };

  // member ↦ the constant at its value at `index`: evaluation at one
  // coordinate of the canonical (purely periodic) representative. Those
  // representatives are closed under pointwise operations, so this is a
  // retraction of the extension onto its standard copy.
  inline CoordinateRetraction coordinate_retraction(GeneratedExtension const& ext,
                                                    std::uint64_t             index) {
    Map m(ext.members.size());
    for (std::size_t i = 0; i < ext.members.size(); ++i) {
      m[i] = ext.members[i].at(index);  // constant at e is member e
    }
    Morphism r(ext.view, ext.view, std::move(m));
    auto     check = r.check();
    bool     fixes = r.image() == ext.standard_copy();
    for (Element e = 0; e < ext.base.size(); ++e) {
      fixes = fixes && r(e) == e;
    }
    return CoordinateRetraction{std::move(r), std::move(check), fixes};
  }

  struct PreservationReport {
    SatisfactionReport base;
    SatisfactionReport extension;
    std::size_t        members = 0;

    bool all_pass() const noexcept {
      return extension.all_pass();
    }
  };

  // Checks that every equation the base satisfies also holds on the
  // algebra view of the extension generated by `gens`.
  inline PreservationReport preservation_suite(FiniteAlgebra const&           alg,
                                               EquationSet const&             eqs,
                                               std::vector<EpSequence> const& gens,
                                               std::size_t max_members = 100'000,
                                               Exec const& exec        = {}) {
    PreservationReport report;
    report.base = satisfies_all(alg, eqs, exec);
    if (!report.base.all_pass()) {
      throw InputError("precondition failed: " + alg.name()
                       + " does not satisfy " + eqs.name);
    }
    auto ext          = adjoin_generate(alg, gens, max_members, "r", exec);
    report.members    = ext.members.size();
    report.extension  = satisfies_all(ext.view, eqs, exec);
    return report;
  }

  // σ(pair(f, g)): the sequence over A×B whose value at i is the product
  // element of (f(i), g(i)).
  inline EpSequence pair_sequence(RelabeledProduct const& prod,
                                  EpSequence const&       f,
                                  EpSequence const&       g) {
    if (prod.factors.size() != 2 || !(f.base() == prod.factors[0])
        || !(g.base() == prod.factors[1])) {
      throw InputError("pair_sequence needs a binary product over the bases of both sequences");
    }
    auto [pre, per] = detail::window_shape({f, g});
    std::vector<Element> values(pre + per);
    for (std::size_t i = 0; i < values.size(); ++i) {
      values[i] = prod.relabel({f.at(i), g.at(i)});
    }
    return EpSequence(prod.product,
                      {values.begin(), values.begin() + static_cast<std::ptrdiff_t>(pre)},
                      {values.begin() + static_cast<std::ptrdiff_t>(pre), values.end()});
  }

  struct CompatibilityCheck {
    std::size_t joint_members   = 0;  // |adjoin(A×B, {σ(f,g)})|
    std::size_t product_members = 0;  // |adjoin(A,{f})| · |adjoin(B,{g})|
    bool        isomorphic      = false;
    // Splitting each member into its two coordinate sequences is an
    // injective homomorphism into the product of the separate extensions.
    bool embeds = false;
  };

  // Compares the extension of A×B generated by the paired sequence with the
  // product of the separately generated extensions.
  inline CompatibilityCheck product_compatibility(FiniteAlgebra const& a,
                                                  FiniteAlgebra const& b,
                                                  EpSequence const&    f,
                                                  EpSequence const&    g,
                                                  std::size_t max_members = 100'000,
                                                  Exec const& exec        = {}) {
    auto prod  = direct_product({a, b});
    auto joint = adjoin_generate(prod.product, {pair_sequence(prod, f, g)},
                                 max_members, "r", exec);
    auto ea    = adjoin_generate(a, {f}, max_members, "r", exec);
    auto eb    = adjoin_generate(b, {g}, max_members, "r", exec);
    auto split = direct_product({ea.view, eb.view});
    CompatibilityCheck out;
    out.joint_members   = joint.members.size();
    out.product_members = split.product.size();
    out.isomorphic      = check_isomorphism(joint.view, split.product).has_value();

    auto coordinate = [&](EpSequence const& s, std::size_t k) {
      std::vector<Element> pre, per;
      for (Element e : s.preperiod()) {
        pre.push_back(prod.tuples[e][k]);
      }
      for (Element e : s.period()) {
        per.push_back(prod.tuples[e][k]);
      }
      return EpSequence(prod.factors[k], std::move(pre), std::move(per));
    };
    Map  natural(joint.members.size());
    bool total = true;
    for (std::size_t i = 0; i < joint.members.size() && total; ++i) {
      auto x = ea.find(coordinate(joint.members[i], 0));
      auto y = eb.find(coordinate(joint.members[i], 1));
      total  = x && y;
      if (total) {
        natural[i] = split.relabel({*x, *y});
      }
    }
    if (total) {
      Morphism m(joint.view, split.product, std::move(natural));
      out.embeds = m.is_injective() && m.is_homomorphism();
    }
    return out;
  }

}  // namespace ualg
