#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "error.hpp"
#include "morphism.hpp"

namespace ualg {

  // How fresh urelements of a product are named: `<prefix><index>` in tuple
  // order, or an explicit list of exactly the product cardinality.
  struct Naming {
    std::string              prefix = "p";
    std::vector<std::string> elements;
  };

  // A direct product materialised over fresh urelements. `tuples[p]` is the
  // coordinate tuple σ⁻¹(p); tuples are in lexicographic order (first factor
  // most significant), so p is the mixed-radix value of its tuple.
  struct RelabeledProduct {
    std::vector<FiniteAlgebra>        factors;
    FiniteAlgebra                     product;
    std::vector<std::vector<Element>> tuples;
    std::vector<Morphism>             projections;

    // σ: coordinate tuple -> product element.
    Element relabel(std::span<Element const> tuple) const {
      if (tuple.size() != factors.size()) {
        throw InputError("tuple length does not match the number of factors");
      }
      std::size_t p = 0;
      for (std::size_t i = 0; i < factors.size(); ++i) {
        if (tuple[i] >= factors[i].size()) {
          throw InputError("tuple coordinate outside factor carrier");
        }
        p = p * factors[i].size() + tuple[i];
      }
      return static_cast<Element>(p);
    }

    Element relabel(std::initializer_list<Element> tuple) const {
      return relabel(std::span<Element const>(tuple.begin(), tuple.size()));
    }

    std::vector<Element> const& unlabel(Element p) const {
      return tuples.at(p);
    }
  };

  // o(v) = σ(componentwise o(σ⁻¹(v))). Factors must share their symbol set;
  // the product uses the first factor's symbol order. An empty factor list
  // gives the one-element algebra and needs `signature`.
  inline RelabeledProduct direct_product(std::vector<FiniteAlgebra> factors,
                                         Naming const&              naming = {},
                                         std::string                name   = {},
                                         std::optional<Signature> signature = {}) {
    if (factors.empty() && !signature) {
      throw InputError("the empty product needs an explicit signature");
    }
    Signature sig = factors.empty() ? *signature : factors.front().signature();
    std::vector<std::vector<std::size_t>> to_factor;
    for (auto const& f : factors) {
      to_factor.push_back(align(sig, f.signature()));
    }

    std::uint64_t total = 1;
    for (auto const& f : factors) {
      total *= f.size();
      if (total > (1u << 20)) {
        throw BudgetExceeded("product carrier too large");
      }
    }
    std::size_t const n = static_cast<std::size_t>(total);

    std::vector<std::string> carrier;
    if (!naming.elements.empty()) {
      if (naming.elements.size() != n) {
        throw InputError("expected " + std::to_string(n)
                         + " urelements for the product, found "
                         + std::to_string(naming.elements.size()));
      }
      carrier = naming.elements;
    } else {
      if (!is_identifier(naming.prefix)) {
        throw InputError("invalid urelement prefix '" + naming.prefix + "'");
      }
      for (std::size_t p = 0; p < n; ++p) {
        carrier.push_back(naming.prefix + std::to_string(p));
      }
    }

    std::vector<std::vector<Element>> tuples(n,
                                              std::vector<Element>(factors.size()));
    for (std::size_t p = 0; p < n; ++p) {
      std::size_t rest = p;
      for (std::size_t i = factors.size(); i > 0; --i) {
        tuples[p][i - 1] = static_cast<Element>(rest % factors[i - 1].size());
        rest /= factors[i - 1].size();
      }
    }
    auto encode = [&](std::vector<Element> const& t) {
      std::size_t p = 0;
      for (std::size_t i = 0; i < factors.size(); ++i) {
        p = p * factors[i].size() + t[i];
      }
      return static_cast<Element>(p);
    };

    std::vector<FiniteAlgebra::Table> tables;
    ElementSet                        all(n);
    for (std::size_t p = 0; p < n; ++p) {
      all[p] = static_cast<Element>(p);
    }
    for (std::size_t op = 0; op < sig.size(); ++op) {
      FiniteAlgebra::Table table;
      std::vector<Element> coord(factors.size());
      std::vector<Element> component;
      detail::for_each_tuple(
          sig[op].arity, all, [&](std::span<Element const> args) {
            for (std::size_t i = 0; i < factors.size(); ++i) {
              component.clear();
              for (Element a : args) {
                component.push_back(tuples[a][i]);
              }
              coord[i] = factors[i].apply(to_factor[i][op],
                                          std::span<Element const>(component));
            }
            table.push_back(encode(coord));
            return true;
          });
      tables.push_back(std::move(table));
    }

    if (name.empty()) {
      for (auto const& f : factors) {
        name += (name.empty() ? "" : "x") + f.name();
      }
      if (name.empty()) {
        name = "One";
      }
    }
    FiniteAlgebra prod(std::move(name), std::move(carrier), sig, std::move(tables));

    std::vector<Morphism> projections;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      Map m(n);
      for (std::size_t p = 0; p < n; ++p) {
        m[p] = tuples[p][i];
      }
      projections.emplace_back(prod, factors[i], std::move(m));
    }
    return RelabeledProduct{std::move(factors),
                            std::move(prod),
                            std::move(tuples),
                            std::move(projections)};
  }

  // One row of the operation-preservation transcript: φ(o(args)) against
  // o(φ(args)) for apex elements `args`.
  struct PreservationRow {
    std::size_t          op;
    std::vector<Element> args;
    Element              lhs;
    Element              rhs;

    bool ok() const noexcept {
      return lhs == rhs;
    }
  };

  struct Mediation {
    Morphism                     phi;
    std::vector<PreservationRow> transcript;
    bool                         homomorphism = false;
    // ρ_i ∘ φ = leg_i for every factor i.
    bool commutes = false;
  };

  // The unique φ with σ⁻¹(φ(a)) = (leg_1(a), ..., leg_k(a)), re-verified as a
  // homomorphism (full transcript over every symbol and tuple, tuples
  // enumerated with the last argument most significant) and checked
  // against every projection.
  inline Mediation mediating_morphism(FiniteAlgebra const&         apex,
                                      std::vector<Morphism> const& legs,
                                      RelabeledProduct const&      prod) {
    if (legs.size() != prod.factors.size()) {
      throw InputError("expected one leg per factor");
    }
    for (std::size_t i = 0; i < legs.size(); ++i) {
      if (!(legs[i].source() == apex) || !(legs[i].target() == prod.factors[i])) {
        throw InputError("leg " + std::to_string(i)
                         + " does not run from the apex to its factor");
      }
      auto check = legs[i].check();
      if (!check.ok) {
        throw InputError("leg " + std::to_string(i) + " ("
                         + prod.factors[i].name()
                         + ") is not a homomorphism");
      }
    }
    Map                  phi(apex.size());
    std::vector<Element> tuple(legs.size());
    for (Element a = 0; a < apex.size(); ++a) {
      for (std::size_t i = 0; i < legs.size(); ++i) {
        tuple[i] = legs[i](a);
      }
      phi[a] = prod.relabel(std::span<Element const>(tuple));
    }

    auto to_prod = align(apex.signature(), prod.product.signature());
    std::vector<PreservationRow> rows;
    bool                         hom = true;
    ElementSet                   all = apex.all_elements();
    for (std::size_t op = 0; op < apex.signature().size(); ++op) {
      std::size_t          arity = apex.arity(op);
      std::vector<Element> reversed(arity), mapped(arity);
      detail::for_each_tuple(arity, all, [&](std::span<Element const> t) {
        // Reverse so the first argument varies fastest, as in a table whose
        // rows run over a_1 within each a_2.
        std::copy(t.rbegin(), t.rend(), reversed.begin());
        for (std::size_t j = 0; j < arity; ++j) {
          mapped[j] = phi[reversed[j]];
        }
        Element lhs = phi[apex.apply(op, std::span<Element const>(reversed))];
        Element rhs = prod.product.apply(to_prod[op],
                                         std::span<Element const>(mapped));
        hom         = hom && lhs == rhs;
        rows.push_back({op, reversed, lhs, rhs});
        return true;
      });
    }

    bool commutes = true;
    for (std::size_t i = 0; i < legs.size(); ++i) {
      for (Element a = 0; a < apex.size(); ++a) {
        commutes = commutes && prod.projections[i](phi[a]) == legs[i](a);
      }
    }
    return Mediation{Morphism(apex, prod.product, std::move(phi)),
                     std::move(rows),
                     hom,
                     commutes};
  }

  enum class Uniqueness { confirmed, failed, not_checked };

  inline char const* to_string(Uniqueness u) {
    switch (u) {
      case Uniqueness::confirmed:
        return "confirmed";
      case Uniqueness::failed:
        return "failed";
      default:
        return "not checked";
    }
  }

  struct ApexVerdict {
    std::string   apex;
    std::uint64_t cones          = 0;
    bool          all_mediate    = true;  // φ exists, is a homomorphism, commutes
    Uniqueness    uniqueness     = Uniqueness::not_checked;
  };

  struct UniversalPropertyReport {
    std::vector<ApexVerdict> apices;

    bool passed() const noexcept {
      for (auto const& a : apices) {
        if (!a.all_mediate || a.uniqueness == Uniqueness::failed) {
          return false;
        }
      }
      return true;
    }
  };

  // Number of maps apex -> product with ρ_i ∘ f = leg_i for all i. The
  // condition constrains each apex element separately, so the count is the
  // product over apex elements of the number of admissible images.
  inline std::uint64_t count_commuting_maps(FiniteAlgebra const&         apex,
                                            std::vector<Morphism> const& legs,
                                            RelabeledProduct const&      prod) {
    std::uint64_t count = 1;
    for (Element a = 0; a < apex.size(); ++a) {
      std::uint64_t options = 0;
      for (Element p = 0; p < prod.product.size(); ++p) {
        bool ok = true;
        for (std::size_t i = 0; i < legs.size() && ok; ++i) {
          ok = prod.projections[i](p) == legs[i](a);
        }
        options += ok;
      }
      count *= options;
    }
    return count;
  }

  // For each apex, every cone (tuple of homomorphisms into the factors) must
  // have a mediating homomorphism that commutes, and exactly one map may
  // commute. Apices whose cone count exceeds `max_cones` are reported with
  // uniqueness "not checked" and only their first `max_cones` cones tested.
  inline UniversalPropertyReport
  verify_universal_property(RelabeledProduct const&           prod,
                            std::vector<FiniteAlgebra> const& apices,
                            std::uint64_t                     max_cones = 100'000,
                            SearchOptions                     opts      = {}) {
    UniversalPropertyReport report;
    opts.mode = SearchMode::list;
    for (auto const& apex : apices) {
      ApexVerdict verdict{apex.name()};
      std::vector<std::vector<Map>> homs;
      std::uint64_t                 cones = 1;
      for (auto const& f : prod.factors) {
        homs.push_back(enumerate_homomorphisms(apex, f, opts).maps);
        cones *= homs.back().size();
      }
      verdict.cones    = cones;
      bool truncated   = cones > max_cones;
      bool unique      = true;
      std::uint64_t limit = std::min(cones, max_cones);
      std::vector<std::size_t> pick(homs.size(), 0);
      for (std::uint64_t c = 0; c < limit; ++c) {
        std::vector<Morphism> legs;
        for (std::size_t i = 0; i < homs.size(); ++i) {
          legs.emplace_back(apex, prod.factors[i], homs[i][pick[i]]);
        }
        auto med = mediating_morphism(apex, legs, prod);
        verdict.all_mediate = verdict.all_mediate && med.homomorphism && med.commutes;
        unique = unique && count_commuting_maps(apex, legs, prod) == 1;
        for (std::size_t i = homs.size(); i > 0; --i) {
          if (++pick[i - 1] < homs[i - 1].size()) {
            break;
          }
          pick[i - 1] = 0;
        }
      }
      verdict.uniqueness = !unique   ? Uniqueness::failed
                           : truncated ? Uniqueness::not_checked
                                       : Uniqueness::confirmed;
      report.apices.push_back(std::move(verdict));
    }
    return report;
  }

}  // namespace ualg
