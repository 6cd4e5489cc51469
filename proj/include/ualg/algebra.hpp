#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "signature.hpp"

namespace ualg {

  // Index of an urelement in its algebra's carrier.
  using Element = std::uint32_t;

  // Sorted, duplicate-free list of carrier indices.
  using ElementSet = std::vector<Element>;

  // Upper bound on a single operation table, to refuse descriptions that
  // could never be materialised.
  inline constexpr std::uint64_t max_table_cells = std::uint64_t{1} << 26;

  namespace detail {
    // k^n, or nullopt if it exceeds `limit`.
    inline std::optional<std::uint64_t> checked_power(std::uint64_t k,
                                                      std::uint64_t n,
                                                      std::uint64_t limit) {
      std::uint64_t r = 1;
      for (std::uint64_t i = 0; i < n; ++i) {
        if (k != 0 && r > limit / k) {
          return std::nullopt;
        }
        r *= k;
      }
      return r <= limit ? std::optional<std::uint64_t>(r) : std::nullopt;
    }

    inline ElementSet normalize(ElementSet s) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      return s;
    }
  }  // namespace detail

  // A finite algebra: an ordered carrier of urelement names and one total
  // operation table per signature symbol. Tables are row-major with the
  // leftmost argument most significant. Instances are immutable once
  // constructed and cheap to copy (the data is shared).
  class FiniteAlgebra {
   public:
    using Table = std::vector<Element>;

    // Validates everything; throws InputError listing every violation.
    FiniteAlgebra(std::string              name,
                  std::vector<std::string> carrier,
                  Signature                signature,
                  std::vector<Table>       tables);

    std::string const& name() const noexcept {
      return data_->name;
    }
    std::vector<std::string> const& carrier() const noexcept {
      return data_->carrier;
    }
    std::size_t size() const noexcept {
      return data_->carrier.size();
    }
    Signature const& signature() const noexcept {
      return data_->signature;
    }
    Table const& table(std::size_t op) const {
      return data_->tables.at(op);
    }
    std::vector<Table> const& tables() const noexcept {
      return data_->tables;
    }
    std::size_t arity(std::size_t op) const {
      return data_->signature[op].arity;
    }

    std::string const& element_name(Element e) const {
      return data_->carrier.at(e);
    }

    std::optional<Element> find_element(std::string const& name) const {
      auto it = data_->index.find(name);
      if (it == data_->index.end()) {
        return std::nullopt;
      }
      return it->second;
    }

    Element element(std::string const& name) const {
      auto e = find_element(name);
      if (!e) {
        throw InputError("unknown element '" + name + "' in algebra "
                         + data_->name);
      }
      return *e;
    }

    ElementSet elements(std::vector<std::string> const& names) const {
      ElementSet out;
      for (auto const& n : names) {
        out.push_back(element(n));
      }
      return detail::normalize(std::move(out));
    }

    ElementSet all_elements() const {
      ElementSet out(size());
      for (Element i = 0; i < out.size(); ++i) {
        out[i] = i;
      }
      return out;
    }

    // Row-major offset of an argument tuple.
    std::size_t offset(std::span<Element const> args) const noexcept {
      std::size_t idx = 0;
      for (Element a : args) {
        idx = idx * size() + a;
      }
      return idx;
    }

    Element apply(std::size_t op, std::span<Element const> args) const {
      return data_->tables[op][offset(args)];
    }

    Element apply(std::size_t op, std::initializer_list<Element> args) const {
      return apply(op, std::span<Element const>(args.begin(), args.size()));
    }

    // Index of the symbol `name`; throws if absent.
    std::size_t op(std::string const& name) const {
      auto i = data_->signature.find(name);
      if (!i) {
        throw SignatureError("algebra " + data_->name + " has no symbol '"
                             + name + "'");
      }
      return *i;
    }

    FiniteAlgebra renamed(std::string name) const {
      return FiniteAlgebra(
          std::move(name), carrier(), signature(), data_->tables);
    }

    bool operator==(FiniteAlgebra const& other) const {
      if (data_ == other.data_) {
        return true;
      }
      return data_->name == other.data_->name
             && data_->carrier == other.data_->carrier
             && data_->signature == other.data_->signature
             && data_->tables == other.data_->tables;
    }

   private:
    struct Data {
      std::string                              name;
      std::vector<std::string>                 carrier;
      std::unordered_map<std::string, Element> index;
      Signature                                signature;
      std::vector<Table>                       tables;
    };
    std::shared_ptr<Data const> data_;
  };

  ////////////////////////////////////////////////////////////////////////
  // Raw descriptions and validation
  ////////////////////////////////////////////////////////////////////////

  // An operation as written in a file: values are element names.
  struct RawOperation {
    std::string              name;
    std::size_t              arity = 0;
    std::vector<std::string> values;
    std::size_t              line = 0;
  };

  struct RawAlgebra {
    std::string               name;
    std::vector<std::string>  elements;
    std::vector<RawOperation> ops;
    std::size_t               line = 0;
    std::size_t               elements_line = 0;  // 0: use `line`
  };

  struct ValidationIssue {
    std::size_t line = 0;  // 0 when not tied to a file position
    std::string message;
  };

  struct ValidationResult {
    std::optional<FiniteAlgebra> algebra;
    std::vector<ValidationIssue> issues;

    bool ok() const noexcept {
      return algebra.has_value();
    }
  };

  // Checks a raw description against every algebra invariant and reports all
  // violations, not just the first.
  inline ValidationResult validate_algebra(RawAlgebra const& raw) {
    ValidationResult result;
    auto issue = [&](std::size_t line, std::string msg) {
      result.issues.push_back({line, std::move(msg)});
    };
    std::size_t const at_elements = raw.elements_line ? raw.elements_line : raw.line;

    if (!is_identifier(raw.name)) {
      issue(raw.line, "invalid algebra name '" + raw.name + "'");
    }
    if (raw.elements.empty()) {
      issue(at_elements, "empty carrier");
    }
    std::unordered_map<std::string, Element> index;
    for (auto const& e : raw.elements) {
      if (!is_identifier(e)) {
        issue(at_elements, "invalid element name '" + e + "'");
      }
      if (!index.emplace(e, static_cast<Element>(index.size())).second) {
        issue(at_elements, "duplicate element '" + e + "'");
      }
    }

    std::vector<OpSymbol>           symbols;
    std::vector<FiniteAlgebra::Table> tables;
    for (auto const& op : raw.ops) {
      std::string label = op.name + "/" + std::to_string(op.arity);
      if (!is_identifier(op.name)) {
        issue(op.line, "invalid symbol name '" + op.name + "'");
      }
      for (auto const& s : symbols) {
        if (s.name == op.name) {
          issue(op.line, "duplicate symbol '" + op.name + "'");
        }
      }
      symbols.push_back({op.name, op.arity});
      auto expected
          = detail::checked_power(raw.elements.size(), op.arity, max_table_cells);
      if (!expected) {
        issue(op.line, "table of " + label + " is too large");
        tables.emplace_back();
        continue;
      }
      if (op.values.size() != *expected) {
        issue(op.line,
              "table size mismatch: expected " + std::to_string(*expected)
                  + ", found " + std::to_string(op.values.size()) + " (op "
                  + label + ")");
      }
      FiniteAlgebra::Table table;
      table.reserve(op.values.size());
      for (auto const& v : op.values) {
        auto it = index.find(v);
        if (it == index.end()) {
          issue(op.line,
                "unknown element '" + v + "' in table of " + label);
          table.push_back(0);
        } else {
          table.push_back(it->second);
        }
      }
      tables.push_back(std::move(table));
    }

    if (result.issues.empty()) {
      result.algebra.emplace(
          raw.name, raw.elements, Signature(symbols), std::move(tables));
    }
    return result;
  }

  inline FiniteAlgebra::FiniteAlgebra(std::string              name,
                                      std::vector<std::string> carrier,
                                      Signature                signature,
                                      std::vector<Table>       tables) {
    std::vector<std::string> problems;
    if (carrier.empty()) {
      problems.push_back("empty carrier");
    }
    std::unordered_map<std::string, Element> index;
    for (auto const& e : carrier) {
      if (!is_identifier(e)) {
        problems.push_back("invalid element name '" + e + "'");
      }
      if (!index.emplace(e, static_cast<Element>(index.size())).second) {
        problems.push_back("duplicate element '" + e + "'");
      }
    }
    if (tables.size() != signature.size()) {
      problems.push_back("expected " + std::to_string(signature.size())
                         + " tables, found " + std::to_string(tables.size()));
    } else {
      for (std::size_t i = 0; i < tables.size(); ++i) {
        auto expected = detail::checked_power(
            carrier.size(), signature[i].arity, max_table_cells);
        if (!expected) {
          problems.push_back("table of " + signature[i].to_string()
                             + " is too large");
          continue;
        }
        if (tables[i].size() != *expected) {
          problems.push_back("table size mismatch: expected "
                             + std::to_string(*expected) + ", found "
                             + std::to_string(tables[i].size()) + " (op "
                             + signature[i].to_string() + ")");
        }
        for (Element v : tables[i]) {
          if (v >= carrier.size()) {
            problems.push_back("out-of-carrier output in table of "
                               + signature[i].to_string());
            break;
          }
        }
      }
    }
    if (!problems.empty()) {
      std::string msg = "invalid algebra " + name + ":";
      for (auto const& p : problems) {
        msg += "\n  " + p;
      }
      throw InputError(msg);
    }
    data_ = std::make_shared<Data const>(Data{std::move(name),
                                              std::move(carrier),
                                              std::move(index),
                                              std::move(signature),
                                              std::move(tables)});
  }

  ////////////////////////////////////////////////////////////////////////
  // Subuniverses
  ////////////////////////////////////////////////////////////////////////

  namespace detail {
    inline std::vector<char> mask_of(FiniteAlgebra const& alg,
                                     ElementSet const&    set) {
      std::vector<char> mask(alg.size(), 0);
      for (Element e : set) {
        if (e >= alg.size()) {
          throw InputError("element index " + std::to_string(e)
                           + " is not in the carrier of " + alg.name());
        }
        mask[e] = 1;
      }
      return mask;
    }

    // Calls fn(tuple) for every tuple in `pool`^arity, leftmost argument
    // most significant; stops early when fn returns false.
    template <typename Fn>
    bool for_each_tuple(std::size_t arity, ElementSet const& pool, Fn&& fn) {
      std::vector<Element> tuple(arity);
      if (arity == 0) {
        return fn(std::span<Element const>(tuple));
      }
      if (pool.empty()) {
        return true;
      }
      std::vector<std::size_t> pos(arity, 0);
      for (std::size_t i = 0; i < arity; ++i) {
        tuple[i] = pool[0];
      }
      while (true) {
        if (!fn(std::span<Element const>(tuple))) {
          return false;
        }
        std::size_t i = arity;
        while (i > 0) {
          --i;
          if (++pos[i] < pool.size()) {
            tuple[i] = pool[pos[i]];
            break;
          }
          pos[i]   = 0;
          tuple[i] = pool[0];
          if (i == 0) {
            return true;
          }
        }
      }
    }
  }  // namespace detail

  struct ClosureWitness {
    std::size_t          op;
    std::vector<Element> args;
    Element              output;
  };

  struct ClosureCheck {
    bool                          closed = true;
    std::optional<ClosureWitness> witness;

    explicit operator bool() const noexcept {
      return closed;
    }
  };

  // Is `subset` closed under every operation (nullary values included)?
  // Symbols are scanned in signature order, tuples lexicographically; the
  // first escaping output is the witness.
  inline ClosureCheck is_subuniverse(FiniteAlgebra const& alg,
                                     ElementSet const&    subset) {
    ElementSet set  = detail::normalize(subset);
    auto       mask = detail::mask_of(alg, set);
    ClosureCheck result;
    for (std::size_t op = 0; op < alg.signature().size() && result.closed;
         ++op) {
      detail::for_each_tuple(
          alg.arity(op), set, [&](std::span<Element const> args) {
            Element out = alg.apply(op, args);
            if (!mask[out]) {
              result.closed = false;
              result.witness
                  = ClosureWitness{op, {args.begin(), args.end()}, out};
              return false;
            }
            return true;
          });
    }
    return result;
  }

  // A verified subuniverse of `parent`.
  class Subuniverse {
   public:
    Subuniverse(FiniteAlgebra parent, ElementSet members)
        : parent_(std::move(parent)),
          members_(detail::normalize(std::move(members))) {
      auto check = is_subuniverse(parent_, members_);
      if (!check.closed) {
        auto const& w = *check.witness;
        throw InputError("not a subuniverse of " + parent_.name() + ": "
                         + parent_.signature()[w.op].name + " escapes to "
                         + parent_.element_name(w.output));
      }
    }

    FiniteAlgebra const& parent() const noexcept {
      return parent_;
    }
    ElementSet const& members() const noexcept {
      return members_;
    }
    bool empty() const noexcept {
      return members_.empty();
    }
    std::size_t size() const noexcept {
      return members_.size();
    }

    // The subalgebra on `members`, keeping parent element names and order.
    FiniteAlgebra as_algebra(std::string name = {}) const {
      if (members_.empty()) {
        throw InputError("empty subuniverse of " + parent_.name()
                         + " (empty, not an algebra)");
      }
      if (name.empty()) {
        name = parent_.name() + "_sub";
      }
      std::vector<Element> local(parent_.size(), 0);
      std::vector<std::string> carrier;
      for (std::size_t i = 0; i < members_.size(); ++i) {
        local[members_[i]] = static_cast<Element>(i);
        carrier.push_back(parent_.element_name(members_[i]));
      }
      std::vector<FiniteAlgebra::Table> tables;
      for (std::size_t op = 0; op < parent_.signature().size(); ++op) {
        FiniteAlgebra::Table table;
        detail::for_each_tuple(parent_.arity(op),
                               members_,
                               [&](std::span<Element const> args) {
                                 table.push_back(
                                     local[parent_.apply(op, args)]);
                                 return true;
                               });
        tables.push_back(std::move(table));
      }
      return FiniteAlgebra(std::move(name),
                           std::move(carrier),
                           parent_.signature(),
                           std::move(tables));
    }

   private:
    FiniteAlgebra parent_;
    ElementSet    members_;
  };

  // The reduct keeping only `keep` (in the algebra's own symbol order).
  inline FiniteAlgebra reduct(FiniteAlgebra const&            alg,
                              std::vector<std::string> const& keep,
                              std::string                     name = {}) {
    for (auto const& k : keep) {
      alg.op(k);
    }
    std::vector<OpSymbol>             symbols;
    std::vector<FiniteAlgebra::Table> tables;
    for (std::size_t op = 0; op < alg.signature().size(); ++op) {
      auto const& sym = alg.signature()[op];
      if (std::find(keep.begin(), keep.end(), sym.name) != keep.end()) {
        symbols.push_back(sym);
        tables.push_back(alg.table(op));
      }
    }
    return FiniteAlgebra(name.empty() ? alg.name() : std::move(name),
                         alg.carrier(),
                         Signature(std::move(symbols)),
                         std::move(tables));
  }

}  // namespace ualg
