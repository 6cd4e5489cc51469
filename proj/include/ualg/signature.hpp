#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace ualg {

  // [A-Za-z][A-Za-z0-9_]*
  inline bool is_identifier(std::string_view s) noexcept {
    auto alpha = [](char c) {
      return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (s.empty() || !alpha(s.front())) {
      return false;
    }
    return std::all_of(s.begin() + 1, s.end(), [&](char c) {
      return alpha(c) || digit(c) || c == '_';
    });
  }

  struct OpSymbol {
    std::string name;
    std::size_t arity = 0;

    bool operator==(OpSymbol const&) const = default;
    auto operator<=>(OpSymbol const&) const = default;

    // "and/2"
    std::string to_string() const {
      return name + "/" + std::to_string(arity);
    }
  };

  // An ordered list of operation symbols with unique names. Order is kept
  // for display and for file layout; cross-algebra comparisons match
  // symbols by (name, arity).
  class Signature {
   public:
    Signature() = default;

    explicit Signature(std::vector<OpSymbol> symbols)
        : symbols_(std::move(symbols)) {
      for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (!is_identifier(symbols_[i].name)) {
          throw InputError("invalid symbol name '" + symbols_[i].name + "'");
        }
        for (std::size_t j = 0; j < i; ++j) {
          if (symbols_[j].name == symbols_[i].name) {
            throw InputError("duplicate symbol '" + symbols_[i].name + "'");
          }
        }
      }
    }

    std::size_t size() const noexcept {
      return symbols_.size();
    }
    bool empty() const noexcept {
      return symbols_.empty();
    }
    OpSymbol const& operator[](std::size_t i) const {
      return symbols_[i];
    }
    auto begin() const noexcept {
      return symbols_.begin();
    }
    auto end() const noexcept {
      return symbols_.end();
    }
    std::vector<OpSymbol> const& symbols() const noexcept {
      return symbols_;
    }

    std::optional<std::size_t> find(std::string_view name) const noexcept {
      for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (symbols_[i].name == name) {
          return i;
        }
      }
      return std::nullopt;
    }

    std::optional<std::size_t> find(OpSymbol const& sym) const noexcept {
      auto i = find(sym.name);
      if (i && symbols_[*i].arity == sym.arity) {
        return i;
      }
      return std::nullopt;
    }

    // True if both signatures hold the same (name, arity) pairs, in any order.
    bool same_symbols(Signature const& other) const {
      auto a = symbols_;
      auto b = other.symbols_;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      return a == b;
    }

    // Symbols of `this` that `other` lacks (by name and arity).
    std::vector<OpSymbol> missing_from(Signature const& other) const {
      std::vector<OpSymbol> out;
      for (auto const& s : symbols_) {
        if (!other.find(s)) {
          out.push_back(s);
        }
      }
      return out;
    }

    std::string to_string() const {
      std::string out;
      for (auto const& s : symbols_) {
        if (!out.empty()) {
          out += ' ';
        }
        out += s.to_string();
      }
      return out;
    }

    bool operator==(Signature const&) const = default;

   private:
    std::vector<OpSymbol> symbols_;
  };

  inline std::string describe(std::vector<OpSymbol> const& symbols) {
    std::string out;
    for (auto const& s : symbols) {
      if (!out.empty()) {
        out += ", ";
      }
      out += s.to_string();
    }
    return out;
  }

  // Maps every symbol of `from` to the index of the same (name, arity) in
  // `to`. Throws SignatureError unless the two hold identical symbol sets.
  inline std::vector<std::size_t> align(Signature const& from,
                                        Signature const& to) {
    auto missing = from.missing_from(to);
    auto extra   = to.missing_from(from);
    if (!missing.empty() || !extra.empty()) {
      std::string msg = "signature mismatch";
      if (!missing.empty()) {
        msg += "; missing in target: " + describe(missing);
      }
      if (!extra.empty()) {
        msg += "; missing in source: " + describe(extra);
      }
      throw SignatureError(msg);
    }
    std::vector<std::size_t> out;
    out.reserve(from.size());
    for (auto const& s : from) {
      out.push_back(*to.find(s));
    }
    return out;
  }

}  // namespace ualg
