#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "algebra.hpp"
#include "error.hpp"
#include "term.hpp"

namespace ualg {

  // GF(q) for prime powers q <= 9. Elements are 0..q-1, read as base-p
  // digit strings of polynomial coefficients (least significant first).
  class FiniteField {
   public:
    explicit FiniteField(std::size_t q) : q_(q) {
      switch (q) {
        case 2: case 3: case 5: case 7:
          p_ = q, n_ = 1, modulus_ = {0, 1};
          break;
        case 4:
          p_ = 2, n_ = 2, modulus_ = {1, 1, 1};  // x^2 + x + 1
          break;
        case 8:
          p_ = 2, n_ = 3, modulus_ = {1, 1, 0, 1};  // x^3 + x + 1
          break;
        case 9:
          p_ = 3, n_ = 2, modulus_ = {1, 0, 1};  // x^2 + 1
          break;
        default:
          throw InputError("no field of order " + std::to_string(q)
                           + " (supported: 2, 3, 4, 5, 7, 8, 9)");
      }
      add_.assign(q * q, 0);
      mul_.assign(q * q, 0);
      for (std::size_t a = 0; a < q; ++a) {
        for (std::size_t b = 0; b < q; ++b) {
          add_[a * q + b] = encode(add_digits(decode(a), decode(b)));
          mul_[a * q + b] = encode(mul_digits(decode(a), decode(b)));
        }
      }
    }

    std::size_t order() const noexcept {
      return q_;
    }
    std::size_t characteristic() const noexcept {
      return p_;
    }
    std::size_t add(std::size_t a, std::size_t b) const {
      return add_[a * q_ + b];
    }
    std::size_t mul(std::size_t a, std::size_t b) const {
      return mul_[a * q_ + b];
    }
    std::size_t neg(std::size_t a) const {
      for (std::size_t b = 0; b < q_; ++b) {
        if (add(a, b) == 0) {
          return b;
        }
      }
      return 0;
    }

   private:
    using Digits = std::vector<std::size_t>;

    Digits decode(std::size_t a) const {
      Digits d(n_, 0);
      for (std::size_t i = 0; i < n_; ++i, a /= p_) {
        d[i] = a % p_;
      }
      return d;
    }

    std::size_t encode(Digits const& d) const {
      std::size_t a = 0;
      for (std::size_t i = n_; i > 0; --i) {
        a = a * p_ + d[i - 1];
      }
      return a;
    }

    Digits add_digits(Digits const& a, Digits const& b) const {
      Digits c(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        c[i] = (a[i] + b[i]) % p_;
      }
      return c;
    }

    Digits mul_digits(Digits const& a, Digits const& b) const {
      Digits c(2 * n_, 0);
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
          c[i + j] = (c[i + j] + a[i] * b[j]) % p_;
        }
      }
      // Reduce by the monic modulus, highest degree first.
      for (std::size_t d = 2 * n_ - 1; d >= n_; --d) {
        std::size_t coef = c[d];
        if (coef != 0) {
          for (std::size_t k = 0; k <= n_; ++k) {
            std::size_t pos = d - n_ + k;
            c[pos] = (c[pos] + (p_ - coef) * modulus_[k]) % p_;
          }
        }
      }
      c.resize(n_);
      return c;
    }

    std::size_t              q_;
    std::size_t              p_ = 0;
    std::size_t              n_ = 0;
    Digits                   modulus_;
    std::vector<std::size_t> add_;
    std::vector<std::size_t> mul_;
  };

  namespace detail {
    struct PresetBuilder {
      EquationSet set;

      // Adds lhs = rhs over `vars`, parsed from prefix syntax.
      void eq(std::string const&              label,
              std::vector<std::string> const& vars,
              std::string const&              lhs,
              std::string const&              rhs) {
        Equation e(parse_term(lhs, vars), parse_term(rhs, vars), vars, label);
        set.equations.push_back(std::move(e));
      }

      // a ≈ b ≈ c becomes a ≈ b and b ≈ c.
      void chain(std::string const&              label,
                 std::vector<std::string> const& vars,
                 std::string const&              a,
                 std::string const&              b,
                 std::string const&              c) {
        eq(label, vars, a, b);
        eq(label, vars, b, c);
      }
    };

    inline void group_axioms(PresetBuilder& p) {
      p.chain("identity", {"x"}, "mul(x, one())", "mul(one(), x)", "x");
      p.chain("inverse",
              {"x"},
              "mul(x, inv(x))",
              "mul(inv(x), x)",
              "one()");
      p.eq("associativity",
           {"x", "y", "z"},
           "mul(x, mul(y, z))",
           "mul(mul(x, y), z)");
    }

    inline void lattice_axioms(PresetBuilder& p) {
      p.eq("and-commutative", {"x", "y"}, "and(x, y)", "and(y, x)");
      p.eq("or-commutative", {"x", "y"}, "or(x, y)", "or(y, x)");
      p.eq("and-associative",
           {"x", "y", "z"},
           "and(x, and(y, z))",
           "and(and(x, y), z)");
      p.eq("or-associative",
           {"x", "y", "z"},
           "or(x, or(y, z))",
           "or(or(x, y), z)");
      p.eq("and-absorption", {"x", "y"}, "and(x, or(x, y))", "x");
      p.eq("or-absorption", {"x", "y"}, "or(x, and(x, y))", "x");
    }

    inline std::optional<std::size_t> vector_space_order(std::string_view name) {
      constexpr std::string_view head = "vector-space(";
      if (name.size() <= head.size() + 1 || name.substr(0, head.size()) != head
          || name.back() != ')') {
        return std::nullopt;
      }
      auto digits = name.substr(head.size(), name.size() - head.size() - 1);
      if (digits.size() != 1 || digits[0] < '0' || digits[0] > '9') {
        return std::nullopt;
      }
      return static_cast<std::size_t>(digits[0] - '0');
    }
  }  // namespace detail

  // Scalar symbol for field element r.
  inline std::string scalar_symbol(std::size_t r) {
    return "s" + std::to_string(r);
  }

  // Vector spaces over GF(q): zero/0, inv/1, s<r>/1 for each scalar r, add/2.
  inline EquationSet vector_space_preset(std::size_t q) {
    FiniteField           f(q);
    detail::PresetBuilder p{{"vector-space(" + std::to_string(q) + ")", {}}};
    std::vector<std::string> x1{"x1"}, x12{"x1", "x2"}, x123{"x1", "x2", "x3"};
    auto s = [](std::size_t r, std::string const& arg) {
      return scalar_symbol(r) + "(" + arg + ")";
    };
    p.eq("add-associative",
         x123,
         "add(x1, add(x2, x3))",
         "add(add(x1, x2), x3)");
    p.eq("add-commutative", x12, "add(x1, x2)", "add(x2, x1)");
    p.eq("add-identity", x1, "add(x1, zero())", "x1");
    p.eq("add-inverse", x1, "add(x1, inv(x1))", "zero()");
    for (std::size_t r = 0; r < q; ++r) {
      p.eq("scalar-distributes",
           x12,
           s(r, "add(x1, x2)"),
           "add(" + s(r, "x1") + ", " + s(r, "x2") + ")");
    }
    for (std::size_t r = 0; r < q; ++r) {
      for (std::size_t t = 0; t < q; ++t) {
        p.eq("scalar-product", x1, s(r, s(t, "x1")), s(f.mul(r, t), "x1"));
      }
    }
    p.eq("scalar-identity", x1, s(1, "x1"), "x1");
    for (std::size_t r = 0; r < q; ++r) {
      for (std::size_t t = 0; t < q; ++t) {
        p.eq("scalar-sum",
             x1,
             "add(" + s(r, "x1") + ", " + s(t, "x1") + ")",
             s(f.add(r, t), "x1"));
      }
    }
    return std::move(p.set);
  }

  inline std::vector<std::string> preset_names() {
    return {"group",
            "abelian-group",
            "ring",
            "lattice",
            "boolean-algebra",
            "semigroup",
            "vector-space(2)",
            "vector-space(3)",
            "vector-space(4)",
            "vector-space(5)",
            "vector-space(7)",
            "vector-space(8)",
            "vector-space(9)"};
  }

  // The named equation set. Signatures:
  //   group, abelian-group: one/0 inv/1 mul/2
  //   semigroup:            mul/2
  //   ring:                 zero/0 one/0 neg/1 add/2 mul/2
  //   lattice:              and/2 or/2
  //   boolean-algebra:      zero/0 one/0 comp/1 and/2 or/2
  //   vector-space(q):      zero/0 inv/1 s0/1 ... s<q-1>/1 add/2
  inline EquationSet preset(std::string_view name) {
    detail::PresetBuilder p{{std::string(name), {}}};
    if (name == "group") {
      detail::group_axioms(p);
    } else if (name == "abelian-group") {
      detail::group_axioms(p);
      p.eq("commutativity", {"x", "y"}, "mul(x, y)", "mul(y, x)");
    } else if (name == "semigroup") {
      p.eq("associativity",
           {"x", "y", "z"},
           "mul(x, mul(y, z))",
           "mul(mul(x, y), z)");
    } else if (name == "ring") {
      p.eq("add-associative",
           {"x", "y", "z"},
           "add(x, add(y, z))",
           "add(add(x, y), z)");
      p.eq("add-commutative", {"x", "y"}, "add(x, y)", "add(y, x)");
      p.eq("add-identity", {"x"}, "add(x, zero())", "x");
      p.eq("add-inverse", {"x"}, "add(x, neg(x))", "zero()");
      p.eq("mul-associative",
           {"x", "y", "z"},
           "mul(x, mul(y, z))",
           "mul(mul(x, y), z)");
      p.chain("mul-identity", {"x"}, "mul(x, one())", "mul(one(), x)", "x");
      p.eq("left-distributive",
           {"x", "y", "z"},
           "mul(x, add(y, z))",
           "add(mul(x, y), mul(x, z))");
      p.eq("right-distributive",
           {"x", "y", "z"},
           "mul(add(x, y), z)",
           "add(mul(x, z), mul(y, z))");
    } else if (name == "lattice") {
      detail::lattice_axioms(p);
    } else if (name == "boolean-algebra") {
      detail::lattice_axioms(p);
      p.eq("distributive",
           {"x", "y", "z"},
           "and(x, or(y, z))",
           "or(and(x, y), and(x, z))");
      p.eq("or-identity", {"x"}, "or(x, zero())", "x");
      p.eq("and-identity", {"x"}, "and(x, one())", "x");
      p.eq("and-complement", {"x"}, "and(x, comp(x))", "zero()");
      p.eq("or-complement", {"x"}, "or(x, comp(x))", "one()");
      p.eq("complement-of-zero", {}, "comp(zero())", "one()");
      p.eq("double-complement", {"x"}, "comp(comp(x))", "x");
    } else if (auto q = detail::vector_space_order(name)) {
      return vector_space_preset(*q);
    } else {
      throw InputError("unknown preset '" + std::string(name) + "'");
    }
    return std::move(p.set);
  }

  // Distinct labels in order of first appearance; a chained law contributes
  // one label and two equations.
  inline std::vector<std::string> labels(EquationSet const& eqs) {
    std::vector<std::string> out;
    for (auto const& e : eqs.equations) {
      if (out.empty() || out.back() != e.label) {
        out.push_back(e.label);
      }
    }
    return out;
  }

  // GF(q)^dim as an algebra in the vector-space(q) signature. Vectors are
  // named v<i>, with i the base-q number whose first coordinate is most
  // significant.
  inline FiniteAlgebra vector_space(std::size_t q, std::size_t dim,
                                    std::string name = {}) {
    FiniteField f(q);
    auto        total = detail::checked_power(q, dim, 1u << 16);
    if (!total || dim == 0) {
      throw InputError("unsupported vector space dimension");
    }
    std::size_t n = *total;
    auto coords   = [&](std::size_t v) {
      std::vector<std::size_t> c(dim);
      for (std::size_t i = dim; i > 0; --i, v /= q) {
        c[i - 1] = v % q;
      }
      return c;
    };
    auto index = [&](std::vector<std::size_t> const& c) {
      std::size_t v = 0;
      for (auto x : c) {
        v = v * q + x;
      }
      return static_cast<Element>(v);
    };
    std::vector<std::string> carrier;
    for (std::size_t v = 0; v < n; ++v) {
      carrier.push_back("v" + std::to_string(v));
    }
    std::vector<OpSymbol>             symbols{{"zero", 0}, {"inv", 1}};
    std::vector<FiniteAlgebra::Table> tables{{0}, {}};
    for (std::size_t v = 0; v < n; ++v) {
      auto c = coords(v);
      for (auto& x : c) {
        x = f.neg(x);
      }
      tables[1].push_back(index(c));
    }
    for (std::size_t r = 0; r < q; ++r) {
      symbols.push_back({scalar_symbol(r), 1});
      FiniteAlgebra::Table t;
      for (std::size_t v = 0; v < n; ++v) {
        auto c = coords(v);
        for (auto& x : c) {
          x = f.mul(r, x);
        }
        t.push_back(index(c));
      }
      tables.push_back(std::move(t));
    }
    symbols.push_back({"add", 2});
    FiniteAlgebra::Table add;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        auto ca = coords(a), cb = coords(b);
        for (std::size_t i = 0; i < dim; ++i) {
          ca[i] = f.add(ca[i], cb[i]);
        }
        add.push_back(index(ca));
      }
    }
    tables.push_back(std::move(add));
    if (name.empty()) {
      name = "V" + std::to_string(q) + "_" + std::to_string(dim);
    }
    return FiniteAlgebra(std::move(name),
                         std::move(carrier),
                         Signature(std::move(symbols)),
                         std::move(tables));
  }

}  // namespace ualg
