#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace ualg;
using namespace testing_support;

namespace {

  using Word = TruncatedFreeSemigroup::Word;

  // Words as letter strings, independent of the library's numbering.
  std::vector<std::string> all_words(std::size_t gens, std::size_t max_len) {
    std::vector<std::string> out;
    std::vector<std::string> level{""};
    for (std::size_t len = 1; len <= max_len; ++len) {
      std::vector<std::string> next;
      for (auto const& w : level) {
        for (std::size_t g = 0; g < gens; ++g) {
          next.push_back(w + static_cast<char>('a' + g));
        }
      }
      out.insert(out.end(), next.begin(), next.end());
      level = std::move(next);
    }
    return out;
  }

  // Plain backtracking over every word of length <= m, trying every short
  // image and checking every guarded split whose parts are assigned.
  bool oracle_retraction(std::size_t gens, std::size_t bound, std::size_t k, std::size_t m) {
    auto                               words = all_words(gens, m);
    std::map<std::string, std::string> r;
    std::vector<std::string>           shorts;
    for (auto const& w : words) {
      if (w.size() <= k) {
        r[w] = w;
        shorts.push_back(w);
      }
    }
    std::vector<std::string> todo;
    for (auto const& w : words) {
      if (w.size() > k) {
        todo.push_back(w);
      }
    }
    auto ok_at = [&](std::string const& w) {
      for (std::size_t cut = 1; cut < w.size(); ++cut) {
        auto u = w.substr(0, cut), v = w.substr(cut);
        auto const& ru = r.at(u);
        auto const& rv = r.at(v);
        if (ru.size() + rv.size() <= bound && r.at(w) != ru + rv) {
          return false;
        }
      }
      return true;
    };
    std::function<bool(std::size_t)> go = [&](std::size_t i) {
      if (i == todo.size()) {
        return true;
      }
      for (auto const& s : shorts) {
        r[todo[i]] = s;
        if (ok_at(todo[i]) && go(i + 1)) {
          return true;
        }
      }
      r.erase(todo[i]);
      return false;
    };
    return go(0);
  }

  std::vector<std::string> letters_ab(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(std::string(1, static_cast<char>('a' + i)));
    }
    return out;
  }

}  // namespace

TEST_CASE("truncated free semigroup sizes and names") {
  TruncatedFreeSemigroup t({"a", "b"}, 3);
  CHECK(t.size() == 14);
  std::vector<std::string> names;
  for (Word w = 0; w < t.size(); ++w) {
    names.push_back(t.name(w));
  }
  CHECK(names == all_words(2, 3));
  CHECK(TruncatedFreeSemigroup({"g"}, 8).size() == 8);
  CHECK(TruncatedFreeSemigroup({"a", "b", "c"}, 4).size() == 3 + 9 + 27 + 81);
  CHECK(TruncatedFreeSemigroup({"x1", "x2"}, 2).name(4) == "x2.x1");
  CHECK(default_generators(1) == std::vector<std::string>{"g"});
  CHECK(default_generators(3) == std::vector<std::string>{"a", "b", "c"});

  CHECK_THROWS_AS(TruncatedFreeSemigroup({}, 3), InputError);
  CHECK_THROWS_AS(TruncatedFreeSemigroup({"a"}, 0), InputError);
  CHECK_THROWS_AS(TruncatedFreeSemigroup({"a", "b"}, 20), BudgetExceeded);
  CHECK_THROWS_AS(TruncatedFreeSemigroup({"a", "b"}, 12).table(), BudgetExceeded);
}

TEST_CASE("concatenation is defined exactly up to the bound") {
  for (std::size_t gens : {1u, 2u, 3u}) {
    for (std::size_t bound : {1u, 2u, 3u, 4u}) {
      TruncatedFreeSemigroup t(letters_ab(gens), bound);
      auto                   table = t.table();
      for (Word u = 0; u < t.size(); ++u) {
        for (Word v = 0; v < t.size(); ++v) {
          auto uv   = t.concat(u, v);
          auto want = t.name(u) + t.name(v);
          REQUIRE(table[u * t.size() + v] == uv);
          if (want.size() > bound) {
            REQUIRE_FALSE(uv);
          } else {
            REQUIRE(uv);
            REQUIRE(t.name(*uv) == want);
            REQUIRE(t.length(*uv) == want.size());
          }
        }
      }
    }
  }
}

TEST_CASE("associativity and cancellation where defined") {
  TruncatedFreeSemigroup t({"a", "b"}, 5);
  for (Word u = 0; u < t.size(); ++u) {
    for (Word v = 0; v < t.size(); ++v) {
      auto uv = t.concat(u, v);
      if (!uv) {
        continue;
      }
      for (Word w = 0; w < t.size(); ++w) {
        auto left = t.concat(*uv, w);
        auto vw   = t.concat(v, w);
        if (left) {
          REQUIRE(vw);
          REQUIRE(t.concat(u, *vw) == left);
        } else if (vw) {
          REQUIRE_FALSE(t.concat(u, *vw));
        }
        // u v = u w implies v = w
        auto uw = t.concat(u, w);
        if (uw && *uw == *uv) {
          REQUIRE(v == w);
        }
      }
    }
  }
  // words round-trip through letters
  for (Word w = 0; w < t.size(); ++w) {
    REQUIRE(t.word(t.letters(w)) == w);
  }
}

TEST_CASE("retraction search examples") {
  TruncatedFreeSemigroup t({"g"}, 8);
  auto                   r = search_bounded_retraction(t, 3);
  CHECK_FALSE(r.map);
  REQUIRE(r.contradiction_length);
  CHECK(*r.contradiction_length == 4);
  REQUIRE(r.transcript.size() >= 4);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r.transcript[i].kind == StepKind::fixed);
    CHECK(t.name(r.transcript[i].word) == std::string(i + 1, 'g'));
  }
  auto const& c = r.transcript[3];
  CHECK(c.kind == StepKind::contradiction);
  CHECK(t.name(c.word) == "gggg");
  CHECK(t.name(*c.left) == "g");
  CHECK(t.name(*c.right) == "ggg");
  CHECK(c.forced_length == 4);

  // k >= L: the identity is the retraction.
  auto id = search_bounded_retraction(TruncatedFreeSemigroup({"a", "b"}, 3), 3);
  REQUIRE(id.map);
  for (Word w = 0; w < id.map->size(); ++w) {
    CHECK((*id.map)[w] == w);
  }
  CHECK_THROWS_AS(search_bounded_retraction(t, 0), InputError);

  auto capped = search_bounded_retraction(TruncatedFreeSemigroup({"a", "b"}, 6), 2, 5);
  CHECK(capped.transcript.size() == 5);
  CHECK(capped.transcript_truncated);
}

TEST_CASE("retraction existence agrees with plain backtracking") {
  for (std::size_t gens : {1u, 2u}) {
    std::size_t max_bound = gens == 1 ? 8 : 5;
    for (std::size_t bound = 1; bound <= max_bound; ++bound) {
      for (std::size_t k = 1; k <= bound; ++k) {
        TruncatedFreeSemigroup t(letters_ab(gens), bound);
        auto                   r = search_bounded_retraction(t, k);
        INFO("gens " << gens << " L " << bound << " k " << k);
        REQUIRE(r.map.has_value() == oracle_retraction(gens, bound, k, bound));
        if (r.map) {
          // the returned map satisfies every guarded condition
          auto const& m = *r.map;
          for (Word u = 0; u < t.size(); ++u) {
            REQUIRE(t.length(m[u]) <= k);
            if (t.length(u) <= k) {
              REQUIRE(m[u] == u);
            }
            for (Word v = 0; v < t.size(); ++v) {
              auto uv = t.concat(u, v);
              if (uv && t.length(m[u]) + t.length(m[v]) <= bound) {
                REQUIRE(t.concat(m[u], m[v]) == m[*uv]);
              }
            }
          }
        } else if (gens == 1) {
          // One generator has no choice points below the bound, so the
          // reported length is the shortest infeasible prefix.
          std::size_t m = k + 1;
          while (oracle_retraction(1, bound, k, m)) {
            ++m;
          }
          CHECK(*r.contradiction_length == m);
        }
      }
    }
  }
}

TEST_CASE("no retraction exists once the bound exceeds twice the image bound") {
  for (std::size_t gens : {1u, 2u}) {
    for (std::size_t bound = 1; bound <= 8; ++bound) {
      for (std::size_t k = 1; 2 * k < bound; ++k) {
        INFO("gens " << gens << " L " << bound << " k " << k);
        auto r = search_bounded_retraction(TruncatedFreeSemigroup(letters_ab(gens), bound), k);
        CHECK_FALSE(r.map);
        CHECK(r.contradiction_length);
      }
    }
  }
}
