#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "signature.hpp"

namespace ualg {

  // Nonempty words of length <= L over g generators, with concatenation
  // defined only when the result still has length <= L. Overflow is
  // undefined rather than wrapped or absorbed, so no identity that the free
  // semigroup lacks is introduced.
  //
  // Words are numbered in length-then-lexicographic order: all words of
  // length 1, then length 2, and so on.
  class TruncatedFreeSemigroup {
   public:
    using Word = std::uint32_t;  // index of a word

    static constexpr std::uint64_t default_budget = 100'000;

    TruncatedFreeSemigroup(std::vector<std::string> generators,
                           std::size_t              bound,
                           std::uint64_t            budget = default_budget)
        : generators_(std::move(generators)), bound_(bound) {
      if (generators_.empty()) {
        throw InputError("a free semigroup needs at least one generator");
      }
      if (bound_ == 0) {
        throw InputError("length bound must be positive");
      }
      for (auto const& g : generators_) {
        if (!is_identifier(g)) {
          throw InputError("invalid generator name '" + g + "'");
        }
      }
      std::uint64_t g     = generators_.size();
      std::uint64_t total = 0;
      std::uint64_t power = 1;
      offsets_.push_back(0);  // words of length 0: none
      for (std::size_t len = 1; len <= bound_; ++len) {
        power *= g;
        offsets_.push_back(total);
        powers_.push_back(power);
        total += power;
        if (total > budget) {
          throw BudgetExceeded("truncated free semigroup would have more than "
                               + std::to_string(budget) + " elements");
        }
      }
      offsets_.push_back(total);
      size_ = total;
      single_char_ = true;
      for (auto const& gen : generators_) {
        single_char_ = single_char_ && gen.size() == 1;
      }
    }

    std::vector<std::string> const& generators() const noexcept {
      return generators_;
    }
    std::size_t bound() const noexcept {
      return bound_;
    }
    std::size_t size() const noexcept {
      return static_cast<std::size_t>(size_);
    }

    std::size_t length(Word w) const {
      check(w);
      std::size_t len = 1;
      while (offsets_[len + 1] <= w) {
        ++len;
      }
      return len;
    }

    // Letters of `w` as generator indices.
    std::vector<std::size_t> letters(Word w) const {
      std::size_t              len  = length(w);
      std::uint64_t            rank = w - offsets_[len];
      std::vector<std::size_t> out(len);
      for (std::size_t i = len; i > 0; --i) {
        out[i - 1] = static_cast<std::size_t>(rank % generators_.size());
        rank /= generators_.size();
      }
      return out;
    }

    Word word(std::vector<std::size_t> const& letters) const {
      if (letters.empty() || letters.size() > bound_) {
        throw InputError("word length outside 1.." + std::to_string(bound_));
      }
      std::uint64_t rank = 0;
      for (auto l : letters) {
        if (l >= generators_.size()) {
          throw InputError("unknown generator index");
        }
        rank = rank * generators_.size() + l;
      }
      return static_cast<Word>(offsets_[letters.size()] + rank);
    }

    Word generator(std::size_t i) const {
      return word({i});
    }

    // uv, or nullopt when |u| + |v| exceeds the bound.
    std::optional<Word> concat(Word u, Word v) const {
      std::size_t lu = length(u), lv = length(v);
      if (lu + lv > bound_) {
        return std::nullopt;
      }
      std::uint64_t ru = u - offsets_[lu];
      std::uint64_t rv = v - offsets_[lv];
      return static_cast<Word>(offsets_[lu + lv] + ru * powers_[lv - 1] + rv);
    }

    // Generator names juxtaposed ("aab"), or dot-separated when some
    // generator name is longer than one character.
    std::string name(Word w) const {
      std::string out;
      for (auto l : letters(w)) {
        if (!single_char_ && !out.empty()) {
          out += '.';
        }
        out += generators_[l];
      }
      return out;
    }

    // The partial table, row-major, materialised on request.
    std::vector<std::optional<Word>> table(std::size_t max_size = 4096) const {
      if (size() > max_size) {
        throw BudgetExceeded("partial table refused for "
                             + std::to_string(size()) + " elements");
      }
      std::vector<std::optional<Word>> t;
      t.reserve(size() * size());
      for (Word u = 0; u < size(); ++u) {
        for (Word v = 0; v < size(); ++v) {
          t.push_back(concat(u, v));
        }
      }
      return t;
    }

   private:
    void check(Word w) const {
      if (w >= size_) {
        throw InputError("word index out of range");
      }
    }

    std::vector<std::string>   generators_;
    std::size_t                bound_;
    std::uint64_t              size_ = 0;
    std::vector<std::uint64_t> offsets_;  // offsets_[len] = first word of len
    std::vector<std::uint64_t> powers_;   // powers_[len - 1] = g^len
    bool                       single_char_ = true;
  };

  inline TruncatedFreeSemigroup build_truncated(std::vector<std::string> generators,
                                                std::size_t              bound) {
    return TruncatedFreeSemigroup(std::move(generators), bound);
  }

  // Generator names a, b, c, ... (single letters), or g when n = 1.
  inline std::vector<std::string> default_generators(std::size_t n) {
    if (n == 1) {
      return {"g"};
    }
    if (n == 0 || n > 26) {
      throw InputError("generator count must be in 1..26");
    }
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
      out.emplace_back(1, static_cast<char>('a' + i));
    }
    return out;
  }

  enum class StepKind { fixed, forced, chosen, contradiction, backtrack };

  inline char const* to_string(StepKind k) {
    switch (k) {
      case StepKind::fixed:
        return "fixed";
      case StepKind::forced:
        return "forced";
      case StepKind::chosen:
        return "chosen";
      case StepKind::contradiction:
        return "contradiction";
      default:
        return "backtrack";
    }
  }

  // One event of the retraction search. For forced steps and contradictions,
  // (left, right) is the split w = left·right whose images force
  // r(w) = r(left)·r(right).
  struct RetractionStep {
    StepKind                                   kind;
    TruncatedFreeSemigroup::Word               word;
    std::optional<TruncatedFreeSemigroup::Word> left;
    std::optional<TruncatedFreeSemigroup::Word> right;
    std::optional<TruncatedFreeSemigroup::Word> image;
    // Length of r(left)·r(right) (may exceed the image bound).
    std::size_t forced_length = 0;
  };

  struct RetractionSearch {
    std::size_t image_bound = 0;
    // r as word -> image word, when a retraction exists.
    std::optional<std::vector<TruncatedFreeSemigroup::Word>> map;
    std::vector<RetractionStep> transcript;
    bool                        transcript_truncated = false;
    // Length of the first word whose image was contradictory, on absence.
    std::optional<std::size_t> contradiction_length;
  };

  // Searches for r: words of length <= L onto words of length <= k with
  // r(w) = w for |w| <= k and r(uv) = r(u)r(v) whenever |u|+|v| <= L and
  // |r(u)|+|r(v)| <= L. Words are visited in length-lexicographic order;
  // every split of a word into two shorter, already mapped words is a
  // constraint. A word with a guarded split has a forced image; one without
  // is a choice point. The search is exhaustive.
  inline RetractionSearch search_bounded_retraction(TruncatedFreeSemigroup const& t,
                                                    std::size_t k,
                                                    std::size_t max_steps = 10'000) {
    using Word = TruncatedFreeSemigroup::Word;
    if (k == 0) {
      throw InputError("image bound must be positive");
    }
    k = std::min(k, t.bound());
    RetractionSearch result;
    result.image_bound = k;

    std::size_t const n = t.size();
    std::vector<Word> image(n, 0);
    std::vector<std::size_t> image_len(n, 0);
    std::vector<std::size_t> word_len(n);
    for (Word w = 0; w < n; ++w) {
      word_len[w] = t.length(w);
    }
    // Candidate images of an unconstrained word: all words of length <= k.
    std::vector<Word> short_words;
    for (Word w = 0; w < n && word_len[w] <= k; ++w) {
      short_words.push_back(w);
    }

    auto record = [&](RetractionStep step) {
      if (result.transcript.size() < max_steps) {
        result.transcript.push_back(step);
      } else {
        result.transcript_truncated = true;
      }
    };

    // Concatenation of two images; images have length <= k <= L but the
    // product may overflow L, in which case it is not a word of t.
    struct Forced {
      Word                left, right;
      std::optional<Word> value;
      std::size_t         length;
    };
    auto forced_image = [&](Word w) -> std::optional<Forced> {
      auto letters = t.letters(w);
      for (std::size_t cut = 1; cut < letters.size(); ++cut) {
        Word u = t.word({letters.begin(), letters.begin() + cut});
        Word v = t.word({letters.begin() + cut, letters.end()});
        std::size_t len = image_len[u] + image_len[v];
        if (len > t.bound()) {
          continue;  // unguarded split
        }
        return Forced{u, v, t.concat(image[u], image[v]), len};
      }
      return std::nullopt;
    };
    auto consistent = [&](Word w, Word candidate) -> std::optional<Forced> {
      auto letters = t.letters(w);
      for (std::size_t cut = 1; cut < letters.size(); ++cut) {
        Word u = t.word({letters.begin(), letters.begin() + cut});
        Word v = t.word({letters.begin() + cut, letters.end()});
        std::size_t len = image_len[u] + image_len[v];
        if (len > t.bound()) {
          continue;
        }
        auto value = t.concat(image[u], image[v]);
        if (!value || *value != candidate) {
          return Forced{u, v, value, len};
        }
      }
      return std::nullopt;
    };

    for (Word w = 0; w < short_words.size(); ++w) {
      image[w]     = w;
      image_len[w] = word_len[w];
      record({StepKind::fixed, w, std::nullopt, std::nullopt, w, word_len[w]});
    }

    // Explicit stack of choice points: (word, index into short_words).
    struct Choice {
      Word        word;
      std::size_t next;
    };
    std::vector<Choice> choices;
    Word                w = static_cast<Word>(short_words.size());

    while (true) {
      if (w == n) {
        result.map = image;
        return result;
      }
      bool dead = false;
      if (auto f = forced_image(w)) {
        if (!f->value || f->length > k) {
          record({StepKind::contradiction, w, f->left, f->right, f->value, f->length});
          if (!result.contradiction_length) {
            result.contradiction_length = word_len[w];
          }
          dead = true;
        } else if (auto bad = consistent(w, *f->value)) {
          record({StepKind::contradiction, w, bad->left, bad->right, bad->value, bad->length});
          if (!result.contradiction_length) {
            result.contradiction_length = word_len[w];
          }
          dead = true;
        } else {
          image[w]     = *f->value;
          image_len[w] = f->length;
          record({StepKind::forced, w, f->left, f->right, f->value, f->length});
          ++w;
          continue;
        }
      } else {
        choices.push_back({w, 0});
      }

      // Advance the innermost choice point to its next candidate.
      while (true) {
        if (dead) {
          if (choices.empty()) {
            return result;
          }
          record({StepKind::backtrack, choices.back().word, std::nullopt,
                  std::nullopt, std::nullopt, 0});
          dead = false;
        }
        Choice& c = choices.back();
        bool    placed = false;
        while (c.next < short_words.size()) {
          Word candidate = short_words[c.next++];
          if (!consistent(c.word, candidate)) {
            image[c.word]     = candidate;
            image_len[c.word] = word_len[candidate];
            record({StepKind::chosen, c.word, std::nullopt, std::nullopt,
                    candidate, word_len[candidate]});
            placed = true;
            break;
          }
        }
        if (placed) {
          w = c.word + 1;
          break;
        }
        choices.pop_back();
        dead = true;
      }
    }
  }

}  // namespace ualg
