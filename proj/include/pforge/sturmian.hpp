#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "pforge/rational.hpp"

namespace pforge::sturmian {

using Word = std::vector<int>;

/// y_i = floor((i+1)*gamma + a) - floor(i*gamma + a) for i = i_start .. i_start+n-1.
Word generate_word(const Rational& gamma, const Rational& a, std::int64_t i_start, std::size_t n);

/// Half-open set [lo, hi) of intercepts a in [0,1) that produce a word.
struct InterceptInterval {
  Rational lo;
  Rational hi;
};

/// Admissible intercepts for `word` under slope gamma, or nullopt when the
/// word is not a factor of Y_gamma.
std::optional<InterceptInterval> intercept_interval(const Word& word, const Rational& gamma);

inline bool is_sturmian_word(const Word& word, const Rational& gamma) {
  return intercept_interval(word, gamma).has_value();
}

/// Incremental form of the interval test, in units of 1/den(gamma).
class Tracker {
 public:
  explicit Tracker(const Rational& gamma);
  void reset();
  /// Appends one letter; returns whether the word read so far is still a factor.
  bool push(int letter);
  bool alive() const { return lo_ < hi_; }
  std::int64_t length() const { return i_; }

 private:
  i128 p_, q_;
  i128 lo_, hi_, sum_;
  std::int64_t i_ = 0;
};

/// All Sturmian words (over every slope) of length j and weight n.
std::vector<Word> enumerate_by_weight(int j, std::int64_t n);
/// Every Sturmian word of length j with letters in {0,1}, bucketed by weight.
std::map<int, std::vector<Word>> enumerate_binary(int j);

enum class Form { Floor, Ceiling };

/// Window [i_lo, i_hi) of the point of Y_gamma with intercept a in the given form.
Word point_window(const Rational& gamma, const Rational& a, Form form, std::int64_t i_lo,
                  std::int64_t i_hi);

}  // namespace pforge::sturmian
