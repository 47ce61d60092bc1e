#include "pforge/sturmian.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "pforge/errors.hpp"

namespace pforge::sturmian {

namespace {

// floor(i*p/q + an/ad) with q, ad > 0, evaluated without forming i*p*ad.
i128 floor_affine(std::int64_t i, i128 p, i128 q, i128 an, i128 ad) {
  i128 ip = checked_mul(static_cast<i128>(i), p);
  i128 whole = floor_div(ip, q);
  i128 r = ip - whole * q;
  i128 num = checked_add(checked_mul(r, ad), checked_mul(an, q));
  return whole + floor_div(num, checked_mul(q, ad));
}

i128 ceil_affine(std::int64_t i, i128 p, i128 q, i128 an, i128 ad) {
  return -floor_affine(-i, p, q, -an, ad);
}

void check_intercept(const Rational& a, bool ceiling) {
  if (ceiling) {
    if (a.sign() <= 0 || a > Rational(1)) throw DomainError("ceiling-form intercept must lie in (0,1]");
  } else {
    if (a.sign() < 0 || a >= Rational(1)) throw DomainError("intercept must lie in [0,1)");
  }
}

}  // namespace

Word generate_word(const Rational& gamma, const Rational& a, std::int64_t i_start, std::size_t n) {
  check_intercept(a, false);
  Word w(n);
  i128 prev = floor_affine(i_start, gamma.num(), gamma.den(), a.num(), a.den());
  for (std::size_t k = 0; k < n; ++k) {
    i128 next = floor_affine(i_start + static_cast<std::int64_t>(k) + 1, gamma.num(), gamma.den(), a.num(), a.den());
    w[k] = static_cast<int>(next - prev);
    prev = next;
  }
  return w;
}

Word point_window(const Rational& gamma, const Rational& a, Form form, std::int64_t i_lo, std::int64_t i_hi) {
  check_intercept(a, form == Form::Ceiling);
  if (i_hi < i_lo) throw DomainError("empty window range");
  auto at = [&](std::int64_t i) {
    return form == Form::Floor ? floor_affine(i, gamma.num(), gamma.den(), a.num(), a.den())
                               : ceil_affine(i, gamma.num(), gamma.den(), a.num(), a.den());
  };
  Word w;
  w.reserve(static_cast<std::size_t>(i_hi - i_lo));
  i128 prev = at(i_lo);
  for (std::int64_t i = i_lo; i < i_hi; ++i) {
    i128 next = at(i + 1);
    w.push_back(static_cast<int>(next - prev));
    prev = next;
  }
  return w;
}

Tracker::Tracker(const Rational& gamma) : p_(gamma.num()), q_(gamma.den()) { reset(); }

void Tracker::reset() {
  lo_ = 0;
  hi_ = q_;
  sum_ = 0;
  i_ = 0;
}

bool Tracker::push(int letter) {
  sum_ += letter;
  ++i_;
  i128 base = checked_add(checked_mul(q_, sum_), -checked_mul(static_cast<i128>(i_), p_));
  lo_ = std::max(lo_, base);
  hi_ = std::min(hi_, base + q_);
  return lo_ < hi_;
}

std::optional<InterceptInterval> intercept_interval(const Word& word, const Rational& gamma) {
  i128 q = gamma.den();
  i128 lo = 0, hi = q, sum = 0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    sum += word[i];
    i128 base = checked_add(checked_mul(q, sum), -checked_mul(static_cast<i128>(i + 1), gamma.num()));
    lo = std::max(lo, base);
    hi = std::min(hi, base + q);
    if (lo >= hi) return std::nullopt;
  }
  return InterceptInterval{Rational(lo, q), Rational(hi, q)};
}

namespace {

// Farey fractions of order j inside [lo, hi], sorted.
std::vector<Rational> farey(int j, const Rational& lo, const Rational& hi) {
  std::vector<Rational> out;
  i128 a = 0, b = 1, c = 1, d = j;
  out.emplace_back(0, 1);
  while (c <= j) {
    i128 k = (j + b) / d;
    i128 na = c, nb = d, nc = k * c - a, nd = k * d - b;
    a = na;
    b = nb;
    c = nc;
    d = nd;
    out.emplace_back(a, b);
    if (a == b) break;
  }
  std::vector<Rational> kept;
  for (const auto& f : out)
    if (f >= lo && f <= hi) kept.push_back(f);
  return kept;
}

void words_at_slope(const Rational& gamma, int j, std::set<Word>& sink) {
  std::vector<Rational> breaks;
  breaks.reserve(static_cast<std::size_t>(j) + 2);
  for (int i = 0; i <= j; ++i) breaks.push_back((Rational(-static_cast<std::int64_t>(i)) * gamma).frac());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  for (const auto& a : breaks) sink.insert(generate_word(gamma, a, 0, static_cast<std::size_t>(j)));
}

std::set<Word> binary_words(int j, const Rational& lo, const Rational& hi) {
  std::set<Word> sink;
  std::vector<Rational> f = farey(j, lo, hi);
  for (std::size_t k = 0; k + 1 < f.size(); ++k) words_at_slope((f[k] + f[k + 1]) * Rational(1, 2), j, sink);
  return sink;
}

}  // namespace

std::map<int, std::vector<Word>> enumerate_binary(int j) {
  if (j < 1) throw DomainError("enumerate_binary needs j >= 1");
  std::map<int, std::vector<Word>> out;
  for (const Word& w : binary_words(j, Rational(0), Rational(1))) {
    int weight = std::accumulate(w.begin(), w.end(), 0);
    out[weight].push_back(w);
  }
  return out;
}

std::vector<Word> enumerate_by_weight(int j, std::int64_t n) {
  if (j < 1) throw DomainError("enumerate_by_weight needs j >= 1");
  std::int64_t k = static_cast<std::int64_t>(floor_div(n, j));
  std::int64_t m = n - k * j;
  // weight m needs a slope in ((m-1)/j, (m+1)/j); intersect with [0,1]
  Rational lo = std::max(Rational(0), Rational(m - 1, j));
  Rational hi = std::min(Rational(1), Rational(m + 1, j));
  std::vector<Word> out;
  for (const Word& w : binary_words(j, lo, hi)) {
    if (std::accumulate(w.begin(), w.end(), 0) != m) continue;
    Word shifted = w;
    for (int& x : shifted) x += static_cast<int>(k);
    out.push_back(std::move(shifted));
  }
  return out;
}

}  // namespace pforge::sturmian
