#include "pforge/beta_shift.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pforge/errors.hpp"

namespace pforge::beta {

namespace {

mpz_class from_i128(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(u)));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

// floor(q * sqrt(d)) for d >= 0.
mpz_class floor_q_sqrt(const mpz_class& q, unsigned long d) {
  if (q == 0 || d == 0) return 0;
  mpz_class sq = q * q * d;
  mpz_class s;
  mpz_sqrt(s.get_mpz_t(), sq.get_mpz_t());
  bool exact = s * s == sq;
  if (q > 0) return s;
  return exact ? mpz_class(-s) : mpz_class(-s - 1);
}

}  // namespace

QuadraticNumber QuadraticNumber::rational(const Rational& x) {
  QuadraticNumber v;
  v.p = from_i128(x.num());
  v.q = 0;
  v.r = from_i128(x.den());
  return v;
}

QuadraticNumber QuadraticNumber::from_double(double x) { return rational(Rational::from_double(x)); }

QuadraticNumber QuadraticNumber::golden() {
  QuadraticNumber v;
  v.p = 1;
  v.q = 1;
  v.r = 2;
  v.d = 5;
  return v;
}

QuadraticNumber QuadraticNumber::parse(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "golden" || s == "phi") return golden();
  if (s == "e") return from_double(std::numbers::e);
  if (s.rfind("exp:", 0) == 0) return from_double(std::exp(std::stod(s.substr(4))));
  if (s.rfind("sqrt:", 0) == 0) {
    long dv = std::stol(s.substr(5));
    if (dv < 0) throw DomainError("sqrt of a negative number");
    QuadraticNumber v;
    v.p = 0;
    v.q = 1;
    v.r = 1;
    v.d = static_cast<unsigned long>(dv);
    return v;
  }
  return rational(Rational::parse(s));
}

double QuadraticNumber::approx() const {
  mpf_class num(p, 256);
  if (q != 0 && d != 0) {
    mpf_class root(sqrt(mpf_class(d, 256)), 256);
    num += mpf_class(q, 256) * root;
  }
  mpf_class den(r, 256);
  mpf_class v(num / den, 256);
  return v.get_d();
}

int QuadraticNumber::sign() const {
  int sp = sgn(p);
  int sq = (d == 0) ? 0 : sgn(q);
  if (sq == 0) return sp;
  if (sp == 0) return sq;
  if (sp == sq) return sp;
  // opposite signs: compare p^2 with q^2 d
  mpz_class lhs = p * p;
  mpz_class rhs = q * q * d;
  int c = cmp(lhs, rhs);
  if (c == 0) return 0;
  return c > 0 ? sp : sq;
}

mpz_class QuadraticNumber::floor() const { return floor_div(p + floor_q_sqrt(q, d), r); }

std::size_t QuadraticNumber::bits() const {
  std::size_t b = mpz_sizeinbase(p.get_mpz_t(), 2);
  b = std::max(b, mpz_sizeinbase(q.get_mpz_t(), 2));
  b = std::max(b, mpz_sizeinbase(r.get_mpz_t(), 2));
  return b;
}

void QuadraticNumber::reduce() {
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), r.get_mpz_t());
  if (q != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), q.get_mpz_t());
  if (g > 1) {
    mpz_divexact(p.get_mpz_t(), p.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(q.get_mpz_t(), q.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), g.get_mpz_t());
  }
}

std::string QuadraticNumber::str() const {
  std::string out = "(" + p.get_str();
  if (q != 0 && d != 0) out += (q < 0 ? " - " : " + ") + mpz_class(abs(q)).get_str() + "*sqrt(" + std::to_string(d) + ")";
  out += ")/" + r.get_str();
  return out;
}

static unsigned long common_radicand(const QuadraticNumber& a, const QuadraticNumber& b) {
  bool aq = a.q != 0 && a.d != 0;
  bool bq = b.q != 0 && b.d != 0;
  if (aq && bq && a.d != b.d) throw DomainError("quadratic numbers with different radicands");
  return aq ? a.d : (bq ? b.d : 0);
}

QuadraticNumber operator*(const QuadraticNumber& a, const QuadraticNumber& b) {
  QuadraticNumber v;
  v.d = common_radicand(a, b);
  v.p = a.p * b.p + a.q * b.q * v.d;
  v.q = a.p * b.q + a.q * b.p;
  v.r = a.r * b.r;
  if (v.d == 0) v.q = 0;
  return v;
}

QuadraticNumber operator+(const QuadraticNumber& a, const QuadraticNumber& b) {
  QuadraticNumber v;
  v.d = common_radicand(a, b);
  v.p = a.p * b.r + b.p * a.r;
  v.q = a.q * b.r + b.q * a.r;
  v.r = a.r * b.r;
  if (v.d == 0) v.q = 0;
  v.reduce();
  return v;
}

QuadraticNumber operator-(const QuadraticNumber& a, const mpz_class& k) {
  QuadraticNumber v = a;
  v.p -= k * a.r;
  return v;
}

int compare(const QuadraticNumber& a, const QuadraticNumber& b) {
  QuadraticNumber nb = b;
  nb.p = -nb.p;
  nb.q = -nb.q;
  return (a + nb).sign();
}

BetaLanguage::BetaLanguage(double beta, std::size_t precision_bits)
    : BetaLanguage(QuadraticNumber::from_double(beta), precision_bits) {}

BetaLanguage::BetaLanguage(QuadraticNumber beta, std::size_t precision_bits)
    : beta_(std::move(beta)), precision_bits_(precision_bits) {
  beta_.reduce();
  if (beta_.r < 0) {
    beta_.p = -beta_.p;
    beta_.q = -beta_.q;
    beta_.r = -beta_.r;
  }
  QuadraticNumber one = QuadraticNumber::rational(Rational(1));
  if (compare(beta_, one) < 0) throw DomainError("beta must be at least 1");
  mpz_class fl = beta_.floor();
  if (fl > 255) throw DomainError("beta too large for byte digits");
  max_digit_ = static_cast<Digit>(fl.get_ui());
  integer_ = (beta_ - fl).sign() == 0;
  chunks_ = std::make_unique<std::unique_ptr<Digit[]>[]>(kMaxChunks);
  orbit_ = one;
}

BetaLanguage::~BetaLanguage() = default;

void BetaLanguage::extend_to(std::size_t n) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::size_t have = published_.load(std::memory_order_relaxed);
  if (have >= n) return;
  if (n > kChunk * kMaxChunks) throw BudgetExceeded("maximal word longer than the digit cache");
  std::size_t target = std::max(n, have + 64);
  target = std::min(target, kChunk * kMaxChunks);
  for (std::size_t k = have; k < target; ++k) {
    Digit dg;
    std::size_t fin = finite_len_.load(std::memory_order_relaxed);
    if (fin != 0) {
      if (integer_) {
        dg = 0;
      } else {
        dg = finite_digits_[k % fin];
        if (k % fin == fin - 1) dg = static_cast<Digit>(dg - 1);
      }
    } else {
      QuadraticNumber y = beta_ * orbit_;
      mpz_class w = y.floor();
      orbit_ = y - w;
      if (++computed_ % 32 == 0) orbit_.reduce();
      if (orbit_.bits() > precision_bits_) {
        throw PrecisionExhausted("beta orbit exceeds " + std::to_string(precision_bits_) +
                                 " bits at digit " + std::to_string(k + 1));
      }
      dg = static_cast<Digit>(w.get_ui());
      finite_digits_.push_back(dg);
      if (orbit_.sign() == 0) {
        finite_len_.store(k + 1, std::memory_order_relaxed);
        if (!integer_) dg = static_cast<Digit>(dg - 1);
      }
    }
    auto& chunk = chunks_[k / kChunk];
    if (!chunk) chunk = std::make_unique<Digit[]>(kChunk);
    chunk[k % kChunk] = dg;
  }
  published_.store(target, std::memory_order_release);
}

Digit BetaLanguage::digit(std::size_t k) const {
  if (k >= published_.load(std::memory_order_acquire)) extend_to(k + 1);
  return chunks_[k / kChunk][k % kChunk];
}

Word BetaLanguage::maximal_word(std::size_t n) const {
  Word w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = digit(k);
  return w;
}

Digit BetaLanguage::raw_digit(std::size_t k) const {
  Digit dg = digit(k);
  std::lock_guard<std::mutex> lock(mu_);
  std::size_t fin = finite_len_.load(std::memory_order_relaxed);
  if (fin == 0) return dg;
  return k < fin ? finite_digits_[k] : 0;
}

Word BetaLanguage::greedy_word(std::size_t n) const {
  Word w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = raw_digit(k);
  return w;
}

bool BetaLanguage::quasi_greedy() const {
  return !integer_ && finite_len_.load(std::memory_order_acquire) != 0;
}

std::size_t BetaLanguage::finite_length() const { return finite_len_.load(std::memory_order_acquire); }

bool BetaLanguage::is_admissible(const Word& word) const {
  int state = 0;
  for (Digit d : word) {
    if (d > max_digit_) return false;
    state = step(state, d);
    if (state < 0) return false;
  }
  return true;
}

namespace {

double projected_nodes(const BetaLanguage& lang, std::size_t n) {
  double b = lang.beta_approx();
  double total = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    double full = std::pow(static_cast<double>(lang.max_digit()) + 1.0, static_cast<double>(k));
    double bound = b > 1.0 ? b / (b - 1.0) * std::pow(b, static_cast<double>(k)) : static_cast<double>(k + 1);
    total += std::min(full, bound);
  }
  return total;
}

template <class Accept>
void dfs_words(std::size_t n, Digit max_digit, Accept&& step, bool enumerate, CountResult& out) {
  if (n == 0) {
    out.count = 1;
    if (enumerate) out.words.emplace_back();
    return;
  }
  Word cur(n, 0);
  std::vector<int> states(n + 1, 0);
  std::vector<int> next(n, 0);
  std::size_t depth = 0;
  next[0] = 0;
  for (;;) {
    if (next[depth] > max_digit) {
      if (depth == 0) break;
      --depth;
      continue;
    }
    Digit d = static_cast<Digit>(next[depth]++);
    int s = step(states[depth], d);
    if (s < 0) continue;
    cur[depth] = d;
    if (depth + 1 == n) {
      ++out.count;
      if (enumerate) out.words.push_back(cur);
      continue;
    }
    states[depth + 1] = s;
    ++depth;
    next[depth] = 0;
  }
}

}  // namespace

CountResult count_words(const BetaLanguage& lang, std::size_t n, bool enumerate, std::uint64_t node_cap) {
  if (n == 0) throw DomainError("count_words needs n >= 1");
  if (projected_nodes(lang, n) > static_cast<double>(node_cap))
    throw BudgetExceeded("projected beta-shift enumeration exceeds node cap");
  lang.digit(n);
  CountResult out;
  dfs_words(n, lang.max_digit(), [&](int s, Digit d) { return lang.step(s, d); }, enumerate, out);
  return out;
}

std::vector<std::uint64_t> count_by_recurrence(const BetaLanguage& lang, std::size_t n) {
  std::vector<std::uint64_t> N(n + 1, 0);
  N[0] = 1;
  Word w = lang.maximal_word(n);
  for (std::size_t m = 1; m <= n; ++m) {
    std::uint64_t v = 1;
    for (std::size_t j = 1; j <= m; ++j) v += static_cast<std::uint64_t>(w[j - 1]) * N[m - j];
    N[m] = v;
  }
  return N;
}

bool nesting_check(const BetaLanguage& lang, const BetaLanguage& lang_prime, std::size_t n) {
  if (compare(lang.beta(), lang_prime.beta()) > 0) throw DomainError("nesting_check needs beta <= beta'");
  CountResult small = count_words(lang, n, true);
  for (const Word& w : small.words)
    if (!lang_prime.is_admissible(w)) return false;
  return true;
}

namespace {

std::vector<Word> language_from_word(const Word& w, Digit max_digit, std::size_t n) {
  CountResult out;
  dfs_words(
      n, max_digit,
      [&](int s, Digit d) {
        Digit m = w[static_cast<std::size_t>(s)];
        if (d < m) return 0;
        if (d == m) return s + 1;
        return -1;
      },
      true, out);
  return out.words;
}

}  // namespace

StabilizationProbe stabilization_probe(const BetaLanguage& lang, std::size_t n, int max_halvings) {
  StabilizationProbe out;
  Word greedy = lang.greedy_word(n + 1);
  std::vector<Word> right = language_from_word(greedy, lang.max_digit(), n);
  std::vector<Word> own = count_words(lang, n, true).words;
  out.right_limit_count = right.size();
  out.equals_language = right == own;
  for (int k = 0; k <= max_halvings; ++k) {
    QuadraticNumber step = QuadraticNumber::rational(Rational(1, static_cast<i128>(1) << k));
    BetaLanguage probe(lang.beta() + step, lang.precision_bits());
    if (probe.max_digit() != lang.max_digit()) continue;
    if (count_words(probe, n, true).words == right) {
      out.delta = std::ldexp(1.0, -k);
      return out;
    }
  }
  out.delta = 0;
  return out;
}

Word expansion_digits(const QuadraticNumber& beta, const Rational& seed, std::size_t n) {
  if (seed.sign() < 0 || seed >= Rational(1)) throw DomainError("seed must lie in [0,1)");
  Word out(n);
  QuadraticNumber x = QuadraticNumber::rational(seed);
  for (std::size_t k = 0; k < n; ++k) {
    QuadraticNumber y = beta * x;
    mpz_class w = y.floor();
    out[k] = static_cast<Digit>(w.get_ui());
    x = y - w;
    if (k % 32 == 31) x.reduce();
  }
  return out;
}

}  // namespace pforge::beta
