#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "pforge/rational.hpp"

namespace pforge::beta {

using Digit = std::uint8_t;
using Word = std::vector<Digit>;

/// An exact real number (p + q*sqrt(d)) / r with integer p, q, r and d >= 0.
/// Rational values have q = 0.
struct QuadraticNumber {
  mpz_class p, q, r{1};
  unsigned long d = 0;

  static QuadraticNumber rational(const Rational& x);
  static QuadraticNumber from_double(double x);
  static QuadraticNumber golden();
  /// Accepts a decimal or fraction, "golden"/"phi", "e", "exp:<x>", "sqrt:<d>".
  static QuadraticNumber parse(std::string_view text);

  double approx() const;
  int sign() const;
  mpz_class floor() const;
  std::size_t bits() const;
  void reduce();
  std::string str() const;
};

QuadraticNumber operator*(const QuadraticNumber& a, const QuadraticNumber& b);
QuadraticNumber operator-(const QuadraticNumber& a, const mpz_class& k);
QuadraticNumber operator+(const QuadraticNumber& a, const QuadraticNumber& b);
int compare(const QuadraticNumber& a, const QuadraticNumber& b);

constexpr std::size_t kDefaultPrecisionBits = std::size_t{1} << 18;

/// Language of the beta-shift X_beta. The maximal word is produced lazily and
/// cached; extension is internally synchronized so a shared instance can be
/// queried from several threads.
class BetaLanguage {
 public:
  explicit BetaLanguage(QuadraticNumber beta, std::size_t precision_bits = kDefaultPrecisionBits);
  explicit BetaLanguage(double beta, std::size_t precision_bits = kDefaultPrecisionBits);
  ~BetaLanguage();
  BetaLanguage(const BetaLanguage&) = delete;
  BetaLanguage& operator=(const BetaLanguage&) = delete;

  const QuadraticNumber& beta() const { return beta_; }
  double beta_approx() const { return beta_.approx(); }
  Digit max_digit() const { return max_digit_; }
  bool is_integer() const { return integer_; }
  std::size_t precision_bits() const { return precision_bits_; }

  /// Digit k (0-based) of the maximal word in use (quasi-greedy when flagged).
  Digit digit(std::size_t k) const;
  Word maximal_word(std::size_t n) const;
  /// Prefix of the raw greedy expansion of 1 (zeros after a finite expansion).
  Word greedy_word(std::size_t n) const;
  /// True once the expansion of 1 is known to terminate and the periodic
  /// decremented word replaced it.
  bool quasi_greedy() const;
  /// Length of the finite expansion of 1 if it has been detected, else 0.
  std::size_t finite_length() const;

  /// Automaton step: state = length of the current match with a prefix of the
  /// maximal word. Returns -1 when the digit is forbidden.
  int step(int state, Digit d) const {
    Digit w = digit(static_cast<std::size_t>(state));
    if (d < w) return 0;
    if (d == w) return state + 1;
    return -1;
  }

  bool is_admissible(const Word& word) const;

 private:
  void extend_to(std::size_t n) const;
  Digit raw_digit(std::size_t k) const;

  static constexpr std::size_t kChunk = 4096;
  static constexpr std::size_t kMaxChunks = 4096;

  QuadraticNumber beta_;
  std::size_t precision_bits_;
  Digit max_digit_ = 0;
  bool integer_ = false;

  mutable std::mutex mu_;
  mutable std::atomic<std::size_t> published_{0};
  mutable std::unique_ptr<std::unique_ptr<Digit[]>[]> chunks_;
  mutable QuadraticNumber orbit_;
  mutable std::size_t computed_ = 0;
  mutable std::atomic<std::size_t> finite_len_{0};
  mutable std::vector<Digit> finite_digits_;
};

struct CountResult {
  std::uint64_t count = 0;
  std::vector<Word> words;
};

/// Exact N_n by prefix-tree enumeration with admissibility pruning.
CountResult count_words(const BetaLanguage& lang, std::size_t n, bool enumerate = false,
                        std::uint64_t node_cap = 4'000'000'000ULL);

/// N_n via the recurrence N_n = 1 + sum_{j<=n} w_j N_{n-j}.
std::vector<std::uint64_t> count_by_recurrence(const BetaLanguage& lang, std::size_t n);

bool nesting_check(const BetaLanguage& lang, const BetaLanguage& lang_prime, std::size_t n);

struct StabilizationProbe {
  /// beta' - beta for the last probe at which L_n(X_beta') matched the right limit.
  double delta = 0;
  /// Whether the right-limit language equals L_n(X_beta).
  bool equals_language = false;
  std::uint64_t right_limit_count = 0;
};

/// Bisects beta' = beta + 2^-k downward until L_n(X_beta') equals the right-limit language.
StabilizationProbe stabilization_probe(const BetaLanguage& lang, std::size_t n,
                                       int max_halvings = 80);

/// Digits floor(beta*r), r <- T_beta(r) for the exact seed r in [0,1).
Word expansion_digits(const QuadraticNumber& beta, const Rational& seed, std::size_t n);

}  // namespace pforge::beta
