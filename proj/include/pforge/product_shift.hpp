#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pforge/beta_shift.hpp"
#include "pforge/rational.hpp"
#include "pforge/sturmian.hpp"

namespace pforge::product {

/// Letters are integer codes; each code decodes to a component tuple
/// (x, y0, y1, ..., ym) in mixed radix with x most significant.
using Word = std::vector<int>;
using Letter = std::vector<int>;

enum class Form { OneParameter, Theorem };

class ProductAlphabet {
 public:
  /// x in {0..floor(e^c)}, y0 in {floor(b)..ceil(c)}, and for the theorem form
  /// y1..ym in {floor(-L)..ceil(L)}.
  ProductAlphabet(Form form, int m, double b, double c, double L);

  Form form() const { return form_; }
  int m() const { return m_; }
  int components() const { return static_cast<int>(lo_.size()); }
  int size() const { return size_; }
  int lo(int comp) const { return lo_[comp]; }
  int hi(int comp) const { return hi_[comp]; }
  int radix(int comp) const { return hi_[comp] - lo_[comp] + 1; }

  int encode(const Letter& letter) const;
  const Letter& decode(int code) const { return table_[code]; }
  int component(int code, int comp) const { return table_[code][comp]; }
  bool valid(const Letter& letter) const;

  /// Projection of a word onto one component.
  std::vector<int> project(const Word& word, int comp) const;
  /// Renders "(x,y0),(x,y0),..." and parses the same format.
  std::string render(const Word& word) const;
  Word parse(const std::string& text) const;

 private:
  Form form_;
  int m_;
  std::vector<int> lo_, hi_;
  int size_ = 1;
  std::vector<Letter> table_;
};

/// Parameters of one member Z_gamma: gamma0 drives beta = e^gamma0 and the
/// slope of y0; theorem-form slopes gamma_1..gamma_m drive y1..ym.
struct GammaVector {
  Rational gamma0;
  std::vector<Rational> slopes;
};

/// Z_gamma = X_{e^gamma0} x Y_gamma0 (x Y_gamma1 x ... x Y_gammam).
class ZGamma {
 public:
  ZGamma(const ProductAlphabet& alphabet, GammaVector gamma,
         std::size_t precision_bits = beta::kDefaultPrecisionBits);

  const GammaVector& gamma() const { return gamma_; }
  const beta::BetaLanguage& beta_language() const { return *beta_; }
  const ProductAlphabet& alphabet() const { return alphabet_; }

  /// Membership of word[lo, hi) in L(Z_gamma).
  bool contains(const Word& word, std::size_t lo, std::size_t hi) const;
  bool contains(const Word& word) const { return contains(word, 0, word.size()); }

  /// Left-to-right scanner for the language of Z_gamma.
  class Scanner {
   public:
    explicit Scanner(const ZGamma& z);
    void reset();
    bool push(int code);
    bool alive() const { return alive_; }

   private:
    const ZGamma* z_;
    int beta_state_ = 0;
    std::vector<sturmian::Tracker> trackers_;
    bool alive_ = true;
  };

 private:
  ProductAlphabet alphabet_;
  GammaVector gamma_;
  std::shared_ptr<beta::BetaLanguage> beta_;
};

bool z_membership(const Word& word, const ZGamma& z);

struct Window {
  std::size_t j = 0;
  bool boundary_capped = false;
};

/// Largest l with the centered window of length 2l-1 inside the word and in L(Z_gamma).
Window j_window(const Word& word, std::size_t center, const ZGamma& z);

/// Z_gamma x D_gamma with D_gamma = k fixed points: a decorated word is a
/// Z_gamma word paired with a constant decoration letter in {1..k}.
class DecoratedLanguage {
 public:
  DecoratedLanguage(const ZGamma& z, int k);
  int k() const { return k_; }
  bool contains(const Word& word, const std::vector<int>& decoration) const;
  std::uint64_t count(std::size_t n) const;

 private:
  const ZGamma* z_;
  int k_;
};

DecoratedLanguage decorate(const ZGamma& z, int k);

/// |L_n(Z_gamma)| by exhaustive enumeration over A^n.
std::uint64_t count_language(const ZGamma& z, std::size_t n);

}  // namespace pforge::product
