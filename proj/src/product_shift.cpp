#include "pforge/product_shift.hpp"

#include <cctype>
#include <cmath>

#include "pforge/errors.hpp"

namespace pforge::product {

ProductAlphabet::ProductAlphabet(Form form, int m, double b, double c, double L) : form_(form), m_(m) {
  if (!(b >= 0) || !(c >= b)) throw DomainError("alphabet needs 0 <= b <= c");
  lo_.push_back(0);
  hi_.push_back(static_cast<int>(std::floor(std::exp(c))));
  lo_.push_back(static_cast<int>(std::floor(b)));
  hi_.push_back(static_cast<int>(std::ceil(c)));
  if (form == Form::Theorem) {
    if (m < 1) throw DomainError("theorem-form alphabet needs m >= 1");
    if (!std::isfinite(L)) throw DomainError("theorem-form alphabet needs a finite L");
    for (int k = 0; k < m; ++k) {
      lo_.push_back(static_cast<int>(std::floor(-L)));
      hi_.push_back(static_cast<int>(std::ceil(L)));
    }
  } else {
    m_ = 1;
  }
  size_ = 1;
  for (std::size_t k = 0; k < lo_.size(); ++k) {
    size_ *= hi_[k] - lo_[k] + 1;
    if (size_ > 1 << 16) throw DomainError("product alphabet too large");
  }
  table_.resize(static_cast<std::size_t>(size_));
  for (int code = 0; code < size_; ++code) {
    Letter l(lo_.size());
    int rest = code;
    for (int k = static_cast<int>(lo_.size()) - 1; k >= 0; --k) {
      l[k] = lo_[k] + rest % radix(k);
      rest /= radix(k);
    }
    table_[code] = l;
  }
}

bool ProductAlphabet::valid(const Letter& letter) const {
  if (letter.size() != lo_.size()) return false;
  for (std::size_t k = 0; k < lo_.size(); ++k)
    if (letter[k] < lo_[k] || letter[k] > hi_[k]) return false;
  return true;
}

int ProductAlphabet::encode(const Letter& letter) const {
  if (!valid(letter)) throw DomainError("letter outside the product alphabet");
  int code = 0;
  for (std::size_t k = 0; k < lo_.size(); ++k) code = code * radix(static_cast<int>(k)) + (letter[k] - lo_[k]);
  return code;
}

std::vector<int> ProductAlphabet::project(const Word& word, int comp) const {
  std::vector<int> out(word.size());
  for (std::size_t i = 0; i < word.size(); ++i) out[i] = table_.at(static_cast<std::size_t>(word[i]))[comp];
  return out;
}

std::string ProductAlphabet::render(const Word& word) const {
  std::string s;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) s += ',';
    s += '(';
    const Letter& l = decode(word[i]);
    for (std::size_t k = 0; k < l.size(); ++k) {
      if (k) s += ',';
      s += std::to_string(l[k]);
    }
    s += ')';
  }
  return s;
}

Word ProductAlphabet::parse(const std::string& text) const {
  Word w;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip();
  while (i < text.size()) {
    if (text[i] != '(') throw DomainError("expected '(' at offset " + std::to_string(i) + " in word");
    ++i;
    Letter l;
    for (;;) {
      skip();
      std::size_t start = i;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (start == i) throw DomainError("expected an integer at offset " + std::to_string(i) + " in word");
      l.push_back(std::stoi(text.substr(start, i - start)));
      skip();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      if (i < text.size() && text[i] == ')') {
        ++i;
        break;
      }
      throw DomainError("unterminated letter in word");
    }
    w.push_back(encode(l));
    skip();
    if (i < text.size() && text[i] == ',') ++i;
    skip();
  }
  return w;
}

ZGamma::ZGamma(const ProductAlphabet& alphabet, GammaVector gamma, std::size_t precision_bits)
    : alphabet_(alphabet), gamma_(std::move(gamma)) {
  if (static_cast<int>(gamma_.slopes.size()) != alphabet.components() - 2)
    throw DomainError("gamma vector does not match the alphabet arity");
  beta_ = std::make_shared<beta::BetaLanguage>(std::exp(gamma_.gamma0.to_double()), precision_bits);
}

ZGamma::Scanner::Scanner(const ZGamma& z) : z_(&z) {
  trackers_.emplace_back(z.gamma_.gamma0);
  for (const auto& s : z.gamma_.slopes) trackers_.emplace_back(s);
}

void ZGamma::Scanner::reset() {
  beta_state_ = 0;
  for (auto& t : trackers_) t.reset();
  alive_ = true;
}

bool ZGamma::Scanner::push(int code) {
  if (!alive_) return false;
  const Letter& l = z_->alphabet_.decode(code);
  if (l[0] < 0) return alive_ = false;
  beta_state_ = z_->beta_->step(beta_state_, static_cast<beta::Digit>(l[0]));
  if (beta_state_ < 0) return alive_ = false;
  for (std::size_t k = 0; k < trackers_.size(); ++k)
    if (!trackers_[k].push(l[k + 1])) return alive_ = false;
  return true;
}

bool ZGamma::contains(const Word& word, std::size_t lo, std::size_t hi) const {
  Scanner sc(*this);
  for (std::size_t i = lo; i < hi; ++i)
    if (!sc.push(word[i])) return false;
  return true;
}

bool z_membership(const Word& word, const ZGamma& z) { return z.contains(word); }

Window j_window(const Word& word, std::size_t center, const ZGamma& z) {
  if (center >= word.size()) throw DomainError("window center outside the word");
  std::size_t lmax = std::min(center + 1, word.size() - center);
  Window w;
  for (std::size_t l = 1; l <= lmax; ++l) {
    if (!z.contains(word, center + 1 - l, center + l)) return w;
    w.j = l;
  }
  w.boundary_capped = true;
  return w;
}

DecoratedLanguage::DecoratedLanguage(const ZGamma& z, int k) : z_(&z), k_(k) {
  if (k < 1) throw DomainError("decoration needs at least one fixed point");
}

bool DecoratedLanguage::contains(const Word& word, const std::vector<int>& decoration) const {
  if (decoration.size() != word.size()) return false;
  for (int d : decoration)
    if (d < 1 || d > k_ || d != decoration.front()) return false;
  return z_->contains(word);
}

std::uint64_t DecoratedLanguage::count(std::size_t n) const {
  std::uint64_t base = count_language(*z_, n);
  // decoration words over {1..k}^n that the fixed-point factor accepts
  std::uint64_t decos = 0;
  std::vector<int> d(n, 1);
  for (;;) {
    bool constant = true;
    for (int v : d) constant = constant && v == d.front();
    if (constant) ++decos;
    std::size_t i = 0;
    while (i < n && d[i] == k_) d[i++] = 1;
    if (i == n) break;
    ++d[i];
  }
  return base * decos;
}

DecoratedLanguage decorate(const ZGamma& z, int k) { return DecoratedLanguage(z, k); }

std::uint64_t count_language(const ZGamma& z, std::size_t n) {
  const int A = z.alphabet().size();
  double total = std::pow(static_cast<double>(A), static_cast<double>(n));
  if (total > 1e8) throw BudgetExceeded("exhaustive product-language count too large");
  Word w(n, 0);
  std::uint64_t count = 0;
  for (;;) {
    if (z.contains(w)) ++count;
    std::size_t i = n;
    while (i > 0 && w[i - 1] == A - 1) w[--i] = 0;
    if (i == 0) break;
    ++w[i - 1];
  }
  return count;
}

}  // namespace pforge::product
