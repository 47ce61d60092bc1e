#include "pforge/pressure.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>

#include "pforge/errors.hpp"
#include "pforge/logsum.hpp"
#include "pforge/parallel.hpp"

namespace pforge::pressure {

namespace {

using potential::PotentialSpec;

template <int W>
struct Mask {
  std::array<std::uint64_t, W> w{};

  static Mask all(std::size_t bits) {
    Mask m;
    for (std::size_t b = 0; b < bits; ++b) m.set(b);
    return m;
  }
  void set(std::size_t b) { w[b / 64] |= std::uint64_t{1} << (b % 64); }
  bool any() const {
    for (auto x : w)
      if (x) return true;
    return false;
  }
  int first() const {
    for (int i = 0; i < W; ++i)
      if (w[i]) return i * 64 + std::countr_zero(w[i]);
    return -1;
  }
  Mask operator&(const Mask& o) const {
    Mask r;
    for (int i = 0; i < W; ++i) r.w[i] = w[i] & o.w[i];
    return r;
  }
  Mask minus(const Mask& o) const {
    Mask r;
    for (int i = 0; i < W; ++i) r.w[i] = w[i] & ~o.w[i];
    return r;
  }
  bool operator<(const Mask& o) const { return w < o.w; }
  template <class F>
  void for_each(F&& f) const {
    for (int i = 0; i < W; ++i) {
      std::uint64_t x = w[i];
      while (x) {
        f(i * 64 + std::countr_zero(x));
        x &= x - 1;
      }
    }
  }
};

std::uint64_t ipow(std::uint64_t base, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

// Per-component admissibility masks for every odd window length.
template <int W>
struct ComponentMasks {
  // masks[c][L][component code]
  std::vector<std::vector<std::vector<Mask<W>>>> masks;
};

template <int W>
ComponentMasks<W> component_masks(const PotentialSpec& spec, const std::vector<std::size_t>& order, std::size_t n) {
  const auto& alpha = spec.alphabet;
  const int C = alpha.components();
  ComponentMasks<W> out;
  out.masks.resize(static_cast<std::size_t>(C));
  for (int c = 0; c < C; ++c) {
    const std::uint64_t r = static_cast<std::uint64_t>(alpha.radix(c));
    out.masks[c].resize(n + 1);
    for (std::size_t L = 1; L <= n; L += 2) out.masks[c][L].assign(ipow(r, L), Mask<W>{});
    for (std::size_t b = 0; b < order.size(); ++b) {
      const product::ZGamma& z = *spec.members[order[b]];
      if (c == 0) {
        const beta::BetaLanguage& bl = z.beta_language();
        bl.digit(n + 1);
        std::vector<int> prev{0}, cur;
        for (std::size_t L = 1; L <= n; ++L) {
          cur.assign(prev.size() * r, -1);
          for (std::size_t code = 0; code < prev.size(); ++code) {
            if (prev[code] < 0) continue;
            for (std::uint64_t d = 0; d < r; ++d) {
              int digit = alpha.lo(0) + static_cast<int>(d);
              cur[code * r + d] = bl.step(prev[code], static_cast<beta::Digit>(digit));
            }
          }
          if (L % 2 == 1)
            for (std::size_t code = 0; code < cur.size(); ++code)
              if (cur[code] >= 0) out.masks[c][L][code].set(b);
          prev.swap(cur);
        }
      } else {
        const Rational& slope = c == 1 ? z.gamma().gamma0 : z.gamma().slopes[static_cast<std::size_t>(c - 2)];
        std::vector<std::optional<sturmian::Tracker>> prev, cur;
        prev.emplace_back(sturmian::Tracker(slope));
        for (std::size_t L = 1; L <= n; ++L) {
          cur.assign(prev.size() * r, std::nullopt);
          for (std::size_t code = 0; code < prev.size(); ++code) {
            if (!prev[code]) continue;
            for (std::uint64_t d = 0; d < r; ++d) {
              sturmian::Tracker t = *prev[code];
              if (t.push(alpha.lo(c) + static_cast<int>(d))) cur[code * r + d] = t;
            }
          }
          if (L % 2 == 1)
            for (std::size_t code = 0; code < cur.size(); ++code)
              if (cur[code]) out.masks[c][L][code].set(b);
          prev.swap(cur);
        }
      }
    }
  }
  return out;
}

struct Layout {
  std::size_t A = 0, K = 0, G = 0;
  std::vector<std::size_t> order;        // bit -> grid index
  std::vector<std::vector<double>> val;  // val[k][bit]
  bool sorted = false;                   // K == 1 with bits by descending value
};

Layout make_layout(const PotentialSpec& spec) {
  Layout lay;
  lay.A = static_cast<std::size_t>(spec.alphabet.size());
  lay.K = spec.value_count();
  lay.G = spec.grid.size();
  lay.order.resize(lay.G);
  std::iota(lay.order.begin(), lay.order.end(), 0);
  if (lay.K == 1) {
    std::stable_sort(lay.order.begin(), lay.order.end(), [&](std::size_t a, std::size_t b) {
      return spec.grid[a].values[0] > spec.grid[b].values[0];
    });
    lay.sorted = true;
  }
  lay.val.assign(lay.K, std::vector<double>(lay.G));
  for (std::size_t k = 0; k < lay.K; ++k)
    for (std::size_t b = 0; b < lay.G; ++b) lay.val[k][b] = spec.grid[lay.order[b]].values[k];
  return lay;
}

template <int W>
double mask_max(const Layout& lay, const Mask<W>& m, std::size_t k) {
  if (lay.sorted) return lay.val[0][static_cast<std::size_t>(m.first())];
  double best = -std::numeric_limits<double>::infinity();
  m.for_each([&](int b) { best = std::max(best, lay.val[k][static_cast<std::size_t>(b)]); });
  return best;
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <int W>
void build_tables(const PotentialSpec& spec, std::size_t n, const Budget& budget, std::size_t& A_out,
                  std::size_t& K_out, std::vector<std::uint64_t>& mult,
                  std::vector<std::vector<std::vector<std::vector<double>>>>& values) {
  Layout lay = make_layout(spec);
  const std::size_t A = lay.A, K = lay.K;
  A_out = A;
  K_out = K;
  const int C = spec.alphabet.components();

  // decoration groups: letter d in 1..ell admits the gammas with k(gamma) >= d
  std::map<Mask<W>, std::uint64_t> groups;
  for (int d = 1; d <= spec.decorations; ++d) {
    Mask<W> m;
    for (std::size_t b = 0; b < lay.G; ++b)
      if (spec.decorations >= d) m.set(b);
    ++groups[m];
  }

  double table_bytes = 0;
  for (std::size_t L = 1; L <= n; L += 2) table_bytes += static_cast<double>(ipow(A, L)) * 8.0 * K * groups.size();
  table_bytes += 2.0 * static_cast<double>(ipow(A, n - (n % 2 == 0 ? 1 : 0))) * (8.0 * W + 8.0 * K);
  if (table_bytes > budget.max_table_bytes) throw BudgetExceeded("window tables exceed the memory budget");

  ComponentMasks<W> cm = component_masks<W>(spec, lay.order, n);
  std::vector<std::uint64_t> radix(static_cast<std::size_t>(C));
  for (int c = 0; c < C; ++c) radix[c] = static_cast<std::uint64_t>(spec.alphabet.radix(c));
  std::vector<std::vector<std::uint64_t>> letter_digit(A, std::vector<std::uint64_t>(static_cast<std::size_t>(C)));
  for (std::size_t a = 0; a < A; ++a)
    for (int c = 0; c < C; ++c)
      letter_digit[a][c] = static_cast<std::uint64_t>(spec.alphabet.component(static_cast<int>(a), c) - spec.alphabet.lo(c));

  for (const auto& [gmask, count] : groups) {
    mult.push_back(count);
    auto& gv = values.emplace_back(K, std::vector<std::vector<double>>(n + 1));
    std::vector<Mask<W>> full_prev{Mask<W>::all(lay.G) & gmask};
    std::vector<std::vector<double>> nf_prev(K, std::vector<double>{kNegInf});
    std::vector<std::uint64_t> cc(static_cast<std::size_t>(C));
    for (std::size_t L = 1; L <= n; L += 2) {
      const std::uint64_t size = ipow(A, L);
      const std::uint64_t inner_size = L >= 3 ? ipow(A, L - 2) : 1;
      const double pen = spec.delta((L - 1) / 2);
      std::vector<Mask<W>> full(size);
      std::vector<std::vector<double>> nf(K, std::vector<double>(size));
      for (std::size_t k = 0; k < K; ++k) gv[k][L].resize(size);
      for (std::uint64_t code = 0; code < size; ++code) {
        std::fill(cc.begin(), cc.end(), 0);
        std::uint64_t rest = code;
        std::vector<std::uint64_t> pw(static_cast<std::size_t>(C), 1);
        for (std::size_t i = 0; i < L; ++i) {
          std::uint64_t a = rest % A;
          rest /= A;
          for (int c = 0; c < C; ++c) {
            cc[c] += letter_digit[a][c] * pw[c];
            pw[c] *= radix[c];
          }
        }
        Mask<W> m = gmask;
        for (int c = 0; c < C; ++c) m = m & cm.masks[c][L][cc[c]];
        full[code] = m;
        const std::uint64_t inner = L >= 3 ? (code / A) % inner_size : 0;
        Mask<W> failing = full_prev[inner].minus(m);
        for (std::size_t k = 0; k < K; ++k) {
          double v = nf_prev[k][inner];
          if (failing.any()) v = std::max(v, mask_max(lay, failing, k) - pen);
          nf[k][code] = v;
          double best = v;
          if (m.any()) best = std::max(best, mask_max(lay, m, k));
          gv[k][L][code] = best;
        }
      }
      full_prev.swap(full);
      nf_prev.swap(nf);
    }
  }
}

}  // namespace

WindowTables::WindowTables(const PotentialSpec& spec, std::size_t n, const Budget& budget) : n_(n) {
  if (n == 0) throw DomainError("window length must be at least 1");
  if (spec.grid.empty()) throw EmptySample("potential has an empty gamma grid");
  const double words = std::pow(static_cast<double>(spec.alphabet.size()), static_cast<double>(n));
  if (words > budget.max_words)
    throw BudgetExceeded("|A|^n = " + std::to_string(words) + " exceeds the word budget");
  const std::size_t G = spec.grid.size();
  if (G <= 64)
    build_tables<1>(spec, n, budget, A_, K_, group_mult_, values_);
  else if (G <= 128)
    build_tables<2>(spec, n, budget, A_, K_, group_mult_, values_);
  else if (G <= 256)
    build_tables<4>(spec, n, budget, A_, K_, group_mult_, values_);
  else if (G <= 512)
    build_tables<8>(spec, n, budget, A_, K_, group_mult_, values_);
  else
    throw BudgetExceeded("gamma grid larger than 512 points");
}

double WindowTables::value(std::size_t group, std::size_t k, std::size_t L, std::uint64_t code) const {
  return values_.at(group).at(k).at(L).at(code);
}

namespace {

struct ShardResult {
  LogSumExp main;
  LogSumExp pruned;
  std::uint64_t leaves = 0;
  std::uint64_t pruned_subtrees = 0;
};

struct Enumerator {
  std::size_t n, A;
  const std::vector<std::vector<double>>* T;  // T[L][code]
  std::vector<double> rem_bound;              // bound on the contributions still to come at depth d
  std::vector<std::size_t> suffix_lengths;
  std::vector<std::uint64_t> suffix_mod;
  double log_A;
  double log_prune;
  double seed_log;
  std::chrono::steady_clock::time_point deadline;
  bool timed;

  void explore(std::size_t d, std::uint64_t code, double known, ShardResult& out) const {
    if (d == n) {
      double e = known;
      for (std::size_t s = 0; s < suffix_lengths.size(); ++s)
        e += (*T)[suffix_lengths[s]][code % suffix_mod[s]];
      out.main.add_log(e);
      ++out.leaves;
      return;
    }
    double bound = known + rem_bound[d] + static_cast<double>(n - d) * log_A;
    double ref = std::max(seed_log, out.main.log());
    if (bound < ref + log_prune) {
      out.pruned.add_log(bound);
      ++out.pruned_subtrees;
      return;
    }
    const bool odd = (d + 1) % 2 == 1;
    for (std::size_t a = 0; a < A; ++a) {
      std::uint64_t c = code * A + a;
      explore(d + 1, c, odd ? known + (*T)[d + 1][c] : known, out);
    }
  }
};

}  // namespace

UpperResult upper_from_tables(const WindowTables& tables, const convex::Vec& t, const Budget& budget) {
  if (t.size() != tables.K_) throw DomainError("t has the wrong number of components");
  const std::size_t n = tables.n_, A = tables.A_;
  LogSumExp total_main, total_all;
  UpperResult res;
  for (std::size_t g = 0; g < tables.values_.size(); ++g) {
    std::vector<std::vector<double>> T(n + 1);
    std::vector<double> tmax(n + 1, 0.0);
    for (std::size_t L = 1; L <= n; L += 2) {
      const auto& base = tables.values_[g][0][L];
      T[L].assign(base.size(), 0.0);
      for (std::size_t k = 0; k < tables.K_; ++k) {
        const auto& v = tables.values_[g][k][L];
        for (std::size_t i = 0; i < v.size(); ++i) T[L][i] += t[k] * v[i];
      }
      tmax[L] = *std::max_element(T[L].begin(), T[L].end());
    }
    Enumerator en;
    en.n = n;
    en.A = A;
    en.T = &T;
    const std::size_t P = (n - 1) / 2;  // prefix positions 0..P
    for (std::size_t i = P + 1; i < n; ++i) {
      std::size_t Ls = 2 * (n - i) - 1;
      en.suffix_lengths.push_back(Ls);
      en.suffix_mod.push_back(ipow(A, Ls));
    }
    en.rem_bound.assign(n + 1, 0.0);
    double suffix_bound = 0;
    for (std::size_t Ls : en.suffix_lengths) suffix_bound += tmax[Ls];
    for (std::size_t d = 0; d <= n; ++d) {
      double b = suffix_bound;
      for (std::size_t L = d + 1; L <= n; ++L)
        if (L % 2 == 1) b += tmax[L];
      en.rem_bound[d] = b;
    }
    en.log_A = std::log(static_cast<double>(A));
    en.log_prune = std::log(budget.prune_relative);
    // the all-zero word is a genuine term of the sum
    double seed = 0;
    for (std::size_t L = 1; L <= n; L += 2) seed += T[L][0];
    for (std::size_t Ls : en.suffix_lengths) seed += T[Ls][0];
    en.seed_log = seed;
    en.timed = budget.time_limit_s > 0;
    en.deadline = std::chrono::steady_clock::now() +
                  std::chrono::microseconds(static_cast<long long>(budget.time_limit_s * 1e6));

    std::size_t s = 0;
    while (s < n && ipow(A, s) < 4096) ++s;
    const std::uint64_t shards = ipow(A, s);
    std::vector<ShardResult> parts(shards);
    parallel_for(shards, [&](std::size_t idx) {
      if (en.timed && std::chrono::steady_clock::now() > en.deadline)
        throw BudgetExceeded("partition sum exceeded the time limit");
      double known = 0;
      for (std::size_t d = 1; d <= s; d += 2) known += T[d][idx / ipow(A, s - d)];
      en.explore(s, idx, known, parts[idx]);
    });
    LogSumExp main, all;
    for (const auto& p : parts) {
      main.merge(p.main);
      all.merge(p.main);
      all.merge(p.pruned);
      res.leaves += p.leaves;
      res.pruned_subtrees += p.pruned_subtrees;
    }
    double lm = std::log(static_cast<double>(tables.group_mult_[g]));
    LogSumExp gm, ga;
    gm.add_log(main.log() + lm);
    ga.add_log(all.log() + lm);
    total_main.merge(gm);
    total_all.merge(ga);
  }
  res.log_partition = total_all.log();
  res.value = res.log_partition / static_cast<double>(n);
  res.pruned_mass_bound = (res.log_partition - total_main.log()) / static_cast<double>(n);
  return res;
}

UpperResult upper_pressure(const PotentialSpec& spec, const convex::Vec& t, std::size_t n, const Budget& budget) {
  for (double x : t)
    if (!(x > spec.target.alpha)) throw DomainError("upper_pressure needs t > alpha");
  WindowTables tables(spec, n, budget);
  return upper_from_tables(tables, t, budget);
}

double lower_pressure(const PotentialSpec& spec, const convex::Vec& t) {
  if (t.size() != spec.value_count()) throw DomainError("t has the wrong number of components");
  for (double x : t)
    if (!(x > spec.target.alpha)) throw DomainError("lower_pressure needs t > alpha");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : spec.grid) {
    double v = p.gamma.gamma0.to_double();
    for (std::size_t k = 0; k < t.size(); ++k) v += t[k] * p.values[k];
    best = std::max(best, v);
  }
  return best;
}

std::vector<PressureRow> sandwich(const PotentialSpec& spec, const std::vector<convex::Vec>& t_list,
                                  const std::vector<std::size_t>& n_list, const Budget& budget) {
  std::vector<PressureRow> rows(t_list.size() * n_list.size());
  for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
    for (double x : t_list[ti])
      if (!(x > spec.target.alpha)) throw DomainError("sandwich needs every t > alpha");
    for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
      PressureRow& r = rows[ti * n_list.size() + ni];
      r.t = t_list[ti];
      r.n = n_list[ni];
      r.lower = lower_pressure(spec, t_list[ti]);
      r.target = convex::eval_target(spec.target, t_list[ti]);
      r.gamma_grid_spacing = spec.eta;
    }
  }
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    std::optional<WindowTables> tables;
    std::string failure;
    try {
      tables.emplace(spec, n_list[ni], budget);
    } catch (const BudgetExceeded& e) {
      failure = e.what();
    }
    for (std::size_t ti = 0; ti < t_list.size(); ++ti) {
      PressureRow& r = rows[ti * n_list.size() + ni];
      if (tables) {
        try {
          UpperResult u = upper_from_tables(*tables, t_list[ti], budget);
          r.upper = u.value;
          r.pruned_mass_bound = u.pruned_mass_bound;
          r.gap = r.upper - r.lower;
          if (!(r.lower <= r.upper)) throw Error("sandwich soundness violated: lower > upper");
          continue;
        } catch (const BudgetExceeded& e) {
          failure = e.what();
        }
      }
      r.budget_exceeded = true;
      r.error = failure;
      r.upper = std::numeric_limits<double>::quiet_NaN();
      r.gap = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return rows;
}

}  // namespace pforge::pressure
