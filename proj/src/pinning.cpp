#include "pforge/pinning.hpp"

#include "pforge/errors.hpp"

namespace pforge::pinning {

ZOracle::ZOracle(std::vector<std::shared_ptr<product::ZGamma>> members) : members_(std::move(members)) {
  if (members_.empty()) throw EmptyInput("L(Z) oracle needs at least one member");
}

bool ZOracle::contains(const product::Word& word, std::size_t lo, std::size_t hi) const {
  for (const auto& z : members_)
    if (z->contains(word, lo, hi)) return true;
  return false;
}

std::vector<std::size_t> ZOracle::witnesses(const product::Word& word, std::size_t lo, std::size_t hi) const {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < members_.size(); ++g)
    if (members_[g]->contains(word, lo, hi)) out.push_back(g);
  return out;
}

namespace {

std::vector<int> segment_weights(const product::ProductAlphabet& a, const product::Word& w, std::size_t lo,
                                 std::size_t hi) {
  std::vector<int> out(static_cast<std::size_t>(a.components()), 0);
  for (std::size_t i = lo; i < hi; ++i)
    for (int k = 0; k < a.components(); ++k) out[static_cast<std::size_t>(k)] += a.component(w[i], k);
  return out;
}

}  // namespace

PinRecord greedy_pins(const product::Word& word, const ZOracle& oracle, std::size_t start) {
  PinRecord rec;
  rec.word_length = word.size();
  if (start >= word.size()) return rec;
  std::vector<product::ZGamma::Scanner> scanners;
  for (const auto& z : oracle.members()) scanners.emplace_back(*z);
  std::size_t k = start;
  while (k < word.size()) {
    rec.pins.push_back(k);
    for (auto& s : scanners) s.reset();
    std::size_t m = k;
    bool failed = false;
    for (; m < word.size(); ++m) {
      bool any = false;
      for (auto& s : scanners)
        if (s.alive() && s.push(word[m])) any = true;
      if (!any) {
        failed = true;
        break;
      }
    }
    if (failed && m == k)
      throw NotInZ("letter at position " + std::to_string(k) + " is outside L(Z)");
    Segment seg;
    seg.start = k;
    seg.length = m - k;
    seg.weights = segment_weights(oracle.alphabet(), word, k, m);
    seg.terminal = !failed;
    rec.segments.push_back(seg);
    k = m;
  }
  return rec;
}

double PartitionStats::q(std::size_t j) const {
  auto it = q_counts.find(j);
  return it == q_counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(segments);
}

double PartitionStats::r(std::size_t j, const std::vector<int>& weights) const {
  auto it = r_counts.find({j, weights});
  return it == r_counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(segments);
}

double PartitionStats::mean_return() const {
  return static_cast<double>(total_length) / static_cast<double>(pins);
}

PartitionStats partition_stats(const std::vector<PinRecord>& records) {
  if (records.empty()) throw EmptyInput("partition_stats needs at least one record");
  PartitionStats st;
  for (const auto& rec : records) {
    st.pins += rec.pins.size();
    for (const auto& seg : rec.segments) {
      ++st.segments;
      st.total_length += seg.length;
      ++st.q_counts[seg.length];
      ++st.r_counts[{seg.length, seg.weights}];
    }
  }
  if (st.segments == 0) throw EmptyInput("records contain no segments");
  return st;
}

GammaCell gamma_locate(const product::Word& segment, const ZOracle& oracle) {
  if (segment.empty()) throw DomainError("gamma_locate needs a non-empty segment");
  GammaCell out;
  out.witnesses = oracle.witnesses(segment, 0, segment.size());
  if (out.witnesses.empty()) throw NotInZ("segment is not in the language of any Z_gamma");
  const auto& a = oracle.alphabet();
  std::vector<int> w = segment_weights(a, segment, 0, segment.size());
  auto j = static_cast<std::int64_t>(segment.size());
  for (int k = 1; k < a.components(); ++k)
    out.cells.emplace_back(Rational(w[static_cast<std::size_t>(k)] - 1, j), Rational(w[static_cast<std::size_t>(k)] + 1, j));
  for (std::size_t g : out.witnesses) {
    const auto& gv = oracle.members()[g]->gamma();
    for (std::size_t k = 0; k < out.cells.size(); ++k) {
      const Rational& s = k == 0 ? gv.gamma0 : gv.slopes[k - 1];
      if (!(out.cells[k].first < s && s < out.cells[k].second))
        throw Error("located cell misses a witnessing gamma");
    }
  }
  return out;
}

}  // namespace pforge::pinning
