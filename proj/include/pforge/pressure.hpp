#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pforge/convex_model.hpp"
#include "pforge/potential.hpp"

namespace pforge::pressure {

struct Budget {
  /// Cap on |A|^n words per partition sum.
  double max_words = 1.2e8;
  /// Cap on the memory of the window value tables.
  double max_table_bytes = 2.0e9;
  /// Wall-clock cap per partition sum in seconds; <= 0 disables it.
  double time_limit_s = 0.0;
  /// Subtrees whose bound is below this fraction of the running sum are pruned.
  double prune_relative = 1e-12;
};

struct UpperResult {
  /// (1/n) ln of the partition sum, pruned subtrees counted at their bound.
  double value = 0.0;
  /// Amount by which pruning can have raised `value`: (1/n) ln(Z / (Z - pruned)).
  double pruned_mass_bound = 0.0;
  double log_partition = 0.0;
  std::uint64_t leaves = 0;
  std::uint64_t pruned_subtrees = 0;
};

/// Window value tables: V_k[L][code] for odd L, the optimistic phi_k at the
/// centre of a maximal window u of length L (prefix or suffix of the word).
class WindowTables {
 public:
  WindowTables(const potential::PotentialSpec& spec, std::size_t n, const Budget& budget = {});
  std::size_t n() const { return n_; }
  std::size_t alphabet_size() const { return A_; }
  std::size_t value_count() const { return K_; }
  /// Tables for decoration letter d (1-based) share the gamma mask of every
  /// letter with the same multiplicity group.
  double value(std::size_t group, std::size_t k, std::size_t L, std::uint64_t code) const;
  std::size_t groups() const { return group_mult_.size(); }
  std::uint64_t multiplicity(std::size_t group) const { return group_mult_[group]; }

 private:
  friend UpperResult upper_from_tables(const WindowTables& tables, const convex::Vec& t, const Budget& budget);
  std::size_t n_ = 0, A_ = 0, K_ = 0;
  std::vector<std::uint64_t> group_mult_;
  // values_[group][k][L] with L odd; index L holds A^L entries
  std::vector<std::vector<std::vector<std::vector<double>>>> values_;
};

UpperResult upper_from_tables(const WindowTables& tables, const convex::Vec& t, const Budget& budget = {});
UpperResult upper_pressure(const potential::PotentialSpec& spec, const convex::Vec& t, std::size_t n,
                           const Budget& budget = {});

/// Max over the gamma grid of gamma0 + t . values(gamma).
double lower_pressure(const potential::PotentialSpec& spec, const convex::Vec& t);

struct PressureRow {
  convex::Vec t;
  std::size_t n = 0;
  double upper = 0.0;
  double lower = 0.0;
  double target = 0.0;
  double gap = 0.0;
  double gamma_grid_spacing = 0.0;
  double pruned_mass_bound = 0.0;
  bool budget_exceeded = false;
  std::string error;
};

std::vector<PressureRow> sandwich(const potential::PotentialSpec& spec, const std::vector<convex::Vec>& t_list,
                                  const std::vector<std::size_t>& n_list, const Budget& budget = {});

}  // namespace pforge::pressure
