#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace growthlab {

inline constexpr int kMaxDim = 8;
// Highest derivative order carried by analytic oracles.
inline constexpr int kMaxOracleOrder = 6;

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(int dim);
  MultiIndex(std::initializer_list<int> entries);
  static MultiIndex from(std::span<const int> entries);
  static MultiIndex unit(int dim, int i);

  int dim() const noexcept { return dim_; }
  int order() const noexcept;
  double factorial() const noexcept;  // alpha!
  int operator[](int i) const { return a_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return a_[static_cast<std::size_t>(i)]; }
  std::vector<int> entries() const;
  std::string str() const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::array<int, kMaxDim> a_{};
  int dim_ = 0;
};

// All multi-indices of exactly the given order, first coordinate descending.
std::vector<MultiIndex> multi_indices_of_order(int dim, int order);

double monomial(const MultiIndex& alpha, std::span<const double> x);

// All |alpha| <= max_order in graded order with Leibniz and lookup tables.
class MultiIndexTable {
 public:
  struct LeibnizTerm {
    int beta;   // index of beta <= alpha
    int gamma;  // index of alpha - beta
    double binom;
  };

  static const MultiIndexTable& get(int dim, int max_order);

  int dim() const noexcept { return dim_; }
  int max_order() const noexcept { return max_order_; }
  std::size_t size() const noexcept { return indices_.size(); }
  std::size_t size_up_to(int order) const { return offsets_[static_cast<std::size_t>(order) + 1]; }
  std::size_t offset(int order) const { return offsets_[static_cast<std::size_t>(order)]; }
  const MultiIndex& at(std::size_t i) const { return indices_[i]; }
  int index_of(const MultiIndex& alpha) const;
  const std::vector<LeibnizTerm>& leibniz(std::size_t i) const { return leibniz_[i]; }
  // Index of alpha + e_i, or -1 when the order would exceed max_order.
  int raise(std::size_t alpha, int i) const { return raise_[alpha * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i)]; }

 private:
  MultiIndexTable(int dim, int max_order);
  int dim_;
  int max_order_;
  std::vector<MultiIndex> indices_;
  std::vector<std::size_t> offsets_;
  std::vector<std::vector<LeibnizTerm>> leibniz_;
  std::vector<int> raise_;
};

}  // namespace growthlab
