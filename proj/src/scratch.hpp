#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace growthlab::detail {

// Small buffer for derivative tables; spills to the heap only for large tables.
class Scratch {
 public:
  explicit Scratch(std::size_t n) : n_(n) {
    if (n_ > inline_.size()) heap_.resize(n_);
  }
  std::span<double> span() {
    return n_ > inline_.size() ? std::span<double>(heap_) : std::span<double>(inline_.data(), n_);
  }
  double& operator[](std::size_t i) { return span()[i]; }

 private:
  std::array<double, 256> inline_;
  std::vector<double> heap_;
  std::size_t n_;
};

inline double norm(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace growthlab::detail
