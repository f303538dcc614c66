#include "growthlab/multi_index.hpp"

#include "growthlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace growthlab {

MultiIndex::MultiIndex(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) throw Error(Errc::InvalidArgument, "dimension must be in [1, 8]");
}

MultiIndex::MultiIndex(std::initializer_list<int> entries) : MultiIndex(static_cast<int>(entries.size())) {
  std::copy(entries.begin(), entries.end(), a_.begin());
  for (int v : entries)
    if (v < 0) throw Error(Errc::InvalidArgument, "negative multi-index entry");
}

MultiIndex MultiIndex::from(std::span<const int> entries) {
  MultiIndex m(static_cast<int>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i] < 0) throw Error(Errc::InvalidArgument, "negative multi-index entry");
    m.a_[i] = entries[i];
  }
  return m;
}

MultiIndex MultiIndex::unit(int dim, int i) {
  MultiIndex m(dim);
  m[i] = 1;
  return m;
}

int MultiIndex::order() const noexcept {
  int n = 0;
  for (int i = 0; i < dim_; ++i) n += a_[static_cast<std::size_t>(i)];
  return n;
}

double MultiIndex::factorial() const noexcept {
  double f = 1;
  for (int i = 0; i < dim_; ++i)
    for (int j = 2; j <= a_[static_cast<std::size_t>(i)]; ++j) f *= j;
  return f;
}

std::vector<int> MultiIndex::entries() const { return {a_.begin(), a_.begin() + dim_}; }

std::string MultiIndex::str() const {
  std::string out = "(";
  for (int i = 0; i < dim_; ++i) {
    if (i) out += ",";
    out += std::to_string(a_[static_cast<std::size_t>(i)]);
  }
  return out + ")";
}

namespace {

void fill_order(int dim, int pos, int remaining, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (pos == dim - 1) {
    cur[pos] = remaining;
    out.push_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[pos] = v;
    fill_order(dim, pos + 1, remaining - v, cur, out);
  }
  cur[pos] = 0;
}

double binomial(int n, int k) {
  double b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace

std::vector<MultiIndex> multi_indices_of_order(int dim, int order) {
  MultiIndex cur(dim);
  std::vector<MultiIndex> out;
  fill_order(dim, 0, order, cur, out);
  return out;
}

double monomial(const MultiIndex& alpha, std::span<const double> x) {
  double v = 1;
  for (int i = 0; i < alpha.dim(); ++i)
    for (int e = 0; e < alpha[i]; ++e) v *= x[static_cast<std::size_t>(i)];
  return v;
}

MultiIndexTable::MultiIndexTable(int dim, int max_order) : dim_(dim), max_order_(max_order) {
  offsets_.push_back(0);
  for (int m = 0; m <= max_order; ++m) {
    auto level = multi_indices_of_order(dim, m);
    indices_.insert(indices_.end(), level.begin(), level.end());
    offsets_.push_back(indices_.size());
  }
  leibniz_.resize(indices_.size());
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    const MultiIndex& alpha = indices_[i];
    for (std::size_t b = 0; b < indices_.size() && indices_[b].order() <= alpha.order(); ++b) {
      const MultiIndex& beta = indices_[b];
      MultiIndex gamma(dim);
      double c = 1;
      bool below = true;
      for (int d = 0; d < dim && below; ++d) {
        if (beta[d] > alpha[d]) below = false;
        else {
          gamma[d] = alpha[d] - beta[d];
          c *= binomial(alpha[d], beta[d]);
        }
      }
      if (below) leibniz_[i].push_back({static_cast<int>(b), index_of(gamma), c});
    }
  }
  raise_.assign(indices_.size() * static_cast<std::size_t>(dim), -1);
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i].order() == max_order) continue;
    for (int d = 0; d < dim; ++d) {
      MultiIndex up = indices_[i];
      up[d] += 1;
      raise_[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)] = index_of(up);
    }
  }
}

int MultiIndexTable::index_of(const MultiIndex& alpha) const {
  int m = alpha.order();
  if (alpha.dim() != dim_ || m > max_order_) return -1;
  auto first = indices_.begin() + static_cast<std::ptrdiff_t>(offsets_[static_cast<std::size_t>(m)]);
  auto last = indices_.begin() + static_cast<std::ptrdiff_t>(offsets_[static_cast<std::size_t>(m) + 1]);
  // Within one order the entries are sorted in descending lexicographic order.
  auto it = std::lower_bound(first, last, alpha, [](const MultiIndex& a, const MultiIndex& b) { return a > b; });
  if (it == last || *it != alpha) return -1;
  return static_cast<int>(it - indices_.begin());
}

const MultiIndexTable& MultiIndexTable::get(int dim, int max_order) {
  if (dim < 1 || dim > kMaxDim) throw Error(Errc::InvalidArgument, "dimension must be in [1, 8]");
  if (max_order < 0 || max_order > kMaxOracleOrder)
    throw Error(Errc::OrderTooHigh, "derivative tables are limited to order " + std::to_string(kMaxOracleOrder));
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<MultiIndexTable>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dim, max_order}];
  if (!slot) slot.reset(new MultiIndexTable(dim, max_order));
  return *slot;
}

}  // namespace growthlab
