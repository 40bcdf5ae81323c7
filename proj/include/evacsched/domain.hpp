#pragma once

#include <algorithm>
#include <optional>
#include <vector>

namespace evacsched {

/// Finite integer domain: a contiguous interval [lb, ub], or an explicit
/// sorted value set (used for restricted flow-rate sets). Empty when lb > ub.
class IntDomain {
public:
  IntDomain() : lo_(0), hi_(-1) {}
  IntDomain(int lo, int hi) : lo_(lo), hi_(hi) {}

  static IntDomain singleton(int v) { return IntDomain(v, v); }

  static IntDomain of_values(std::vector<int> vals) {
    IntDomain d;
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    if (vals.empty()) return d;
    d.lo_ = vals.front();
    d.hi_ = vals.back();
    if (static_cast<int>(vals.size()) != d.hi_ - d.lo_ + 1) d.values_ = std::move(vals);
    return d;
  }

  bool empty() const { return lo_ > hi_; }
  bool fixed() const { return lo_ == hi_; }
  int lb() const { return lo_; }
  int ub() const { return hi_; }
  int value() const { return lo_; }  // meaningful only when fixed()

  long long size() const {
    if (empty()) return 0;
    if (values_) return static_cast<long long>(values_->size());
    return static_cast<long long>(hi_) - lo_ + 1;
  }

  bool contains(int v) const {
    if (v < lo_ || v > hi_) return false;
    if (!values_) return true;
    return std::binary_search(values_->begin(), values_->end(), v);
  }

  // Mutators return true when the domain changed. They may empty the domain;
  // callers detect failure via empty().
  bool tighten_min(int v) {
    if (v <= lo_) return false;
    lo_ = v;
    normalize();
    return true;
  }

  bool tighten_max(int v) {
    if (v >= hi_) return false;
    hi_ = v;
    normalize();
    return true;
  }

  bool assign(int v) {
    if (fixed() && lo_ == v) return false;
    if (!contains(v)) {
      lo_ = 0;
      hi_ = -1;
      values_.reset();
      return true;
    }
    lo_ = hi_ = v;
    values_.reset();
    return true;
  }

  /// Keep only values present in `allowed` (sorted not required).
  bool intersect_values(const std::vector<int>& allowed) {
    std::vector<int> kept;
    for (int v : allowed)
      if (contains(v)) kept.push_back(v);
    IntDomain next = of_values(std::move(kept));
    bool changed = next.lo_ != lo_ || next.hi_ != hi_ || next.values_.has_value() != values_.has_value();
    *this = std::move(next);
    return changed;
  }

  bool operator==(const IntDomain& o) const {
    if (empty() && o.empty()) return true;
    if (lo_ != o.lo_ || hi_ != o.hi_) return false;
    if (values_.has_value() != o.values_.has_value()) return false;
    return !values_ || *values_ == *o.values_;
  }

private:
  void normalize() {
    if (lo_ > hi_) {
      values_.reset();
      return;
    }
    if (!values_) return;
    auto lo = std::lower_bound(values_->begin(), values_->end(), lo_);
    auto hi = std::upper_bound(values_->begin(), values_->end(), hi_);
    if (lo == hi) {
      lo_ = 0;
      hi_ = -1;
      values_.reset();
      return;
    }
    values_->assign(lo, hi);
    lo_ = values_->front();
    hi_ = values_->back();
    if (static_cast<int>(values_->size()) == hi_ - lo_ + 1) values_.reset();
  }

  int lo_, hi_;
  std::optional<std::vector<int>> values_;  // engaged only when the set has holes
};

}  // namespace evacsched
