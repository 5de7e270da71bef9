#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "map_model.hpp"

namespace raycensus {

struct FiniteAddress {
  std::vector<DomainLabel> entries;  // length >= 1

  std::size_t size() const noexcept { return entries.size(); }
  DomainLabel operator[](std::size_t i) const { return entries[i]; }
  friend bool operator==(const FiniteAddress&, const FiniteAddress&) = default;
};

// Eventually periodic sequence preperiod · period^∞, always kept canonical:
// the period is primitive and the preperiod is as short as possible.
class InfiniteAddress {
 public:
  // Throws Error(invalid_argument) when `period` is empty.
  InfiniteAddress(std::vector<DomainLabel> preperiod,
                  std::vector<DomainLabel> period);

  static InfiniteAddress periodic(std::vector<DomainLabel> period) {
    return InfiniteAddress({}, std::move(period));
  }
  static InfiniteAddress constant(std::int64_t k) {
    return periodic({DomainLabel(k)});
  }

  // Parses "pre:period" (comma separated integers) or just "period".
  // Throws Error(parse).
  static InfiniteAddress parse(std::string_view text);
  std::string to_string() const;

  const std::vector<DomainLabel>& preperiod() const noexcept { return pre_; }
  const std::vector<DomainLabel>& period() const noexcept { return period_; }

  DomainLabel entry(std::size_t i) const noexcept;
  bool is_periodic() const noexcept { return pre_.empty(); }
  // Largest |entry|.
  std::int64_t bound() const noexcept;

  friend auto operator<=>(const InfiniteAddress& a, const InfiniteAddress& b) {
    if (auto cmp = a.period_.size() <=> b.period_.size(); cmp != 0) return cmp;
    if (auto cmp = a.pre_.size() <=> b.pre_.size(); cmp != 0) return cmp;
    if (auto cmp = a.pre_ <=> b.pre_; cmp != 0) return cmp;
    return a.period_ <=> b.period_;
  }
  friend bool operator==(const InfiniteAddress&, const InfiniteAddress&) = default;

 private:
  void canonicalize();

  std::vector<DomainLabel> pre_;
  std::vector<DomainLabel> period_;
};

InfiniteAddress shift(const InfiniteAddress& s);
InfiniteAddress shift(const InfiniteAddress& s, std::size_t times);

// First m(n-1)+1 entries. Requires n >= 1 and m >= 1.
FiniteAddress project(const InfiniteAddress& s, int n, int m);

// Minimal p with σ^p(s) = s, or 0 when s is not purely periodic.
std::size_t period_of(const InfiniteAddress& s) noexcept;

// All purely periodic addresses whose period divides p and whose entries lie
// in [-K, K]; (2K+1)^p of them, sorted.
std::vector<InfiniteAddress> enumerate_periodic(int window, int p);

std::string to_string(const FiniteAddress& a);

}  // namespace raycensus
