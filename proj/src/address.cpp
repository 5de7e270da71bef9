#include "address.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

#include "error.hpp"

namespace raycensus {

namespace {

// Length of the shortest word u with w = u^j.
std::size_t primitive_length(const std::vector<DomainLabel>& w) {
  const std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool repeats = true;
    for (std::size_t i = d; i < n && repeats; ++i) repeats = w[i] == w[i - d];
    if (repeats) return d;
  }
  return n;
}

std::vector<DomainLabel> parse_list(std::string_view text) {
  std::vector<DomainLabel> out;
  if (text.empty()) fail(ErrorCode::parse, "empty label list");
  std::size_t pos = 0;
  for (;;) {
    std::size_t comma = text.find(',', pos);
    std::string_view token = text.substr(
        pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    if (token.empty())
      fail(ErrorCode::parse, "empty label in address '" + std::string(text) + "'");
    std::int64_t value = 0;
    auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || end != token.data() + token.size())
      fail(ErrorCode::parse, "bad label '" + std::string(token) + "'");
    out.emplace_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

void append_list(std::string& out, const std::vector<DomainLabel>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(labels[i].k);
  }
}

}  // namespace

InfiniteAddress::InfiniteAddress(std::vector<DomainLabel> preperiod,
                                 std::vector<DomainLabel> period)
    : pre_(std::move(preperiod)), period_(std::move(period)) {
  if (period_.empty())
    fail(ErrorCode::invalid_argument, "address period must be nonempty");
  canonicalize();
}

void InfiniteAddress::canonicalize() {
  period_.resize(primitive_length(period_));
  while (!pre_.empty() && pre_.back() == period_.back()) {
    std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
    pre_.pop_back();
  }
}

InfiniteAddress InfiniteAddress::parse(std::string_view text) {
  std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) return periodic(parse_list(text));
  if (text.find(':', colon + 1) != std::string_view::npos)
    fail(ErrorCode::parse, "more than one ':' in address");
  return InfiniteAddress(parse_list(text.substr(0, colon)),
                         parse_list(text.substr(colon + 1)));
}

std::string InfiniteAddress::to_string() const {
  std::string out;
  if (!pre_.empty()) {
    append_list(out, pre_);
    out += ':';
  }
  append_list(out, period_);
  return out;
}

DomainLabel InfiniteAddress::entry(std::size_t i) const noexcept {
  if (i < pre_.size()) return pre_[i];
  return period_[(i - pre_.size()) % period_.size()];
}

std::int64_t InfiniteAddress::bound() const noexcept {
  std::int64_t b = 0;
  for (auto l : pre_) b = std::max(b, std::abs(l.k));
  for (auto l : period_) b = std::max(b, std::abs(l.k));
  return b;
}

InfiniteAddress shift(const InfiniteAddress& s) {
  if (!s.preperiod().empty()) {
    std::vector<DomainLabel> pre(s.preperiod().begin() + 1, s.preperiod().end());
    return InfiniteAddress(std::move(pre), s.period());
  }
  std::vector<DomainLabel> period = s.period();
  std::rotate(period.begin(), period.begin() + 1, period.end());
  return InfiniteAddress::periodic(std::move(period));
}

InfiniteAddress shift(const InfiniteAddress& s, std::size_t times) {
  InfiniteAddress out = s;
  for (std::size_t i = 0; i < times; ++i) out = shift(out);
  return out;
}

FiniteAddress project(const InfiniteAddress& s, int n, int m) {
  if (n < 1 || m < 1) fail(ErrorCode::invalid_argument, "project needs n >= 1, m >= 1");
  std::size_t length = static_cast<std::size_t>(m) * static_cast<std::size_t>(n - 1) + 1;
  FiniteAddress out;
  out.entries.reserve(length);
  for (std::size_t i = 0; i < length; ++i) out.entries.push_back(s.entry(i));
  return out;
}

std::size_t period_of(const InfiniteAddress& s) noexcept {
  return s.is_periodic() ? s.period().size() : 0;
}

std::vector<InfiniteAddress> enumerate_periodic(int window, int p) {
  if (window < 0 || p < 1)
    fail(ErrorCode::invalid_argument, "enumerate_periodic needs K >= 0, p >= 1");
  std::vector<InfiniteAddress> out;
  std::vector<DomainLabel> word(static_cast<std::size_t>(p), DomainLabel(-window));
  for (;;) {
    out.push_back(InfiniteAddress::periodic(word));
    std::size_t i = word.size();
    while (i > 0) {
      --i;
      if (word[i].k < window) {
        ++word[i].k;
        break;
      }
      word[i].k = -window;
      if (i == 0) {
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
      }
    }
  }
}

std::string to_string(const FiniteAddress& a) {
  std::string out;
  append_list(out, a.entries);
  return out;
}

}  // namespace raycensus
