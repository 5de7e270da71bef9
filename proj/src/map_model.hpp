#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

namespace raycensus {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.141592653589793238462643383280;

// Index k of the fundamental domain F_k (the strip around Im z = 2πk).
struct DomainLabel {
  std::int64_t k = 0;

  constexpr DomainLabel() = default;
  constexpr explicit DomainLabel(std::int64_t value) : k(value) {}
  friend constexpr auto operator<=>(DomainLabel, DomainLabel) = default;
};

enum class Family { exponential };

enum class BranchStatus { ok, on_cut, singular_hit };

struct BranchValue {
  Complex z;
  BranchStatus status = BranchStatus::ok;
};

// f(z) = e^z + c together with the disk D = {|z| < R}, the cut δ and the
// fundamental domains F_k they induce.
//
// δ is the part of {w : w - c ∈ (-∞, 0]} outside D, so the inverse branch
// into F_k is L_k(w) = Log(w - c) + 2πik with the principal logarithm.
class MapModel {
 public:
  // Throws Error(invalid_argument) if R violates the containment invariants.
  static MapModel exponential(Complex c, std::optional<double> radius = {});

  static double default_radius(Complex c);

  Family family() const noexcept { return family_; }
  Complex c() const noexcept { return c_; }
  double radius() const noexcept { return radius_; }

  // nullopt is the escaped-to-infinity sentinel (Re z beyond kOverflowRe).
  std::optional<Complex> evaluate(Complex z) const noexcept;
  std::optional<Complex> derivative(Complex z) const noexcept;
  std::vector<Complex> singular_values() const { return {c_}; }

  // Throws Error(singular_hit) for w == c. On the cut the +π side is used and
  // *on_cut (when given) is set.
  Complex inverse_branch(Complex w, DomainLabel label,
                         bool* on_cut = nullptr) const;
  BranchValue branch(Complex w, DomainLabel label) const noexcept;

  // Half-plane rule Re z > ln(R + |c|); label from the strip containing z.
  std::optional<DomainLabel> fundamental_domain_of(Complex z) const noexcept;
  // Exact rule: |f(z)| > R and f(z) off δ.
  std::optional<DomainLabel> exact_fundamental_domain_of(
      Complex z) const noexcept;

  bool on_cut(Complex w) const noexcept;

  double seed_potential() const noexcept;    // t0 = max(50, 2R)
  double truncation_re() const noexcept;     // max(2R, 100)
  double tract_threshold_re() const noexcept;

  static constexpr double kOverflowRe = 700.0;
  static constexpr double kEscapeRadius = 1e5;

 private:
  MapModel(Family family, Complex c, double radius)
      : family_(family), c_(c), radius_(radius) {}

  Family family_;
  Complex c_;
  double radius_;
};

// Label of the strip {2πk - π < Im z <= 2πk + π} containing z.
DomainLabel strip_label(Complex z) noexcept;

}  // namespace raycensus
