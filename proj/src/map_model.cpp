#include "map_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "error.hpp"

namespace raycensus {

double MapModel::default_radius(Complex c) {
  return std::max({std::abs(c) + 2.0, std::abs(1.0 + c) + 1.0, std::numbers::e});
}

MapModel MapModel::exponential(Complex c, std::optional<double> radius) {
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
    fail(ErrorCode::invalid_argument, "parameter c must be finite");
  double r = radius.value_or(default_radius(c));
  if (!(r > 0) || !std::isfinite(r))
    fail(ErrorCode::invalid_argument, "radius must be positive and finite");
  if (!(std::abs(c) < r) || !(std::abs(1.0 + c) < r)) {
    std::ostringstream msg;
    msg << "radius " << r << " does not contain c and f(0)";
    fail(ErrorCode::invalid_argument, msg.str());
  }
  if (!(std::log(r - std::abs(c)) > -r))
    fail(ErrorCode::invalid_argument, "radius too small: ln(R - |c|) <= -R");
  return MapModel(Family::exponential, c, r);
}

std::optional<Complex> MapModel::evaluate(Complex z) const noexcept {
  if (!(z.real() <= kOverflowRe)) return std::nullopt;
  return std::exp(z) + c_;
}

std::optional<Complex> MapModel::derivative(Complex z) const noexcept {
  if (!(z.real() <= kOverflowRe)) return std::nullopt;
  return std::exp(z);
}

bool MapModel::on_cut(Complex w) const noexcept {
  Complex d = w - c_;
  return d.imag() == 0.0 && d.real() < 0.0;
}

BranchValue MapModel::branch(Complex w, DomainLabel label) const noexcept {
  Complex d = w - c_;
  double modulus = std::abs(d);
  if (modulus < std::numeric_limits<double>::min())
    return {c_, BranchStatus::singular_hit};
  double shift = kTwoPi * static_cast<double>(label.k);
  if (d.imag() == 0.0 && d.real() < 0.0)
    return {Complex(std::log(modulus), kPi + shift), BranchStatus::on_cut};
  Complex z = std::log(d);
  return {Complex(z.real(), z.imag() + shift), BranchStatus::ok};
}

Complex MapModel::inverse_branch(Complex w, DomainLabel label,
                                 bool* on_cut) const {
  BranchValue b = branch(w, label);
  if (b.status == BranchStatus::singular_hit)
    fail(ErrorCode::singular_hit, "inverse branch evaluated at the singular value");
  if (on_cut) *on_cut = b.status == BranchStatus::on_cut;
  return b.z;
}

DomainLabel strip_label(Complex z) noexcept {
  return DomainLabel(
      static_cast<std::int64_t>(std::ceil((z.imag() - kPi) / kTwoPi)));
}

double MapModel::tract_threshold_re() const noexcept {
  return std::log(radius_ + std::abs(c_));
}

std::optional<DomainLabel> MapModel::fundamental_domain_of(
    Complex z) const noexcept {
  if (!(z.real() > tract_threshold_re())) return std::nullopt;
  return strip_label(z);
}

std::optional<DomainLabel> MapModel::exact_fundamental_domain_of(
    Complex z) const noexcept {
  auto w = evaluate(z);
  if (!w) return strip_label(z);
  if (!(std::abs(*w) > radius_) || on_cut(*w)) return std::nullopt;
  return strip_label(z);
}

double MapModel::seed_potential() const noexcept {
  return std::max(50.0, 2.0 * radius_);
}

double MapModel::truncation_re() const noexcept {
  return std::max(2.0 * radius_, 100.0);
}

}  // namespace raycensus
