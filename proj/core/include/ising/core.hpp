#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ising {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Extended-real field value: a double that is never NaN. +inf encodes plus
// boundary conditioning (the B -> +inf limit). -inf is representable so that
// conversions such as atanh_clamped(-1) are total, but model inputs
// (IsingParams, message initializations, tree fields) reject it, so it never
// enters a computation.
class ExtField {
 public:
  constexpr ExtField() noexcept = default;
  ExtField(double v) : v_(v) {
    if (std::isnan(v)) throw std::invalid_argument("ExtField: NaN");
  }
  static constexpr ExtField plus_inf() noexcept {
    return ExtField(kInf, raw_tag{});
  }
  constexpr double value() const noexcept { return v_; }
  constexpr bool is_plus_inf() const noexcept { return v_ == kInf; }
  constexpr bool is_finite() const noexcept {
    return v_ > -kInf && v_ < kInf;
  }
  friend constexpr bool operator==(ExtField a, ExtField b) noexcept {
    return a.v_ == b.v_;
  }

 private:
  struct raw_tag {};
  constexpr ExtField(double v, raw_tag) noexcept : v_(v) {}
  double v_ = 0.0;
};

// Parameters of the ferromagnetic model: inverse temperature beta >= 0, a
// uniform magnetic field B, and an optional per-vertex override B_i (each
// entry finite or +inf; +inf pins the spin to +1).
class IsingParams {
 public:
  IsingParams(double beta, double field) : beta_(beta), field_(field) {
    validate();
  }
  IsingParams(double beta, double field, std::vector<ExtField> per_vertex)
      : beta_(beta), field_(field), per_vertex_(std::move(per_vertex)) {
    validate();
    for (const ExtField& f : per_vertex_)
      if (!f.is_finite() && !f.is_plus_inf())
        throw std::invalid_argument("IsingParams: per-vertex field is -inf");
  }

  double beta() const noexcept { return beta_; }
  double field() const noexcept { return field_; }
  bool has_per_vertex() const noexcept { return !per_vertex_.empty(); }
  const std::vector<ExtField>& per_vertex() const noexcept {
    return per_vertex_;
  }
  // Effective field at vertex i; callers must have checked that the
  // per-vertex table (if any) covers their vertex count.
  ExtField field_at(int i) const {
    return per_vertex_.empty() ? ExtField(field_)
                               : per_vertex_[static_cast<size_t>(i)];
  }

  IsingParams with_beta(double beta) const {
    IsingParams p(*this);
    p.beta_ = beta;
    p.validate();
    return p;
  }
  IsingParams with_field(double field) const {
    IsingParams p(*this);
    p.field_ = field;
    p.validate();
    return p;
  }

 private:
  void validate() const {
    if (!std::isfinite(beta_) || beta_ < 0.0)
      throw std::invalid_argument("IsingParams: beta must be finite and >= 0");
    if (!std::isfinite(field_))
      throw std::invalid_argument("IsingParams: uniform field must be finite");
  }
  double beta_;
  double field_;
  std::vector<ExtField> per_vertex_;
};

namespace detail {

// xi body with beta pre-validated; h may be +/-inf but not NaN.
inline double xi_unchecked(double beta, double h) noexcept {
  if (!std::isfinite(h)) return h > 0 ? beta : -beta;
  double a = std::fabs(h);
  double m = std::min(a, beta);
  double tail = 0.5 * (std::log1p(std::exp(-2.0 * (a + beta))) -
                       std::log1p(std::exp(-2.0 * std::fabs(a - beta))));
  double r = m + tail;  // tail <= 0, so r <= min(beta,|h|)
  return h < 0 ? -r : r;
}

inline double tanh_ext(double x) noexcept {
  return x == kInf ? 1.0 : std::tanh(x);
}

}  // namespace detail

// xi(beta, h) = atanh(tanh(beta) tanh(h)), the transfer function that maps a
// cavity field through an edge. Evaluated as
//   sign(h) * [ min(beta,|h|) + (log1p(e^{-2(|h|+beta)}) - log1p(e^{-2||h|-beta|}))/2 ],
// which is the cosh-ratio form rearranged so that no cancellation occurs and
// the bound |xi| <= min(beta, |h|) holds exactly, for all |h| up to +inf.
inline double xi(double beta, ExtField h) {
  if (!(beta >= 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("xi: beta must be finite and >= 0");
  return detail::xi_unchecked(beta, h.value());
}

struct CriticalBeta {
  double value;         // atanh(1/rho_bar); +inf when no transition
  bool has_transition;  // rho_bar > 1
};

// Critical inverse temperature from rho_bar * tanh(beta_c) = 1.
inline CriticalBeta critical_beta(double rho_bar) {
  if (std::isnan(rho_bar) || rho_bar <= 0.0)
    throw std::invalid_argument("critical_beta: rho_bar must be > 0");
  if (rho_bar <= 1.0) return {kInf, false};
  return {std::atanh(1.0 / rho_bar), true};
}

// atanh with round-off tolerance at the edges of [-1,1]: inputs within 1e-12
// outside are clamped, x = +/-1 map to +/-inf, anything further out is a
// domain error.
inline ExtField atanh_clamped(double x) {
  constexpr double kTol = 1e-12;
  if (std::isnan(x) || std::fabs(x) > 1.0 + kTol)
    throw std::domain_error("atanh_clamped: |x| > 1 + 1e-12");
  if (x >= 1.0) return ExtField::plus_inf();
  if (x <= -1.0) return ExtField(-kInf);
  return ExtField(std::atanh(x));
}

// log(2 cosh x), overflow-free; +inf maps to +inf.
inline double log2cosh(double x) {
  double a = std::fabs(x);
  if (a == kInf) return kInf;
  return a + std::log1p(std::exp(-2.0 * a));
}

// log(e^a + e^b) with either argument possibly -inf.
inline double logaddexp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

}  // namespace ising
