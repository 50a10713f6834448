#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wlg {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define WLG_DEFINE_ERROR(Name)                                 \
  struct Name : Error {                                        \
    explicit Name(const std::string& msg) : Error(msg) {}      \
  }

WLG_DEFINE_ERROR(EmptyInterior);
WLG_DEFINE_ERROR(DisconnectedInterior);
WLG_DEFINE_ERROR(DisconnectedBoundary);
WLG_DEFINE_ERROR(DomainMismatch);
WLG_DEFINE_ERROR(TooLarge);
WLG_DEFINE_ERROR(CapacityOverflow);
WLG_DEFINE_ERROR(BallTooSmall);
WLG_DEFINE_ERROR(BallCoversDomain);
WLG_DEFINE_ERROR(NestednessViolation);
WLG_DEFINE_ERROR(DegenerateElement);
WLG_DEFINE_ERROR(TestFunctionNotCompactlySupported);
WLG_DEFINE_ERROR(HypothesisViolated);
WLG_DEFINE_ERROR(SingularJacobian);
WLG_DEFINE_ERROR(NonConvergence);
WLG_DEFINE_ERROR(ConfigError);
WLG_DEFINE_ERROR(IoError);

#undef WLG_DEFINE_ERROR

using Point = std::array<double, 3>;

inline double dot(const Point& a, const Point& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Point& a) { return std::sqrt(dot(a, a)); }
inline Point operator-(const Point& a, const Point& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

// Compensated (Neumaier) accumulator. Reductions over cells/edges use a fixed
// traversal order plus this, so results are stable to ~1e-16 regardless of
// the magnitudes involved.
class KahanSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// SplitMix64: tiny deterministic generator. Used where tests and experiments
// need portable streams that do not depend on libstdc++ distribution details.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // uniform in [0,1)
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }
  // uniform integer in [0, n)
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }
  bool next_bool() { return (next_u64() & 1ull) != 0; }

 private:
  std::uint64_t state_;
};

}  // namespace wlg
