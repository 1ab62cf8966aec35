#ifndef VGANG_TIME_HPP
#define VGANG_TIME_HPP

#include <compare>
#include <cstdint>
#include <stdexcept>

namespace vgang {

/**
 * Scheduling time as a count of abstract integer ticks.
 *
 * All time arithmetic in the toolkit is exact integer arithmetic; there is
 * no floating-point time anywhere. One tick is whatever base unit the
 * taskset was expressed in.
 */
class TimeValue {
 public:
  constexpr TimeValue() = default;
  constexpr explicit TimeValue(std::uint64_t ticks) : ticks_(ticks) {}

  constexpr std::uint64_t ticks() const { return ticks_; }

  constexpr TimeValue& operator+=(TimeValue other) {
    ticks_ += other.ticks_;
    return *this;
  }

  friend constexpr TimeValue operator+(TimeValue a, TimeValue b) {
    return TimeValue(a.ticks_ + b.ticks_);
  }

  // Defined only when the result is non-negative.
  friend TimeValue operator-(TimeValue a, TimeValue b) {
    if (a.ticks_ < b.ticks_) {
      throw std::underflow_error("TimeValue subtraction would be negative");
    }
    return TimeValue(a.ticks_ - b.ticks_);
  }

  friend constexpr TimeValue operator*(TimeValue a, std::uint64_t k) {
    return TimeValue(a.ticks_ * k);
  }
  friend constexpr TimeValue operator*(std::uint64_t k, TimeValue a) {
    return a * k;
  }

  friend constexpr auto operator<=>(TimeValue, TimeValue) = default;

 private:
  std::uint64_t ticks_ = 0;
};

/// Number of whole intervals of length `b` needed to cover `a`: ceil(a/b).
inline std::uint64_t ceil_div(TimeValue a, TimeValue b) {
  if (b.ticks() == 0) {
    throw std::domain_error("ceil_div by zero interval");
  }
  return (a.ticks() + b.ticks() - 1) / b.ticks();
}

/**
 * Fixed-point rational with denominator 10^6.
 *
 * Resource-demand factors and worst-case resource utilizations are kept in
 * this representation so that subset sums, comparisons and WCET scaling are
 * exact and platform-independent.
 */
class Demand {
 public:
  static constexpr std::int64_t kScale = 1'000'000;

  constexpr Demand() = default;
  constexpr explicit Demand(std::int64_t micros) : micros_(micros) {}

  static Demand from_double(double value);

  constexpr std::int64_t micros() const { return micros_; }
  constexpr double to_double() const {
    return static_cast<double>(micros_) / static_cast<double>(kScale);
  }

  constexpr Demand& operator+=(Demand other) {
    micros_ += other.micros_;
    return *this;
  }
  friend constexpr Demand operator+(Demand a, Demand b) {
    return Demand(a.micros_ + b.micros_);
  }
  friend constexpr Demand operator-(Demand a, Demand b) {
    return Demand(a.micros_ - b.micros_);
  }

  friend constexpr auto operator<=>(Demand, Demand) = default;

 private:
  std::int64_t micros_ = 0;
};

}  // namespace vgang

#endif  // VGANG_TIME_HPP
