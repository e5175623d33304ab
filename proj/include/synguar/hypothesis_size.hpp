#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>

namespace synguar {

using BigNat = boost::multiprecision::cpp_int;

/// Number of programs in a (consistent) hypothesis space. Never truncated.
class HypothesisSize
{
 public:
  HypothesisSize() = default;
  HypothesisSize(std::uint64_t n) : d_count(n) {}
  explicit HypothesisSize(BigNat n);

  const BigNat& count() const { return d_count; }
  bool empty() const { return d_count == 0; }

  /// Decimal, no exponent notation.
  std::string to_string() const;

  /// Closest double-precision estimate of ln(count). Requires count >= 1.
  double ln_estimate() const;
  /// A value >= ln(count), above it by at most 1e-11 * (1 + ln(count)).
  /// Requires count >= 1.
  long double ln_upper() const;

  friend bool operator==(const HypothesisSize&, const HypothesisSize&) = default;
  friend std::strong_ordering operator<=>(const HypothesisSize& a,
                                          const HypothesisSize& b)
  {
    if (a.d_count < b.d_count) return std::strong_ordering::less;
    if (b.d_count < a.d_count) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  BigNat d_count{0};
};

}  // namespace synguar
