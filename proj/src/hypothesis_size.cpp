#include "synguar/hypothesis_size.hpp"

#include <cmath>
#include <stdexcept>

namespace synguar {

namespace {

constexpr unsigned kMantissaBits = 53;
constexpr long double kLn2 = 0.693147180559945309417232121458176568L;

// Splits count into top (< 2^53, exactly representable) and a binary shift
// so that top * 2^shift <= count < (top + 1) * 2^shift.
void split(const BigNat& count, std::uint64_t& top, unsigned& shift)
{
  unsigned bits = static_cast<unsigned>(boost::multiprecision::msb(count)) + 1;
  shift = bits > kMantissaBits ? bits - kMantissaBits : 0;
  top = static_cast<std::uint64_t>(count >> shift);
}

void require_positive(const BigNat& count)
{
  if (count < 1)
  {
    throw std::domain_error("logarithm of an empty hypothesis space");
  }
}

}  // namespace

HypothesisSize::HypothesisSize(BigNat n) : d_count(std::move(n))
{
  if (d_count < 0)
  {
    throw std::invalid_argument("hypothesis size must be non-negative");
  }
}

std::string HypothesisSize::to_string() const { return d_count.str(); }

double HypothesisSize::ln_estimate() const
{
  require_positive(d_count);
  std::uint64_t top;
  unsigned shift;
  split(d_count, top, shift);
  return static_cast<double>(std::log(static_cast<long double>(top))
                             + shift * kLn2);
}

long double HypothesisSize::ln_upper() const
{
  require_positive(d_count);
  std::uint64_t top;
  unsigned shift;
  split(d_count, top, shift);
  // Exact when shift == 0; otherwise the discarded low bits are < 2^shift.
  long double mant = static_cast<long double>(top) + (shift == 0 ? 0 : 1);
  long double value = std::log(mant) + shift * kLn2;
  // Covers rounding in log() and in the product above.
  return value + 1e-12L * (1.0L + std::fabs(value));
}

}  // namespace synguar
