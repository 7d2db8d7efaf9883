#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace tspectra {

/// Working precision of a computation.
///
/// Every numeric operation in the library takes a context explicitly; nothing
/// reads an ambient default. `bits == 53` selects native `double` arithmetic
/// when dispatched through `with_scalar`, any other width runs on MPFR.
class PrecisionContext {
 public:
  static constexpr int kMinBits = 24;
  static constexpr int kDoubleBits = 53;

  explicit PrecisionContext(int bits = kDoubleBits) : bits_(bits) {
    if (bits < kMinBits) {
      throw std::invalid_argument("precision must be at least " + std::to_string(kMinBits) +
                                  " bits, got " + std::to_string(bits));
    }
  }

  static PrecisionContext double_precision() { return PrecisionContext(kDoubleBits); }

  int bits() const noexcept { return bits_; }

  /// eps = 2^(1 - bits), stored as its base-2 exponent so it is exact for any width.
  int eps_exponent() const noexcept { return 1 - bits_; }

  /// eps as a double; underflows to zero beyond ~1074 bits.
  double eps() const noexcept { return std::ldexp(1.0, eps_exponent()); }

  /// ceil(bits * log10(2)).
  int decimal_digits() const noexcept {
    // 30103/100000 < log10(2) < 30103/100000 + 1e-6; the integer form avoids
    // an off-by-one from floating rounding at exact multiples.
    const long long scaled = static_cast<long long>(bits_) * 301029995664LL;
    const long long denom = 1000000000000LL;
    return static_cast<int>((scaled + denom - 1) / denom);
  }

  /// Digits written for every serialized number.
  int output_digits() const noexcept { return decimal_digits() + 2; }

  bool is_native_double() const noexcept { return bits_ == kDoubleBits; }

  friend bool operator==(const PrecisionContext&, const PrecisionContext&) = default;

 private:
  int bits_;
};

}  // namespace tspectra
