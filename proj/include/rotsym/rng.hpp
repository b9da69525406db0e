#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace rotsym {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11), usable as a
/// UniformRandomBitGenerator. The 64-bit key selects an independent stream;
/// the 128-bit counter walks through it four words at a time.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Philox4x32(std::uint64_t key = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform double on the open interval (0, 1) with 53 random bits.
  double uniform01() noexcept;

  std::uint64_t key() const noexcept;

  /// The raw bijection: ten Philox rounds of ctr under key.
  static Block encrypt(Block ctr, Key key) noexcept;

 private:
  Key key_;
  Block counter_{};
  Block buffer_{};
  int index_ = 4;
};

using Rng = Philox4x32;

/// splitmix64 finalizer; a bijective 64-bit mixer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Folds the identifiers into one 64-bit stream key. Different id tuples give
/// unrelated keys; the result depends on order.
std::uint64_t derive_key(std::uint64_t base_seed, std::initializer_list<std::uint64_t> ids) noexcept;

/// Generator for the substream named by (base_seed, ids...).
Philox4x32 substream(std::uint64_t base_seed, std::initializer_list<std::uint64_t> ids) noexcept;

}  // namespace rotsym
