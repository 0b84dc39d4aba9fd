#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace otf::gf {

/// One field element, stored one per byte whatever the extension degree.
using symbol = std::uint8_t;
using symbol_vector = std::vector<symbol>;

/// Counts genuine field multiplications and inversions. Products with 0 or 1
/// are free and never counted.
struct op_counter
{
  std::uint64_t mul_count = 0;
  std::uint64_t inv_count = 0;

  op_counter&
  operator+=(const op_counter& other) noexcept
  {
    mul_count += other.mul_count;
    inv_count += other.inv_count;
    return *this;
  }

  friend op_counter
  operator-(op_counter lhs, const op_counter& rhs) noexcept
  {
    lhs.mul_count -= rhs.mul_count;
    lhs.inv_count -= rhs.inv_count;
    return lhs;
  }

  bool operator==(const op_counter&) const = default;
};

/// Default reduction polynomial for GF(2^w), 1 <= w <= 8. All are primitive.
std::uint32_t default_polynomial(unsigned w);

/// True if `poly` (bit i = coefficient of x^i) is irreducible over GF(2).
bool is_irreducible(std::uint32_t poly);

/// Carry-less product of a and b reduced modulo `poly`. Slow reference path,
/// used to build the tables and to find a generator.
std::uint32_t clmul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t poly);

/// GF(2^w) with log/exp tables. Immutable once built; copy freely.
class field
{
public:
  /// Throws std::invalid_argument if w is outside [1, 8] or poly is not an
  /// irreducible polynomial of degree exactly w.
  explicit field(unsigned w, std::optional<std::uint32_t> poly = std::nullopt);

  unsigned degree() const noexcept { return w_; }
  std::uint32_t size() const noexcept { return q_; }
  std::uint32_t polynomial() const noexcept { return poly_; }

  /// Primitive element the tables are built over (0x02 for primitive polys).
  symbol generator() const noexcept { return exp_[1]; }

  symbol exp(unsigned i) const noexcept { return exp_[i % (q_ - 1)]; }

  /// Discrete log of a != 0, in [0, q-1).
  unsigned log(symbol a) const noexcept { return log_[a]; }

  bool contains(symbol a) const noexcept { return a < q_; }

  symbol mul(symbol a, symbol b) const noexcept
  {
    if (a == 0 || b == 0)
      return 0;
    return exp_[log_[a] + log_[b]];
  }

  symbol mul(symbol a, symbol b, op_counter& counter) const noexcept
  {
    if (a > 1 && b > 1)
      ++counter.mul_count;
    return mul(a, b);
  }

  /// Throws std::domain_error for a = 0.
  symbol inv(symbol a, op_counter& counter) const;

  /// y <- y + c*x in place. Throws std::invalid_argument on length mismatch.
  void add_scaled(symbol c, std::span<const symbol> x, std::span<symbol> y, op_counter& counter) const;

  /// Returns y + c*x.
  symbol_vector axpy(symbol c, std::span<const symbol> x, std::span<const symbol> y,
                     op_counter& counter) const;

  /// x <- c*x.
  void scale(symbol c, std::span<symbol> x, op_counter& counter) const;

  bool operator==(const field& other) const noexcept
  {
    return w_ == other.w_ && poly_ == other.poly_;
  }

private:
  unsigned w_;
  std::uint32_t q_;
  std::uint32_t poly_;
  // exp_ is doubled so log(a)+log(b) never needs a modulo.
  std::array<symbol, 512> exp_{};
  std::array<std::uint16_t, 256> log_{};
};

/// Characteristic 2: addition and subtraction are both XOR.
constexpr symbol
add(symbol a, symbol b) noexcept
{
  return static_cast<symbol>(a ^ b);
}

/// Rank of a row-major rows x cols matrix, by Gaussian elimination on a copy.
std::size_t rank(const field& f, std::span<const symbol> matrix, std::size_t rows, std::size_t cols,
                 op_counter& counter);

} // namespace otf::gf
