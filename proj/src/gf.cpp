#include "otf/gf.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>
#include <string>

namespace otf::gf {

namespace {

constexpr std::array<std::uint32_t, 9> default_polys = {
  0,     // unused
  0x3,   // x + 1
  0x7,   // x^2 + x + 1
  0xB,   // x^3 + x + 1
  0x13,  // x^4 + x + 1
  0x25,  // x^5 + x^2 + 1
  0x43,  // x^6 + x + 1
  0x89,  // x^7 + x^3 + 1
  0x11D, // x^8 + x^4 + x^3 + x^2 + 1
};

int
poly_degree(std::uint32_t p) noexcept
{
  return p == 0 ? -1 : static_cast<int>(std::bit_width(p)) - 1;
}

// Remainder of a divided by b over GF(2).
std::uint32_t
poly_mod(std::uint32_t a, std::uint32_t b) noexcept
{
  const int db = poly_degree(b);
  for (int da = poly_degree(a); da >= db; da = poly_degree(a))
    a ^= b << (da - db);
  return a;
}

std::string
hex(std::uint32_t v)
{
  std::ostringstream os;
  os << "0x" << std::hex << std::uppercase << v;
  return os.str();
}

} // namespace

std::uint32_t
default_polynomial(unsigned w)
{
  if (w < 1 || w > 8)
    throw std::invalid_argument("field degree must be in [1, 8], got " + std::to_string(w));
  return default_polys[w];
}

bool
is_irreducible(std::uint32_t poly)
{
  const int d = poly_degree(poly);
  if (d < 1)
    return false;
  // Any factorization has a factor of degree <= d/2.
  for (std::uint32_t divisor = 2; poly_degree(divisor) <= d / 2; ++divisor)
    if (poly_mod(poly, divisor) == 0)
      return false;
  return true;
}

std::uint32_t
clmul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t poly)
{
  std::uint32_t product = 0;
  for (; b != 0; b >>= 1, a <<= 1)
    if (b & 1)
      product ^= a;
  return poly_mod(product, poly);
}

field::field(unsigned w, std::optional<std::uint32_t> poly)
  : w_{w}
  , q_{0}
  , poly_{0}
{
  if (w < 1 || w > 8)
    throw std::invalid_argument("field degree must be in [1, 8], got " + std::to_string(w));
  poly_ = poly.value_or(default_polys[w]);
  if (poly_degree(poly_) != static_cast<int>(w))
    throw std::invalid_argument("reduction polynomial " + hex(poly_) + " does not have degree " +
                                std::to_string(w));
  if (!is_irreducible(poly_))
    throw std::invalid_argument("reduction polynomial " + hex(poly_) + " is reducible over GF(2)");
  q_ = 1u << w;

  // Smallest element of multiplicative order q-1; x itself when poly is primitive.
  const std::uint32_t order = q_ - 1;
  std::uint32_t gen = 0;
  for (std::uint32_t g = (q_ == 2 ? 1 : 2); g < q_ && gen == 0; ++g)
  {
    std::uint32_t x = g;
    std::uint32_t k = 1;
    for (; x != 1; ++k)
      x = clmul_mod(x, g, poly_);
    if (k == order)
      gen = g;
  }

  std::uint32_t x = 1;
  for (std::uint32_t i = 0; i < order; ++i)
  {
    exp_[i] = static_cast<symbol>(x);
    exp_[i + order] = static_cast<symbol>(x);
    log_[x] = static_cast<std::uint16_t>(i);
    x = clmul_mod(x, gen, poly_);
  }
}

symbol
field::inv(symbol a, op_counter& counter) const
{
  if (a == 0)
    throw std::domain_error("zero has no multiplicative inverse");
  ++counter.inv_count;
  const std::uint32_t order = q_ - 1;
  return exp_[(order - log_[a]) % order];
}

void
field::add_scaled(symbol c, std::span<const symbol> x, std::span<symbol> y, op_counter& counter) const
{
  if (x.size() != y.size())
    throw std::invalid_argument("length mismatch (" + std::to_string(x.size()) + " vs " +
                                std::to_string(y.size()) + ")");
  if (c == 0)
    return;
  if (c == 1)
  {
    for (std::size_t i = 0; i < x.size(); ++i)
      y[i] ^= x[i];
    return;
  }
  counter.mul_count += x.size();
  const auto* row = exp_.data() + log_[c];
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0)
      y[i] ^= row[log_[x[i]]];
}

symbol_vector
field::axpy(symbol c, std::span<const symbol> x, std::span<const symbol> y, op_counter& counter) const
{
  symbol_vector out(y.begin(), y.end());
  add_scaled(c, x, out, counter);
  return out;
}

void
field::scale(symbol c, std::span<symbol> x, op_counter& counter) const
{
  if (c == 1)
    return;
  if (c == 0)
  {
    std::fill(x.begin(), x.end(), symbol{0});
    return;
  }
  counter.mul_count += x.size();
  const auto* row = exp_.data() + log_[c];
  for (auto& v : x)
    if (v != 0)
      v = row[log_[v]];
}

std::size_t
rank(const field& f, std::span<const symbol> matrix, std::size_t rows, std::size_t cols,
     op_counter& counter)
{
  if (matrix.size() != rows * cols)
    throw std::invalid_argument("rank: matrix size does not match dimensions");
  symbol_vector m(matrix.begin(), matrix.end());
  auto row = [&](std::size_t r) { return std::span<symbol>{m}.subspan(r * cols, cols); };

  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c)
  {
    std::size_t pivot = r;
    while (pivot < rows && m[pivot * cols + c] == 0)
      ++pivot;
    if (pivot == rows)
      continue;
    if (pivot != r)
      std::swap_ranges(row(pivot).begin(), row(pivot).end(), row(r).begin());
    const symbol inv_p = f.inv(m[r * cols + c], counter);
    for (std::size_t below = r + 1; below < rows; ++below)
    {
      const symbol factor = f.mul(m[below * cols + c], inv_p, counter);
      f.add_scaled(factor, row(r), row(below), counter);
    }
    ++r;
  }
  return r;
}

} // namespace otf::gf
