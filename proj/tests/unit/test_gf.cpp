#include "oracle.hpp"

#include "otf/gf.hpp"

#include <doctest.h>

#include <random>

using otf::gf::field;
using otf::gf::op_counter;
using otf::gf::symbol;
using otf::gf::symbol_vector;

TEST_CASE("field construction")
{
  SUBCASE("w = 3 gives the eight-element field")
  {
    const field f{3};
    CHECK(f.size() == 8);
    CHECK(f.polynomial() == 0x0B);
  }
  SUBCASE("0x11D, generator 0x02")
  {
    REQUIRE(oracle::irreducible(0x11D));
    const field f{8, 0x11D};
    CHECK(f.size() == 256);
    CHECK(f.exp(1) == 0x02);
    CHECK(f.generator() == 0x02);
  }
  SUBCASE("x^8 is rejected")
  {
    CHECK_THROWS_AS(field(8, 0x100), std::invalid_argument);
  }
  SUBCASE("degree mismatch and out-of-range w")
  {
    CHECK_THROWS_AS(field(8, 0x13), std::invalid_argument);
    CHECK_THROWS_AS(field(0), std::invalid_argument);
    CHECK_THROWS_AS(field(9), std::invalid_argument);
  }
  SUBCASE("every default polynomial is irreducible")
  {
    for (unsigned w = 1; w <= 8; ++w)
    {
      CHECK(oracle::irreducible(otf::gf::default_polynomial(w)));
      CHECK(field{w}.size() == (1u << w));
    }
  }
  SUBCASE("irreducibility agrees with full trial division")
  {
    for (std::uint32_t p = 2; p < 512; ++p)
      CHECK_MESSAGE(otf::gf::is_irreducible(p) == oracle::irreducible(p), "poly " << p);
  }
  SUBCASE("non-primitive irreducible polynomial still gets a generator")
  {
    // x^8+x^4+x^3+x+1: irreducible but x has order 51.
    const field f{8, 0x11B};
    CHECK(f.generator() != 0x02);
    for (unsigned a = 1; a < 256; ++a)
      CHECK(f.exp(f.log(static_cast<symbol>(a))) == a);
  }
}

TEST_CASE("addition is XOR")
{
  CHECK(otf::gf::add(0x53, 0) == 0x53);
  CHECK(otf::gf::add(0x53, 0x53) == 0);
  CHECK(otf::gf::add(0x53, 0xCA) == 0x99);
}

TEST_CASE("multiplication")
{
  const field f{8, 0x11D};
  op_counter c;
  CHECK(f.mul(0x02, 0x80, c) == 0x1D);
  CHECK(c.mul_count == 1);

  for (unsigned a = 0; a < 256; ++a)
  {
    CHECK(f.mul(static_cast<symbol>(a), 1, c) == a);
    CHECK(f.mul(static_cast<symbol>(a), 0, c) == 0);
  }
  // Products with 0 and 1 are free.
  CHECK(c.mul_count == 1);
}

TEST_CASE("table multiply matches carry-less reference")
{
  for (unsigned w : {1u, 2u, 3u, 4u})
  {
    const field f{w};
    const oracle::field ref{w, f.polynomial()};
    for (unsigned a = 0; a < f.size(); ++a)
      for (unsigned b = 0; b < f.size(); ++b)
        CHECK(f.mul(static_cast<symbol>(a), static_cast<symbol>(b)) == ref.mul(a, b));
  }
  const field f{8};
  const oracle::field ref{8, f.polynomial()};
  std::mt19937_64 gen{11};
  for (int i = 0; i < 20000; ++i)
  {
    const auto a = static_cast<symbol>(gen());
    const auto b = static_cast<symbol>(gen());
    CHECK(f.mul(a, b) == ref.mul(a, b));
  }
}

TEST_CASE("inverse")
{
  const field f8{3};
  op_counter c;
  CHECK(f8.inv(1, c) == 1);
  // Exhaustive search over the seven nonzero elements.
  const oracle::field ref{3, f8.polynomial()};
  for (unsigned a = 1; a < 8; ++a)
  {
    const symbol inv = f8.inv(static_cast<symbol>(a), c);
    CHECK(inv == ref.inv(static_cast<symbol>(a)));
    CHECK(f8.mul(static_cast<symbol>(a), inv) == 1);
  }
  CHECK(c.inv_count == 8);
  CHECK_THROWS_AS(f8.inv(0, c), std::domain_error);

  const field f256{8};
  for (unsigned a = 1; a < 256; ++a)
    CHECK(f256.mul(static_cast<symbol>(a), f256.inv(static_cast<symbol>(a), c)) == 1);
}

TEST_CASE("log/exp round trip")
{
  for (unsigned w = 1; w <= 8; ++w)
  {
    const field f{w};
    for (unsigned a = 1; a < f.size(); ++a)
      CHECK(f.exp(f.log(static_cast<symbol>(a))) == a);
    for (unsigned i = 0; i + 1 < f.size(); ++i)
      CHECK(f.log(f.exp(i)) == i);
  }
}

namespace {

void
check_axioms(const field& f, symbol a, symbol b, symbol c)
{
  using otf::gf::add;
  CHECK(f.mul(a, b) == f.mul(b, a));
  CHECK(add(a, b) == add(b, a));
  CHECK(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
  CHECK(add(add(a, b), c) == add(a, add(b, c)));
  CHECK(f.mul(a, add(b, c)) == add(f.mul(a, b), f.mul(a, c)));
}

} // namespace

TEST_CASE("field axioms, exhaustive for q = 8 and 16")
{
  for (unsigned w : {3u, 4u})
  {
    const field f{w};
    op_counter ops;
    for (unsigned a = 0; a < f.size(); ++a)
    {
      if (a != 0)
        CHECK(f.mul(static_cast<symbol>(a), f.inv(static_cast<symbol>(a), ops)) == 1);
      for (unsigned b = 0; b < f.size(); ++b)
        for (unsigned c = 0; c < f.size(); ++c)
          check_axioms(f, static_cast<symbol>(a), static_cast<symbol>(b), static_cast<symbol>(c));
    }
  }
}

TEST_CASE("field axioms on random triples for q = 256")
{
  const field f{8};
  std::mt19937_64 gen{2024};
  for (int i = 0; i < 10000; ++i)
    check_axioms(f, static_cast<symbol>(gen()), static_cast<symbol>(gen()), static_cast<symbol>(gen()));
}

TEST_CASE("axpy")
{
  const field f{8};
  const symbol_vector x = {1, 2, 3, 0, 0xFF, 0x80};
  const symbol_vector y = {9, 8, 7, 6, 5, 4};
  const symbol_vector zero(x.size(), 0);
  op_counter c;

  CHECK(f.axpy(0, x, y, c) == y);
  CHECK(c.mul_count == 0);
  CHECK(f.axpy(1, x, x, c) == zero);
  CHECK(c.mul_count == 0);

  const auto once = f.axpy(0x35, x, zero, c);
  CHECK(c.mul_count == x.size());
  CHECK(f.axpy(0x35, x, once, c) == zero);
  CHECK(c.mul_count == 2 * x.size());

  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(once[i] == f.mul(0x35, x[i]));

  CHECK_THROWS_AS(f.axpy(3, x, symbol_vector(2), c), std::invalid_argument);
}

TEST_CASE("rank")
{
  const field f{8};
  op_counter c;
  const symbol_vector identity = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  CHECK(otf::gf::rank(f, identity, 3, 3, c) == 3);
  const symbol_vector dependent = {1, 2, 3, 2, 4, 6, 0, 0, 1}; // row 2 = 2 * row 1
  CHECK(otf::gf::rank(f, dependent, 3, 3, c) == 2);
  CHECK(otf::gf::rank(f, symbol_vector(4, 0), 2, 2, c) == 0);
}
