#pragma once

#include "otf/gf.hpp"
#include "otf/packet.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace otf {

/// Unknowns the decoder has released in one go, and the elimination work
/// spent on them since the previous release.
struct release
{
  std::vector<std::pair<seq_t, gf::symbol_vector>> payloads;
  /// Largest number of unknowns held since the previous release: the
  /// dimension the elimination work was done on.
  std::size_t m = 0;
  gf::op_counter work;
};

/// Pending equations over the lost, undecoded sequence numbers.
///
/// Rows are kept in reduced row-echelon form: every row has a pivot column
/// with coefficient 1 and every other row is zero in that column. An unknown
/// is determined by the received equations exactly when its row has no other
/// nonzero coefficient, so release_determined() is a scan. When rank equals
/// the number of unknowns every row is a unit row and the whole system is
/// solved.
///
/// Insertion of a row against r existing rows over u unknowns costs at most
/// (2r + 1)(u + sz) multiplications, so filling an m x m system costs at most
/// m^3 + sz*m^2.
class linear_system
{
public:
  struct equation
  {
    std::map<seq_t, gf::symbol> coefficients; // nonzero entries only
    gf::symbol_vector rhs;
  };

  linear_system(gf::field f, std::size_t sz);

  /// Appends an unknown column. Sequence numbers must be added in increasing order.
  void add_unknown(seq_t seq);

  std::optional<std::size_t> column_of(seq_t seq) const;
  bool is_unknown(seq_t seq) const { return column_of(seq).has_value(); }

  /// Eliminates and inserts one equation; `coefficients` is indexed by column.
  /// Returns false, leaving the system untouched, if the equation is
  /// linearly dependent on the stored rows.
  bool insert(gf::symbol_vector coefficients, gf::symbol_vector rhs);

  /// An unknown became known from outside (late source arrival): its term is
  /// moved to the right-hand sides and the column dropped. The row that used
  /// it as a pivot is reduced again and may turn out dependent.
  void substitute(seq_t seq, std::span<const gf::symbol> value, gf::op_counter& counter);

  /// Removes and returns every unknown whose value is determined. Empty when
  /// none is.
  release release_determined();

  /// Full solve. Throws std::logic_error unless rank() == unknown_count() >= 1.
  release solve();

  std::size_t rank() const noexcept { return rows_.size(); }
  std::size_t unknown_count() const noexcept { return unknowns_.size(); }
  const std::vector<seq_t>& unknowns() const noexcept { return unknowns_; }
  bool empty() const noexcept { return unknowns_.empty(); }

  std::vector<equation> equations() const;

  /// Elimination work since construction.
  const gf::op_counter& counter() const noexcept { return counter_; }

private:
  struct row
  {
    gf::symbol_vector coeffs;
    gf::symbol_vector rhs;
    std::size_t pivot = 0;
    std::size_t nonzeros = 0;
  };

  void recount(row& r) const;
  void drop_columns(const std::vector<bool>& removed);

  gf::field field_;
  std::size_t sz_;
  std::vector<seq_t> unknowns_;
  std::vector<row> rows_;
  gf::op_counter counter_;
  gf::op_counter counter_at_release_;
  std::size_t peak_ = 0;
};

} // namespace otf
