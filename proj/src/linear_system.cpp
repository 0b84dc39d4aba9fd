#include "otf/linear_system.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace otf {

linear_system::linear_system(gf::field f, std::size_t sz)
  : field_{std::move(f)}
  , sz_{sz}
{}

void
linear_system::add_unknown(seq_t seq)
{
  if (!unknowns_.empty() && seq <= unknowns_.back())
    throw std::invalid_argument("unknowns must be added in increasing order");
  unknowns_.push_back(seq);
  for (auto& r : rows_)
    r.coeffs.push_back(0);
  peak_ = std::max(peak_, unknowns_.size());
}

std::optional<std::size_t>
linear_system::column_of(seq_t seq) const
{
  const auto it = std::lower_bound(unknowns_.begin(), unknowns_.end(), seq);
  if (it == unknowns_.end() || *it != seq)
    return std::nullopt;
  return static_cast<std::size_t>(it - unknowns_.begin());
}

void
linear_system::recount(row& r) const
{
  r.nonzeros = static_cast<std::size_t>(
    std::count_if(r.coeffs.begin(), r.coeffs.end(), [](gf::symbol c) { return c != 0; }));
}

bool
linear_system::insert(gf::symbol_vector coefficients, gf::symbol_vector rhs)
{
  if (coefficients.size() != unknowns_.size())
    throw std::invalid_argument("equation has " + std::to_string(coefficients.size()) +
                                " coefficients for " + std::to_string(unknowns_.size()) + " unknowns");
  if (rhs.size() != sz_)
    throw std::invalid_argument("equation right-hand side has wrong length");

  // Forward: clear every existing pivot column.
  for (const auto& r : rows_)
  {
    const gf::symbol f = coefficients[r.pivot];
    if (f == 0)
      continue;
    field_.add_scaled(f, r.coeffs, coefficients, counter_);
    field_.add_scaled(f, r.rhs, rhs, counter_);
  }

  const auto lead = std::find_if(coefficients.begin(), coefficients.end(),
                                 [](gf::symbol c) { return c != 0; });
  if (lead == coefficients.end())
    return false;

  row fresh;
  fresh.pivot = static_cast<std::size_t>(lead - coefficients.begin());
  const gf::symbol norm = field_.inv(*lead, counter_);
  field_.scale(norm, coefficients, counter_);
  field_.scale(norm, rhs, counter_);

  // Backward: clear the new pivot column from the existing rows.
  for (auto& r : rows_)
  {
    const gf::symbol f = r.coeffs[fresh.pivot];
    if (f == 0)
      continue;
    field_.add_scaled(f, coefficients, r.coeffs, counter_);
    field_.add_scaled(f, rhs, r.rhs, counter_);
    recount(r);
  }

  fresh.coeffs = std::move(coefficients);
  fresh.rhs = std::move(rhs);
  recount(fresh);
  rows_.push_back(std::move(fresh));
  return true;
}

void
linear_system::drop_columns(const std::vector<bool>& removed)
{
  std::vector<std::size_t> new_index(unknowns_.size());
  std::size_t kept = 0;
  for (std::size_t c = 0; c < unknowns_.size(); ++c)
  {
    new_index[c] = kept;
    if (!removed[c])
      unknowns_[kept++] = unknowns_[c];
  }
  unknowns_.resize(kept);

  for (auto& r : rows_)
  {
    std::size_t out = 0;
    for (std::size_t c = 0; c < removed.size(); ++c)
      if (!removed[c])
        r.coeffs[out++] = r.coeffs[c];
    r.coeffs.resize(out);
    r.pivot = new_index[r.pivot];
    recount(r);
  }
}

void
linear_system::substitute(seq_t seq, std::span<const gf::symbol> value, gf::op_counter& counter)
{
  const auto col = column_of(seq);
  if (!col)
    throw std::invalid_argument("sequence number " + std::to_string(seq) + " is not an unknown");
  if (value.size() != sz_)
    throw std::invalid_argument("substituted payload has wrong length");

  std::optional<row> orphan;
  for (auto it = rows_.begin(); it != rows_.end();)
  {
    const gf::symbol f = it->coeffs[*col];
    if (f != 0)
    {
      field_.add_scaled(f, value, it->rhs, counter);
      it->coeffs[*col] = 0;
    }
    if (it->pivot == *col)
    {
      orphan = std::move(*it);
      it = rows_.erase(it);
    }
    else
      ++it;
  }

  std::vector<bool> removed(unknowns_.size(), false);
  removed[*col] = true;
  drop_columns(removed);

  if (orphan)
  {
    gf::symbol_vector coeffs;
    coeffs.reserve(unknowns_.size());
    for (std::size_t c = 0; c < orphan->coeffs.size(); ++c)
      if (c != *col)
        coeffs.push_back(orphan->coeffs[c]);
    insert(std::move(coeffs), std::move(orphan->rhs));
  }
}

release
linear_system::release_determined()
{
  release out;
  if (rank() == unknown_count())
  {
    for (auto& r : rows_)
      out.payloads.emplace_back(unknowns_[r.pivot], std::move(r.rhs));
    rows_.clear();
    unknowns_.clear();
  }
  else
  {
    std::vector<bool> removed(unknowns_.size(), false);
    for (auto it = rows_.begin(); it != rows_.end();)
    {
      if (it->nonzeros == 1)
      {
        removed[it->pivot] = true;
        out.payloads.emplace_back(unknowns_[it->pivot], std::move(it->rhs));
        it = rows_.erase(it);
      }
      else
        ++it;
    }
    if (out.payloads.empty())
      return out;
    drop_columns(removed);
  }

  std::sort(out.payloads.begin(), out.payloads.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  out.m = peak_;
  out.work = counter_ - counter_at_release_;
  counter_at_release_ = counter_;
  peak_ = unknowns_.size();
  return out;
}

release
linear_system::solve()
{
  if (unknowns_.empty() || rank() != unknown_count())
    throw std::logic_error("solve requires rank (" + std::to_string(rank()) +
                           ") equal to the number of unknowns (" + std::to_string(unknown_count()) +
                           ") and at least one unknown");
  return release_determined();
}

std::vector<linear_system::equation>
linear_system::equations() const
{
  std::vector<equation> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_)
  {
    equation e;
    for (std::size_t c = 0; c < r.coeffs.size(); ++c)
      if (r.coeffs[c] != 0)
        e.coefficients.emplace(unknowns_[c], r.coeffs[c]);
    e.rhs = r.rhs;
    out.push_back(std::move(e));
  }
  return out;
}

} // namespace otf
