#include "otf/spec_string.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace otf {

namespace {

std::string
quoted(std::string_view s)
{
  return "'" + std::string{s} + "'";
}

} // namespace

const std::string&
spec_string::at(std::string_view key) const
{
  for (const auto& [k, v] : args)
    if (k == key)
      return v;
  throw spec_error("missing parameter " + quoted(key) + " in " + quoted(kind) + " spec");
}

void
spec_string::expect_keys(std::initializer_list<std::string_view> allowed) const
{
  for (const auto& [k, v] : args)
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw spec_error("unknown parameter " + quoted(k) + " in " + quoted(kind) + " spec");
}

spec_string
parse_spec_string(std::string_view text)
{
  spec_string out;
  const auto colon = text.find(':');
  out.kind = std::string{text.substr(0, colon)};
  if (out.kind.empty())
    throw spec_error("missing kind in " + quoted(text));
  if (colon == std::string_view::npos)
    return out;

  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty())
  {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == item.size())
      throw spec_error("malformed parameter " + quoted(item) + " (expected key=value)");
    out.args.emplace_back(std::string{item.substr(0, eq)}, std::string{item.substr(eq + 1)});
    if (comma == std::string_view::npos)
      break;
    rest = rest.substr(comma + 1);
    if (rest.empty())
      throw spec_error("trailing ',' in " + quoted(text));
  }
  return out;
}

double
parse_double(std::string_view token)
{
  double value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(value))
    throw spec_error("not a number: " + quoted(token));
  return value;
}

std::uint64_t
parse_unsigned(std::string_view token)
{
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    throw spec_error("not a non-negative integer: " + quoted(token));
  return value;
}

std::string
format_double(double value)
{
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

} // namespace otf
