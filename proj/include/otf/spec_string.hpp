#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace otf {

/// Malformed `kind:key=value,...` text. The message names the offending token.
class spec_error : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// `kind:key=value,key=value`
struct spec_string
{
  std::string kind;
  std::vector<std::pair<std::string, std::string>> args;

  /// Value of `key`; throws spec_error if absent.
  const std::string& at(std::string_view key) const;
  /// Throws spec_error naming the first key not in `allowed`.
  void expect_keys(std::initializer_list<std::string_view> allowed) const;
};

spec_string parse_spec_string(std::string_view text);

double parse_double(std::string_view token);
std::uint64_t parse_unsigned(std::string_view token);

/// Shortest text that parses back to exactly `value`.
std::string format_double(double value);

} // namespace otf
