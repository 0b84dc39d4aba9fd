#include "otf/wire.hpp"

#include <stdexcept>
#include <string>

namespace otf::wire {

namespace {

constexpr std::uint8_t source_tag = 0;
constexpr std::uint8_t repair_tag = 1;

template <typename T>
void
put(std::vector<std::uint8_t>& out, T value)
{
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> (8 * i)));
}

class reader
{
public:
  explicit reader(std::span<const std::uint8_t> bytes) : bytes_{bytes} {}

  template <typename T>
  T
  get()
  {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }

  gf::symbol_vector
  payload()
  {
    const auto len = get<std::uint32_t>();
    need(len);
    gf::symbol_vector out(bytes_.begin() + pos_, bytes_.begin() + pos_ + len);
    pos_ += len;
    return out;
  }

  void
  finish() const
  {
    if (pos_ != bytes_.size())
      throw std::invalid_argument(std::to_string(bytes_.size() - pos_) + " trailing bytes after packet");
  }

private:
  void
  need(std::size_t n) const
  {
    if (bytes_.size() - pos_ < n)
      throw std::invalid_argument("truncated packet at offset " + std::to_string(pos_));
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void
put_payload(std::vector<std::uint8_t>& out, const gf::symbol_vector& payload)
{
  put<std::uint32_t>(out, static_cast<std::uint32_t>(payload.size()));
  out.insert(out.end(), payload.begin(), payload.end());
}

} // namespace

std::vector<std::uint8_t>
serialize(const source_packet& pkt)
{
  std::vector<std::uint8_t> out;
  out.reserve(13 + pkt.payload.size());
  put<std::uint8_t>(out, source_tag);
  put<std::uint64_t>(out, pkt.seq);
  put_payload(out, pkt.payload);
  return out;
}

std::vector<std::uint8_t>
serialize(const repair_packet& pkt)
{
  std::vector<std::uint8_t> out;
  out.reserve(37 + pkt.payload.size());
  put<std::uint8_t>(out, repair_tag);
  put<std::uint64_t>(out, pkt.repair_id);
  put<std::uint64_t>(out, pkt.window.first);
  put<std::uint64_t>(out, pkt.window.last);
  put<std::uint64_t>(out, pkt.coeff_seed);
  put_payload(out, pkt.payload);
  return out;
}

std::vector<std::uint8_t>
serialize(const packet& pkt)
{
  return std::visit([](const auto& p) { return serialize(p); }, pkt);
}

packet
deserialize(std::span<const std::uint8_t> bytes)
{
  reader in{bytes};
  const auto tag = in.get<std::uint8_t>();
  if (tag == source_tag)
  {
    source_packet pkt;
    pkt.seq = in.get<std::uint64_t>();
    pkt.payload = in.payload();
    in.finish();
    return pkt;
  }
  if (tag == repair_tag)
  {
    repair_packet pkt;
    pkt.repair_id = in.get<std::uint64_t>();
    pkt.window.first = in.get<std::uint64_t>();
    pkt.window.last = in.get<std::uint64_t>();
    pkt.coeff_seed = in.get<std::uint64_t>();
    pkt.payload = in.payload();
    in.finish();
    if (pkt.window.last < pkt.window.first)
      throw std::invalid_argument("repair window is empty");
    return pkt;
  }
  throw std::invalid_argument("unknown packet type tag " + std::to_string(tag));
}

} // namespace otf::wire
