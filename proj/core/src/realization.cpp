#include "bset/realization.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bset/errors.hpp"

namespace bset {

std::string to_string(SamplerKind k) {
  return k == SamplerKind::Naive ? "naive" : "skip";
}

SamplerKind sampler_kind_from_string(const std::string& s) {
  if (s == "naive") return SamplerKind::Naive;
  if (s == "skip") return SamplerKind::Skip;
  throw ConfigError("unknown sampler kind: " + s);
}

namespace {

std::string digest_hex(std::uint64_t d) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << d;
  return os.str();
}

}  // namespace

void write_realization(std::ostream& out, const Realization& r,
                       RealizationFormat format) {
  nlohmann::json header = {
      {"schema_version", 1},
      {"profile_digest", digest_hex(r.profile_digest)},
      {"seed", r.seed},
      {"range_end", r.range_end},
      {"sampler_kind", to_string(r.sampler_kind)},
      {"count", r.indices.size()},
      {"format", format == RealizationFormat::Text ? "text" : "binary"},
  };
  out << header.dump() << '\n';
  if (format == RealizationFormat::Text) {
    for (auto k : r.indices) out << k << '\n';
    return;
  }
  std::uint64_t prev = 0;
  for (auto k : r.indices) {
    const std::uint64_t delta = k - prev;
    prev = k;
    std::array<char, 8> buf;
    for (int b = 0; b < 8; ++b)
      buf[b] = static_cast<char>((delta >> (8 * b)) & 0xFF);
    out.write(buf.data(), 8);
  }
}

Realization read_realization(std::istream& in) {
  std::string header_line;
  if (!std::getline(in, header_line))
    throw ConfigError("realization file: missing header line");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_line);
    Realization r;
    r.profile_digest =
        std::stoull(header.at("profile_digest").get<std::string>(), nullptr, 16);
    r.seed = header.at("seed").get<std::uint64_t>();
    r.range_end = header.at("range_end").get<std::uint64_t>();
    r.sampler_kind =
        sampler_kind_from_string(header.at("sampler_kind").get<std::string>());
    const auto count = header.at("count").get<std::uint64_t>();
    const std::string format = header.at("format").get<std::string>();
    r.indices.reserve(count);
    if (format == "text") {
      std::uint64_t k = 0;
      while (r.indices.size() < count && (in >> k)) r.indices.push_back(k);
    } else if (format == "binary") {
      std::uint64_t prev = 0;
      std::array<char, 8> buf;
      while (r.indices.size() < count && in.read(buf.data(), 8)) {
        std::uint64_t delta = 0;
        for (int b = 0; b < 8; ++b)
          delta |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[b]))
                   << (8 * b);
        prev += delta;
        r.indices.push_back(prev);
      }
    } else {
      throw ConfigError("realization file: unknown format " + format);
    }
    if (r.indices.size() != count)
      throw ConfigError("realization file: truncated index data");
    std::uint64_t prev = 0;
    for (auto k : r.indices) {
      if (k <= prev || k > r.range_end)
        throw ConfigError("realization file: indices not strictly increasing in range");
      prev = k;
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("realization file: bad header: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw ConfigError("realization file: bad profile digest");
  }
}

}  // namespace bset
