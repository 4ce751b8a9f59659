#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace bset {

enum class SamplerKind { Naive, Skip };

std::string to_string(SamplerKind k);
SamplerKind sampler_kind_from_string(const std::string& s);

// One sampled E_X intersected with [1, range_end]: the strictly increasing
// success indices plus enough provenance to reproduce them.
struct Realization {
  std::vector<std::uint64_t> indices;
  std::uint64_t range_end = 0;
  std::uint64_t profile_digest = 0;
  std::uint64_t seed = 0;
  SamplerKind sampler_kind = SamplerKind::Naive;
};

enum class RealizationFormat { Text, Binary };

// Text: one JSON header line, then newline-delimited decimal indices.
// Binary: the same header line, then count little-endian 64-bit deltas.
void write_realization(std::ostream& out, const Realization& r,
                       RealizationFormat format);
Realization read_realization(std::istream& in);

}  // namespace bset
