#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace dd {

// Container layout (all integers little-endian):
//   magic   'D' 'D' 'M' 0x01            (4th byte is the format version)
//   header  u64 byte length, then UTF-8 `key = value` lines; the first
//           line carries the model kind
//   payload u32 array count, then per array:
//             u32 name length + name bytes
//             u8 element type (0 = IEEE-754 binary64 little-endian)
//             u32 rank, rank x u64 dims
//             row-major data
//   trailer u32 CRC-32 of everything between magic and trailer
struct NamedArray {
  std::string name;
  std::vector<std::uint64_t> shape;
  std::vector<double> data;
};

struct Artifact {
  std::string kind;  // mnb | svm | rf | lstm | w2v | d2v | vectorizer
  std::vector<std::pair<std::string, std::string>> header;
  std::vector<NamedArray> arrays;

  const std::string* find_header(const std::string& key) const;
  const NamedArray* find_array(const std::string& name) const;
  // Throw Error(format) / Error(shape) when missing or mismatched.
  const std::string& header_at(const std::string& key) const;
  const NamedArray& array_at(const std::string& name) const;
};

bool known_artifact_kind(const std::string& kind);

// Returns the byte count written. Output is bit-deterministic.
std::size_t save_artifact(const Artifact& artifact, std::ostream& out);

Artifact load_artifact(std::istream& in);

// Percent-encoding for strings carried in header values (escapes %, space,
// tab, CR, LF so values stay single-line and splittable on spaces).
std::string header_escape(const std::string& s);
std::string header_unescape(const std::string& s);

std::uint32_t crc32_ieee(const unsigned char* data, std::size_t n,
                         std::uint32_t seed = 0);

}  // namespace dd
