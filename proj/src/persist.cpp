#include "depdetect/persist.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <sstream>

#include "depdetect/error.hpp"

namespace dd {

namespace {

constexpr std::array<unsigned char, 3> kMagic{'D', 'D', 'M'};
constexpr unsigned char kVersion = 0x01;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double d) {
  put_u64(out, std::bit_cast<std::uint64_t>(d));
}

class Cursor {
 public:
  Cursor(const unsigned char* data, std::size_t n) : data_(data), n_(n) {}
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  unsigned char u8() {
    need(1);
    return data_[pos_++];
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(data_ + pos_), n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return n_ - pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > n_)
      fail(Errc::shape, "artifact payload shorter than its declared shapes");
  }
  const unsigned char* data_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_table_entry(std::uint32_t i) {
  std::uint32_t c = i;
  for (int k = 0; k < 8; ++k)
    c = (c & 1u) ? 0xedb88320u ^ (c >> 1) : c >> 1;
  return c;
}

}  // namespace

std::uint32_t crc32_ieee(const unsigned char* data, std::size_t n,
                         std::uint32_t seed) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) t[i] = crc_table_entry(i);
    return t;
  }();
  std::uint32_t c = seed ^ 0xffffffffu;
  for (std::size_t i = 0; i < n; ++i)
    c = table[(c ^ data[i]) & 0xffu] ^ (c >> 8);
  return c ^ 0xffffffffu;
}

bool known_artifact_kind(const std::string& kind) {
  return kind == "mnb" || kind == "svm" || kind == "rf" || kind == "lstm" ||
         kind == "w2v" || kind == "d2v" || kind == "vectorizer";
}

const std::string* Artifact::find_header(const std::string& key) const {
  for (const auto& [k, v] : header)
    if (k == key) return &v;
  return nullptr;
}

const NamedArray* Artifact::find_array(const std::string& name) const {
  for (const auto& a : arrays)
    if (a.name == name) return &a;
  return nullptr;
}

const std::string& Artifact::header_at(const std::string& key) const {
  const std::string* v = find_header(key);
  if (!v) fail(Errc::format, "artifact header is missing key '" + key + "'");
  return *v;
}

const NamedArray& Artifact::array_at(const std::string& name) const {
  const NamedArray* a = find_array(name);
  if (!a) fail(Errc::shape, "artifact is missing array '" + name + "'");
  return *a;
}

std::string header_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '%': out += "%25"; break;
      case ' ': out += "%20"; break;
      case '\t': out += "%09"; break;
      case '\r': out += "%0d"; break;
      case '\n': out += "%0a"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string header_unescape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      const auto hex = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
      };
      const int hi = hex(s[i + 1]), lo = hex(s[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back(s[i]);
  }
  return out;
}

std::size_t save_artifact(const Artifact& artifact, std::ostream& out) {
  if (!known_artifact_kind(artifact.kind))
    fail(Errc::kind, "unknown model kind '" + artifact.kind + "'");

  std::string header_text;
  header_text += "kind = " + artifact.kind + "\n";
  header_text += "format_version = 1\n";
  for (const auto& [k, v] : artifact.header) {
    if (k.find_first_of(" =\n") != std::string::npos ||
        v.find('\n') != std::string::npos)
      fail(Errc::format, "header entry '" + k + "' is not single-line safe");
    header_text += k + " = " + v + "\n";
  }

  std::string body;
  put_u64(body, header_text.size());
  body += header_text;
  put_u32(body, static_cast<std::uint32_t>(artifact.arrays.size()));
  for (const auto& a : artifact.arrays) {
    std::uint64_t count = 1;
    for (std::uint64_t d : a.shape) count *= d;
    if (count != a.data.size())
      fail(Errc::shape, "array '" + a.name + "' shape does not match its data");
    put_u32(body, static_cast<std::uint32_t>(a.name.size()));
    body += a.name;
    body.push_back('\0');  // element type 0 = f64le
    put_u32(body, static_cast<std::uint32_t>(a.shape.size()));
    for (std::uint64_t d : a.shape) put_u64(body, d);
    for (double v : a.data) put_f64(body, v);
  }

  std::string file;
  file.reserve(body.size() + 8);
  file.append(reinterpret_cast<const char*>(kMagic.data()), kMagic.size());
  file.push_back(static_cast<char>(kVersion));
  file += body;
  const std::uint32_t crc = crc32_ieee(
      reinterpret_cast<const unsigned char*>(body.data()), body.size());
  put_u32(file, crc);

  out.write(file.data(), static_cast<std::streamsize>(file.size()));
  if (!out) fail(Errc::io, "failed to write artifact");
  return file.size();
}

Artifact load_artifact(std::istream& in) {
  std::string buf((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  const auto* data = reinterpret_cast<const unsigned char*>(buf.data());

  if (buf.size() < 4 || std::memcmp(data, kMagic.data(), kMagic.size()) != 0)
    fail(Errc::format, "not a model artifact (bad magic)");
  if (data[3] != kVersion)
    fail(Errc::version, "unsupported artifact version " +
                            std::to_string(static_cast<int>(data[3])));
  if (buf.size() < 8) fail(Errc::integrity, "artifact truncated");

  const std::size_t body_len = buf.size() - 8;
  const std::uint32_t trailer =
      static_cast<std::uint32_t>(data[buf.size() - 4]) |
      static_cast<std::uint32_t>(data[buf.size() - 3]) << 8 |
      static_cast<std::uint32_t>(data[buf.size() - 2]) << 16 |
      static_cast<std::uint32_t>(data[buf.size() - 1]) << 24;
  if (crc32_ieee(data + 4, body_len) != trailer)
    fail(Errc::integrity, "artifact CRC mismatch (file corrupt or truncated)");

  Cursor cur(data + 4, body_len);
  const std::uint64_t header_len = cur.u64();
  if (header_len > cur.remaining())
    fail(Errc::shape, "artifact header length exceeds file size");
  const std::string header_text = cur.bytes(header_len);

  Artifact artifact;
  std::istringstream lines(header_text);
  std::string line;
  bool version_seen = false;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    const std::size_t sep = line.find(" = ");
    if (sep == std::string::npos)
      fail(Errc::format, "malformed artifact header line: " + line);
    std::string key = line.substr(0, sep);
    std::string value = line.substr(sep + 3);
    if (key == "kind") {
      artifact.kind = value;
    } else if (key == "format_version") {
      if (value != "1")
        fail(Errc::version, "unsupported format_version " + value);
      version_seen = true;
    } else {
      artifact.header.emplace_back(std::move(key), std::move(value));
    }
  }
  if (artifact.kind.empty() || !version_seen)
    fail(Errc::format, "artifact header lacks kind/format_version");
  if (!known_artifact_kind(artifact.kind))
    fail(Errc::kind, "unknown model kind '" + artifact.kind + "'");

  const std::uint32_t n_arrays = cur.u32();
  for (std::uint32_t i = 0; i < n_arrays; ++i) {
    NamedArray a;
    const std::uint32_t name_len = cur.u32();
    a.name = cur.bytes(name_len);
    const unsigned char dtype = cur.u8();
    if (dtype != 0)
      fail(Errc::format, "array '" + a.name + "' has unsupported element type");
    const std::uint32_t rank = cur.u32();
    std::uint64_t count = 1;
    a.shape.resize(rank);
    for (std::uint32_t r = 0; r < rank; ++r) {
      a.shape[r] = cur.u64();
      count *= a.shape[r];
    }
    if (count * 8 > cur.remaining())
      fail(Errc::shape, "array '" + a.name + "' declares more data than present");
    a.data.resize(count);
    for (std::uint64_t k = 0; k < count; ++k) a.data[k] = cur.f64();
    artifact.arrays.push_back(std::move(a));
  }
  if (cur.remaining() != 0)
    fail(Errc::shape, "artifact has trailing bytes after the last array");
  return artifact;
}

}  // namespace dd
