// Index file layout (all integers little-endian):
//
//   "STYLECNG"            8-byte magic
//   u32 format_version
//   u64 payload_size
//   payload:
//     str tokenizer_id, str split, u32 style_count, style_count x str
//     4 x order table: u64 terms, then per term
//       str key, u32 occur_num, occur_num x (u32 style, f64 score), f64 absent_score
//   u32 crc32 of every preceding byte
//
// str = u32 length + bytes.

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "stylem/cng.hpp"
#include "stylem/error.hpp"

namespace stylem {

namespace {

constexpr char kMagic[8] = {'S', 'T', 'Y', 'L', 'E', 'C', 'N', 'G'};
constexpr std::size_t kHeaderSize = sizeof(kMagic) + 4 + 8;

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    buf_.append(s);
  }
  void raw(const char* p, std::size_t n) { buf_.append(p, n); }
  std::string& buffer() { return buf_; }

 private:
  std::string buf_;
};

class Reader {
 public:
  Reader(const char* data, std::size_t size) : p_(data), end_(data + size) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p_[i])) << (8 * i);
    p_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p_[i])) << (8 * i);
    p_ += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    const auto n = u32();
    need(n);
    std::string s(p_, n);
    p_ += n;
    return s;
  }
  bool done() const { return p_ == end_; }

 private:
  void need(std::size_t n) const {
    if (static_cast<std::size_t>(end_ - p_) < n) throw Error(ErrorKind::checksum, "index payload is truncated");
  }
  const char* p_;
  const char* end_;
};

std::uint32_t crc_of(const std::string& bytes, std::size_t length) {
  uLong crc = crc32(0L, Z_NULL, 0);
  std::size_t done = 0;
  while (done < length) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(length - done, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + done), chunk);
    done += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

void write_index(const CngIndex& index, std::ostream& out) {
  Writer payload;
  payload.str(index.tokenizer_id());
  payload.str(index.split());
  payload.u32(static_cast<std::uint32_t>(index.style_count()));
  for (const auto& name : index.registry().names()) payload.str(name);
  for (int n = 1; n <= kMaxOrder; ++n) {
    const auto& table = index.order(n);
    payload.u64(table.size());
    for (std::uint32_t t = 0; t < table.size(); ++t) {
      payload.str(table.terms[t]);
      payload.u32(table.occur_num(t));
      for (auto k = table.offsets[t]; k < table.offsets[t + 1]; ++k) {
        payload.u32(table.styles[k]);
        payload.f64(table.scores[k]);
      }
      payload.f64(table.absent_scores[t]);
    }
  }

  Writer file;
  file.raw(kMagic, sizeof(kMagic));
  file.u32(CngIndex::kFormatVersion);
  file.u64(payload.buffer().size());
  file.buffer().append(payload.buffer());
  file.u32(crc_of(file.buffer(), file.buffer().size()));
  out.write(file.buffer().data(), static_cast<std::streamsize>(file.buffer().size()));
  if (!out) throw Error(ErrorKind::io, "failed to write index");
}

CngIndex read_index(std::istream& in) {
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorKind::checksum, "not a style index file (bad magic or truncated header)");
  }
  Reader header(bytes.data() + sizeof(kMagic), kHeaderSize - sizeof(kMagic));
  const auto version = header.u32();
  if (version != CngIndex::kFormatVersion) {
    throw Error(ErrorKind::version, "unsupported index format version " + std::to_string(version) +
                                        " (this build reads version " + std::to_string(CngIndex::kFormatVersion) + ")");
  }
  const auto payload_size = header.u64();
  if (bytes.size() != kHeaderSize + payload_size + 4) {
    throw Error(ErrorKind::checksum, "index file size does not match its header (truncated or padded)");
  }
  Reader trailer(bytes.data() + kHeaderSize + payload_size, 4);
  if (trailer.u32() != crc_of(bytes, kHeaderSize + payload_size)) {
    throw Error(ErrorKind::checksum, "index checksum mismatch");
  }

  Reader r(bytes.data() + kHeaderSize, payload_size);
  CngIndex index;
  index.tokenizer_ = r.str();
  if (index.tokenizer_ != kTokenizerId) {
    throw Error(ErrorKind::version, "index was built with tokenizer '" + index.tokenizer_ + "', expected '" +
                                        std::string(kTokenizerId) + "'");
  }
  index.split_ = r.str();
  const auto styles = r.u32();
  for (std::uint32_t s = 0; s < styles; ++s) {
    const auto name = r.str();
    if (index.registry_.find(name)) throw Error(ErrorKind::checksum, "duplicate style in index registry");
    index.registry_.add(name);
  }
  for (auto& table : index.orders_) {
    const auto terms = r.u64();
    table.terms.reserve(terms);
    table.offsets.reserve(terms + 1);
    table.absent_scores.reserve(terms);
    table.offsets.push_back(0);
    for (std::uint64_t t = 0; t < terms; ++t) {
      table.terms.push_back(r.str());
      const auto occ = r.u32();
      for (std::uint32_t k = 0; k < occ; ++k) {
        const auto style = r.u32();
        if (style >= styles) throw Error(ErrorKind::checksum, "style id out of range in index");
        table.styles.push_back(style);
        table.scores.push_back(r.f64());
      }
      table.offsets.push_back(table.offsets.back() + occ);
      table.absent_scores.push_back(r.f64());
    }
    table.rebuild_lookup();
  }
  if (!r.done()) throw Error(ErrorKind::checksum, "trailing bytes in index payload");
  return index;
}

void save_index(const CngIndex& index, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::io, "cannot write '" + path.string() + "'");
  write_index(index, out);
}

CngIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open index '" + path.string() + "'");
  return read_index(in);
}

}  // namespace stylem
