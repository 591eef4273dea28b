#include "rinkloc/image.hpp"

#include <cctype>
#include <fstream>
#include <iterator>

#include "rinkloc/errors.hpp"

namespace rinkloc {

namespace {

class PnmReader {
 public:
  explicit PnmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_int() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) throw InputError("pnm: expected integer");
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > 1'000'000'000) throw InputError("pnm: integer out of range");
    }
    return v;
  }

  std::uint8_t next_byte() {
    if (pos_ >= bytes_.size()) throw InputError("pnm: truncated raster");
    return bytes_[pos_++];
  }

  void expect_single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) throw InputError("pnm: malformed header");
    ++pos_;
  }

  std::size_t pos() const { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

Image decode_pnm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') throw InputError("pnm: bad magic");
  const char kind = static_cast<char>(bytes[1]);
  int channels = 0;
  bool binary = false;
  switch (kind) {
    case '2': channels = 1; break;
    case '3': channels = 3; break;
    case '5': channels = 1; binary = true; break;
    case '6': channels = 3; binary = true; break;
    default: throw InputError("pnm: unsupported format P" + std::string(1, kind));
  }
  PnmReader r(bytes.subspan(2));
  const long width = r.read_int();
  const long height = r.read_int();
  const long maxval = r.read_int();
  if (width < 1 || height < 1) throw InputError("pnm: empty image");
  if (maxval < 1 || maxval > 65535) throw InputError("pnm: bad maxval");

  Image img(static_cast<int>(width), static_cast<int>(height), channels);
  const auto rescale = [maxval](long v) -> std::uint8_t {
    if (v > maxval) throw InputError("pnm: sample exceeds maxval");
    if (maxval == 255) return static_cast<std::uint8_t>(v);
    return static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
  };
  if (binary) {
    r.expect_single_whitespace();
    for (auto& px : img.pixels) {
      long v = r.next_byte();
      if (maxval > 255) v = (v << 8) | r.next_byte();
      px = rescale(v);
    }
  } else {
    for (auto& px : img.pixels) px = rescale(r.read_int());
  }
  return img;
}

Image read_pnm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_pnm(bytes);
}

std::vector<std::uint8_t> encode_pnm(const Image& img) {
  if (img.channels != 1 && img.channels != 3) throw InputError("pnm: 1 or 3 channels required");
  const std::string header = std::string(img.channels == 3 ? "P6" : "P5") + "\n" + std::to_string(img.width) + " " +
                             std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.pixels.begin(), img.pixels.end());
  return out;
}

void write_pnm(const std::filesystem::path& path, const Image& img) {
  const auto bytes = encode_pnm(img);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace rinkloc
