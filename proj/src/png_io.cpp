#include "clothgrasp/png_io.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <string>

#include "clothgrasp/errors.hpp"

namespace clothgrasp::png {
namespace {

struct ReadState {
  std::FILE* file = nullptr;
  std::size_t offset = 0;
  char message[256] = {};
};

void ReadCallback(png_structp png_ptr, png_bytep out, png_size_t length) {
  auto* state = static_cast<ReadState*>(png_get_io_ptr(png_ptr));
  const std::size_t got = std::fread(out, 1, length, state->file);
  state->offset += got;
  if (got != length) png_error(png_ptr, "unexpected end of file");
}

void ErrorCallback(png_structp png_ptr, png_const_charp msg) {
  auto* state = static_cast<ReadState*>(png_get_error_ptr(png_ptr));
  std::snprintf(state->message, sizeof(state->message), "%s", msg);
  png_longjmp(png_ptr, 1);
}

void WarningCallback(png_structp, png_const_charp) {}

struct FileCloser {
  std::FILE* f;
  ~FileCloser() {
    if (f) std::fclose(f);
  }
};

// Everything that must survive a longjmp lives in the caller.
bool DecodeInto(ReadState& state, Image& image, std::vector<png_bytep>& rows,
                std::vector<std::uint8_t>& buffer) {
  png_structp png_ptr =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, &state, ErrorCallback, WarningCallback);
  if (!png_ptr) return false;
  png_infop info_ptr = png_create_info_struct(png_ptr);
  if (!info_ptr) {
    png_destroy_read_struct(&png_ptr, nullptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png_ptr))) {
    png_destroy_read_struct(&png_ptr, &info_ptr, nullptr);
    return false;
  }
  png_set_read_fn(png_ptr, &state, ReadCallback);
  png_read_info(png_ptr, info_ptr);

  const int color_type = png_get_color_type(png_ptr, info_ptr);
  const int depth = png_get_bit_depth(png_ptr, info_ptr);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png_ptr);
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png_ptr);
  if (depth == 16) png_set_swap(png_ptr);  // native little-endian uint16
  png_read_update_info(png_ptr, info_ptr);

  image.width = static_cast<int>(png_get_image_width(png_ptr, info_ptr));
  image.height = static_cast<int>(png_get_image_height(png_ptr, info_ptr));
  image.channels = png_get_channels(png_ptr, info_ptr);
  image.bit_depth = png_get_bit_depth(png_ptr, info_ptr);
  const std::size_t rowbytes = png_get_rowbytes(png_ptr, info_ptr);
  buffer.resize(rowbytes * static_cast<std::size_t>(image.height));
  rows.resize(static_cast<std::size_t>(image.height));
  for (int y = 0; y < image.height; ++y) rows[static_cast<std::size_t>(y)] = buffer.data() + rowbytes * y;
  png_read_image(png_ptr, rows.data());
  png_read_end(png_ptr, nullptr);
  png_destroy_read_struct(&png_ptr, &info_ptr, nullptr);
  return true;
}

struct WriteState {
  char message[256] = {};
};

void WriteErrorCallback(png_structp png_ptr, png_const_charp msg) {
  auto* state = static_cast<WriteState*>(png_get_error_ptr(png_ptr));
  std::snprintf(state->message, sizeof(state->message), "%s", msg);
  png_longjmp(png_ptr, 1);
}

bool EncodeFrom(std::FILE* file, WriteState& state, int width, int height, int color_type,
                int bit_depth, std::vector<png_bytep>& rows) {
  png_structp png_ptr =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, &state, WriteErrorCallback, WarningCallback);
  if (!png_ptr) return false;
  png_infop info_ptr = png_create_info_struct(png_ptr);
  if (!info_ptr) {
    png_destroy_write_struct(&png_ptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png_ptr))) {
    png_destroy_write_struct(&png_ptr, &info_ptr);
    return false;
  }
  png_init_io(png_ptr, file);
  png_set_IHDR(png_ptr, info_ptr, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               bit_depth, color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png_ptr, info_ptr);
  if (bit_depth == 16) png_set_swap(png_ptr);
  png_write_image(png_ptr, rows.data());
  png_write_end(png_ptr, nullptr);
  png_destroy_write_struct(&png_ptr, &info_ptr);
  return true;
}

void Write(const std::filesystem::path& path, int width, int height, int color_type,
           int bit_depth, std::uint8_t* bytes, std::size_t rowbytes) {
  if (width <= 0 || height <= 0) Throw(ErrorKind::kParameter, "cannot write an empty PNG");
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) Throw(ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  FileCloser closer{f};
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) rows[static_cast<std::size_t>(y)] = bytes + rowbytes * y;
  WriteState state;
  if (!EncodeFrom(f, state, width, height, color_type, bit_depth, rows)) {
    Throw(ErrorKind::kIo, "failed to encode " + path.string() + ": " + state.message);
  }
  if (std::fflush(f) != 0) Throw(ErrorKind::kIo, "failed to write " + path.string());
}

}  // namespace

Image Read(const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) Throw(ErrorKind::kIo, "cannot open " + path.string());
  FileCloser closer{f};

  ReadState state;
  state.file = f;
  png_byte signature[8] = {};
  const std::size_t got = std::fread(signature, 1, 8, f);
  state.offset = got;
  if (got != 8 || png_sig_cmp(signature, 0, 8) != 0) {
    Throw(ErrorKind::kFormat, path.string() + ": not a PNG signature at byte offset 0");
  }

  Image image;
  std::vector<png_bytep> rows;
  std::vector<std::uint8_t> buffer;
  std::fseek(f, 0, SEEK_SET);
  state.offset = 0;
  if (!DecodeInto(state, image, rows, buffer)) {
    Throw(ErrorKind::kFormat, path.string() + ": " + state.message + " at byte offset " +
                                  std::to_string(state.offset));
  }
  const std::size_t count = static_cast<std::size_t>(image.width) *
                            static_cast<std::size_t>(image.height) *
                            static_cast<std::size_t>(image.channels);
  image.samples.resize(count);
  if (image.bit_depth == 16) {
    std::memcpy(image.samples.data(), buffer.data(), count * sizeof(std::uint16_t));
  } else {
    for (std::size_t i = 0; i < count; ++i) image.samples[i] = buffer[i];
  }
  return image;
}

void WriteGray16(const std::filesystem::path& path, int width, int height,
                 const std::vector<std::uint16_t>& samples) {
  if (samples.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    Throw(ErrorKind::kParameter, "gray16 sample count mismatch");
  }
  std::vector<std::uint16_t> copy = samples;
  Write(path, width, height, PNG_COLOR_TYPE_GRAY, 16, reinterpret_cast<std::uint8_t*>(copy.data()),
        2 * static_cast<std::size_t>(width));
}

void WriteRgb8(const std::filesystem::path& path, const RgbImage& image) {
  std::vector<std::uint8_t> copy = image.data();
  Write(path, image.width(), image.height(), PNG_COLOR_TYPE_RGB, 8, copy.data(),
        3 * static_cast<std::size_t>(image.width()));
}

void WriteDepth(const std::filesystem::path& path, const DepthImage& depth) {
  std::vector<std::uint16_t> mm(static_cast<std::size_t>(depth.width()) *
                                static_cast<std::size_t>(depth.height()));
  const auto values = depth.raster().data();
  for (std::size_t i = 0; i < mm.size(); ++i) {
    const double v = std::round(values[i] * 1000.0);
    mm[i] = static_cast<std::uint16_t>(v > 65535.0 ? 65535.0 : v);
  }
  WriteGray16(path, depth.width(), depth.height(), mm);
}

DepthImage ReadDepth(const std::filesystem::path& path) {
  const Image image = Read(path);
  if (image.channels != 1 || image.bit_depth != 16) {
    Throw(ErrorKind::kFormat, path.string() + ": depth must be a 16-bit single-channel PNG");
  }
  std::vector<double> meters(image.samples.size());
  for (std::size_t i = 0; i < meters.size(); ++i) meters[i] = image.samples[i] / 1000.0;
  return DepthImage(image.width, image.height, std::move(meters));
}

RgbImage ReadRgb(const std::filesystem::path& path) {
  const Image image = Read(path);
  if (image.bit_depth != 8) Throw(ErrorKind::kFormat, path.string() + ": expected an 8-bit PNG");
  std::vector<std::uint8_t> rgb(3 * static_cast<std::size_t>(image.width) *
                                static_cast<std::size_t>(image.height));
  const std::size_t n = static_cast<std::size_t>(image.width) * static_cast<std::size_t>(image.height);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint16_t* s = &image.samples[i * static_cast<std::size_t>(image.channels)];
    const bool gray = image.channels <= 2;
    rgb[3 * i] = static_cast<std::uint8_t>(s[0]);
    rgb[3 * i + 1] = static_cast<std::uint8_t>(gray ? s[0] : s[1]);
    rgb[3 * i + 2] = static_cast<std::uint8_t>(gray ? s[0] : s[2]);
  }
  return RgbImage(image.width, image.height, std::move(rgb));
}

}  // namespace clothgrasp::png
