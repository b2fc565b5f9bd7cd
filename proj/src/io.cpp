#include "rawpipe/io.hpp"

#include "rawpipe/color.hpp"
#include "rawpipe/error.hpp"

#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

namespace rawpipe {

Rgb8Buffer quantize_8bit(const SrgbImage& img) {
  Rgb8Buffer buf;
  buf.rows = img.rows();
  buf.cols = img.cols();
  buf.data.resize(static_cast<std::size_t>(buf.rows * buf.cols * 3));
  std::size_t k = 0;
  for (Index r = 0; r < buf.rows; ++r) {
    for (Index c = 0; c < buf.cols; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        const float v = std::clamp(img(r, c, ch), 0.0f, 1.0f);
        buf.data[k++] = static_cast<std::uint8_t>(std::lround(v * 255.0f));
      }
    }
  }
  return buf;
}

SrgbImage dequantize_8bit(const Rgb8Buffer& buf) {
  SrgbImage img(buf.rows, buf.cols);
  std::size_t k = 0;
  for (Index r = 0; r < buf.rows; ++r) {
    for (Index c = 0; c < buf.cols; ++c) {
      for (int ch = 0; ch < 3; ++ch) img(r, c, ch) = static_cast<float>(buf.data[k++]) / 255.0f;
    }
  }
  return img;
}

// ---------------------------------------------------------------------------
// libjpeg. Errors longjmp back to the setjmp frame; nothing with a non-trivial
// destructor lives in those frames.

namespace {

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

void jpeg_silent(j_common_ptr /*cinfo*/, int /*level*/) {}

bool jpeg_compress_raw(const std::uint8_t* pixels, int rows, int cols, int quality,
                       bool subsample, unsigned char** out, unsigned long* out_size,
                       char* message) {
  jpeg_compress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  err.base.emit_message = jpeg_silent;
  if (setjmp(err.jump)) {
    std::strncpy(message, err.message, JMSG_LENGTH_MAX);
    jpeg_destroy_compress(&cinfo);
    return false;
  }
  jpeg_create_compress(&cinfo);
  jpeg_mem_dest(&cinfo, out, out_size);
  cinfo.image_width = static_cast<JDIMENSION>(cols);
  cinfo.image_height = static_cast<JDIMENSION>(rows);
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  cinfo.dct_method = JDCT_ISLOW;
  cinfo.optimize_coding = FALSE;
  cinfo.write_JFIF_header = TRUE;
  const int luma_factor = subsample ? 2 : 1;
  cinfo.comp_info[0].h_samp_factor = luma_factor;
  cinfo.comp_info[0].v_samp_factor = luma_factor;
  for (int i = 1; i < 3; ++i) {
    cinfo.comp_info[i].h_samp_factor = 1;
    cinfo.comp_info[i].v_samp_factor = 1;
  }
  jpeg_start_compress(&cinfo, TRUE);
  const std::size_t stride = static_cast<std::size_t>(cols) * 3;
  while (cinfo.next_scanline < cinfo.image_height) {
    JSAMPROW row = const_cast<JSAMPROW>(pixels + cinfo.next_scanline * stride);
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  return true;
}

struct JpegDecoded {
  std::uint8_t* pixels = nullptr;
  int rows = 0;
  int cols = 0;
};

bool jpeg_decompress_raw(const std::uint8_t* data, std::size_t size, JpegDecoded* out,
                         char* message) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager err;
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  err.base.emit_message = jpeg_silent;
  if (setjmp(err.jump)) {
    std::strncpy(message, err.message, JMSG_LENGTH_MAX);
    jpeg_destroy_decompress(&cinfo);
    std::free(out->pixels);
    out->pixels = nullptr;
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, const_cast<unsigned char*>(data), static_cast<unsigned long>(size));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  cinfo.dct_method = JDCT_ISLOW;
  jpeg_start_decompress(&cinfo);
  out->rows = static_cast<int>(cinfo.output_height);
  out->cols = static_cast<int>(cinfo.output_width);
  const std::size_t stride = static_cast<std::size_t>(out->cols) * 3;
  out->pixels = static_cast<std::uint8_t*>(std::malloc(stride * static_cast<std::size_t>(out->rows)));
  if (out->pixels == nullptr) {
    std::strncpy(message, "out of memory", JMSG_LENGTH_MAX);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = out->pixels + cinfo.output_scanline * stride;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

}  // namespace

std::vector<std::uint8_t> encode_jpeg(const Rgb8Buffer& buf, int quality, bool subsample_420) {
  require(quality >= 1 && quality <= 100,
          "encode_jpeg: quality must be in [1,100], got " + std::to_string(quality));
  require(buf.rows > 0 && buf.cols > 0, "encode_jpeg: empty image");
  unsigned char* out = nullptr;
  unsigned long out_size = 0;
  char message[JMSG_LENGTH_MAX] = {};
  const bool ok = jpeg_compress_raw(buf.data.data(), static_cast<int>(buf.rows),
                                    static_cast<int>(buf.cols), quality, subsample_420, &out,
                                    &out_size, message);
  std::vector<std::uint8_t> bytes;
  if (ok) bytes.assign(out, out + out_size);
  std::free(out);
  if (!ok) throw IoError(std::string("JPEG encode failed: ") + message);
  return bytes;
}

Rgb8Buffer decode_jpeg(std::span<const std::uint8_t> bytes) {
  JpegDecoded decoded;
  char message[JMSG_LENGTH_MAX] = {};
  if (!jpeg_decompress_raw(bytes.data(), bytes.size(), &decoded, message)) {
    throw IoError(std::string("JPEG decode failed: ") + message);
  }
  Rgb8Buffer buf;
  buf.rows = decoded.rows;
  buf.cols = decoded.cols;
  buf.data.assign(decoded.pixels, decoded.pixels + static_cast<std::size_t>(decoded.rows) * decoded.cols * 3);
  std::free(decoded.pixels);
  return buf;
}

// ---------------------------------------------------------------------------
// libpng

namespace {

struct PngSource {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos;
};

struct PngErrorState {
  char message[256];
};

void png_error_fn(png_structp png, png_const_charp msg) {
  auto* state = static_cast<PngErrorState*>(png_get_error_ptr(png));
  std::snprintf(state->message, sizeof(state->message), "%s", msg);
  png_longjmp(png, 1);
}

void png_warning_fn(png_structp /*png*/, png_const_charp /*msg*/) {}

void png_read_fn(png_structp png, png_bytep out, png_size_t n) {
  auto* src = static_cast<PngSource*>(png_get_io_ptr(png));
  if (src->pos + n > src->size) png_error(png, "truncated PNG stream");
  std::memcpy(out, src->data + src->pos, n);
  src->pos += n;
}

struct PngDecoded {
  std::uint8_t* pixels = nullptr;  // interleaved RGB, 8 or 16 (big-endian) bits
  png_bytep* row_ptrs = nullptr;
  int rows = 0;
  int cols = 0;
  int bit_depth = 8;
};

bool png_decode_raw(PngSource* src, PngDecoded* out, PngErrorState* err) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, err, png_error_fn, png_warning_fn);
  if (png == nullptr) {
    std::snprintf(err->message, sizeof(err->message), "png_create_read_struct failed");
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    std::snprintf(err->message, sizeof(err->message), "png_create_info_struct failed");
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::free(out->pixels);
    std::free(out->row_ptrs);
    out->pixels = nullptr;
    out->row_ptrs = nullptr;
    return false;
  }
  png_set_read_fn(png, src, png_read_fn);
  png_read_info(png, info);
  const png_byte color_type = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(png);
  }
  png_set_strip_alpha(png);
  png_read_update_info(png, info);
  out->rows = static_cast<int>(png_get_image_height(png, info));
  out->cols = static_cast<int>(png_get_image_width(png, info));
  out->bit_depth = png_get_bit_depth(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  out->pixels = static_cast<std::uint8_t*>(std::malloc(stride * static_cast<std::size_t>(out->rows)));
  out->row_ptrs = static_cast<png_bytep*>(std::malloc(sizeof(png_bytep) * static_cast<std::size_t>(out->rows)));
  if (out->pixels == nullptr || out->row_ptrs == nullptr) png_error(png, "out of memory");
  for (int r = 0; r < out->rows; ++r) out->row_ptrs[r] = out->pixels + static_cast<std::size_t>(r) * stride;
  png_read_image(png, out->row_ptrs);
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

SrgbImage decode_png(std::span<const std::uint8_t> bytes) {
  PngSource src{bytes.data(), bytes.size(), 0};
  PngDecoded decoded;
  PngErrorState err{};
  if (!png_decode_raw(&src, &decoded, &err)) {
    throw IoError(std::string("PNG decode failed: ") + err.message);
  }
  SrgbImage img(decoded.rows, decoded.cols);
  const bool wide = decoded.bit_depth == 16;
  const float full = wide ? 65535.0f : 255.0f;
  for (int r = 0; r < decoded.rows; ++r) {
    const std::uint8_t* row = decoded.row_ptrs[r];
    for (int c = 0; c < decoded.cols; ++c) {
      for (int ch = 0; ch < 3; ++ch) {
        const int k = c * 3 + ch;
        const unsigned v = wide ? (static_cast<unsigned>(row[2 * k]) << 8) | row[2 * k + 1] : row[k];
        img(r, c, ch) = static_cast<float>(v) / full;
      }
    }
  }
  std::free(decoded.pixels);
  std::free(decoded.row_ptrs);
  return img;
}

}  // namespace

std::vector<std::uint8_t> encode_png8(const Rgb8Buffer& buf) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(buf.cols);
  image.height = static_cast<png_uint_32>(buf.rows);
  image.format = PNG_FORMAT_RGB;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, buf.data.data(), 0, nullptr)) {
    throw IoError(std::string("PNG encode failed: ") + image.message);
  }
  std::vector<std::uint8_t> bytes(size);
  if (!png_image_write_to_memory(&image, bytes.data(), &size, 0, buf.data.data(), 0, nullptr)) {
    throw IoError(std::string("PNG encode failed: ") + image.message);
  }
  bytes.resize(size);
  return bytes;
}

// ---------------------------------------------------------------------------
// Files

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read error on " + path.string());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write error on " + path.string());
}

SrgbImage read_image(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  static constexpr std::uint8_t kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 8 && std::equal(kPngMagic, kPngMagic + 8, bytes.begin())) {
    return decode_png(bytes);
  }
  if (bytes.size() >= 3 && bytes[0] == 0xff && bytes[1] == 0xd8 && bytes[2] == 0xff) {
    return dequantize_8bit(decode_jpeg(bytes));
  }
  throw IoError("unsupported image format: " + path.string());
}

void write_png8(const std::filesystem::path& path, const SrgbImage& img) {
  write_file_bytes(path, encode_png8(quantize_8bit(img)));
}

void write_jpeg(const std::filesystem::path& path, const SrgbImage& img, int quality) {
  write_file_bytes(path, encode_jpeg(quantize_8bit(img), quality));
}

namespace {

constexpr char kRawMagic[4] = {'R', 'P', 'F', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[at + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_raw_float(const LinearImage& img) {
  std::vector<std::uint8_t> out;
  const std::size_t count = static_cast<std::size_t>(img.rows() * img.cols() * 3);
  out.reserve(16 + 4 * count);
  out.insert(out.end(), kRawMagic, kRawMagic + 4);
  put_u32(out, static_cast<std::uint32_t>(img.rows()));
  put_u32(out, static_cast<std::uint32_t>(img.cols()));
  put_u32(out, 3);
  for (Index r = 0; r < img.rows(); ++r) {
    for (Index c = 0; c < img.cols(); ++c) {
      for (int ch = 0; ch < 3; ++ch) put_u32(out, std::bit_cast<std::uint32_t>(img(r, c, ch)));
    }
  }
  return out;
}

LinearImage decode_raw_float(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16 || !std::equal(kRawMagic, kRawMagic + 4, bytes.begin())) {
    throw IoError("not an RPF1 raw float container");
  }
  const std::uint32_t rows = get_u32(bytes, 4);
  const std::uint32_t cols = get_u32(bytes, 8);
  const std::uint32_t channels = get_u32(bytes, 12);
  if (channels != 3) throw IoError("RPF1: expected 3 channels, got " + std::to_string(channels));
  const std::size_t count = static_cast<std::size_t>(rows) * cols * channels;
  if (bytes.size() != 16 + 4 * count) throw IoError("RPF1: payload size mismatch");
  LinearImage img(rows, cols);
  std::size_t at = 16;
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      for (int ch = 0; ch < 3; ++ch, at += 4) img(r, c, ch) = std::bit_cast<float>(get_u32(bytes, at));
    }
  }
  return img;
}

void write_raw_float(const std::filesystem::path& path, const LinearImage& img) {
  write_file_bytes(path, encode_raw_float(img));
}

LinearImage read_raw_float(const std::filesystem::path& path) {
  return decode_raw_float(read_file_bytes(path));
}

LinearImage read_linear_image(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  if (ext == ".rpf") return read_raw_float(path);
  return srgb_to_linear(read_image(path));
}

}  // namespace rawpipe
