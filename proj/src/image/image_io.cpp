#include <csetjmp>
#include <cstdio>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <jpeglib.h>
#include <png.h>

#include "pixflow/error.hpp"
#include "pixflow/image.hpp"

namespace pixflow {
namespace {

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::FileNotFound, path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

RasterImage from_gray8(int w, int h, const unsigned char* data) {
  RasterImage img(w, h);
  for (std::size_t i = 0; i < img.size(); ++i) img.intensities[i] = data[i] / 255.0;
  return img;
}

RasterImage from_rgb8(int w, int h, const unsigned char* data) {
  RasterImage img(w, h);
  img.channels.resize(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) {
    Rgb px{data[3 * i], data[3 * i + 1], data[3 * i + 2]};
    img.channels[i] = px;
    img.intensities[i] = luminance(px);
  }
  return img;
}

RasterImage decode_png(const std::vector<unsigned char>& bytes, const std::string& name) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    throw Error(ErrorCode::CorruptImage, name + ": " + png.message);
  }
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<unsigned char> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    std::string msg = png.message;
    png_image_free(&png);
    throw Error(ErrorCode::CorruptImage, name + ": " + msg);
  }
  const int w = static_cast<int>(png.width);
  const int h = static_cast<int>(png.height);
  png_image_free(&png);
  return color ? from_rgb8(w, h, buffer.data()) : from_gray8(w, h, buffer.data());
}

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

// Only POD state lives between setjmp and the libjpeg calls.
bool decode_jpeg_raw(const std::vector<unsigned char>& bytes, std::vector<unsigned char>& out,
                     int& w, int& h, int& comps, char* message) {
  jpeg_decompress_struct cinfo;
  JpegErrorManager jerr;
  cinfo.err = jpeg_std_error(&jerr.base);
  jerr.base.error_exit = jpeg_error_exit;
  if (setjmp(jerr.jump)) {
    std::strncpy(message, jerr.message, JMSG_LENGTH_MAX);
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  if (cinfo.jpeg_color_space != JCS_GRAYSCALE) cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  w = static_cast<int>(cinfo.output_width);
  h = static_cast<int>(cinfo.output_height);
  comps = cinfo.output_components;
  out.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) *
             static_cast<std::size_t>(comps));
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = out.data() + static_cast<std::size_t>(cinfo.output_scanline) *
                                    static_cast<std::size_t>(w) * static_cast<std::size_t>(comps);
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

RasterImage decode_jpeg(const std::vector<unsigned char>& bytes, const std::string& name) {
  std::vector<unsigned char> raw;
  int w = 0, h = 0, comps = 0;
  char message[JMSG_LENGTH_MAX] = {};
  if (!decode_jpeg_raw(bytes, raw, w, h, comps, message)) {
    throw Error(ErrorCode::CorruptImage, name + ": " + message);
  }
  if (comps == 1) return from_gray8(w, h, raw.data());
  if (comps == 3) return from_rgb8(w, h, raw.data());
  throw Error(ErrorCode::UnsupportedFormat, name + ": unexpected JPEG component count");
}

// Netpbm P2/P3/P5/P6. Header tokens may be separated by comments.
RasterImage decode_pnm(const std::vector<unsigned char>& bytes, const std::string& name) {
  std::size_t pos = 2;
  auto next_token = [&]() -> long {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
      throw Error(ErrorCode::CorruptImage, name + ": truncated header");
    }
    long value = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
      value = value * 10 + (bytes[pos] - '0');
      if (value > (1L << 30)) throw Error(ErrorCode::CorruptImage, name + ": header overflow");
      ++pos;
    }
    return value;
  };

  const char kind = static_cast<char>(bytes[1]);
  const bool ascii = kind == '2' || kind == '3';
  const int comps = (kind == '3' || kind == '6') ? 3 : 1;
  const long w = next_token();
  const long h = next_token();
  const long maxval = next_token();
  if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) {
    throw Error(ErrorCode::CorruptImage, name + ": bad dimensions");
  }
  const std::size_t count = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * comps;
  std::vector<long> samples(count);
  if (ascii) {
    for (auto& s : samples) s = next_token();
  } else {
    ++pos;  // single whitespace after maxval
    const std::size_t width_bytes = maxval > 255 ? 2 : 1;
    if (bytes.size() < pos + count * width_bytes) {
      throw Error(ErrorCode::CorruptImage, name + ": truncated raster");
    }
    for (std::size_t i = 0; i < count; ++i) {
      samples[i] = width_bytes == 2 ? (bytes[pos + 2 * i] << 8) | bytes[pos + 2 * i + 1]
                                    : bytes[pos + i];
    }
  }
  for (long s : samples) {
    if (s > maxval) throw Error(ErrorCode::CorruptImage, name + ": sample exceeds maxval");
  }

  const int iw = static_cast<int>(w);
  const int ih = static_cast<int>(h);
  if (maxval == 255) {
    std::vector<unsigned char> raw(samples.begin(), samples.end());
    return comps == 1 ? from_gray8(iw, ih, raw.data()) : from_rgb8(iw, ih, raw.data());
  }
  RasterImage img(iw, ih);
  const double scale = static_cast<double>(maxval);
  if (comps == 3) {
    img.channels.resize(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) {
      for (int c = 0; c < 3; ++c) {
        img.channels[i][c] =
            static_cast<std::uint8_t>((samples[3 * i + c] * 255 + maxval / 2) / maxval);
      }
      img.intensities[i] = (0.299 * samples[3 * i] + 0.587 * samples[3 * i + 1] +
                            0.114 * samples[3 * i + 2]) / scale;
    }
  } else {
    for (std::size_t i = 0; i < img.size(); ++i) img.intensities[i] = samples[i] / scale;
  }
  return img;
}

std::uint8_t to_byte(double v) {
  const double clamped = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
  return static_cast<std::uint8_t>(clamped * 255.0 + 0.5);
}

}  // namespace

RasterImage load_image(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  const std::string name = path.string();
  if (bytes.size() >= 8 && png_sig_cmp(bytes.data(), 0, 8) == 0) return decode_png(bytes, name);
  if (bytes.size() >= 3 && bytes[0] == 0xFF && bytes[1] == 0xD8 && bytes[2] == 0xFF) {
    return decode_jpeg(bytes, name);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' &&
      (bytes[1] == '2' || bytes[1] == '3' || bytes[1] == '5' || bytes[1] == '6')) {
    return decode_pnm(bytes, name);
  }
  throw Error(ErrorCode::UnsupportedFormat, name);
}

void save_png(const RasterImage& image, const std::filesystem::path& path) {
  image.validate();
  const bool color = image.has_color();
  std::vector<unsigned char> buffer;
  buffer.reserve(image.size() * (color ? 3 : 1));
  for (std::size_t i = 0; i < image.size(); ++i) {
    if (color) {
      buffer.insert(buffer.end(), image.channels[i].begin(), image.channels[i].end());
    } else {
      buffer.push_back(to_byte(image.intensities[i]));
    }
  }
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width);
  png.height = static_cast<png_uint_32>(image.height);
  png.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&png, path.string().c_str(), 0, buffer.data(), 0, nullptr)) {
    throw Error(ErrorCode::IoError, path.string() + ": " + png.message);
  }
}

void save_pgm(const RasterImage& image, const std::filesystem::path& path) {
  image.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, path.string());
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  for (double v : image.intensities) out.put(static_cast<char>(to_byte(v)));
  if (!out) throw Error(ErrorCode::IoError, path.string());
}

}  // namespace pixflow
