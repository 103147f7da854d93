#include "planeseg/depth.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

namespace planeseg {
namespace {

// libpng prints to stderr by default; failures surface as Error instead.
void png_silent_error(png_structp png, png_const_charp) { png_longjmp(png, 1); }
void png_silent_warning(png_structp, png_const_charp) {}

struct FileCloser {
  void operator()(std::FILE* f) const noexcept { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

void check_frame(const DepthFrame& f) {
  if (f.width <= 0 || f.height <= 0) throw Error("depth frame must have positive size");
  if (f.depth.size() != static_cast<std::size_t>(f.width) * static_cast<std::size_t>(f.height)) {
    throw Error("depth buffer size does not match width*height");
  }
  if (!(f.intrinsics.fx > 0.0) || !(f.intrinsics.fy > 0.0)) {
    throw Error("focal lengths must be positive");
  }
  if (!(f.intrinsics.max_range > 0.0)) throw Error("max_range must be positive");
}

LabeledCloud backproject(const DepthFrame& frame) {
  check_frame(frame);
  const auto& k = frame.intrinsics;
  LabeledCloud cloud;
  for (int v = 0; v < frame.height; ++v) {
    for (int u = 0; u < frame.width; ++u) {
      const double d = frame.depth[static_cast<std::size_t>(v) * frame.width + u];
      if (!(d > 0.0) || d > k.max_range) continue;
      cloud.points.emplace_back(d * (u - k.cx) / k.fx, d * (v - k.cy) / k.fy, d);
    }
  }
  return cloud;
}

PinholeIntrinsics read_intrinsics(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open intrinsics file " + path);
  PinholeIntrinsics k;
  bool fx = false, fy = false, cx = false, cy = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw Error(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::istringstream ks(line.substr(0, eq)), vs(line.substr(eq + 1));
    vs.imbue(std::locale::classic());
    std::string key;
    double value = 0.0;
    ks >> key;
    vs >> value;
    if (vs.fail()) throw Error(path + ":" + std::to_string(line_no) + ": bad number");
    if (key == "fx") { k.fx = value; fx = true; }
    else if (key == "fy") { k.fy = value; fy = true; }
    else if (key == "cx") { k.cx = value; cx = true; }
    else if (key == "cy") { k.cy = value; cy = true; }
    else if (key == "max_range") k.max_range = value;
    else throw Error(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  if (!(fx && fy && cx && cy)) throw Error(path + ": fx, fy, cx and cy are required");
  return k;
}

DepthFrame load_depth_png(const std::string& path, const PinholeIntrinsics& intrinsics) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw Error("cannot open " + path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_silent_error, png_silent_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error("libpng initialisation failed");
  }
  DepthFrame frame;
  frame.intrinsics = intrinsics;
  std::vector<png_byte> raw;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(path + ": corrupt PNG");
  }
  png_init_io(png, file.get());
  png_read_info(png, info);
  const auto bit_depth = png_get_bit_depth(png, info);
  const auto color = png_get_color_type(png, info);
  if (bit_depth != 16 || color != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(path + ": expected a 16-bit grayscale PNG");
  }
  frame.width = static_cast<int>(png_get_image_width(png, info));
  frame.height = static_cast<int>(png_get_image_height(png, info));
  const std::size_t stride = png_get_rowbytes(png, info);
  raw.resize(stride * static_cast<std::size_t>(frame.height));
  rows.resize(static_cast<std::size_t>(frame.height));
  for (int r = 0; r < frame.height; ++r) rows[r] = raw.data() + stride * r;
  png_read_image(png, rows.data());
  png_destroy_read_struct(&png, &info, nullptr);

  frame.depth.resize(static_cast<std::size_t>(frame.width) * frame.height);
  for (std::size_t i = 0; i < frame.depth.size(); ++i) {
    // PNG stores 16-bit samples big-endian.
    const unsigned mm = (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
    frame.depth[i] = mm / 1000.0;
  }
  check_frame(frame);
  return frame;
}

void save_depth_png(const std::string& path, const DepthFrame& frame) {
  check_frame(frame);
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw Error("cannot write " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_silent_error, png_silent_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error("libpng initialisation failed");
  }
  std::vector<png_byte> raw(static_cast<std::size_t>(frame.width) * frame.height * 2);
  for (std::size_t i = 0; i < frame.depth.size(); ++i) {
    const double mm = std::round(frame.depth[i] * 1000.0);
    const unsigned v = mm <= 0.0 ? 0u : mm >= 65535.0 ? 65535u : static_cast<unsigned>(mm);
    raw[2 * i] = static_cast<png_byte>(v >> 8);
    raw[2 * i + 1] = static_cast<png_byte>(v & 0xff);
  }
  std::vector<png_bytep> rows(static_cast<std::size_t>(frame.height));
  for (int r = 0; r < frame.height; ++r) rows[r] = raw.data() + static_cast<std::size_t>(r) * frame.width * 2;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(path + ": PNG write failed");
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(frame.width), static_cast<png_uint_32>(frame.height),
               16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace planeseg
