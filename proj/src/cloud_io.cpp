#include "planeseg/cloud_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace planeseg {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary PLY I/O assumes a little-endian host");

enum class ScalarType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

std::size_t type_size(ScalarType t) {
  switch (t) {
    case ScalarType::Int8:
    case ScalarType::UInt8: return 1;
    case ScalarType::Int16:
    case ScalarType::UInt16: return 2;
    case ScalarType::Int32:
    case ScalarType::UInt32:
    case ScalarType::Float32: return 4;
    case ScalarType::Float64: return 8;
  }
  return 0;
}

std::optional<ScalarType> parse_type(const std::string& name) {
  if (name == "char" || name == "int8") return ScalarType::Int8;
  if (name == "uchar" || name == "uint8") return ScalarType::UInt8;
  if (name == "short" || name == "int16") return ScalarType::Int16;
  if (name == "ushort" || name == "uint16") return ScalarType::UInt16;
  if (name == "int" || name == "int32") return ScalarType::Int32;
  if (name == "uint" || name == "uint32") return ScalarType::UInt32;
  if (name == "float" || name == "float32") return ScalarType::Float32;
  if (name == "double" || name == "float64") return ScalarType::Float64;
  return std::nullopt;
}

struct Property {
  std::string name;
  ScalarType type = ScalarType::Float32;
  bool is_list = false;
  ScalarType count_type = ScalarType::UInt8;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

enum class Encoding { Ascii, BinaryLE };

struct Header {
  Encoding encoding = Encoding::Ascii;
  std::vector<Element> elements;
  int lines = 0;  // header length in lines
};

Header parse_header(std::istream& in, const std::string& path) {
  Header h;
  std::string line;
  auto fail = [&](const std::string& msg) -> Error {
    return Error(path + ":" + std::to_string(h.lines) + ": " + msg);
  };
  if (!std::getline(in, line)) throw Error(path + ": empty file");
  ++h.lines;
  if (line.rfind("ply", 0) != 0) throw fail("missing 'ply' magic");
  bool have_format = false;
  while (std::getline(in, line)) {
    ++h.lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word.empty() || word == "comment" || word == "obj_info") continue;
    if (word == "format") {
      std::string enc;
      ss >> enc;
      if (enc == "ascii") h.encoding = Encoding::Ascii;
      else if (enc == "binary_little_endian") h.encoding = Encoding::BinaryLE;
      else throw fail("unsupported PLY encoding '" + enc + "'");
      have_format = true;
    } else if (word == "element") {
      Element e;
      long long count = -1;
      ss >> e.name >> count;
      if (ss.fail() || count < 0) throw fail("malformed element line");
      e.count = static_cast<std::size_t>(count);
      h.elements.push_back(std::move(e));
    } else if (word == "property") {
      if (h.elements.empty()) throw fail("property before any element");
      Property p;
      std::string type;
      ss >> type;
      if (type == "list") {
        std::string ct, it;
        ss >> ct >> it >> p.name;
        auto c = parse_type(ct);
        auto i = parse_type(it);
        if (!c || !i) throw fail("unknown list property type");
        p.is_list = true;
        p.count_type = *c;
        p.type = *i;
      } else {
        auto t = parse_type(type);
        if (!t) throw fail("unknown property type '" + type + "'");
        p.type = *t;
        ss >> p.name;
      }
      if (p.name.empty()) throw fail("property without a name");
      h.elements.back().properties.push_back(std::move(p));
    } else if (word == "end_header") {
      if (!have_format) throw fail("missing format line");
      return h;
    } else {
      throw fail("unexpected header keyword '" + word + "'");
    }
  }
  throw Error(path + ": header is not terminated by end_header");
}

/// Reads one scalar of the given type from a binary stream as double.
double read_binary(std::istream& in, ScalarType t, const std::string& path) {
  char buf[8];
  const auto offset = static_cast<long long>(in.tellg());
  if (!in.read(buf, static_cast<std::streamsize>(type_size(t)))) {
    throw Error(path + ": unexpected end of data at byte " + std::to_string(offset));
  }
  switch (t) {
    case ScalarType::Int8: { std::int8_t v; std::memcpy(&v, buf, 1); return v; }
    case ScalarType::UInt8: { std::uint8_t v; std::memcpy(&v, buf, 1); return v; }
    case ScalarType::Int16: { std::int16_t v; std::memcpy(&v, buf, 2); return v; }
    case ScalarType::UInt16: { std::uint16_t v; std::memcpy(&v, buf, 2); return v; }
    case ScalarType::Int32: { std::int32_t v; std::memcpy(&v, buf, 4); return v; }
    case ScalarType::UInt32: { std::uint32_t v; std::memcpy(&v, buf, 4); return v; }
    case ScalarType::Float32: { float v; std::memcpy(&v, buf, 4); return v; }
    case ScalarType::Float64: { double v; std::memcpy(&v, buf, 8); return v; }
  }
  return 0.0;
}

/// Reads every element instance as a row of doubles (list properties are
/// consumed and dropped). Only the vertex element's rows are kept.
class ElementReader {
 public:
  ElementReader(std::istream& in, const Header& h, const std::string& path)
      : in_(in), h_(h), path_(path), line_(h.lines) {}

  bool next_row(const Element& e, std::vector<double>& row) {
    row.clear();
    if (h_.encoding == Encoding::BinaryLE) {
      for (const auto& p : e.properties) {
        if (p.is_list) {
          const double n = read_binary(in_, p.count_type, path_);
          for (long long k = 0; k < static_cast<long long>(n); ++k) read_binary(in_, p.type, path_);
          row.push_back(0.0);
        } else {
          row.push_back(read_binary(in_, p.type, path_));
        }
      }
      return true;
    }
    std::string text;
    do {
      if (!std::getline(in_, text)) {
        throw Error(path_ + ":" + std::to_string(line_ + 1) + ": unexpected end of file");
      }
      ++line_;
    } while (text.find_first_not_of(" \t\r") == std::string::npos);
    std::istringstream ss(text);
    ss.imbue(std::locale::classic());
    for (const auto& p : e.properties) {
      double v = 0.0;
      ss >> v;
      if (p.is_list) {
        for (long long k = 0; k < static_cast<long long>(v); ++k) {
          double skip;
          ss >> skip;
        }
        v = 0.0;
      }
      if (ss.fail()) {
        throw Error(path_ + ":" + std::to_string(line_) + ": malformed " + e.name + " row");
      }
      row.push_back(v);
    }
    return true;
  }

  int line() const { return line_; }

 private:
  std::istream& in_;
  const Header& h_;
  const std::string& path_;
  int line_;
};

std::string extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return {};
  std::string ext = path.substr(dot + 1);
  for (auto& ch : ext) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return ext;
}

LabeledCloud read_xyz(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  LabeledCloud cloud;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
    std::istringstream ss(line);
    ss.imbue(std::locale::classic());
    Point3 p;
    ss >> p.x() >> p.y() >> p.z();
    if (ss.fail()) throw Error(path + ":" + std::to_string(line_no) + ": expected three numbers");
    if (!p.allFinite()) {
      throw Error(path + ":" + std::to_string(line_no) + ": non-finite coordinate");
    }
    cloud.points.push_back(p);
  }
  return cloud;
}

void write_binary(std::ostream& out, const void* data, std::size_t n) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

}  // namespace

CloudFormat format_from_path(const std::string& path) {
  const std::string ext = extension(path);
  if (ext == "xyz" || ext == "txt") return CloudFormat::Xyz;
  return CloudFormat::PlyBinaryLE;
}

PlyContents read_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  const Header h = parse_header(in, path);
  ElementReader reader(in, h, path);

  PlyContents out;
  bool seen_vertex = false;
  std::vector<double> row;
  for (const Element& e : h.elements) {
    if (e.name != "vertex") {
      if (seen_vertex) break;  // nothing after the vertices is needed
      for (std::size_t i = 0; i < e.count; ++i) reader.next_row(e, row);
      continue;
    }
    seen_vertex = true;
    int ix = -1, iy = -1, iz = -1, icat = -1, iplane = -1;
    for (std::size_t k = 0; k < e.properties.size(); ++k) {
      const auto& p = e.properties[k];
      if (p.is_list) continue;
      const int idx = static_cast<int>(k);
      if (p.name == "x") ix = idx;
      else if (p.name == "y") iy = idx;
      else if (p.name == "z") iz = idx;
      else if (p.name == "category") icat = idx;
      else if (p.name == "plane_id") iplane = idx;
    }
    if (ix < 0 || iy < 0 || iz < 0) throw Error(path + ": vertex element lacks x/y/z");
    out.cloud.points.reserve(e.count);
    if (icat >= 0) out.cloud.labels.emplace().reserve(e.count);
    if (iplane >= 0) out.plane_id.emplace().reserve(e.count);
    for (std::size_t i = 0; i < e.count; ++i) {
      reader.next_row(e, row);
      const Point3 p(row[ix], row[iy], row[iz]);
      if (!p.allFinite()) {
        throw Error(path + ": vertex " + std::to_string(i) + " has a non-finite coordinate");
      }
      out.cloud.points.push_back(p);
      if (icat >= 0) {
        const double c = row[icat];
        if (c != 0.0 && c != 1.0) {
          throw Error(path + ": vertex " + std::to_string(i) + " has category outside {0,1}");
        }
        out.cloud.labels->push_back(c == 0.0 ? Category::H : Category::V);
      }
      if (iplane >= 0) out.plane_id->push_back(static_cast<std::int32_t>(row[iplane]));
    }
  }
  if (!seen_vertex) throw Error(path + ": no vertex element");
  return out;
}

LabeledCloud read_cloud(const std::string& path, CloudFormat format) {
  if (format == CloudFormat::Xyz) return read_xyz(path);
  return read_ply(path).cloud;
}

LabeledCloud read_cloud(const std::string& path) {
  return read_cloud(path, format_from_path(path));
}

Rgb palette_color(std::int32_t plane_id) noexcept {
  static constexpr std::array<Rgb, 16> kPalette{{
      {230, 25, 75},   {60, 180, 75},   {255, 225, 25},  {0, 130, 200},
      {245, 130, 48},  {145, 30, 180},  {70, 240, 240},  {240, 50, 230},
      {210, 245, 60},  {250, 190, 212}, {0, 128, 128},   {220, 190, 255},
      {170, 110, 40},  {255, 250, 200}, {128, 0, 0},     {170, 255, 195},
  }};
  if (plane_id < 0) return {128, 128, 128};
  return kPalette[static_cast<std::size_t>(plane_id) % kPalette.size()];
}

void write_cloud(const LabeledCloud& cloud,
                 const std::vector<std::int32_t>* assignment,
                 const std::string& path, CloudFormat format) {
  check_cloud(cloud);
  if (assignment && assignment->size() != cloud.size()) {
    throw Error("assignment length does not match point count");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);

  if (format == CloudFormat::Xyz) {
    out.imbue(std::locale::classic());
    out << std::setprecision(9);
    for (const auto& p : cloud.points) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
    if (!out) throw Error("write failed: " + path);
    return;
  }

  const bool ascii = format == CloudFormat::PlyAscii;
  const bool labels = cloud.has_labels();
  out << "ply\n"
      << "format " << (ascii ? "ascii" : "binary_little_endian") << " 1.0\n"
      << "comment generated by planeseg\n"
      << "element vertex " << cloud.size() << '\n'
      << "property float x\nproperty float y\nproperty float z\n";
  if (labels) out << "property uchar category\n";
  if (assignment) {
    out << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
        << "property int plane_id\n";
  }
  out << "end_header\n";

  if (ascii) out.imbue(std::locale::classic());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const float xyz[3] = {static_cast<float>(cloud.points[i].x()),
                          static_cast<float>(cloud.points[i].y()),
                          static_cast<float>(cloud.points[i].z())};
    const std::uint8_t cat = labels ? static_cast<std::uint8_t>((*cloud.labels)[i]) : 0;
    const std::int32_t id = assignment ? (*assignment)[i] : kUnassigned;
    const Rgb rgb = palette_color(id);
    if (ascii) {
      out << std::setprecision(9) << xyz[0] << ' ' << xyz[1] << ' ' << xyz[2];
      if (labels) out << ' ' << static_cast<int>(cat);
      if (assignment) {
        out << ' ' << static_cast<int>(rgb[0]) << ' ' << static_cast<int>(rgb[1]) << ' '
            << static_cast<int>(rgb[2]) << ' ' << id;
      }
      out << '\n';
    } else {
      write_binary(out, xyz, sizeof(xyz));
      if (labels) write_binary(out, &cat, 1);
      if (assignment) {
        write_binary(out, rgb.data(), 3);
        write_binary(out, &id, sizeof(id));
      }
    }
  }
  if (!out) throw Error("write failed: " + path);
}

}  // namespace planeseg
