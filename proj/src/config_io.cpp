#include "planeseg/config_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace planeseg {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& text) {
  std::istringstream ss(text);
  ss.imbue(std::locale::classic());
  double v = 0.0;
  ss >> v;
  if (ss.fail() || !(ss >> std::ws).eof()) {
    throw ConfigError(key, "cannot parse '" + text + "' as a number");
  }
  return v;
}

std::size_t to_count(const std::string& key, const std::string& text) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(key, "cannot parse '" + text + "' as a count");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError(key, "cannot parse '" + text + "' as a boolean");
}

}  // namespace

Eigen::Vector3d parse_vector3(const std::string& text) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream ss(s);
  ss.imbue(std::locale::classic());
  Eigen::Vector3d v;
  ss >> v.x() >> v.y() >> v.z();
  if (ss.fail() || !(ss >> std::ws).eof()) {
    throw Error("cannot parse '" + text + "' as a 3-vector");
  }
  return v;
}

SegmenterConfig parse_config(std::istream& in) {
  SegmenterConfig c = default_config();
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "theta_n_out") c.theta_n_out = to_count(key, value);
    else if (key == "theta_r_out") c.theta_r_out = to_double(key, value);
    else if (key == "theta_n_in") c.theta_n_in = to_count(key, value);
    else if (key == "theta_e_n") c.theta_e_n = to_double(key, value);
    else if (key == "theta_coplane") c.theta_coplane = to_double(key, value);
    else if (key == "residual_distance") c.residual_distance = to_double(key, value);
    else if (key == "octree_extent") c.octree_extent = to_double(key, value);
    else if (key == "octree_max_depth") c.octree_max_depth = static_cast<int>(to_count(key, value));
    else if (key == "voxel_size") c.voxel_size = to_double(key, value);
    else if (key == "classify_k") c.classify_k = to_count(key, value);
    else if (key == "classify_edge_aware") c.classify_edge_aware = to_bool(key, value);
    else if (key == "gravity") {
      try {
        c.gravity = parse_vector3(value);
      } catch (const Error& e) {
        throw ConfigError(key, e.what());
      }
    } else {
      throw Error("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  validate_config(c);
  return c;
}

SegmenterConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path);
  return parse_config(in);
}

void write_config(std::ostream& out, const SegmenterConfig& c) {
  std::ostringstream ss;
  ss.imbue(std::locale::classic());
  ss << std::setprecision(17);
  ss << "# planeseg segmenter configuration (SI units)\n"
     << "theta_n_out = " << c.theta_n_out << '\n'
     << "theta_r_out = " << c.theta_r_out << '\n'
     << "theta_n_in = " << c.theta_n_in << '\n'
     << "theta_e_n = " << c.theta_e_n << '\n'
     << "theta_coplane = " << c.theta_coplane << '\n'
     << "residual_distance = " << c.residual_distance << '\n'
     << "octree_extent = " << c.octree_extent << '\n'
     << "octree_max_depth = " << c.octree_max_depth << '\n'
     << "voxel_size = " << c.voxel_size << '\n'
     << "classify_k = " << c.classify_k << '\n'
     << "classify_edge_aware = " << (c.classify_edge_aware ? "true" : "false") << '\n'
     << "gravity = " << c.gravity.x() << ", " << c.gravity.y() << ", "
     << c.gravity.z() << '\n';
  out << ss.str();
}

void write_config(const std::string& path, const SegmenterConfig& cfg) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write config file " + path);
  write_config(out, cfg);
}

}  // namespace planeseg
