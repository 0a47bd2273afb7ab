#include "depthkit/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "depthkit/errors.hpp"

namespace depthkit {

IntrinsicsRange PipelineConfig::intrinsics_range_for(int width) const {
  IntrinsicsRange range = IntrinsicsRange::defaults_for(width);
  if (fx_range) range.fx_range = *fx_range;
  if (fy_range) range.fy_range = *fy_range;
  range.principal_point_jitter = principal_jitter;
  range.lock_aspect = lock_aspect;
  return range;
}

namespace {

[[noreturn]] void key_error(const std::string& key, const std::string& why) {
  raise(ErrorCode::parse, "config: " + key + ": " + why);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_double(const std::string& key, std::string_view v) {
  const std::string str(v);
  char* end = nullptr;
  const double x = std::strtod(str.c_str(), &end);
  if (end != str.c_str() + str.size() || str.empty()) key_error(key, "expected a number, got '" + str + "'");
  return x;
}

std::uint64_t parse_u64(const std::string& key, std::string_view v) {
  const std::string str(v);
  char* end = nullptr;
  const unsigned long long x = std::strtoull(str.c_str(), &end, 10);
  if (end != str.c_str() + str.size() || str.empty()) key_error(key, "expected an unsigned integer, got '" + str + "'");
  return x;
}

int parse_int(const std::string& key, std::string_view v) {
  const std::string str(v);
  char* end = nullptr;
  const long x = std::strtol(str.c_str(), &end, 10);
  if (end != str.c_str() + str.size() || str.empty()) key_error(key, "expected an integer, got '" + str + "'");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& key, std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  key_error(key, "expected true or false, got '" + std::string(v) + "'");
}

Interval parse_interval(const std::string& key, std::string_view v) {
  std::string_view s = trim(v);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    key_error(key, "expected an interval like [lo, hi]");
  }
  s = s.substr(1, s.size() - 2);
  const std::size_t comma = s.find(',');
  if (comma == std::string_view::npos) key_error(key, "expected an interval like [lo, hi]");
  Interval iv;
  iv.lo = parse_double(key, trim(s.substr(0, comma)));
  iv.hi = parse_double(key, trim(s.substr(comma + 1)));
  return iv;
}

void check_interval(const std::string& key, const Interval& iv) {
  if (!(iv.lo > 0.0) || !(iv.lo <= iv.hi)) {
    key_error(key, "interval must satisfy 0 < lo <= hi, got [" + std::to_string(iv.lo) + ", " +
                       std::to_string(iv.hi) + "]");
  }
}

DepthFileKind parse_codec_kind(const std::string& key, std::string_view v) {
  if (v == "png16_kitti") return DepthFileKind::png16_kitti;
  if (v == "float_map") return DepthFileKind::float_map;
  key_error(key, "expected png16_kitti or float_map, got '" + std::string(v) + "'");
}

}  // namespace

PipelineConfig parse_config_text(std::string_view text) {
  PipelineConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      raise(ErrorCode::parse, "config: line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key{trim(line.substr(0, eq))};
    const std::string_view value = trim(line.substr(eq + 1));

    if (key == "seed") {
      cfg.seed = parse_u64(key, value);
    } else if (key == "threads") {
      cfg.threads = parse_int(key, value);
      if (cfg.threads < 0) key_error(key, "must be >= 0");
    } else if (key == "fx_range") {
      cfg.fx_range = parse_interval(key, value);
      check_interval(key, *cfg.fx_range);
    } else if (key == "fy_range") {
      cfg.fy_range = parse_interval(key, value);
      check_interval(key, *cfg.fy_range);
    } else if (key == "principal_jitter") {
      cfg.principal_jitter = parse_double(key, value);
      if (!(cfg.principal_jitter >= 0.0) || cfg.principal_jitter >= 0.5) {
        key_error(key, "must lie in [0, 0.5)");
      }
    } else if (key == "lock_aspect") {
      cfg.lock_aspect = parse_bool(key, value);
    } else if (key == "scan_mode") {
      if (value == "beams") {
        cfg.scan.mode = ScanMode::beams;
      } else if (value == "random_pixels") {
        cfg.scan.mode = ScanMode::random_pixels;
      } else {
        key_error(key, "expected beams or random_pixels, got '" + std::string(value) + "'");
      }
    } else if (key == "n_beams") {
      cfg.scan.n_beams = parse_int(key, value);
      if (cfg.scan.n_beams < 1) key_error(key, "must be >= 1");
    } else if (key == "vertical_fov") {
      const Interval iv = parse_interval(key, value);
      if (!(iv.lo <= iv.hi)) key_error(key, "lo must be <= hi");
      cfg.scan.vertical_fov_lo = iv.lo;
      cfg.scan.vertical_fov_hi = iv.hi;
    } else if (key == "azimuth_step") {
      cfg.scan.azimuth_step = parse_double(key, value);
      if (!(cfg.scan.azimuth_step > 0.0)) key_error(key, "must be > 0");
    } else if (key == "dropout") {
      cfg.scan.dropout = parse_double(key, value);
      if (!(cfg.scan.dropout >= 0.0) || cfg.scan.dropout >= 1.0) key_error(key, "must lie in [0, 1)");
    } else if (key == "discontinuity_ratio") {
      cfg.meshing.discontinuity_ratio = parse_double(key, value);
      if (!(cfg.meshing.discontinuity_ratio > 0.0)) key_error(key, "must be > 0");
    } else if (key == "area_epsilon") {
      cfg.meshing.area_epsilon = parse_double(key, value);
      if (!(cfg.meshing.area_epsilon >= 0.0)) key_error(key, "must be >= 0");
    } else if (key == "w_sup") {
      cfg.loss.weights.w_sup = parse_double(key, value);
      if (cfg.loss.weights.w_sup < 0.0) key_error(key, "must be >= 0");
    } else if (key == "w_ssi") {
      cfg.loss.weights.w_ssi = parse_double(key, value);
      if (cfg.loss.weights.w_ssi < 0.0) key_error(key, "must be >= 0");
    } else if (key == "w_reg") {
      cfg.loss.weights.w_reg = parse_double(key, value);
      if (cfg.loss.weights.w_reg < 0.0) key_error(key, "must be >= 0");
    } else if (key == "pyramid_levels") {
      cfg.loss.pyramid_levels = parse_int(key, value);
      if (cfg.loss.pyramid_levels < 1) key_error(key, "must be >= 1");
    } else if (key == "ssi_solver") {
      if (value == "ls") {
        cfg.loss.solver = SsiSolver::ls;
      } else if (value == "lad") {
        cfg.loss.solver = SsiSolver::lad;
      } else {
        key_error(key, "expected ls or lad, got '" + std::string(value) + "'");
      }
    } else if (key == "grad_mode") {
      if (value == "full") {
        cfg.loss.grad_mode = GradMode::full;
      } else if (value == "detached") {
        cfg.loss.grad_mode = GradMode::detached;
      } else {
        key_error(key, "expected full or detached, got '" + std::string(value) + "'");
      }
    } else if (key == "reg_space") {
      if (value == "aligned") {
        cfg.loss.reg_on_aligned = true;
      } else if (value == "raw") {
        cfg.loss.reg_on_aligned = false;
      } else {
        key_error(key, "expected aligned or raw, got '" + std::string(value) + "'");
      }
    } else if (key == "depth_kind") {
      if (value == "z_depth") {
        cfg.depth_kind = DepthKind::z_depth;
      } else if (value == "range") {
        cfg.depth_kind = DepthKind::range;
      } else {
        key_error(key, "expected z_depth or range, got '" + std::string(value) + "'");
      }
    } else if (key == "mono_codec") {
      cfg.mono_codec.kind = parse_codec_kind(key, value);
    } else if (key == "mono_space") {
      if (value == "depth") {
        cfg.mono_codec.mono_space = MonoSpace::depth;
      } else if (value == "inverse_depth") {
        cfg.mono_codec.mono_space = MonoSpace::inverse_depth;
      } else {
        key_error(key, "expected depth or inverse_depth, got '" + std::string(value) + "'");
      }
    } else if (key == "pred_codec") {
      cfg.pred_codec.kind = parse_codec_kind(key, value);
    } else if (key == "gt_codec") {
      cfg.gt_codec.kind = parse_codec_kind(key, value);
    } else {
      key_error(key, "unknown key");
    }
  }

  if (cfg.loss.weights.w_sup == 0.0 && cfg.loss.weights.w_ssi == 0.0 &&
      cfg.loss.weights.w_reg == 0.0) {
    key_error("w_sup/w_ssi/w_reg", "at least one loss weight must be > 0");
  }
  return cfg;
}

PipelineConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::io, "parse_config: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace depthkit
