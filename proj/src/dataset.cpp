#include "edgevo/dataset.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "edgevo/association.hpp"
#include "edgevo/errors.hpp"
#include "edgevo/png_io.hpp"

namespace edgevo {

namespace {

bool is_blank_or_comment(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

std::vector<SequenceIndex::Stamped> parse_file_list(const std::filesystem::path& file) {
  std::ifstream f(file);
  if (!f) throw IoError("missing sequence file " + file.string());
  std::vector<SequenceIndex::Stamped> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    std::istringstream ss(line);
    double ts;
    std::string path;
    if (!(ss >> ts >> path)) throw ParseError(file, line_no, "expected 'timestamp path'");
    if (!entries.empty() && ts <= entries.back().timestamp)
      throw ParseError(file, line_no, "timestamps must be strictly increasing");
    entries.push_back({ts, path});
  }
  return entries;
}

std::vector<SequenceIndex::GroundTruthEntry> parse_groundtruth(
    const std::filesystem::path& file) {
  std::ifstream f(file);
  if (!f) return {};
  std::vector<SequenceIndex::GroundTruthEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    std::istringstream ss(line);
    double ts, tx, ty, tz, qx, qy, qz, qw;
    if (!(ss >> ts >> tx >> ty >> tz >> qx >> qy >> qz >> qw))
      throw ParseError(file, line_no, "expected 'timestamp tx ty tz qx qy qz qw'");
    Eigen::Quaterniond q(qw, qx, qy, qz);
    if (q.norm() < 0.1) throw ParseError(file, line_no, "quaternion norm too small");
    q.normalize();
    if (!entries.empty() && ts <= entries.back().timestamp)
      throw ParseError(file, line_no, "timestamps must be strictly increasing");
    entries.push_back({ts, PoseSE3(q.toRotationMatrix(), {tx, ty, tz})});
  }
  return entries;
}

}  // namespace

SequenceIndex parse_sequence(const std::filesystem::path& dir) {
  SequenceIndex index;
  index.directory = dir;
  index.rgb = parse_file_list(dir / "rgb.txt");
  index.depth = parse_file_list(dir / "depth.txt");
  index.groundtruth = parse_groundtruth(dir / "groundtruth.txt");
  return index;
}

std::vector<AssociatedFrame> associate(const SequenceIndex& index, double max_difference) {
  if (max_difference <= 0.0) throw std::invalid_argument("associate: max_difference must be > 0");
  std::vector<double> rgb_ts, depth_ts;
  rgb_ts.reserve(index.rgb.size());
  depth_ts.reserve(index.depth.size());
  for (const auto& e : index.rgb) rgb_ts.push_back(e.timestamp);
  for (const auto& e : index.depth) depth_ts.push_back(e.timestamp);

  const auto pairs = associate_timestamps(rgb_ts, depth_ts, max_difference);
  if (pairs.empty())
    throw IoError("associate: no rgb/depth pairs within " + std::to_string(max_difference) + " s");

  std::vector<AssociatedFrame> frames;
  frames.reserve(pairs.size());
  for (const auto& [i, j] : pairs)
    frames.push_back({index.rgb[i].timestamp, index.depth[j].timestamp, index.rgb[i].path,
                      index.depth[j].path});
  return frames;
}

DepthImage read_depth(const std::filesystem::path& path, double depth_scale) {
  const Image16 raw = read_png_gray16(path);
  DepthImage depth(raw.width, raw.height);
  const float inv = static_cast<float>(1.0 / depth_scale);
  for (std::size_t i = 0; i < raw.data.size(); ++i)
    depth.data[i] = raw.data[i] == 0 ? 0.0f : raw.data[i] * inv;
  return depth;
}

GrayImage read_gray(const std::filesystem::path& path) {
  const Image8 img = read_png8(path);
  if (img.channels == 3) return to_gray(img.width, img.height, img.data.data());
  GrayImage gray(img.width, img.height);
  constexpr float kScale = 1.0f / 255.0f;
  for (std::size_t i = 0; i < img.data.size(); ++i) gray.data[i] = img.data[i] * kScale;
  return gray;
}

std::optional<PoseSE3> groundtruth_pose_at(const SequenceIndex& index, double t,
                                           double max_difference) {
  if (index.groundtruth.empty()) return std::nullopt;
  const auto cmp = [](const SequenceIndex::GroundTruthEntry& e, double v) {
    return e.timestamp < v;
  };
  auto it = std::lower_bound(index.groundtruth.begin(), index.groundtruth.end(), t, cmp);
  const SequenceIndex::GroundTruthEntry* best = nullptr;
  if (it != index.groundtruth.end()) best = &*it;
  if (it != index.groundtruth.begin()) {
    const auto prev = std::prev(it);
    if (!best || std::abs(prev->timestamp - t) <= std::abs(best->timestamp - t)) best = &*prev;
  }
  if (!best || std::abs(best->timestamp - t) > max_difference) return std::nullopt;
  return best->pose;
}

Frame load_frame(const SequenceIndex& index, const AssociatedFrame& assoc, double depth_scale) {
  Frame frame;
  frame.timestamp = assoc.rgb_timestamp;
  frame.gray = read_gray(index.directory / assoc.rgb_path);
  frame.depth = read_depth(index.directory / assoc.depth_path, depth_scale);
  if (frame.gray.width != frame.depth.width || frame.gray.height != frame.depth.height)
    throw IoError("load_frame: rgb/depth dimensions differ for " + assoc.rgb_path);
  return frame;
}

Trajectory groundtruth_trajectory(const SequenceIndex& index) {
  Trajectory traj;
  traj.entries.reserve(index.groundtruth.size());
  for (const auto& e : index.groundtruth) traj.entries.push_back({e.timestamp, e.pose});
  return traj;
}

std::optional<CameraIntrinsics> read_calibration(const std::filesystem::path& dir) {
  std::ifstream f(dir / "calibration.txt");
  if (!f) return std::nullopt;
  std::string line;
  int line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (is_blank_or_comment(line)) continue;
    std::istringstream ss(line);
    CameraIntrinsics K;
    if (!(ss >> K.fx >> K.fy >> K.cx >> K.cy >> K.width >> K.height))
      throw ParseError(dir / "calibration.txt", line_no, "expected 'fx fy cx cy width height'");
    return K;
  }
  return std::nullopt;
}

void write_calibration(const std::filesystem::path& dir, const CameraIntrinsics& K) {
  std::ofstream f(dir / "calibration.txt");
  if (!f) throw IoError("write_calibration: cannot open " + (dir / "calibration.txt").string());
  f << "# fx fy cx cy width height\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%.9g %.9g %.9g %.9g %d %d\n", K.fx, K.fy, K.cx, K.cy,
                K.width, K.height);
  f << line;
}

}  // namespace edgevo
