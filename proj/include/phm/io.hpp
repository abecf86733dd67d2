#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "phm/error.hpp"
#include "phm/grid.hpp"
#include "phm/heatmap.hpp"

namespace phm {

// PHM1 plane-stack container: magic "PHM1", then u32 LE plane count, height,
// width, then planes * height * width float32 LE values, row-major,
// plane-major. Heatmap sets and feature stacks share it. Readers reject a
// wrong magic and size mismatches in either direction.
//
// PLM1 holds linear model weights: magic "PLM1", u32 LE joints, channels,
// then joints * (channels + 1) float32 LE values (weights then bias).

namespace detail {

inline void put_u32(std::string& buf, std::uint32_t v) {
  buf.push_back(static_cast<char>(v & 0xFF));
  buf.push_back(static_cast<char>((v >> 8) & 0xFF));
  buf.push_back(static_cast<char>((v >> 16) & 0xFF));
  buf.push_back(static_cast<char>((v >> 24) & 0xFF));
}

inline void put_f32(std::string& buf, float v) {
  put_u32(buf, std::bit_cast<std::uint32_t>(v));
}

class ByteReader {
 public:
  ByteReader(const std::string& data, const std::string& path)
      : data_(data), path_(path) {}

  std::uint32_t u32() {
    if (pos_ + 4 > data_.size())
      throw Error(ErrorKind::io, path_, "truncated file: " + path_);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i)
      v = (v << 8) | static_cast<unsigned char>(data_[pos_ + i]);
    pos_ += 4;
    return v;
  }

  float f32() { return std::bit_cast<float>(u32()); }

  void expect_magic(const char* magic) {
    if (data_.size() < 4 || std::memcmp(data_.data(), magic, 4) != 0)
      throw Error(ErrorKind::io, path_, "bad magic, expected " +
                                            std::string(magic) + ": " + path_);
    pos_ = 4;
  }

  void expect_end() const {
    if (pos_ != data_.size())
      throw Error(ErrorKind::io, path_, "trailing bytes in " + path_);
  }

 private:
  const std::string& data_;
  std::string path_;
  std::size_t pos_ = 0;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::io, path.string(), "cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return data;
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(ErrorKind::io, path.string(), "cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out)
    throw Error(ErrorKind::io, path.string(), "short write to " + path.string());
}

}  // namespace detail

inline void write_phm(const std::filesystem::path& path,
                      const HeatmapSet& maps) {
  std::string buf = "PHM1";
  detail::put_u32(buf, static_cast<std::uint32_t>(maps.joint_count()));
  detail::put_u32(buf, static_cast<std::uint32_t>(maps.height()));
  detail::put_u32(buf, static_cast<std::uint32_t>(maps.width()));
  for (const Heatmap& h : maps)
    for (double v : h.values()) detail::put_f32(buf, static_cast<float>(v));
  detail::write_file(path, buf);
}

inline void write_phm_grids(const std::filesystem::path& path,
                            const std::vector<Grid>& planes) {
  if (planes.empty())
    throw Error(ErrorKind::invalid_argument, "no planes to write");
  std::string buf = "PHM1";
  detail::put_u32(buf, static_cast<std::uint32_t>(planes.size()));
  detail::put_u32(buf, static_cast<std::uint32_t>(planes.front().height()));
  detail::put_u32(buf, static_cast<std::uint32_t>(planes.front().width()));
  for (const Grid& g : planes)
    for (double v : g.values()) detail::put_f32(buf, static_cast<float>(v));
  detail::write_file(path, buf);
}

inline HeatmapSet read_phm(const std::filesystem::path& path) {
  const std::string data = detail::read_file(path);
  detail::ByteReader r(data, path.string());
  r.expect_magic("PHM1");
  const std::uint32_t joints = r.u32();
  const std::uint32_t height = r.u32();
  const std::uint32_t width = r.u32();
  if (joints < 1 || height < 1 || width < 1)
    throw Error(ErrorKind::io, path.string(), "bad dims in " + path.string());
  std::vector<Heatmap> maps;
  maps.reserve(joints);
  for (std::uint32_t j = 0; j < joints; ++j) {
    std::vector<double> vals(static_cast<std::size_t>(width) * height);
    for (double& v : vals) v = r.f32();
    try {
      maps.emplace_back(static_cast<int>(width), static_cast<int>(height),
                        std::move(vals));
    } catch (const Error& e) {
      throw Error(ErrorKind::io, path.string(),
                  std::string(e.what()) + " in " + path.string());
    }
  }
  r.expect_end();
  return HeatmapSet(std::move(maps));
}

inline std::vector<Grid> read_phm_grids(const std::filesystem::path& path) {
  const std::string data = detail::read_file(path);
  detail::ByteReader r(data, path.string());
  r.expect_magic("PHM1");
  const std::uint32_t planes = r.u32();
  const std::uint32_t height = r.u32();
  const std::uint32_t width = r.u32();
  if (planes < 1 || height < 1 || width < 1)
    throw Error(ErrorKind::io, path.string(), "bad dims in " + path.string());
  std::vector<Grid> out;
  out.reserve(planes);
  for (std::uint32_t p = 0; p < planes; ++p) {
    Grid g(static_cast<int>(width), static_cast<int>(height));
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = r.f32();
    out.push_back(std::move(g));
  }
  r.expect_end();
  return out;
}

// Linear model weights, laid out as joints rows of (channels weights, bias).
inline void write_plm(const std::filesystem::path& path, int joints,
                      int channels, const std::vector<double>& weights) {
  if (static_cast<std::size_t>(joints) * (channels + 1) != weights.size())
    throw Error(ErrorKind::dim_mismatch, "weight count != joints*(channels+1)");
  std::string buf = "PLM1";
  detail::put_u32(buf, static_cast<std::uint32_t>(joints));
  detail::put_u32(buf, static_cast<std::uint32_t>(channels));
  for (double v : weights) detail::put_f32(buf, static_cast<float>(v));
  detail::write_file(path, buf);
}

struct PlmContents {
  int joints = 0;
  int channels = 0;
  std::vector<double> weights;
};

inline PlmContents read_plm(const std::filesystem::path& path) {
  const std::string data = detail::read_file(path);
  detail::ByteReader r(data, path.string());
  r.expect_magic("PLM1");
  PlmContents out;
  out.joints = static_cast<int>(r.u32());
  out.channels = static_cast<int>(r.u32());
  if (out.joints < 1 || out.channels < 1)
    throw Error(ErrorKind::io, path.string(), "bad dims in " + path.string());
  out.weights.resize(static_cast<std::size_t>(out.joints) * (out.channels + 1));
  for (double& v : out.weights) v = r.f32();
  r.expect_end();
  return out;
}

}  // namespace phm
