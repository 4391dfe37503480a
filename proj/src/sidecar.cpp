#include "prao/sidecar.hpp"

#include <openssl/evp.h>

#include <cereal/archives/binary.hpp>
#include <cereal/types/array.hpp>
#include <cereal/types/string.hpp>
#include <cereal/types/vector.hpp>
#include <fstream>
#include <sstream>

namespace prao {

Digest network_digest(const RoadNetwork& net) {
  std::ostringstream text;
  write_network(text, net);
  const std::string s = text.str();
  Digest d{};
  unsigned int len = 0;
  if (EVP_Digest(s.data(), s.size(), d.data(), &len, EVP_sha256(), nullptr) != 1 || len != d.size()) {
    throw std::runtime_error("sha256 failed");
  }
  return d;
}

std::string to_hex(const Digest& d) {
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (std::uint8_t b : d) {
    out += hex[b >> 4];
    out += hex[b & 15];
  }
  return out;
}

template <class Archive>
void serialize(Archive& ar, Rect& r) {
  ar(r.x0, r.y0, r.x1, r.y1);
}

template <class Archive>
void serialize(Archive& ar, KeywordBitmap& k) {
  ar(k.bits, k.overflow);
}

template <class Archive>
void serialize(Archive& ar, IndexNode& n) {
  ar(n.id, n.level, n.parent, n.mbr, n.children, n.lb_t, n.ub_t, n.kw);
}

namespace {

constexpr std::uint32_t kPivotMagic = 0x50525650;  // "PVRP"
constexpr std::uint32_t kIndexMagic = 0x50525849;  // "IXRP"
constexpr std::uint32_t kVersion = 1;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

void check_header(std::uint32_t magic, std::uint32_t want, std::uint32_t version, const Digest& got,
                  const Digest& expect, const std::string& path) {
  if (magic != want || version != kVersion) throw SidecarMismatch(path + ": not a compatible cache file");
  if (got != expect) throw SidecarMismatch(path + ": cache was built for a different network");
}

}  // namespace

void save_pivots(const std::string& path, const RoadNetwork& net, const PivotTable& table) {
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < table.d(); ++j) cols.push_back(table.column(j));
  auto out = open_out(path);
  cereal::BinaryOutputArchive ar(out);
  ar(kPivotMagic, kVersion, network_digest(net), table.pivots(), cols);
}

PivotTable load_pivots(const std::string& path, const RoadNetwork& net) {
  auto in = open_in(path);
  cereal::BinaryInputArchive ar(in);
  std::uint32_t magic = 0, version = 0;
  Digest digest{};
  std::vector<VertexId> pivots;
  std::vector<std::vector<double>> cols;
  try {
    ar(magic, version, digest);
    check_header(magic, kPivotMagic, version, digest, network_digest(net), path);
    ar(pivots, cols);
  } catch (const cereal::Exception& e) {
    throw SidecarMismatch(path + ": truncated cache (" + e.what() + ")");
  }
  for (const auto& c : cols) {
    if (c.size() != net.vertex_count()) throw SidecarMismatch(path + ": column size mismatch");
  }
  return PivotTable(std::move(pivots), std::move(cols));
}

void save_index(const std::string& path, const RoadNetwork& net, const SpatialIndex& index) {
  auto out = open_out(path);
  cereal::BinaryOutputArchive ar(out);
  ar(kIndexMagic, kVersion, network_digest(net), static_cast<std::uint64_t>(index.fanout_));
  ar(index.height_, index.root_, index.nodes_, index.levels_, index.locator_);
}

SpatialIndex load_index(const std::string& path, const RoadNetwork& net, const WeatherStore& store,
                        std::size_t fanout) {
  auto in = open_in(path);
  cereal::BinaryInputArchive ar(in);
  std::uint32_t magic = 0, version = 0;
  Digest digest{};
  std::uint64_t stored_fanout = 0;
  SpatialIndex idx;
  try {
    ar(magic, version, digest);
    check_header(magic, kIndexMagic, version, digest, network_digest(net), path);
    ar(stored_fanout);
    if (stored_fanout != fanout) {
      throw SidecarMismatch(path + ": index fanout " + std::to_string(stored_fanout) + " != requested " +
                            std::to_string(fanout));
    }
    ar(idx.height_, idx.root_, idx.nodes_, idx.levels_, idx.locator_);
  } catch (const cereal::Exception& e) {
    throw SidecarMismatch(path + ": truncated cache (" + e.what() + ")");
  }
  if (idx.locator_.size() != net.edge_count() * std::size_t(idx.height_ + 1)) {
    throw SidecarMismatch(path + ": locator size mismatch");
  }
  idx.fanout_ = fanout;
  idx.build_connections(net);
  idx.rebuild_weather(net, store);
  return idx;
}

}  // namespace prao
