#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "leducmind/cfr/solver.hpp"

namespace leducmind::cfr {

namespace {

constexpr char kMagic[8] = {'S', 'U', 'S', 'P', '-', 'C', 'F', 'R'};
constexpr uint32_t kFormatVersion = 1;

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double d) {
  put_u64(out, std::bit_cast<uint64_t>(d));
}

struct Reader {
  const std::string& data;
  size_t pos = 0;

  void need(size_t n) const {
    if (pos + n > data.size()) {
      throw std::runtime_error("truncated policy file");
    }
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<uint32_t>(static_cast<unsigned char>(data[pos + static_cast<size_t>(i)])) << (8 * i);
    }
    pos += 4;
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
      v |= static_cast<uint64_t>(static_cast<unsigned char>(data[pos + static_cast<size_t>(i)])) << (8 * i);
    }
    pos += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string bytes(size_t n) {
    need(n);
    std::string out = data.substr(pos, n);
    pos += n;
    return out;
  }
};

}  // namespace

void save_policy(const StrategyProfile& profile, const std::string& path) {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put_u32(out, kFormatVersion);
  put_u64(out, profile.entries.size());
  for (const auto& [key, entry] : profile.entries) {
    put_u32(out, static_cast<uint32_t>(key.size()));
    out += key;
    for (auto a : game::all_actions()) {
      const size_t i = static_cast<size_t>(a);
      put_f64(out, entry.strategy_sum[i]);
      put_f64(out, entry.regret_sum[i]);
    }
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open policy file for writing: " + path);
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw std::runtime_error("failed writing policy file: " + path);
}

StrategyProfile load_policy(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open policy file: " + path);
  std::string data((std::istreambuf_iterator<char>(file)),
                   std::istreambuf_iterator<char>());

  Reader r{data};
  if (data.size() < sizeof(kMagic) ||
      std::memcmp(data.data(), kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("not a policy file: " + path);
  }
  r.pos = sizeof(kMagic);
  const uint32_t version = r.u32();
  if (version != kFormatVersion) {
    throw std::runtime_error("unsupported policy file version " +
                             std::to_string(version));
  }
  const uint64_t count = r.u64();
  StrategyProfile profile;
  for (uint64_t i = 0; i < count; ++i) {
    const uint32_t len = r.u32();
    const std::string key = r.bytes(len);
    if (!InfoSetKey::parse(key)) {
      throw std::runtime_error("malformed infoset key in policy file: " + key);
    }
    InfoSetEntry entry;
    for (auto a : game::all_actions()) {
      const size_t idx = static_cast<size_t>(a);
      entry.strategy_sum[idx] = r.f64();
      entry.regret_sum[idx] = r.f64();
    }
    profile.entries.emplace(key, entry);
  }
  if (r.pos != data.size()) {
    throw std::runtime_error("trailing bytes in policy file: " + path);
  }
  return profile;
}

}  // namespace leducmind::cfr
