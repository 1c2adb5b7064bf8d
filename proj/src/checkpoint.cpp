#include "tscnn/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "tscnn/error.hpp"

namespace tscnn {

namespace {

constexpr char kMagic[4] = {'T', 'S', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_raw(std::ofstream& f, const T& v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& f) {
  T v;
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!f) throw DataError("truncated checkpoint");
  return v;
}

}  // namespace

void save_checkpoint(
    const std::filesystem::path& path,
    const std::vector<std::pair<std::string, const Tensor*>>& tensors) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write checkpoint: " + path.string());
  f.write(kMagic, 4);
  write_raw(f, kVersion);
  write_raw(f, static_cast<std::uint64_t>(tensors.size()));
  for (const auto& [name, t] : tensors) {
    write_raw(f, static_cast<std::uint64_t>(name.size()));
    f.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_raw(f, static_cast<std::uint64_t>(t->shape.size()));
    for (std::size_t d : t->shape) write_raw(f, static_cast<std::uint64_t>(d));
    f.write(reinterpret_cast<const char*>(t->data.data()),
            static_cast<std::streamsize>(t->data.size() * sizeof(double)));
  }
  if (!f) throw DataError("checkpoint write failed: " + path.string());
}

std::vector<std::pair<std::string, Tensor>> load_checkpoint(
    const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open checkpoint: " + path.string());
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, kMagic, 4) != 0)
    throw DataError("bad checkpoint magic: " + path.string());
  if (read_raw<std::uint32_t>(f) != kVersion)
    throw DataError("unsupported checkpoint version: " + path.string());

  const auto count = read_raw<std::uint64_t>(f);
  std::vector<std::pair<std::string, Tensor>> tensors;
  tensors.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto name_len = read_raw<std::uint64_t>(f);
    std::string name(name_len, '\0');
    f.read(name.data(), static_cast<std::streamsize>(name_len));
    const auto rank = read_raw<std::uint64_t>(f);
    std::vector<std::size_t> shape(rank);
    for (auto& d : shape) d = static_cast<std::size_t>(read_raw<std::uint64_t>(f));
    Tensor t(shape);
    f.read(reinterpret_cast<char*>(t.data.data()),
           static_cast<std::streamsize>(t.data.size() * sizeof(double)));
    if (!f) throw DataError("truncated checkpoint: " + path.string());
    tensors.emplace_back(std::move(name), std::move(t));
  }
  return tensors;
}

}  // namespace tscnn
