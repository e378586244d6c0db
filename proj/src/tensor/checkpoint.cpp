#include "deepcva/tensor/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "deepcva/io/atomic_file.hpp"

namespace deepcva::tensor {

static_assert(std::endian::native == std::endian::little,
              "checkpoint encoding assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'D', 'C', 'V', 'A', 'C', 'K', 'P', 'T'};

template <typename T>
void put(std::vector<char>& out, T value) {
  const auto* p = reinterpret_cast<const char*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

void put_string(std::vector<char>& out, const std::string& s) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

class Reader {
 public:
  explicit Reader(const std::vector<char>& bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string get_string() {
    const auto len = get<std::uint32_t>();
    need(len);
    std::string s(bytes_.data() + pos_, len);
    pos_ += len;
    return s;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw CheckpointError("checkpoint truncated");
  }
  const std::vector<char>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

const Tensor* Checkpoint::find(const std::string& name) const {
  for (const auto& [n, t] : tensors) {
    if (n == name) return &t;
  }
  return nullptr;
}

std::uint64_t fnv1a_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<char> serialize_checkpoint(const Checkpoint& checkpoint) {
  std::vector<char> out(std::begin(kMagic), std::end(kMagic));
  put<std::uint32_t>(out, checkpoint.version);
  put<std::uint64_t>(out, checkpoint.config_hash);
  put<std::uint64_t>(out, checkpoint.seed);
  put_string(out, checkpoint.config);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(checkpoint.tensors.size()));
  for (const auto& [name, t] : checkpoint.tensors) {
    put_string(out, name);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.rank()));
    for (auto d : t.shape()) put<std::uint64_t>(out, d);
    for (double v : t.values()) put<double>(out, v);
  }
  return out;
}

Checkpoint deserialize_checkpoint(const std::vector<char>& bytes) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError("not a checkpoint file (bad magic)");
  }
  std::vector<char> body(bytes.begin() + sizeof(kMagic), bytes.end());
  Reader in(body);
  Checkpoint ck;
  ck.version = in.get<std::uint32_t>();
  if (ck.version != kCheckpointVersion) {
    throw CheckpointError("unsupported checkpoint version " + std::to_string(ck.version));
  }
  ck.config_hash = in.get<std::uint64_t>();
  ck.seed = in.get<std::uint64_t>();
  ck.config = in.get_string();
  if (fnv1a_hash(ck.config) != ck.config_hash) {
    throw CheckpointError("checkpoint config hash does not match its config");
  }
  const auto count = in.get<std::uint32_t>();
  for (std::uint32_t i = 0; i < count; ++i) {
    auto name = in.get_string();
    const auto rank = in.get<std::uint32_t>();
    Shape shape(rank);
    for (auto& d : shape) d = static_cast<std::size_t>(in.get<std::uint64_t>());
    std::vector<double> values(numel_of(shape));
    for (auto& v : values) v = in.get<double>();
    ck.tensors.emplace_back(std::move(name), Tensor(std::move(shape), std::move(values)));
  }
  if (!in.done()) throw CheckpointError("trailing bytes after checkpoint payload");
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
  const auto bytes = serialize_checkpoint(checkpoint);
  try {
    io::write_file_atomic(path, std::string_view(bytes.data(), bytes.size()));
  } catch (const io::WriteError& e) {
    throw CheckpointError(e.what());
  }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize_checkpoint(bytes);
}

}  // namespace deepcva::tensor
