#include "cubeq/store.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <random>

namespace cubeq {

namespace {

constexpr char kMagic[4] = {'C', 'Q', 'S', '1'};
constexpr std::uint32_t kSpectrum = 1;
constexpr std::uint32_t kQTable = 2;
constexpr std::size_t kHeader = 80;

template <class T>
void put(std::string& buf, T v) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  buf.append(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get(const std::string& buf, std::size_t offset) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, buf.data() + offset, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

struct Payload {
  std::uint64_t aux = 0;
  double err = 0.0;
  std::vector<Complex> data;
};

void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
  std::random_device rd;
  auto tmp = path;
  tmp += ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void save_payload(const std::filesystem::path& path, const FormHash& hash, int n, std::int64_t p,
                  std::uint32_t kind, const Payload& pl) {
  std::string buf;
  buf.reserve(kHeader + pl.data.size() * 16);
  buf.append(kMagic, 4);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(n));
  put<std::uint64_t>(buf, static_cast<std::uint64_t>(p));
  buf.append(reinterpret_cast<const char*>(hash.data()), hash.size());
  put<std::uint32_t>(buf, kind);
  put<std::uint32_t>(buf, 0);
  put<std::uint64_t>(buf, pl.aux);
  put<std::uint64_t>(buf, pl.data.size());
  put<double>(buf, pl.err);
  for (const auto& v : pl.data) {
    put<double>(buf, v.real());
    put<double>(buf, v.imag());
  }
  write_atomic(path, buf);
}

// Returns nothing for a missing file or one whose header does not match;
// a truncated file is treated as missing too.
std::optional<Payload> load_payload(const std::filesystem::path& path, const FormHash& hash, int n,
                                    std::int64_t p, std::uint32_t kind, std::uint64_t expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < kHeader || std::memcmp(buf.data(), kMagic, 4) != 0) return std::nullopt;
  if (get<std::uint32_t>(buf, 4) != static_cast<std::uint32_t>(n)) return std::nullopt;
  if (get<std::uint64_t>(buf, 8) != static_cast<std::uint64_t>(p)) return std::nullopt;
  if (std::memcmp(buf.data() + 16, hash.data(), 32) != 0) return std::nullopt;
  if (get<std::uint32_t>(buf, 48) != kind) return std::nullopt;
  Payload pl;
  pl.aux = get<std::uint64_t>(buf, 56);
  const auto count = get<std::uint64_t>(buf, 64);
  if (count != expected || buf.size() != kHeader + count * 16) return std::nullopt;
  pl.err = get<double>(buf, 72);
  pl.data.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    pl.data[i] = Complex(get<double>(buf, kHeader + 16 * i), get<double>(buf, kHeader + 16 * i + 8));
  }
  return pl;
}

std::uint64_t power(std::int64_t p, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= static_cast<std::uint64_t>(p);
  return r;
}

}  // namespace

ResultStore::ResultStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::filesystem::path ResultStore::spectrum_path(const FormHash& hash, std::int64_t p) const {
  return dir_ / (hex(hash) + "-spectrum-p" + std::to_string(p) + ".cqs");
}

std::filesystem::path ResultStore::qtable_path(const FormHash& hash, std::int64_t p) const {
  return dir_ / (hex(hash) + "-qtable-p" + std::to_string(p) + ".cqs");
}

void ResultStore::save(const FormHash& hash, const SpectrumTable& table) const {
  save_payload(spectrum_path(hash, table.p()), hash, table.n(), table.p(), kSpectrum,
               {table.zero_count(), table.err(), table.data()});
}

void ResultStore::save(const FormHash& hash, const PrimeQTable& table) const {
  save_payload(qtable_path(hash, table.p()), hash, table.n(), table.p(), kQTable, {0, table.err(), table.data()});
}

std::optional<SpectrumTable> ResultStore::load_spectrum(const FormHash& hash, int n, std::int64_t p) const {
  auto pl = load_payload(spectrum_path(hash, p), hash, n, p, kSpectrum, power(p, n));
  if (!pl) return std::nullopt;
  return SpectrumTable(p, n, std::move(pl->data), pl->aux, pl->err);
}

std::optional<PrimeQTable> ResultStore::load_qtable(const FormHash& hash, int n, std::int64_t p) const {
  auto pl = load_payload(qtable_path(hash, p), hash, n, p, kQTable, power(p, n + 1));
  if (!pl) return std::nullopt;
  return PrimeQTable(p, n, std::move(pl->data), pl->err);
}

SpectrumCache::SpectrumCache(CubicForm form, Budget budget, ParallelContext ctx, const ResultStore* store)
    : form_(std::move(form)), hash_(form_hash(form_)), budget_(budget), ctx_(ctx), store_(store) {}

std::shared_ptr<const SpectrumTable> SpectrumCache::spectrum(std::int64_t p) {
  std::lock_guard<std::mutex> lock(mu_);
  if (auto it = spectra_.find(p); it != spectra_.end()) return it->second;
  std::shared_ptr<const SpectrumTable> table;
  if (store_) {
    if (auto loaded = store_->load_spectrum(hash_, form_.n(), p)) {
      table = std::make_shared<const SpectrumTable>(std::move(*loaded));
      ++hits_;
    }
  }
  if (!table) {
    table = std::make_shared<const SpectrumTable>(build_spectrum(form_, p, budget_, ctx_));
    if (store_) store_->save(hash_, *table);
  }
  spectra_[p] = table;
  return table;
}

std::shared_ptr<const PrimeQTable> SpectrumCache::qtable(std::int64_t p) {
  std::lock_guard<std::mutex> lock(mu_);
  if (auto it = qtables_.find(p); it != qtables_.end()) return it->second;
  std::shared_ptr<const PrimeQTable> table;
  if (store_) {
    if (auto loaded = store_->load_qtable(hash_, form_.n(), p)) {
      table = std::make_shared<const PrimeQTable>(std::move(*loaded));
      ++hits_;
    }
  }
  if (!table) {
    table = std::make_shared<const PrimeQTable>(build_q_table(AugmentedForm(form_), p, budget_, ctx_));
    if (store_) store_->save(hash_, *table);
  }
  qtables_[p] = table;
  return table;
}

}  // namespace cubeq
