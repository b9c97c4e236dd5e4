#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>

#include "cubeq/expsum.hpp"
#include "cubeq/form_io.hpp"

namespace cubeq {

// On-disk cache of spectrum tables and Q tables, keyed by (form hash, p).
//
// File layout, all little-endian:
//   0   "CQS1"
//   4   u32 n
//   8   u64 p
//   16  32-byte form hash
//   48  u32 kind (1 spectrum, 2 Q table)
//   52  u32 reserved (0)
//   56  u64 aux (zero count for spectra)
//   64  u64 entry count
//   72  f64 per-entry error bound
//   80  entries as (re, im) f64 pairs
// Writes go to a temporary file in the same directory, then rename.
class ResultStore {
 public:
  explicit ResultStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }

  void save(const FormHash& hash, const SpectrumTable& table) const;
  void save(const FormHash& hash, const PrimeQTable& table) const;
  std::optional<SpectrumTable> load_spectrum(const FormHash& hash, int n, std::int64_t p) const;
  std::optional<PrimeQTable> load_qtable(const FormHash& hash, int n, std::int64_t p) const;

  std::filesystem::path spectrum_path(const FormHash& hash, std::int64_t p) const;
  std::filesystem::path qtable_path(const FormHash& hash, std::int64_t p) const;

 private:
  std::filesystem::path dir_;
};

// Builds spectra on demand, keeps them in memory and optionally in a store.
class SpectrumCache : public SpectrumSource {
 public:
  SpectrumCache(CubicForm form, Budget budget = {}, ParallelContext ctx = {}, const ResultStore* store = nullptr);

  std::shared_ptr<const SpectrumTable> spectrum(std::int64_t p) override;
  std::shared_ptr<const PrimeQTable> qtable(std::int64_t p);

  // Number of tables read back from the store rather than built.
  int store_hits() const noexcept { return hits_; }

 private:
  CubicForm form_;
  FormHash hash_;
  Budget budget_;
  ParallelContext ctx_;
  const ResultStore* store_;
  std::mutex mu_;
  std::map<std::int64_t, std::shared_ptr<const SpectrumTable>> spectra_;
  std::map<std::int64_t, std::shared_ptr<const PrimeQTable>> qtables_;
  int hits_ = 0;
};

}  // namespace cubeq
