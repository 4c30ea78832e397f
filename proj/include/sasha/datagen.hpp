#pragma once

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sasha/errors.hpp"
#include "sasha/tensor.hpp"

namespace sasha {

static_assert(std::endian::native == std::endian::little, "bag files are little-endian");

// ---------------------------------------------------------------------------
// Synthetic slide generator.
//
// A slide is a bag of N patches; each patch expands into k high-resolution
// sub-patches with d-dimensional features (U). The low-resolution view Z is
// the per-patch mean of U plus blur noise, i.e. a lossy summary. Tumor
// evidence is planted in a minority of sub-patches of tumor patches, so the
// mean dilutes it: zooming in recovers signal the scanning view only hints at.

struct SyntheticConfig {
  std::size_t n_patches_lo = 48;
  std::size_t n_patches_hi = 96;
  std::size_t k = 16;  // sub-patches per patch
  std::size_t d = 32;  // feature dimension
  double tumor_fraction_lo = 0.08;
  double tumor_fraction_hi = 0.30;
  double class_separation = 3.0;  // distance between class prototype centers in U
  double low_res_blur = 0.5;      // extra noise when deriving Z from U
  double noise_sigma = 1.0;
  std::uint64_t seed = 1;

  void validate() const {
    if (k < 1) throw ConfigError("datagen.k: must be >= 1");
    if (d < 2) throw ConfigError("datagen.d: must be >= 2");
    if (n_patches_lo < 1 || n_patches_lo > n_patches_hi)
      throw ConfigError("datagen.n_patches: empty range");
    if (n_patches_lo < k) throw ConfigError("datagen.n_patches: lower bound must be >= k");
    if (!(tumor_fraction_lo > 0.0) || tumor_fraction_hi > 1.0 ||
        tumor_fraction_lo > tumor_fraction_hi)
      throw ConfigError("datagen.tumor_fraction: range must lie in (0, 1]");
    if (class_separation < 0.0) throw ConfigError("datagen.class_separation: must be >= 0");
    if (low_res_blur < 0.0) throw ConfigError("datagen.low_res_blur: must be >= 0");
    if (noise_sigma < 0.0) throw ConfigError("datagen.noise_sigma: must be >= 0");
  }
};

// Structure constants of the generator (not exposed as configuration):
// fraction of tumor sub-patches inside a tumor patch, the per-run feature
// offset shared by a contiguous tumor run, and the spread of the two
// prototypes per class. All noise scales are multiples of noise_sigma.
namespace synth {
constexpr double kSubTumorFracLo = 0.15;
constexpr double kSubTumorFracHi = 0.35;
constexpr double kRunOffsetScale = 1.0;
constexpr double kPrototypeJitter = 0.7;
constexpr std::size_t kMaxTumorRuns = 3;
}  // namespace synth

struct FeatureBag {
  std::string slide_id;
  Mat Z;               // N x d
  std::vector<Mat> U;  // N entries of k x d
  int y = 0;
  std::vector<std::uint8_t> tumor_mask;      // length N
  std::vector<std::uint8_t> sub_tumor_mask;  // N*k, row-major

  std::size_t n_patches() const { return Z.rows; }
  std::size_t k_subpatches() const { return U.empty() ? 0 : U.front().rows; }
  std::size_t dim() const { return Z.cols; }

  bool sub_tumor(std::size_t i, std::size_t j) const {
    return sub_tumor_mask[i * k_subpatches() + j] != 0;
  }
};

/// The class prototype geometry implied by a dataset seed. Tumor and normal
/// centers are exactly `class_separation` apart; each class has two
/// prototypes placed symmetrically around its center.
struct ClassPrototypes {
  Vec normal[2];
  Vec tumor[2];
};

inline ClassPrototypes make_prototypes(const SyntheticConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, "prototypes"));
  const std::size_t d = cfg.d;
  Vec axis(d);
  rng.fill_normal(axis, 0.0, 1.0);
  const double an = norm(axis);
  for (double& v : axis) v /= an;

  const double jitter = synth::kPrototypeJitter * cfg.noise_sigma;
  Vec jn(d), jt(d);
  rng.fill_normal(jn, 0.0, jitter);
  rng.fill_normal(jt, 0.0, jitter);

  ClassPrototypes p;
  for (int s = 0; s < 2; ++s) {
    const double sign = s == 0 ? 1.0 : -1.0;
    p.normal[s].assign(d, 0.0);
    p.tumor[s].assign(d, 0.0);
    for (std::size_t c = 0; c < d; ++c) {
      p.normal[s][c] = sign * jn[c];
      p.tumor[s][c] = cfg.class_separation * axis[c] + sign * jt[c];
    }
  }
  return p;
}

namespace detail {

/// Splits `total` into at most `parts` positive segment lengths.
inline std::vector<std::size_t> random_composition(std::size_t total, std::size_t parts, Rng& rng) {
  if (parts <= 1 || total <= 1) return {total};
  std::vector<std::size_t> cuts;
  for (std::size_t i = 0; i + 1 < parts; ++i)
    cuts.push_back(1 + rng.uniform_index(total - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(total);
  std::vector<std::size_t> lens;
  std::size_t prev = 0;
  for (std::size_t c : cuts) {
    if (c > prev) lens.push_back(c - prev);
    prev = c;
  }
  return lens;
}

/// Places runs of the given lengths at non-overlapping positions in [0, n).
inline std::vector<std::pair<std::size_t, std::size_t>> place_runs(
    const std::vector<std::size_t>& lens, std::size_t n, Rng& rng) {
  const std::size_t used = std::accumulate(lens.begin(), lens.end(), std::size_t{0});
  const std::size_t free_space = n - used;
  // Gap sizes before each run and after the last one.
  std::vector<std::size_t> gaps(lens.size() + 1, 0);
  for (std::size_t f = 0; f < free_space; ++f) ++gaps[rng.uniform_index(gaps.size())];
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t pos = 0;
  for (std::size_t r = 0; r < lens.size(); ++r) {
    pos += gaps[r];
    runs.emplace_back(pos, lens[r]);
    pos += lens[r];
  }
  return runs;
}

}  // namespace detail

inline FeatureBag generate_slide(const SyntheticConfig& cfg, int label, std::uint64_t rng_seed,
                                 std::string slide_id = {}) {
  cfg.validate();
  if (label != 0 && label != 1) throw ConfigError("generate_slide: label must be 0 or 1");
  const ClassPrototypes proto = make_prototypes(cfg);
  Rng rng(rng_seed);

  const std::size_t n = cfg.n_patches_lo + rng.uniform_index(cfg.n_patches_hi - cfg.n_patches_lo + 1);
  const std::size_t k = cfg.k, d = cfg.d;

  FeatureBag bag;
  bag.slide_id = std::move(slide_id);
  bag.y = label;
  bag.Z = Mat(n, d);
  bag.U.assign(n, Mat(k, d));
  bag.tumor_mask.assign(n, 0);
  bag.sub_tumor_mask.assign(n * k, 0);

  // Tumor layout: contiguous index runs, a per-run shared feature offset and
  // a per-run prototype choice. run_of[i] == -1 marks normal patches.
  std::vector<int> run_of(n, -1);
  std::vector<Vec> run_offset;
  std::vector<int> run_proto;
  if (label == 1) {
    const double frac = rng.uniform(cfg.tumor_fraction_lo, cfg.tumor_fraction_hi);
    const std::size_t n_tumor =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(frac * static_cast<double>(n))), 1, n);
    const std::size_t max_runs = std::min<std::size_t>(synth::kMaxTumorRuns, n_tumor);
    const std::size_t n_runs = 1 + rng.uniform_index(max_runs);
    const auto lens = detail::random_composition(n_tumor, n_runs, rng);
    const auto runs = detail::place_runs(lens, n, rng);
    for (std::size_t r = 0; r < runs.size(); ++r) {
      Vec off(d);
      rng.fill_normal(off, 0.0, synth::kRunOffsetScale * cfg.noise_sigma);
      run_offset.push_back(std::move(off));
      run_proto.push_back(rng.bernoulli(0.5) ? 1 : 0);
      for (std::size_t i = runs[r].first; i < runs[r].first + runs[r].second; ++i) run_of[i] = static_cast<int>(r);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const int normal_proto = rng.bernoulli(0.5) ? 1 : 0;
    const int run = run_of[i];

    std::size_t sub_tumor_count = 0, sub_tumor_start = 0;
    if (run >= 0) {
      const double sub_frac = rng.uniform(synth::kSubTumorFracLo, synth::kSubTumorFracHi);
      sub_tumor_count =
          std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(sub_frac * static_cast<double>(k))), 1, k);
      sub_tumor_start = rng.uniform_index(k - sub_tumor_count + 1);
      bag.tumor_mask[i] = 1;
    }

    for (std::size_t j = 0; j < k; ++j) {
      auto u = bag.U[i].row(j);
      const bool is_tumor_sub =
          run >= 0 && j >= sub_tumor_start && j < sub_tumor_start + sub_tumor_count;
      if (is_tumor_sub) {
        bag.sub_tumor_mask[i * k + j] = 1;
        const Vec& p = proto.tumor[run_proto[run]];
        const Vec& off = run_offset[run];
        for (std::size_t c = 0; c < d; ++c) u[c] = p[c] + off[c];
      } else {
        const Vec& p = proto.normal[normal_proto];
        for (std::size_t c = 0; c < d; ++c) u[c] = p[c];
      }
      if (cfg.noise_sigma > 0.0)
        for (std::size_t c = 0; c < d; ++c) u[c] += rng.normal(0.0, cfg.noise_sigma);
    }

    auto z = bag.Z.row(i);
    for (std::size_t c = 0; c < d; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) s += bag.U[i](j, c);
      z[c] = s / static_cast<double>(k);
    }
    if (cfg.low_res_blur > 0.0)
      for (std::size_t c = 0; c < d; ++c) z[c] += rng.normal(0.0, cfg.low_res_blur);
  }
  return bag;
}

// ---------------------------------------------------------------------------
// Bag file format: fixed header then masks then row-major float64 payload.
//
//   magic "SBAG" | u32 version | u32 N | u32 k | u32 d | u32 dtype(=2, f64)
//   u8 label | u16 id_len | id bytes
//   tumor_mask (N bytes) | sub_tumor_mask (N*k bytes)
//   Z (N*d f64) | U (N*k*d f64)

constexpr std::uint32_t kBagVersion = 1;
constexpr std::uint32_t kDtypeF64 = 2;

namespace detail {

template <typename T>
void write_pod(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void read_pod(std::istream& is, T& v, const char* field) {
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw FormatError(std::string("bag file truncated while reading ") + field);
}

inline void read_bytes(std::istream& is, void* dst, std::size_t n, const char* field) {
  is.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (!is || is.gcount() != static_cast<std::streamsize>(n))
    throw FormatError(std::string("bag file truncated while reading ") + field);
}

}  // namespace detail

inline void save_bag(const FeatureBag& bag, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open for writing: " + path.string());
  os.write("SBAG", 4);
  detail::write_pod(os, kBagVersion);
  detail::write_pod(os, static_cast<std::uint32_t>(bag.n_patches()));
  detail::write_pod(os, static_cast<std::uint32_t>(bag.k_subpatches()));
  detail::write_pod(os, static_cast<std::uint32_t>(bag.dim()));
  detail::write_pod(os, kDtypeF64);
  detail::write_pod(os, static_cast<std::uint8_t>(bag.y));
  detail::write_pod(os, static_cast<std::uint16_t>(bag.slide_id.size()));
  os.write(bag.slide_id.data(), static_cast<std::streamsize>(bag.slide_id.size()));
  os.write(reinterpret_cast<const char*>(bag.tumor_mask.data()),
           static_cast<std::streamsize>(bag.tumor_mask.size()));
  os.write(reinterpret_cast<const char*>(bag.sub_tumor_mask.data()),
           static_cast<std::streamsize>(bag.sub_tumor_mask.size()));
  os.write(reinterpret_cast<const char*>(bag.Z.a.data()),
           static_cast<std::streamsize>(bag.Z.a.size() * sizeof(double)));
  for (const Mat& u : bag.U)
    os.write(reinterpret_cast<const char*>(u.a.data()),
             static_cast<std::streamsize>(u.a.size() * sizeof(double)));
  if (!os) throw FormatError("write failed: " + path.string());
}

inline FeatureBag load_bag(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open bag file: " + path.string());
  char magic[4];
  detail::read_bytes(is, magic, 4, "magic");
  if (std::string_view(magic, 4) != "SBAG")
    throw FormatError("bad magic in bag file " + path.string());
  std::uint32_t version, n, k, d, dtype;
  detail::read_pod(is, version, "version");
  if (version != kBagVersion)
    throw FormatError("unsupported bag version " + std::to_string(version));
  detail::read_pod(is, n, "N");
  detail::read_pod(is, k, "k");
  detail::read_pod(is, d, "d");
  detail::read_pod(is, dtype, "dtype");
  if (dtype != kDtypeF64) throw FormatError("unsupported dtype code " + std::to_string(dtype));
  std::uint8_t label;
  std::uint16_t id_len;
  detail::read_pod(is, label, "label");
  detail::read_pod(is, id_len, "id length");

  FeatureBag bag;
  bag.slide_id.resize(id_len);
  if (id_len) detail::read_bytes(is, bag.slide_id.data(), id_len, "slide id");
  bag.y = label;
  bag.tumor_mask.resize(n);
  detail::read_bytes(is, bag.tumor_mask.data(), n, "tumor mask");
  bag.sub_tumor_mask.resize(static_cast<std::size_t>(n) * k);
  detail::read_bytes(is, bag.sub_tumor_mask.data(), bag.sub_tumor_mask.size(), "sub tumor mask");
  bag.Z = Mat(n, d);
  detail::read_bytes(is, bag.Z.a.data(), bag.Z.a.size() * sizeof(double), "Z");
  bag.U.assign(n, Mat(k, d));
  for (std::uint32_t i = 0; i < n; ++i)
    detail::read_bytes(is, bag.U[i].a.data(), bag.U[i].a.size() * sizeof(double), "U");

  for (std::uint32_t i = 0; i < n; ++i) {
    bool any = false;
    for (std::uint32_t j = 0; j < k; ++j) any = any || bag.sub_tumor(i, j);
    if (any != (bag.tumor_mask[i] != 0))
      throw FormatError("tumor mask inconsistent with sub-patch mask at patch " + std::to_string(i));
  }
  const bool any_tumor =
      std::any_of(bag.tumor_mask.begin(), bag.tumor_mask.end(), [](auto v) { return v != 0; });
  if (any_tumor != (bag.y == 1)) throw FormatError("label inconsistent with tumor mask");
  if (!all_finite(bag.Z.a)) throw FormatError("non-finite values in Z");
  return bag;
}

// ---------------------------------------------------------------------------
// Dataset manifest: plain text, one `slide` line per bag plus a config echo.

enum class Split { train, val, test };

inline const char* split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    default: return "test";
  }
}

inline Split split_from_name(const std::string& s) {
  if (s == "train") return Split::train;
  if (s == "val") return Split::val;
  if (s == "test") return Split::test;
  throw FormatError("unknown split name: " + s);
}

struct ManifestEntry {
  std::string slide_id;
  std::string path;  // relative to the manifest directory
  int y = 0;
  std::size_t n_patches = 0;
  Split split = Split::train;
};

struct DatasetManifest {
  int version = 1;
  SyntheticConfig config;
  std::vector<ManifestEntry> entries;
  std::filesystem::path root;  // directory holding manifest.txt; not serialized

  std::vector<const ManifestEntry*> split_entries(Split s) const {
    std::vector<const ManifestEntry*> out;
    for (const auto& e : entries)
      if (e.split == s) out.push_back(&e);
    return out;
  }

  FeatureBag load(const ManifestEntry& e) const {
    FeatureBag bag = load_bag(root / e.path);
    if (bag.n_patches() != e.n_patches)
      throw FormatError("manifest N=" + std::to_string(e.n_patches) + " but bag " + e.slide_id +
                        " stores N=" + std::to_string(bag.n_patches()));
    if (bag.y != e.y) throw FormatError("manifest label mismatch for " + e.slide_id);
    return bag;
  }
};

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline double parse_double(const std::string& s, const std::string& what) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw FormatError("bad number for " + what + ": '" + s + "'");
  return v;
}

inline std::vector<std::pair<std::string, std::string>> config_echo(const SyntheticConfig& c) {
  return {
      {"n_patches_lo", std::to_string(c.n_patches_lo)},
      {"n_patches_hi", std::to_string(c.n_patches_hi)},
      {"k", std::to_string(c.k)},
      {"d", std::to_string(c.d)},
      {"tumor_fraction_lo", format_double(c.tumor_fraction_lo)},
      {"tumor_fraction_hi", format_double(c.tumor_fraction_hi)},
      {"class_separation", format_double(c.class_separation)},
      {"low_res_blur", format_double(c.low_res_blur)},
      {"noise_sigma", format_double(c.noise_sigma)},
      {"seed", std::to_string(c.seed)},
  };
}

inline void apply_config_field(SyntheticConfig& c, const std::string& key, const std::string& val) {
  if (key == "n_patches_lo") c.n_patches_lo = std::stoull(val);
  else if (key == "n_patches_hi") c.n_patches_hi = std::stoull(val);
  else if (key == "k") c.k = std::stoull(val);
  else if (key == "d") c.d = std::stoull(val);
  else if (key == "tumor_fraction_lo") c.tumor_fraction_lo = parse_double(val, key);
  else if (key == "tumor_fraction_hi") c.tumor_fraction_hi = parse_double(val, key);
  else if (key == "class_separation") c.class_separation = parse_double(val, key);
  else if (key == "low_res_blur") c.low_res_blur = parse_double(val, key);
  else if (key == "noise_sigma") c.noise_sigma = parse_double(val, key);
  else if (key == "seed") c.seed = std::stoull(val);
  else throw FormatError("unknown config field in manifest: " + key);
}

inline void save_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw FormatError("cannot open for writing: " + path.string());
  os << "version\t" << m.version << "\n";
  for (const auto& [k, v] : config_echo(m.config)) os << "config\t" << k << "\t" << v << "\n";
  for (const auto& e : m.entries)
    os << "slide\t" << e.slide_id << "\t" << e.path << "\t" << e.y << "\t" << e.n_patches << "\t"
       << split_name(e.split) << "\n";
  if (!os) throw FormatError("write failed: " + path.string());
}

inline DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FormatError("cannot open manifest: " + path.string());
  DatasetManifest m;
  m.root = path.parent_path();
  std::string line;
  bool have_version = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      f.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    try {
      if (f[0] == "version" && f.size() == 2) {
        m.version = std::stoi(f[1]);
        if (m.version != 1) throw FormatError("unsupported manifest version " + f[1]);
        have_version = true;
      } else if (f[0] == "config" && f.size() == 3) {
        apply_config_field(m.config, f[1], f[2]);
      } else if (f[0] == "slide" && f.size() == 6) {
        ManifestEntry e;
        e.slide_id = f[1];
        e.path = f[2];
        e.y = std::stoi(f[3]);
        e.n_patches = std::stoull(f[4]);
        e.split = split_from_name(f[5]);
        m.entries.push_back(std::move(e));
      } else {
        throw FormatError("malformed manifest line: " + line);
      }
    } catch (const FormatError&) {
      throw;
    } catch (const std::exception&) {
      throw FormatError("malformed manifest line: " + line);
    }
  }
  if (!have_version) throw FormatError("manifest missing version line");
  for (std::size_t i = 0; i < m.entries.size(); ++i)
    for (std::size_t j = i + 1; j < m.entries.size(); ++j)
      if (m.entries[i].slide_id == m.entries[j].slide_id)
        throw FormatError("duplicate slide id " + m.entries[i].slide_id);
  return m;
}

/// Per-class counts for a fractional split, largest remainder rounding.
inline std::vector<std::size_t> split_counts(std::size_t n, const std::vector<double>& fracs) {
  std::vector<std::size_t> counts(fracs.size(), 0);
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < fracs.size(); ++i) {
    const double exact = fracs[i] * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(exact);
    assigned += counts[i];
    rem.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(rem.begin(), rem.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[rem[i % rem.size()].second];
  return counts;
}

inline DatasetManifest generate_dataset(const SyntheticConfig& cfg, std::size_t n_pos,
                                        std::size_t n_neg, const std::vector<double>& split_fracs,
                                        std::uint64_t seed, const std::filesystem::path& out_dir) {
  cfg.validate();
  if (n_pos < 1 || n_neg < 1) throw ConfigError("generate_dataset: need at least one slide per class");
  if (split_fracs.size() != 3) throw ConfigError("generate_dataset: expected 3 split fractions");
  double total = 0.0;
  for (double f : split_fracs) {
    if (f < 0.0) throw ConfigError("generate_dataset: negative split fraction");
    total += f;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("generate_dataset: split fractions must sum to 1");

  std::error_code ec;
  std::filesystem::create_directories(out_dir / "slides", ec);
  if (ec) throw FormatError("cannot create dataset directory: " + (out_dir / "slides").string());

  SyntheticConfig stamped = cfg;
  stamped.seed = seed;

  DatasetManifest m;
  m.config = stamped;
  m.root = out_dir;

  const Split splits[3] = {Split::train, Split::val, Split::test};
  Rng split_rng(derive_seed(seed, "split"));

  for (int cls = 1; cls >= 0; --cls) {
    const std::size_t count = cls == 1 ? n_pos : n_neg;
    const auto counts = split_counts(count, split_fracs);
    auto order = split_rng.permutation(count);
    std::vector<Split> assignment(count);
    std::size_t at = 0;
    for (int s = 0; s < 3; ++s)
      for (std::size_t i = 0; i < counts[s]; ++i) assignment[order[at++]] = splits[s];

    for (std::size_t i = 0; i < count; ++i) {
      char idbuf[32];
      std::snprintf(idbuf, sizeof(idbuf), "%s-%04zu", cls == 1 ? "pos" : "neg", i);
      const std::string id = idbuf;
      FeatureBag bag = generate_slide(stamped, cls, derive_seed(seed, id), id);
      const std::string rel = "slides/" + id + ".bag";
      save_bag(bag, out_dir / rel);
      m.entries.push_back({id, rel, cls, bag.n_patches(), assignment[i]});
    }
  }

  for (int s = 0; s < 3; ++s) {
    if (split_fracs[s] > 0.0 && m.split_entries(splits[s]).empty())
      throw ConfigError(std::string("generate_dataset: split '") + split_name(splits[s]) +
                        "' is empty at the requested fractions");
  }

  save_manifest(m, out_dir / "manifest.txt");
  return m;
}

}  // namespace sasha
