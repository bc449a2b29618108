#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "deepsc/signal.hpp"

namespace deepsc::experiment {

enum class Split { Train, Test };

struct ManifestEntry {
  std::filesystem::path path;
  Split split = Split::Train;
};

/// One `path,split` per line (split: train|test), `#` comments, blank lines
/// ignored. Relative paths resolve against `base_dir`.
std::vector<ManifestEntry> parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {});
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& manifest);

/// Loads the entries of `split` in manifest order, resamples each to `rate`
/// and pads/splits it into sequences of exactly `length` samples. Throws
/// FormatError on a missing file and InvalidArgument on an empty split.
std::vector<SampleSequence> ingest_dataset(const std::filesystem::path& manifest, Split split, int rate,
                                           std::size_t length = 16384);

/// Speech-like stand-in corpus: a few tones with random phase, silent gaps,
/// and short noise bursts, peak-normalized to 0.95. Deterministic in
/// (seed, stream); never all-zero.
std::vector<SampleSequence> synthesize_corpus(std::size_t count, int rate, std::size_t length, std::uint64_t seed,
                                              std::uint64_t stream = 0);

}  // namespace deepsc::experiment
