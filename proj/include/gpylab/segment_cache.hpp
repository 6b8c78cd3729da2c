// Copyright 2026 The gpylab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "gpylab/sieve.hpp"

namespace gpylab::sieve {

// On-disk segment store. One file per segment, little-endian:
//
//   bit file  tsv1_<lo>_<hi>.seg : "TSV1" u64 lo, u64 hi, u32 flags,
//                                  then ceil((hi-lo)/64) u64 words
//   spf file  tsv1_<lo>_<hi>.spf : "TSF1" u64 lo, u64 hi, u32 flags,
//                                  then (hi-lo) u32 entries
//
// flags bit 0 is set on a bit file whose spf sidecar was also written.
// Bumping the version changes both magic and file prefix; clear() only
// touches files of the current version. Cached data is an optimization:
// a missing or malformed file is rebuilt.
class SegmentCache {
  public:
    explicit SegmentCache(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }

    std::optional<SieveSegment> load(std::uint64_t lo, std::uint64_t hi, bool with_spf) const;
    void store(const SieveSegment& seg) const;

    struct Entry {
        std::uint64_t lo = 0;
        std::uint64_t hi = 0;
        bool has_spf = false;
    };
    // Cached spans sorted by lo.
    std::vector<Entry> status() const;
    // Removes current-version files; returns how many were deleted.
    std::size_t clear() const;
    // Ensures every grid segment of [lo, hi) is on disk, skipping those
    // already present. Returns the number of grid segments.
    std::size_t prewarm(std::uint64_t lo, std::uint64_t hi, bool with_spf, const SieveOptions& opts) const;

  private:
    std::filesystem::path seg_path(std::uint64_t lo, std::uint64_t hi) const;
    std::filesystem::path spf_path(std::uint64_t lo, std::uint64_t hi) const;

    std::filesystem::path dir_;
};

}  // namespace gpylab::sieve
