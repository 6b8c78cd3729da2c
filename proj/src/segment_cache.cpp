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

#include "gpylab/segment_cache.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstring>
#include <fstream>
#include <regex>
#include <string>
#include <system_error>
#include <thread>

#include "gpylab/errors.hpp"

namespace gpylab::sieve {

namespace {

constexpr std::array<char, 4> kBitMagic = {'T', 'S', 'V', '1'};
constexpr std::array<char, 4> kSpfMagic = {'T', 'S', 'F', '1'};
constexpr const char* kPrefix = "tsv1_";
constexpr std::uint32_t kFlagSpf = 1;

template <class T>
void put_le(std::string& buf, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

template <class T>
T get_le(const unsigned char* p) {
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(p[i]) << (8 * i);
    return v;
}

std::string header(const std::array<char, 4>& magic, std::uint64_t lo, std::uint64_t hi, std::uint32_t flags) {
    std::string buf(magic.begin(), magic.end());
    put_le(buf, lo);
    put_le(buf, hi);
    put_le(buf, flags);
    return buf;
}

constexpr std::size_t kHeaderSize = 4 + 8 + 8 + 4;

std::optional<std::string> read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

// Write to a unique temporary and rename, so concurrent writers of the same
// segment never expose a partial file.
void write_atomic(const std::filesystem::path& p, const std::string& data) {
    static std::atomic<unsigned> counter{0};
    auto tmp = p;
    tmp += ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())) + "_" +
           std::to_string(counter.fetch_add(1));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
        out.write(data.data(), static_cast<std::streamsize>(data.size()));
        if (!out) throw std::runtime_error("short write to cache file " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, p, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error("cannot rename cache file into " + p.string());
    }
}

bool check_header(const std::string& data, const std::array<char, 4>& magic, std::uint64_t lo, std::uint64_t hi,
                  std::uint32_t* flags) {
    if (data.size() < kHeaderSize) return false;
    if (std::memcmp(data.data(), magic.data(), 4) != 0) return false;
    auto* p = reinterpret_cast<const unsigned char*>(data.data());
    if (get_le<std::uint64_t>(p + 4) != lo || get_le<std::uint64_t>(p + 12) != hi) return false;
    if (flags) *flags = get_le<std::uint32_t>(p + 20);
    return true;
}

}  // namespace

SegmentCache::SegmentCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw std::runtime_error("cannot create cache directory " + dir_.string() + ": " + ec.message());
}

std::filesystem::path SegmentCache::seg_path(std::uint64_t lo, std::uint64_t hi) const {
    return dir_ / (std::string(kPrefix) + std::to_string(lo) + "_" + std::to_string(hi) + ".seg");
}

std::filesystem::path SegmentCache::spf_path(std::uint64_t lo, std::uint64_t hi) const {
    return dir_ / (std::string(kPrefix) + std::to_string(lo) + "_" + std::to_string(hi) + ".spf");
}

std::optional<SieveSegment> SegmentCache::load(std::uint64_t lo, std::uint64_t hi, bool with_spf) const {
    if (lo >= hi) return std::nullopt;
    const bool want_spf = with_spf && hi <= kSpfLimit;
    auto bits = read_file(seg_path(lo, hi));
    std::uint32_t flags = 0;
    if (!bits || !check_header(*bits, kBitMagic, lo, hi, &flags)) return std::nullopt;
    const std::uint64_t n = hi - lo;
    const std::size_t n_words = (n + 63) / 64;
    if (bits->size() != kHeaderSize + 8 * n_words) return std::nullopt;

    std::vector<std::uint64_t> words(n_words);
    auto* p = reinterpret_cast<const unsigned char*>(bits->data()) + kHeaderSize;
    for (std::size_t i = 0; i < n_words; ++i) words[i] = get_le<std::uint64_t>(p + 8 * i);

    std::vector<std::uint32_t> spf;
    if (want_spf) {
        if (!(flags & kFlagSpf)) return std::nullopt;
        auto raw = read_file(spf_path(lo, hi));
        if (!raw || !check_header(*raw, kSpfMagic, lo, hi, nullptr)) return std::nullopt;
        if (raw->size() != kHeaderSize + 4 * n) return std::nullopt;
        spf.resize(n);
        auto* q = reinterpret_cast<const unsigned char*>(raw->data()) + kHeaderSize;
        for (std::uint64_t i = 0; i < n; ++i) spf[i] = get_le<std::uint32_t>(q + 4 * i);
    }
    return SieveSegment(lo, hi, std::move(words), std::move(spf));
}

void SegmentCache::store(const SieveSegment& seg) const {
    const std::uint32_t flags = seg.has_spf() ? kFlagSpf : 0;
    if (seg.has_spf()) {
        std::string buf = header(kSpfMagic, seg.lo(), seg.hi(), 0);
        buf.reserve(kHeaderSize + 4 * seg.size());
        for (auto v : seg.spf_table()) put_le(buf, v);
        write_atomic(spf_path(seg.lo(), seg.hi()), buf);
    } else if (auto existing = load(seg.lo(), seg.hi(), true); existing && existing->has_spf()) {
        // Keep the richer entry already on disk.
        return;
    }
    std::string buf = header(kBitMagic, seg.lo(), seg.hi(), flags);
    buf.reserve(kHeaderSize + 8 * seg.words().size());
    for (auto w : seg.words()) put_le(buf, w);
    write_atomic(seg_path(seg.lo(), seg.hi()), buf);
}

std::vector<SegmentCache::Entry> SegmentCache::status() const {
    static const std::regex name_re(R"(tsv1_(\d+)_(\d+)\.seg)");
    std::vector<Entry> out;
    for (const auto& de : std::filesystem::directory_iterator(dir_)) {
        std::smatch m;
        std::string name = de.path().filename().string();
        if (!std::regex_match(name, m, name_re)) continue;
        Entry e{std::stoull(m[1]), std::stoull(m[2]), false};
        auto data = read_file(de.path());
        std::uint32_t flags = 0;
        if (!data || !check_header(*data, kBitMagic, e.lo, e.hi, &flags)) continue;
        e.has_spf = (flags & kFlagSpf) && std::filesystem::exists(spf_path(e.lo, e.hi));
        out.push_back(e);
    }
    std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) { return a.lo < b.lo; });
    return out;
}

std::size_t SegmentCache::clear() const {
    static const std::regex name_re(R"(tsv1_\d+_\d+\.(seg|spf))");
    std::size_t removed = 0;
    std::vector<std::filesystem::path> victims;
    for (const auto& de : std::filesystem::directory_iterator(dir_)) {
        if (std::regex_match(de.path().filename().string(), name_re)) victims.push_back(de.path());
    }
    for (const auto& p : victims) {
        std::error_code ec;
        if (std::filesystem::remove(p, ec)) {
            ++removed;
        } else if (ec) {
            throw std::runtime_error("cannot remove " + p.string() + ": " + ec.message());
        }
    }
    return removed;
}

std::size_t SegmentCache::prewarm(std::uint64_t lo, std::uint64_t hi, bool with_spf, const SieveOptions& opts) const {
    auto grid = segment_grid(lo, hi, opts.segment_size);
    parallel_for(grid.size(), opts.workers, [&](std::size_t i) {
        if (load(grid[i].lo, grid[i].hi, with_spf)) return;
        store(build_segment(grid[i].lo, grid[i].hi, with_spf, opts.segment_size));
    });
    return grid.size();
}

}  // namespace gpylab::sieve
