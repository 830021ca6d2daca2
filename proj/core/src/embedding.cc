// Copyright 2026 The sctk Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sctk/embedding.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <limits>
#include <utility>

#include "sctk/error.h"
#include "sctk/nifti.h"

namespace sctk {
namespace {

constexpr std::string_view kBlockMeanPrefix = "block-mean-";

template <typename T>
T LoadLittle(const std::uint8_t* p) {
  std::array<std::uint8_t, sizeof(T)> raw;
  std::memcpy(raw.data(), p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(raw.begin(), raw.end());
  }
  return std::bit_cast<T>(raw);
}

template <typename T>
void StoreLittle(std::vector<std::uint8_t>& out, T value) {
  auto raw = std::bit_cast<std::array<std::uint8_t, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(raw.begin(), raw.end());
  }
  out.insert(out.end(), raw.begin(), raw.end());
}

}  // namespace

EmbeddingSet::EmbeddingSet(std::size_t dim, std::vector<double> values,
                           std::string embedder_id)
    : dim_(dim), values_(std::move(values)), embedder_id_(std::move(embedder_id)) {
  if (dim_ < 2) {
    Fail(ErrorCode::kInvalidArgument, "embedding dimension must be >= 2");
  }
  if (values_.size() % dim_ != 0) {
    Fail(ErrorCode::kDimension, "embedding values are not a multiple of dim");
  }
}

void EmbeddingSet::Append(std::span<const double> vector) {
  if (vector.size() != dim_) {
    Fail(ErrorCode::kDimension, "embedding has dim " + std::to_string(vector.size()) +
                                    ", set expects " + std::to_string(dim_));
  }
  values_.insert(values_.end(), vector.begin(), vector.end());
}

void EmbeddingSet::Extend(const EmbeddingSet& other) {
  if (other.count() == 0) return;
  if (other.dim_ != dim_) {
    Fail(ErrorCode::kDimension, "cannot merge embeddings of different dims");
  }
  values_.insert(values_.end(), other.values_.begin(), other.values_.end());
}

BlockMeanEmbedder::BlockMeanEmbedder(std::size_t grid) : grid_(grid) {
  if (grid_ < 2) Fail(ErrorCode::kInvalidArgument, "block-mean grid must be >= 2");
}

std::string BlockMeanEmbedder::id() const {
  return std::string(kBlockMeanPrefix) + std::to_string(grid_);
}

std::vector<double> BlockMeanEmbedder::Embed(const Slice& slice) const {
  if (slice.nx < grid_ || slice.ny < grid_) {
    Fail(ErrorCode::kDegenerateInput,
         "slice " + std::to_string(slice.nx) + "x" + std::to_string(slice.ny) +
             " is smaller than the " + std::to_string(grid_) + "x" +
             std::to_string(grid_) + " block grid");
  }
  std::vector<double> out(grid_ * grid_);
  for (std::size_t by = 0; by < grid_; ++by) {
    const std::size_t y0 = by * slice.ny / grid_;
    const std::size_t y1 = (by + 1) * slice.ny / grid_;
    for (std::size_t bx = 0; bx < grid_; ++bx) {
      const std::size_t x0 = bx * slice.nx / grid_;
      const std::size_t x1 = (bx + 1) * slice.nx / grid_;
      double sum = 0.0;
      for (std::size_t y = y0; y < y1; ++y) {
        for (std::size_t x = x0; x < x1; ++x) sum += slice.at(x, y);
      }
      out[by * grid_ + bx] = sum / static_cast<double>((y1 - y0) * (x1 - x0));
    }
  }
  return out;
}

std::unique_ptr<Embedder> MakeEmbedder(const std::string& id) {
  if (id.starts_with(kBlockMeanPrefix)) {
    const std::string_view tail = std::string_view(id).substr(kBlockMeanPrefix.size());
    std::size_t grid = 0;
    const auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), grid);
    if (ec == std::errc() && ptr == tail.data() + tail.size() && grid >= 2) {
      return std::make_unique<BlockMeanEmbedder>(grid);
    }
  }
  Fail(ErrorCode::kConfig, "unknown embedder '" + id + "'");
}

EmbeddingSet EmbedSlices(std::span<const Slice> slices, const Embedder& embedder) {
  if (slices.empty()) Fail(ErrorCode::kInsufficientData, "no slices to embed");
  EmbeddingSet set(embedder.dim(), {}, embedder.id());
  for (std::size_t i = 0; i < slices.size(); ++i) {
    try {
      set.Append(embedder.Embed(slices[i]));
    } catch (const Error& e) {
      throw Error(e.code(), "embedder " + embedder.id() + " failed on slice " +
                                std::to_string(i) + ": " + e.what());
    }
  }
  return set;
}

EmbeddingSet DecodeEmbeddings(std::span<const std::uint8_t> bytes,
                              const std::string& embedder_id) {
  if (bytes.size() < 16) Fail(ErrorCode::kIo, "truncated embedding header");
  const auto count = LoadLittle<std::uint64_t>(bytes.data());
  const auto dim = LoadLittle<std::uint64_t>(bytes.data() + 8);
  if (dim < 2) Fail(ErrorCode::kFormat, "embedding dim must be >= 2");
  const std::uint64_t limit = (std::numeric_limits<std::uint64_t>::max() - 16) / 4;
  if (count != 0 && dim > limit / count) {
    Fail(ErrorCode::kFormat, "embedding header sizes overflow");
  }
  const std::uint64_t payload = count * dim * 4;
  if (bytes.size() - 16 < payload) {
    Fail(ErrorCode::kIo, "truncated embedding payload");
  }
  std::vector<double> values(count * dim);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = LoadLittle<float>(bytes.data() + 16 + 4 * i);
  }
  return EmbeddingSet(dim, std::move(values), embedder_id);
}

std::vector<std::uint8_t> EncodeEmbeddings(const EmbeddingSet& set) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + 4 * set.values().size());
  StoreLittle<std::uint64_t>(out, set.count());
  StoreLittle<std::uint64_t>(out, set.dim());
  for (double v : set.values()) StoreLittle<float>(out, static_cast<float>(v));
  return out;
}

EmbeddingSet ReadEmbeddingFile(const std::filesystem::path& path) {
  const auto bytes = ReadFileBytes(path);
  try {
    return DecodeEmbeddings(bytes, "external:" + path.filename().string());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void WriteEmbeddingFile(const EmbeddingSet& set, const std::filesystem::path& path) {
  const auto bytes = EncodeEmbeddings(set);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace sctk
