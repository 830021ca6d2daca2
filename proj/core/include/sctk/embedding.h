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

#ifndef SCTK_EMBEDDING_H_
#define SCTK_EMBEDDING_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sctk/volume.h"

namespace sctk {

// Row-major count x dim feature matrix, one row per slice.
class EmbeddingSet {
 public:
  EmbeddingSet() = default;
  // dim must be >= 2 and values.size() a multiple of dim.
  EmbeddingSet(std::size_t dim, std::vector<double> values, std::string embedder_id);

  std::size_t dim() const { return dim_; }
  std::size_t count() const { return dim_ == 0 ? 0 : values_.size() / dim_; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * dim_, dim_);
  }
  std::span<const double> values() const { return values_; }
  const std::string& embedder_id() const { return embedder_id_; }

  void Append(std::span<const double> vector);
  // Concatenates rows of another set with the same dim.
  void Extend(const EmbeddingSet& other);

  friend bool operator==(const EmbeddingSet&, const EmbeddingSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
  std::string embedder_id_;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::string id() const = 0;
  virtual std::size_t dim() const = 0;
  virtual std::vector<double> Embed(const Slice& slice) const = 0;
};

// Splits the slice into a grid x grid layout of blocks and returns the block
// means, row-major over (block_y, block_x). Block j along an axis of length n
// spans [floor(j*n/grid), floor((j+1)*n/grid)). Requires nx, ny >= grid.
class BlockMeanEmbedder final : public Embedder {
 public:
  explicit BlockMeanEmbedder(std::size_t grid = 8);

  std::string id() const override;
  std::size_t dim() const override { return grid_ * grid_; }
  std::vector<double> Embed(const Slice& slice) const override;

 private:
  std::size_t grid_;
};

// Looks up a built-in embedder by id ("block-mean-8", "block-mean-<g>").
std::unique_ptr<Embedder> MakeEmbedder(const std::string& id);

// Embedder failures are rethrown with the failing slice index.
EmbeddingSet EmbedSlices(std::span<const Slice> slices, const Embedder& embedder);

// External embedding files: little-endian u64 count, u64 dim, then
// count*dim float32 values, row-major.
EmbeddingSet DecodeEmbeddings(std::span<const std::uint8_t> bytes,
                              const std::string& embedder_id = "external");
std::vector<std::uint8_t> EncodeEmbeddings(const EmbeddingSet& set);
EmbeddingSet ReadEmbeddingFile(const std::filesystem::path& path);
void WriteEmbeddingFile(const EmbeddingSet& set, const std::filesystem::path& path);

}  // namespace sctk

#endif  // SCTK_EMBEDDING_H_
