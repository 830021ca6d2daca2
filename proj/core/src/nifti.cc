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

#include "sctk/nifti.h"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "sctk/error.h"

namespace sctk {
namespace {

// Field offsets within the 348-byte NIfTI-1 header.
constexpr std::size_t kOffSizeofHdr = 0;
constexpr std::size_t kOffDim = 40;
constexpr std::size_t kOffDatatype = 70;
constexpr std::size_t kOffBitpix = 72;
constexpr std::size_t kOffPixdim = 76;
constexpr std::size_t kOffVoxOffset = 108;
constexpr std::size_t kOffSclSlope = 112;
constexpr std::size_t kOffSclInter = 116;
constexpr std::size_t kOffXyztUnits = 123;
constexpr std::size_t kOffQformCode = 252;
constexpr std::size_t kOffSformCode = 254;
constexpr std::size_t kOffQuaternB = 256;
constexpr std::size_t kOffQoffsetX = 268;
constexpr std::size_t kOffSrowX = 280;
constexpr std::size_t kOffSrowY = 296;
constexpr std::size_t kOffSrowZ = 312;
constexpr std::size_t kOffMagic = 344;

constexpr char kMagicSingle[4] = {'n', '+', '1', '\0'};
constexpr char kMagicPair[4] = {'n', 'i', '1', '\0'};

template <typename T>
T ByteSwap(T value) {
  auto raw = std::bit_cast<std::array<std::uint8_t, sizeof(T)>>(value);
  std::reverse(raw.begin(), raw.end());
  return std::bit_cast<T>(raw);
}

// Reads fixed-width fields out of a byte span in a chosen byte order.
class FieldReader {
 public:
  FieldReader(std::span<const std::uint8_t> bytes, bool big_endian)
      : bytes_(bytes), swap_(big_endian != (std::endian::native ==
                                            std::endian::big)) {}

  template <typename T>
  T Get(std::size_t offset) const {
    T value;
    std::memcpy(&value, bytes_.data() + offset, sizeof(T));
    return swap_ ? ByteSwap(value) : value;
  }

  bool swap() const { return swap_; }

 private:
  std::span<const std::uint8_t> bytes_;
  bool swap_;
};

class FieldWriter {
 public:
  explicit FieldWriter(std::vector<std::uint8_t>& out) : out_(out) {}

  template <typename T>
  void Put(std::size_t offset, T value) {
    if constexpr (std::endian::native == std::endian::big) {
      value = ByteSwap(value);
    }
    std::memcpy(out_.data() + offset, &value, sizeof(T));
  }

 private:
  std::vector<std::uint8_t>& out_;
};

struct ParsedHeader {
  VolumeGeometry geometry;
  std::int16_t datatype = 0;
  std::size_t data_offset = 0;
  bool swap = false;
  bool scaled = false;
  double slope = 1.0;
  double inter = 0.0;
};

std::size_t DatatypeSize(std::int16_t datatype) {
  switch (datatype) {
    case nifti::kDtUint8:
      return 1;
    case nifti::kDtInt16:
      return 2;
    case nifti::kDtFloat32:
      return 4;
    case nifti::kDtFloat64:
      return 8;
    default:
      return 0;
  }
}

bool IsGzip(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 2 && bytes[0] == 0x1F && bytes[1] == 0x8B;
}

ParsedHeader ParseHeader(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < static_cast<std::size_t>(nifti::kHeaderSize)) {
    Fail(ErrorCode::kIo, "truncated NIfTI header: " +
                             std::to_string(bytes.size()) + " bytes");
  }
  // dim[0] must be in [1, 7]; if it is not in the little-endian reading it
  // has to be in the big-endian one.
  FieldReader le(bytes, false);
  FieldReader be(bytes, true);
  const auto dim0_le = le.Get<std::int16_t>(kOffDim);
  const auto dim0_be = be.Get<std::int16_t>(kOffDim);
  bool big_endian;
  if (dim0_le >= 1 && dim0_le <= 7) {
    big_endian = false;
  } else if (dim0_be >= 1 && dim0_be <= 7) {
    big_endian = true;
  } else {
    Fail(ErrorCode::kFormat, "invalid dim[0] in NIfTI header");
  }
  const FieldReader& in = big_endian ? be : le;

  if (in.Get<std::int32_t>(kOffSizeofHdr) != nifti::kHeaderSize) {
    Fail(ErrorCode::kFormat, "sizeof_hdr is not 348");
  }
  const auto* magic = bytes.data() + kOffMagic;
  if (std::memcmp(magic, kMagicPair, 4) == 0) {
    Fail(ErrorCode::kFormat, "two-file NIfTI (.hdr/.img) is not supported");
  }
  if (std::memcmp(magic, kMagicSingle, 4) != 0) {
    Fail(ErrorCode::kFormat, "missing NIfTI-1 magic \"n+1\"");
  }

  ParsedHeader header;
  header.swap = in.swap();
  header.datatype = in.Get<std::int16_t>(kOffDatatype);
  if (DatatypeSize(header.datatype) == 0) {
    Fail(ErrorCode::kUnsupportedDatatype,
         "unsupported NIfTI datatype code " + std::to_string(header.datatype));
  }
  const auto bitpix = in.Get<std::int16_t>(kOffBitpix);
  if (bitpix != static_cast<std::int16_t>(8 * DatatypeSize(header.datatype))) {
    Fail(ErrorCode::kFormat, "bitpix " + std::to_string(bitpix) +
                                 " inconsistent with datatype " +
                                 std::to_string(header.datatype));
  }

  const int ndim = in.Get<std::int16_t>(kOffDim);
  std::array<std::size_t, 3> extent = {1, 1, 1};
  for (int i = 1; i <= 7; ++i) {
    const auto d = in.Get<std::int16_t>(kOffDim + 2 * i);
    if (i > ndim) continue;
    if (d < 1) {
      Fail(ErrorCode::kFormat, "dim[" + std::to_string(i) + "] = " +
                                   std::to_string(d) + " is not positive");
    }
    if (i <= 3) {
      extent[i - 1] = static_cast<std::size_t>(d);
    } else if (d != 1) {
      Fail(ErrorCode::kFormat, "only 3D volumes are supported (dim[" +
                                   std::to_string(i) +
                                   "] = " + std::to_string(d) + ")");
    }
  }
  VolumeGeometry& geo = header.geometry;
  geo.dims = Dims{extent[0], extent[1], extent[2]};
  for (int i = 0; i < 3; ++i) {
    float s = in.Get<float>(kOffPixdim + 4 * (i + 1));
    if (i >= ndim) s = s > 0.0f && std::isfinite(s) ? s : 1.0f;
    if (!(s > 0.0f) || !std::isfinite(s)) {
      Fail(ErrorCode::kFormat,
           "pixdim[" + std::to_string(i + 1) + "] is not positive");
    }
    geo.spacing[i] = s;
  }

  Orientation& o = geo.orientation;
  const float qfac = in.Get<float>(kOffPixdim);
  o.qfac = qfac < 0.0f ? -1.0f : 1.0f;
  o.xyzt_units = bytes[kOffXyztUnits];
  o.qform_code = in.Get<std::int16_t>(kOffQformCode);
  o.sform_code = in.Get<std::int16_t>(kOffSformCode);
  o.quatern_b = in.Get<float>(kOffQuaternB);
  o.quatern_c = in.Get<float>(kOffQuaternB + 4);
  o.quatern_d = in.Get<float>(kOffQuaternB + 8);
  for (int i = 0; i < 3; ++i) o.qoffset[i] = in.Get<float>(kOffQoffsetX + 4 * i);
  for (int i = 0; i < 4; ++i) {
    o.srow_x[i] = in.Get<float>(kOffSrowX + 4 * i);
    o.srow_y[i] = in.Get<float>(kOffSrowY + 4 * i);
    o.srow_z[i] = in.Get<float>(kOffSrowZ + 4 * i);
  }

  const float vox_offset = in.Get<float>(kOffVoxOffset);
  if (!std::isfinite(vox_offset) ||
      vox_offset < static_cast<float>(nifti::kHeaderSize) ||
      vox_offset > static_cast<float>(std::numeric_limits<std::int32_t>::max())) {
    Fail(ErrorCode::kFormat, "invalid vox_offset");
  }
  header.data_offset = static_cast<std::size_t>(vox_offset);

  const float slope = in.Get<float>(kOffSclSlope);
  const float inter = in.Get<float>(kOffSclInter);
  if (std::isfinite(slope) && slope != 0.0f) {
    header.scaled = true;
    header.slope = slope;
    header.inter = std::isfinite(inter) ? inter : 0.0;
  }
  return header;
}

template <typename T>
void DecodePayload(std::span<const std::uint8_t> payload, bool swap,
                   std::vector<double>& out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    T value;
    std::memcpy(&value, payload.data() + i * sizeof(T), sizeof(T));
    if (swap) value = ByteSwap(value);
    out[i] = static_cast<double>(value);
  }
}

Volume DecodeUncompressed(std::span<const std::uint8_t> bytes,
                          ValueKind kind) {
  ParsedHeader header = ParseHeader(bytes);
  const std::size_t count = header.geometry.dims.voxel_count();
  const std::size_t payload_size = count * DatatypeSize(header.datatype);
  if (header.data_offset > bytes.size() ||
      bytes.size() - header.data_offset < payload_size) {
    Fail(ErrorCode::kIo, "truncated NIfTI payload: need " +
                             std::to_string(payload_size) + " bytes at offset " +
                             std::to_string(header.data_offset) + ", file has " +
                             std::to_string(bytes.size()));
  }
  const auto payload = bytes.subspan(header.data_offset, payload_size);
  std::vector<double> voxels(count);
  switch (header.datatype) {
    case nifti::kDtUint8:
      DecodePayload<std::uint8_t>(payload, header.swap, voxels);
      break;
    case nifti::kDtInt16:
      DecodePayload<std::int16_t>(payload, header.swap, voxels);
      break;
    case nifti::kDtFloat32:
      DecodePayload<float>(payload, header.swap, voxels);
      break;
    case nifti::kDtFloat64:
      DecodePayload<double>(payload, header.swap, voxels);
      break;
  }
  if (header.scaled && !(header.slope == 1.0 && header.inter == 0.0)) {
    for (double& v : voxels) v = header.slope * v + header.inter;
  }
  return Volume(std::move(header.geometry), kind, std::move(voxels));
}

}  // namespace

std::vector<std::uint8_t> GunzipBytes(std::span<const std::uint8_t> bytes) {
  z_stream stream{};
  if (inflateInit2(&stream, 16 + MAX_WBITS) != Z_OK) {
    Fail(ErrorCode::kIo, "zlib initialization failed");
  }
  std::vector<std::uint8_t> out;
  std::array<std::uint8_t, 1 << 16> chunk;
  stream.next_in = const_cast<Bytef*>(bytes.data());
  stream.avail_in = static_cast<uInt>(bytes.size());
  int status = Z_OK;
  while (true) {
    stream.next_out = chunk.data();
    stream.avail_out = static_cast<uInt>(chunk.size());
    status = inflate(&stream, Z_NO_FLUSH);
    out.insert(out.end(), chunk.data(),
               chunk.data() + (chunk.size() - stream.avail_out));
    if (status == Z_STREAM_END) {
      // Concatenated gzip members.
      if (stream.avail_in >= 2 && stream.next_in[0] == 0x1F &&
          stream.next_in[1] == 0x8B) {
        inflateReset(&stream);
        continue;
      }
      break;
    }
    if (status == Z_BUF_ERROR && stream.avail_in == 0) {
      inflateEnd(&stream);
      Fail(ErrorCode::kIo, "truncated gzip stream");
    }
    if (status != Z_OK) {
      inflateEnd(&stream);
      Fail(ErrorCode::kFormat, "corrupt gzip stream");
    }
  }
  inflateEnd(&stream);
  return out;
}

std::vector<std::uint8_t> GzipBytes(std::span<const std::uint8_t> bytes) {
  z_stream stream{};
  // windowBits 15 + 16 selects the gzip wrapper; its header has mtime 0, so
  // output depends only on the input bytes.
  if (deflateInit2(&stream, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 16 + MAX_WBITS, 8,
                   Z_DEFAULT_STRATEGY) != Z_OK) {
    Fail(ErrorCode::kIo, "zlib initialization failed");
  }
  std::vector<std::uint8_t> out(deflateBound(&stream, static_cast<uLong>(bytes.size())));
  stream.next_in = const_cast<Bytef*>(bytes.data());
  stream.avail_in = static_cast<uInt>(bytes.size());
  stream.next_out = out.data();
  stream.avail_out = static_cast<uInt>(out.size());
  const int status = deflate(&stream, Z_FINISH);
  out.resize(stream.total_out);
  deflateEnd(&stream);
  if (status != Z_STREAM_END) Fail(ErrorCode::kIo, "gzip compression failed");
  return out;
}

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) Fail(ErrorCode::kIo, "read failed for " + path.string());
  return bytes;
}

Volume DecodeNifti(std::span<const std::uint8_t> bytes, ValueKind kind) {
  if (IsGzip(bytes)) {
    const std::vector<std::uint8_t> inflated = GunzipBytes(bytes);
    return DecodeUncompressed(inflated, kind);
  }
  return DecodeUncompressed(bytes, kind);
}

Volume ReadNifti(const std::filesystem::path& path, ValueKind kind) {
  const std::vector<std::uint8_t> bytes = ReadFileBytes(path);
  try {
    return DecodeNifti(bytes, kind);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

VolumeGeometry ReadNiftiGeometry(const std::filesystem::path& path) {
  // gzread passes uncompressed files through unchanged.
  gzFile file = gzopen(path.string().c_str(), "rb");
  if (file == nullptr) Fail(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> header(nifti::kHeaderSize);
  const int n = gzread(file, header.data(), nifti::kHeaderSize);
  gzclose(file);
  if (n < 0) Fail(ErrorCode::kIo, "read failed for " + path.string());
  header.resize(static_cast<std::size_t>(n));
  try {
    return ParseHeader(header).geometry;
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> EncodeNifti(const Volume& volume) {
  const VolumeGeometry& geo = volume.geometry();
  geo.Validate();
  const std::size_t count = geo.dims.voxel_count();
  for (std::size_t d : {geo.dims.nx, geo.dims.ny, geo.dims.nz}) {
    if (d > static_cast<std::size_t>(std::numeric_limits<std::int16_t>::max())) {
      Fail(ErrorCode::kDimension, "dimension exceeds NIfTI-1 limit of 32767");
    }
  }
  std::vector<std::uint8_t> out(nifti::kDefaultVoxOffset + 4 * count, 0);
  FieldWriter w(out);
  w.Put<std::int32_t>(kOffSizeofHdr, nifti::kHeaderSize);
  w.Put<std::int16_t>(kOffDim, 3);
  w.Put<std::int16_t>(kOffDim + 2, static_cast<std::int16_t>(geo.dims.nx));
  w.Put<std::int16_t>(kOffDim + 4, static_cast<std::int16_t>(geo.dims.ny));
  w.Put<std::int16_t>(kOffDim + 6, static_cast<std::int16_t>(geo.dims.nz));
  for (int i = 4; i <= 7; ++i) w.Put<std::int16_t>(kOffDim + 2 * i, 1);
  w.Put<std::int16_t>(kOffDatatype, nifti::kDtFloat32);
  w.Put<std::int16_t>(kOffBitpix, 32);
  const Orientation& o = geo.orientation;
  w.Put<float>(kOffPixdim, o.qfac);
  for (int i = 0; i < 3; ++i) w.Put<float>(kOffPixdim + 4 * (i + 1), geo.spacing[i]);
  w.Put<float>(kOffVoxOffset, static_cast<float>(nifti::kDefaultVoxOffset));
  w.Put<float>(kOffSclSlope, 1.0f);
  w.Put<float>(kOffSclInter, 0.0f);
  out[kOffXyztUnits] = o.xyzt_units;
  w.Put<std::int16_t>(kOffQformCode, o.qform_code);
  w.Put<std::int16_t>(kOffSformCode, o.sform_code);
  w.Put<float>(kOffQuaternB, o.quatern_b);
  w.Put<float>(kOffQuaternB + 4, o.quatern_c);
  w.Put<float>(kOffQuaternB + 8, o.quatern_d);
  for (int i = 0; i < 3; ++i) w.Put<float>(kOffQoffsetX + 4 * i, o.qoffset[i]);
  for (int i = 0; i < 4; ++i) {
    w.Put<float>(kOffSrowX + 4 * i, o.srow_x[i]);
    w.Put<float>(kOffSrowY + 4 * i, o.srow_y[i]);
    w.Put<float>(kOffSrowZ + 4 * i, o.srow_z[i]);
  }
  std::memcpy(out.data() + kOffMagic, kMagicSingle, 4);
  // Bytes 348..351 stay zero: no extensions.
  const auto voxels = volume.voxels();
  for (std::size_t i = 0; i < count; ++i) {
    w.Put<float>(nifti::kDefaultVoxOffset + 4 * i, static_cast<float>(voxels[i]));
  }
  return out;
}

void WriteNifti(const Volume& volume, const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes = EncodeNifti(volume);
  if (path.extension() == ".gz") bytes = GzipBytes(bytes);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace sctk
