#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rrc/code_object.hpp"

namespace rrc {

// ---- chunk files ----------------------------------------------------------
//
// "RRC1" | version (1) | family (1) | modulus (4, BE) | n k r d (2 each, BE)
// | rack slot (2 each, 1-based) | original file length (8, BE) | payload
// | CRC32 of everything before it (4, BE).
// Payload: stripe after stripe, alpha symbols each, symbol_width(p) bytes BE.

inline constexpr std::uint8_t kChunkVersion = 1;
inline constexpr std::size_t kChunkHeaderSize = 30;

struct ChunkHeader {
  Family family = Family::Alpha1;
  std::uint32_t modulus = 0;
  int n = 0, k = 0, r = 0, d = 0;
  int rack = 0, slot = 0;  // 0-based in memory
  std::uint64_t file_length = 0;
  friend bool operator==(const ChunkHeader&, const ChunkHeader&) = default;
};

struct Chunk {
  ChunkHeader header;
  std::vector<Elem> symbols;
};

/// Bytes per stored symbol: enough for p - 1 (3 at p = 65537).
int symbol_width(std::uint32_t modulus);
/// Input bytes carried by one data symbol: 2 when p > 65536, 1 when
/// 256 < p <= 65536. Throws FieldTooSmall below that.
int input_bytes_per_symbol(std::uint32_t modulus);

std::vector<std::uint8_t> chunk_bytes(const Chunk& c);
/// Throws CorruptChunk on bad magic, version, length, checksum or symbol.
Chunk parse_chunk(std::span<const std::uint8_t> bytes);

/// "node-05.rrc" for node index 4.
std::string chunk_name(int node);
inline constexpr const char* kCodeFileName = "code.json";

void write_chunk(const std::filesystem::path& path, const Chunk& c);  // temp + rename
Chunk read_chunk(const std::filesystem::path& path);

// ---- stripe codec -----------------------------------------------------------

/// Traffic of one node repair, summed over stripes.
struct BandwidthReport {
  std::uint64_t stripes = 0;
  int symbol_bytes = 0;
  int cross_per_stripe = 0;
  int intra_per_stripe = 0;
  std::map<int, int> per_rack_per_stripe;  // helper rack -> symbols per stripe
  std::uint64_t cross_rack_symbols() const { return stripes * static_cast<std::uint64_t>(cross_per_stripe); }
  std::uint64_t intra_rack_symbols() const { return stripes * static_cast<std::uint64_t>(intra_per_stripe); }
  std::uint64_t cross_rack_bytes() const { return cross_rack_symbols() * static_cast<std::uint64_t>(symbol_bytes); }
  std::uint64_t intra_rack_bytes() const { return intra_rack_symbols() * static_cast<std::uint64_t>(symbol_bytes); }
};

/// One chunk per node. Throws BadInput for empty input.
std::vector<Chunk> encode_bytes(const CodeObject& code, std::span<const std::uint8_t> input);

struct RepairOutcome {
  Chunk chunk;
  BandwidthReport report;
  std::vector<int> helpers;
  bool generic = false;  // rebuilt through the projection fallback
};

/// `chunks[v]` empty means node v is gone; `failed` must be one of those
/// or is ignored if present. Default helpers: the d lowest surviving racks
/// (alpha1, mbrr) or the construction's fixed set (hybrid). Hybrid parity
/// nodes throw UnsupportedRepairTarget unless `allow_generic`.
RepairOutcome repair_chunks(const CodeObject& code, const std::vector<std::optional<Chunk>>& chunks,
                            int failed, const std::optional<std::vector<int>>& helpers,
                            bool allow_generic = false);

/// Needs at least k chunks; uses every one present.
std::vector<std::uint8_t> decode_chunks(const CodeObject& code,
                                        const std::vector<std::optional<Chunk>>& chunks);

// ---- directories ------------------------------------------------------------

/// Writes the n chunk files and the code object into `dir`.
void encode_file(const CodeObject& code, const std::filesystem::path& input,
                 const std::filesystem::path& dir);
/// Loads the code object beside the chunks; `failed` is a 0-based node.
RepairOutcome repair_file(const std::filesystem::path& dir, int failed,
                          const std::optional<std::vector<int>>& helpers,
                          bool allow_generic = false);
/// Chunks that fail their checksum count as erased.
void decode_file(const std::filesystem::path& dir, const std::filesystem::path& output);

/// Code object for an encode: the given file if any, else alpha1 built on
/// the spot. Hybrid and mbrr without a file throw NeedSearch.
CodeObject resolve_code(const std::optional<std::filesystem::path>& code_file, Family family,
                        int n, int k, int r, std::optional<int> d, const Field& f);

}  // namespace rrc
