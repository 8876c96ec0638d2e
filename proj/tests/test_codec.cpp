#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

#include "rrc/codec.hpp"
#include "rrc/error.hpp"

using namespace rrc;
namespace fs = std::filesystem;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

std::vector<std::uint8_t> random_bytes(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

const CodeObject& flagship(Family f) {
  static const CodeObject a1 = CodeObject::create(Family::Alpha1, 10, 8, 5, std::nullopt, Field(65537), 0);
  static const CodeObject hy = CodeObject::create(Family::HybridMsrr, 12, 8, 4, 3, Field(65537), 7);
  static const CodeObject mb = CodeObject::create(Family::Mbrr, 12, 8, 4, 3, Field(65537), 1);
  switch (f) {
    case Family::Alpha1: return a1;
    case Family::HybridMsrr: return hy;
    case Family::Mbrr: return mb;
  }
  return a1;
}

std::vector<std::optional<Chunk>> all_but(const std::vector<Chunk>& chunks, int gone) {
  std::vector<std::optional<Chunk>> out(chunks.begin(), chunks.end());
  if (gone >= 0) out[gone].reset();
  return out;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rrc-test-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST(CodeObject, JsonRoundTripEveryFamily) {
  for (Family f : {Family::Alpha1, Family::HybridMsrr, Family::Mbrr}) {
    const CodeObject& c = flagship(f);
    const CodeObject back = code_from_json(to_json(c));
    EXPECT_EQ(back.family(), f);
    EXPECT_EQ(back.code().generator, c.code().generator) << to_string(f);
    EXPECT_EQ(back.seed(), c.seed());
    EXPECT_EQ(back.attempts(), c.attempts());
  }
}

TEST(CodeObject, TamperingIsDetected) {
  std::string text = to_json(flagship(Family::Mbrr));
  const auto at = text.find("\"data\": [") + 10;
  text[at] = text[at] == '1' ? '2' : '1';
  EXPECT_EQ(code_of([&] { code_from_json(text); }), ErrorCode::CorruptChunk);
  EXPECT_EQ(code_of([] { code_from_json("{not json"); }), ErrorCode::CorruptChunk);
  EXPECT_EQ(code_of([] { code_from_json("{\"format\": \"other\"}"); }), ErrorCode::CorruptChunk);
}

TEST(CodeObject, Alpha1DegreeMustBeM) {
  EXPECT_EQ(code_of([] { CodeObject::create(Family::Alpha1, 10, 8, 5, 3, Field(257), 0); }),
            ErrorCode::DegreeOutOfRange);
}

TEST(Chunk, SymbolWidths) {
  EXPECT_EQ(symbol_width(65537), 3);
  EXPECT_EQ(symbol_width(65521), 2);
  EXPECT_EQ(symbol_width(257), 2);
  EXPECT_EQ(symbol_width(251), 1);
  EXPECT_EQ(input_bytes_per_symbol(65537), 2);
  EXPECT_EQ(input_bytes_per_symbol(65521), 1);
  EXPECT_EQ(input_bytes_per_symbol(257), 1);
  EXPECT_EQ(code_of([] { input_bytes_per_symbol(251); }), ErrorCode::FieldTooSmall);
}

TEST(Chunk, HeaderLayoutIsBitExact) {
  Chunk c{{Family::Mbrr, 65521, 12, 8, 4, 3, 1, 2, 0x0102030405060708ull}, {1, 0xFFF0, 7}};
  const auto b = chunk_bytes(c);
  ASSERT_EQ(b.size(), kChunkHeaderSize + 3 * 2 + 4);
  const std::vector<std::uint8_t> head{'R', 'R', 'C', '1', 1, 3, 0x00, 0x00, 0xFF, 0xF1,
                                       0, 12, 0, 8, 0, 4, 0, 3, 0, 2, 0, 3,
                                       1, 2, 3, 4, 5, 6, 7, 8,
                                       0x00, 0x01, 0xFF, 0xF0, 0x00, 0x07};
  EXPECT_TRUE(std::equal(head.begin(), head.end(), b.begin()));
  const Chunk back = parse_chunk(b);
  EXPECT_EQ(back.header, c.header);
  EXPECT_EQ(back.symbols, c.symbols);
}

TEST(Chunk, EveryFlippedByteIsDetected) {
  Chunk c{{Family::Alpha1, 65537, 10, 8, 5, 4, 0, 0, 11}, {65536, 0, 42, 1000}};
  auto b = chunk_bytes(c);
  for (std::size_t i = 0; i < b.size(); ++i) {
    b[i] ^= 0x10;
    EXPECT_EQ(code_of([&] { parse_chunk(b); }), ErrorCode::CorruptChunk) << "byte " << i;
    b[i] ^= 0x10;
  }
  b.pop_back();
  EXPECT_EQ(code_of([&] { parse_chunk(b); }), ErrorCode::CorruptChunk);
}

TEST(Chunk, Names) {
  EXPECT_EQ(chunk_name(4), "node-05.rrc");
  EXPECT_EQ(chunk_name(11), "node-12.rrc");
}

TEST(Codec, KillAnyNodeRepairDecode) {
  const auto input = random_bytes(3001, 4);
  for (Family f : {Family::Alpha1, Family::HybridMsrr, Family::Mbrr}) {
    const CodeObject& code = flagship(f);
    const LinearCode& lc = code.code();
    const auto chunks = encode_bytes(code, input);
    ASSERT_EQ(static_cast<int>(chunks.size()), lc.nodes());
    for (int v = 0; v < lc.nodes(); ++v) {
      const bool generic = f == Family::HybridMsrr && v >= lc.params.k;
      const RepairOutcome out = repair_chunks(code, all_but(chunks, v), v, std::nullopt, generic);
      EXPECT_EQ(chunk_bytes(out.chunk), chunk_bytes(chunks[v])) << to_string(f) << " node " << v;
      EXPECT_EQ(out.generic, generic);
      if (!generic) {
        EXPECT_EQ(out.report.cross_per_stripe, lc.params.d);
      }
      auto repaired = all_but(chunks, -1);
      repaired[v] = out.chunk;
      EXPECT_EQ(decode_chunks(code, repaired), input);
    }
  }
}

TEST(Codec, DecodeFromAnyKChunks) {
  const auto input = random_bytes(999, 5);
  const CodeObject& code = flagship(Family::Mbrr);
  const auto chunks = encode_bytes(code, input);
  std::mt19937_64 rng(3);
  std::vector<int> order(12);
  std::iota(order.begin(), order.end(), 0);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::optional<Chunk>> some(12);
    for (int i = 0; i < 8; ++i) some[order[i]] = chunks[order[i]];
    EXPECT_EQ(decode_chunks(code, some), input);
  }
  std::vector<std::optional<Chunk>> few(12);
  for (int i = 0; i < 7; ++i) few[i] = chunks[i];
  EXPECT_EQ(code_of([&] { decode_chunks(code, few); }), ErrorCode::DecodeFailed);
}

TEST(Codec, BandwidthAccounting) {
  const auto input = random_bytes(4600, 6);
  const CodeObject& code = flagship(Family::Mbrr);
  const auto chunks = encode_bytes(code, input);
  // node 5 is index 4; helpers {1,3,4} are racks 0, 2, 3
  const RepairOutcome out = repair_chunks(code, all_but(chunks, 4), 4, std::vector<int>{0, 2, 3});
  EXPECT_EQ(out.chunk.symbols, chunks[4].symbols);
  EXPECT_EQ(out.report.stripes, 100u);  // 4600 bytes / (23 symbols * 2 bytes)
  EXPECT_EQ(out.report.cross_per_stripe, 3);
  EXPECT_EQ(out.report.intra_per_stripe, 6);
  EXPECT_EQ(out.report.cross_rack_bytes(), 300u * 3);
  EXPECT_EQ(out.report.intra_rack_bytes(), 600u * 3);
  EXPECT_EQ(out.report.per_rack_per_stripe, (std::map<int, int>{{0, 1}, {2, 1}, {3, 1}}));
  EXPECT_EQ(code_of([&] { repair_chunks(code, all_but(chunks, 4), 4, std::vector<int>{1, 2, 3}); }),
            ErrorCode::InvalidHelpers);
}

TEST(Codec, Alpha1RelayerRepairUsesFourRacks) {
  const CodeObject& code = flagship(Family::Alpha1);
  const auto chunks = encode_bytes(code, random_bytes(512, 1));
  // relayer of the second rack
  const RepairOutcome out = repair_chunks(code, all_but(chunks, 2), 2, std::nullopt);
  EXPECT_EQ(out.report.cross_per_stripe, 4);
  EXPECT_EQ(out.helpers, (std::vector<int>{0, 2, 3, 4}));
}

TEST(Codec, HybridTargets) {
  const CodeObject& code = flagship(Family::HybridMsrr);
  const auto chunks = encode_bytes(code, random_bytes(640, 2));
  EXPECT_EQ(code_of([&] { repair_chunks(code, all_but(chunks, 9), 9, std::nullopt); }),
            ErrorCode::UnsupportedRepairTarget);
  EXPECT_EQ(code_of([&] { repair_chunks(code, all_but(chunks, 0), 0, std::vector<int>{0, 1, 2}); }),
            ErrorCode::InvalidHelpers);
  EXPECT_EQ(repair_chunks(code, all_but(chunks, 0), 0, std::vector<int>{3, 1, 2}).chunk.symbols,
            chunks[0].symbols);
  const RepairOutcome out = repair_chunks(code, all_but(chunks, 7), 7, std::nullopt);
  EXPECT_EQ(out.report.cross_per_stripe, 3);
  EXPECT_EQ(out.report.intra_per_stripe, 4);
}

TEST(Codec, InputErrors) {
  const CodeObject& code = flagship(Family::Mbrr);
  EXPECT_EQ(code_of([&] { encode_bytes(code, {}); }), ErrorCode::BadInput);
  auto chunks = encode_bytes(code, random_bytes(100, 3));
  auto damaged = all_but(chunks, 0);
  damaged[5]->header.rack = 0;
  EXPECT_EQ(code_of([&] { repair_chunks(code, damaged, 0, std::nullopt); }), ErrorCode::CorruptChunk);
  auto missing = all_but(chunks, 0);
  missing[6].reset();
  EXPECT_EQ(code_of([&] { repair_chunks(code, missing, 0, std::nullopt); }), ErrorCode::Io);
  EXPECT_EQ(code_of([] { resolve_code(std::nullopt, Family::Mbrr, 12, 8, 4, 3, Field(65537)); }),
            ErrorCode::NeedSearch);
  EXPECT_EQ(resolve_code(std::nullopt, Family::Alpha1, 10, 8, 5, std::nullopt, Field(65537)).family(),
            Family::Alpha1);
}

TEST(Codec, FilesOnDisk) {
  TempDir tmp;
  const auto input = random_bytes(10000, 9);
  const fs::path in = tmp.path / "input.bin";
  std::ofstream(in, std::ios::binary).write(reinterpret_cast<const char*>(input.data()), 10000);
  const fs::path dir = tmp.path / "chunks";
  encode_file(flagship(Family::Mbrr), in, dir);
  EXPECT_TRUE(fs::exists(dir / kCodeFileName));
  const std::uint64_t stripes = (10000 + 45) / 46;
  std::uint64_t stored = 0;
  for (int v = 0; v < 12; ++v) {
    const auto size = fs::file_size(dir / chunk_name(v));
    EXPECT_EQ(size, kChunkHeaderSize + stripes * 3 * 3 + 4);
    stored += size - kChunkHeaderSize - 4;
  }
  EXPECT_EQ(stored, stripes * 36 * 3);

  const auto original = fs::file_size(dir / chunk_name(4));
  std::vector<char> before(original);
  std::ifstream(dir / chunk_name(4), std::ios::binary).read(before.data(), static_cast<std::streamsize>(original));
  fs::remove(dir / chunk_name(4));
  const RepairOutcome out = repair_file(dir, 4, std::vector<int>{0, 2, 3});
  std::vector<char> after(original);
  std::ifstream(dir / chunk_name(4), std::ios::binary).read(after.data(), static_cast<std::streamsize>(original));
  EXPECT_EQ(before, after);
  EXPECT_EQ(out.report.cross_per_stripe, 3);

  // a corrupted chunk is refused for repair but skipped by decode
  {
    std::fstream f(dir / chunk_name(7), std::ios::binary | std::ios::in | std::ios::out);
    f.seekg(40);
    const char was = static_cast<char>(f.get());
    f.seekp(40);
    f.put(static_cast<char>(was ^ 0x55));
  }
  EXPECT_EQ(code_of([&] { repair_file(dir, 0, std::nullopt); }), ErrorCode::CorruptChunk);
  decode_file(dir, tmp.path / "out.bin");
  std::vector<std::uint8_t> back(10000);
  std::ifstream(tmp.path / "out.bin", std::ios::binary).read(reinterpret_cast<char*>(back.data()), 10000);
  EXPECT_EQ(back, input);
  EXPECT_EQ(fs::file_size(tmp.path / "out.bin"), 10000u);
  EXPECT_EQ(code_of([&] { repair_file(tmp.path, 0, std::nullopt); }), ErrorCode::NeedSearch);
}
