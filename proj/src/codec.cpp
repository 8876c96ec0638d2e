#include "rrc/codec.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <memory>

#include "rrc/error.hpp"

namespace rrc {
namespace {

namespace fs = std::filesystem;

void put_be(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = bytes - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_be(std::span<const std::uint8_t> in, std::size_t at, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v = (v << 8) | in[at + static_cast<std::size_t>(i)];
  return v;
}

std::uint32_t crc_bytes(std::span<const std::uint8_t> b) {
  return static_cast<std::uint32_t>(crc32(0L, b.data(), static_cast<uInt>(b.size())));
}

std::vector<std::uint8_t> read_all(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot read " + p.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_atomic(const fs::path& p, std::span<const std::uint8_t> bytes) {
  const auto tmp = fs::path(p).concat(".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out.flush()) fail(ErrorCode::Io, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, p, ec);
  if (ec) fail(ErrorCode::Io, "cannot move " + tmp.string() + " into place");
}

std::uint64_t stripe_count(const LinearCode& c, std::uint64_t file_length) {
  const std::uint64_t per = static_cast<std::uint64_t>(c.file_size) *
                            static_cast<std::uint64_t>(input_bytes_per_symbol(c.field.modulus()));
  return (file_length + per - 1) / per;
}

ChunkHeader header_for(const LinearCode& c, Family family, int node, std::uint64_t length) {
  const int per = c.params.nodes_per_rack();
  return ChunkHeader{family, c.field.modulus(), c.params.n, c.params.k, c.params.r, c.params.d,
                     node / per, node % per, length};
}

// present chunks agree with the code and each other; returns the file length
std::uint64_t check_chunks(const CodeObject& code, const std::vector<std::optional<Chunk>>& chunks) {
  const LinearCode& c = code.code();
  if (static_cast<int>(chunks.size()) != c.nodes()) {
    fail(ErrorCode::BadInput, "expected " + std::to_string(c.nodes()) + " chunk slots");
  }
  std::optional<std::uint64_t> length;
  for (int v = 0; v < c.nodes(); ++v) {
    if (!chunks[v]) continue;
    const ChunkHeader& h = chunks[v]->header;
    if (!length) length = h.file_length;
    if (h != header_for(c, code.family(), v, *length)) {
      fail(ErrorCode::CorruptChunk, "chunk for node " + std::to_string(v + 1) +
                                        " does not belong to this code or file");
    }
    const std::uint64_t want = stripe_count(c, *length) * static_cast<std::uint64_t>(c.alpha);
    if (chunks[v]->symbols.size() != want) {
      fail(ErrorCode::CorruptChunk, "chunk for node " + std::to_string(v + 1) + " has " +
                                        std::to_string(chunks[v]->symbols.size()) +
                                        " symbols, expected " + std::to_string(want));
    }
  }
  if (!length) fail(ErrorCode::BadInput, "no chunks present");
  return *length;
}

NodeData slice(const Chunk& ch, std::uint64_t stripe, int alpha) {
  const auto at = ch.symbols.begin() + static_cast<std::ptrdiff_t>(stripe * static_cast<std::uint64_t>(alpha));
  return NodeData(at, at + alpha);
}

std::vector<int> lowest_racks(const CodeParams& p, int host) {
  std::vector<int> out;
  for (int h = 0; h < p.r && static_cast<int>(out.size()) < p.d; ++h)
    if (h != host) out.push_back(h);
  return out;
}

}  // namespace

int symbol_width(std::uint32_t modulus) {
  const std::uint32_t top = modulus - 1;
  if (top < (1u << 8)) return 1;
  if (top < (1u << 16)) return 2;
  if (top < (1u << 24)) return 3;
  return 4;
}

int input_bytes_per_symbol(std::uint32_t modulus) {
  if (modulus > 65536) return 2;
  if (modulus > 256) return 1;
  fail(ErrorCode::FieldTooSmall, "file coding needs a field with more than 256 elements, got " +
                                     std::to_string(modulus));
}

std::vector<std::uint8_t> chunk_bytes(const Chunk& c) {
  const ChunkHeader& h = c.header;
  const int w = symbol_width(h.modulus);
  std::vector<std::uint8_t> out{'R', 'R', 'C', '1', kChunkVersion, static_cast<std::uint8_t>(h.family)};
  out.reserve(kChunkHeaderSize + c.symbols.size() * static_cast<std::size_t>(w) + 4);
  put_be(out, h.modulus, 4);
  for (int v : {h.n, h.k, h.r, h.d, h.rack + 1, h.slot + 1}) put_be(out, static_cast<std::uint64_t>(v), 2);
  put_be(out, h.file_length, 8);
  for (Elem e : c.symbols) put_be(out, e, w);
  put_be(out, crc_bytes(out), 4);
  return out;
}

Chunk parse_chunk(std::span<const std::uint8_t> b) {
  if (b.size() < kChunkHeaderSize + 4) fail(ErrorCode::CorruptChunk, "chunk shorter than its header");
  if (!std::equal(b.begin(), b.begin() + 4, "RRC1")) fail(ErrorCode::CorruptChunk, "bad magic");
  if (b[4] != kChunkVersion) fail(ErrorCode::CorruptChunk, "unsupported chunk version " + std::to_string(b[4]));
  const std::size_t body = b.size() - 4;
  if (crc_bytes(b.first(body)) != get_be(b, body, 4)) fail(ErrorCode::CorruptChunk, "checksum mismatch");
  if (b[5] < 1 || b[5] > 3) fail(ErrorCode::CorruptChunk, "unknown family byte");
  Chunk c;
  ChunkHeader& h = c.header;
  h.family = static_cast<Family>(b[5]);
  h.modulus = static_cast<std::uint32_t>(get_be(b, 6, 4));
  if (h.modulus < 2) fail(ErrorCode::CorruptChunk, "bad field modulus");
  int* fields[] = {&h.n, &h.k, &h.r, &h.d, &h.rack, &h.slot};
  for (int i = 0; i < 6; ++i) *fields[i] = static_cast<int>(get_be(b, 10 + 2 * static_cast<std::size_t>(i), 2));
  --h.rack;
  --h.slot;
  h.file_length = get_be(b, 22, 8);
  const auto w = static_cast<std::size_t>(symbol_width(h.modulus));
  if ((body - kChunkHeaderSize) % w != 0) fail(ErrorCode::CorruptChunk, "payload not a whole number of symbols");
  c.symbols.reserve((body - kChunkHeaderSize) / w);
  for (std::size_t at = kChunkHeaderSize; at < body; at += w) {
    const auto v = static_cast<Elem>(get_be(b, at, static_cast<int>(w)));
    if (v >= h.modulus) fail(ErrorCode::CorruptChunk, "symbol outside the field");
    c.symbols.push_back(v);
  }
  return c;
}

std::string chunk_name(int node) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "node-%02d.rrc", node + 1);
  return buf;
}

void write_chunk(const fs::path& path, const Chunk& c) { write_atomic(path, chunk_bytes(c)); }

Chunk read_chunk(const fs::path& path) {
  try {
    return parse_chunk(read_all(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::CorruptChunk) fail(ErrorCode::CorruptChunk, path.filename().string() + ": " + e.what());
    throw;
  }
}

std::vector<Chunk> encode_bytes(const CodeObject& code, std::span<const std::uint8_t> input) {
  const LinearCode& c = code.code();
  if (input.empty()) fail(ErrorCode::BadInput, "input file is empty");
  const int bps = input_bytes_per_symbol(c.field.modulus());
  const std::uint64_t stripes = stripe_count(c, input.size());
  std::vector<Chunk> out(static_cast<std::size_t>(c.nodes()));
  for (int v = 0; v < c.nodes(); ++v) {
    out[v].header = header_for(c, code.family(), v, input.size());
    out[v].symbols.reserve(stripes * static_cast<std::uint64_t>(c.alpha));
  }
  std::vector<Elem> data(static_cast<std::size_t>(c.file_size));
  std::size_t at = 0;
  for (std::uint64_t s = 0; s < stripes; ++s) {
    for (auto& e : data) {
      e = 0;
      for (int i = 0; i < bps; ++i, ++at) e = (e << 8) | (at < input.size() ? input[at] : 0);
    }
    const Stripe st = c.encode(data);
    for (int v = 0; v < c.nodes(); ++v) out[v].symbols.insert(out[v].symbols.end(), st[v].begin(), st[v].end());
  }
  return out;
}

RepairOutcome repair_chunks(const CodeObject& code, const std::vector<std::optional<Chunk>>& chunks,
                            int failed, const std::optional<std::vector<int>>& helpers,
                            bool allow_generic) {
  const LinearCode& c = code.code();
  const CodeParams& p = c.params;
  if (failed < 0 || failed >= c.nodes()) {
    fail(ErrorCode::InvalidArgument, "node " + std::to_string(failed + 1) + " out of range");
  }
  const std::uint64_t length = check_chunks(code, chunks);
  for (int v = 0; v < c.nodes(); ++v) {
    if (v != failed && !chunks[v]) {
      fail(ErrorCode::Io, "surviving chunk for node " + std::to_string(v + 1) + " is missing");
    }
  }
  const int per = p.nodes_per_rack();
  const NodeRef ref{failed / per, failed % per};

  // one repair routine per family, applied to every stripe
  std::function<RepairTrace(const Stripe&)> run;
  RepairOutcome out;
  if (const auto* a1 = std::get_if<Alpha1Code>(&code.get())) {
    out.helpers = helpers.value_or(lowest_racks(p, ref.rack));
    run = [a1, ref, &out](const Stripe& s) { return repair_alpha1(*a1, s, ref, out.helpers); };
  } else if (const auto* mb = std::get_if<MbrrCode>(&code.get())) {
    out.helpers = helpers.value_or(lowest_racks(p, ref.rack));
    run = [mb, ref, &out](const Stripe& s) { return mbrr_repair(*mb, s, ref, out.helpers); };
  } else {
    const auto& hy = std::get<HybridMsrrCode>(code.get());
    std::optional<std::vector<int>> fixed;
    try {
      fixed = hybrid_helpers(hy, ref);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnsupportedRepairTarget || !allow_generic) throw;
    }
    if (fixed) {
      if (helpers) {
        auto want = *fixed, got = *helpers;
        std::sort(want.begin(), want.end());
        std::sort(got.begin(), got.end());
        if (want != got) fail(ErrorCode::InvalidHelpers, "hybrid data-node repair uses its fixed helper racks");
      }
      out.helpers = *fixed;
      run = [&hy, ref](const Stripe& s) { return repair_hybrid_data_node(hy, s, ref); };
    } else {
      auto plan = std::make_shared<ProjectionPlan>(plan_projection(c, ref));
      out.helpers = plan->counts.helpers;
      out.generic = true;
      run = [plan](const Stripe& s) { return apply_projection(*plan, s); };
    }
  }

  const std::uint64_t stripes = stripe_count(c, length);
  out.chunk.header = header_for(c, code.family(), failed, length);
  out.chunk.symbols.reserve(stripes * static_cast<std::uint64_t>(c.alpha));
  out.report.stripes = stripes;
  out.report.symbol_bytes = symbol_width(c.field.modulus());
  Stripe st(static_cast<std::size_t>(c.nodes()), NodeData(static_cast<std::size_t>(c.alpha), 0));
  for (std::uint64_t s = 0; s < stripes; ++s) {
    for (int v = 0; v < c.nodes(); ++v)
      if (v != failed) st[v] = slice(*chunks[v], s, c.alpha);
    const RepairTrace t = run(st);
    if (s == 0) {
      out.report.cross_per_stripe = t.cross_rack_symbols;
      out.report.intra_per_stripe = t.intra_rack_symbols;
      out.report.per_rack_per_stripe = t.per_helper;
    } else if (t.cross_rack_symbols != out.report.cross_per_stripe ||
               t.intra_rack_symbols != out.report.intra_per_stripe) {
      fail(ErrorCode::DecodeFailed, "repair traffic varied between stripes");
    }
    out.chunk.symbols.insert(out.chunk.symbols.end(), t.recovered.begin(), t.recovered.end());
  }
  return out;
}

std::vector<std::uint8_t> decode_chunks(const CodeObject& code,
                                        const std::vector<std::optional<Chunk>>& chunks) {
  const LinearCode& c = code.code();
  const std::uint64_t length = check_chunks(code, chunks);
  std::vector<int> present;
  for (int v = 0; v < c.nodes(); ++v)
    if (chunks[v]) present.push_back(v);
  if (static_cast<int>(present.size()) < c.params.k) {
    fail(ErrorCode::DecodeFailed, "only " + std::to_string(present.size()) + " chunks, need k = " +
                                      std::to_string(c.params.k));
  }
  const DecodePlan plan = plan_decode(c, present);
  const int bps = input_bytes_per_symbol(c.field.modulus());
  const std::uint64_t stripes = stripe_count(c, length);
  std::vector<std::uint8_t> out;
  out.reserve(stripes * static_cast<std::uint64_t>(c.file_size * bps));
  std::vector<NodeData> contents(present.size());
  for (std::uint64_t s = 0; s < stripes; ++s) {
    for (std::size_t i = 0; i < present.size(); ++i) contents[i] = slice(*chunks[present[i]], s, c.alpha);
    for (Elem e : apply_decode(c, plan, contents)) {
      if (bps == 2 && e > 0xFFFF) fail(ErrorCode::DecodeFailed, "decoded symbol does not map back to bytes");
      if (bps == 1 && e > 0xFF) fail(ErrorCode::DecodeFailed, "decoded symbol does not map back to bytes");
      for (int i = bps - 1; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(e >> (8 * i)));
    }
  }
  out.resize(length);
  return out;
}

void encode_file(const CodeObject& code, const fs::path& input, const fs::path& dir) {
  const auto bytes = read_all(input);
  const auto chunks = encode_bytes(code, bytes);
  fs::create_directories(dir);
  save_code(code, dir / kCodeFileName);
  for (std::size_t v = 0; v < chunks.size(); ++v) write_chunk(dir / chunk_name(static_cast<int>(v)), chunks[v]);
}

namespace {

// Corrupt chunks are fatal for repair; decode treats them as erased.
std::vector<std::optional<Chunk>> read_dir(const fs::path& dir, int nodes, int skip,
                                           bool corrupt_is_missing) {
  std::vector<std::optional<Chunk>> out(static_cast<std::size_t>(nodes));
  for (int v = 0; v < nodes; ++v) {
    const fs::path p = dir / chunk_name(v);
    if (v == skip || !fs::exists(p)) continue;
    try {
      out[v] = read_chunk(p);
    } catch (const Error& e) {
      if (!corrupt_is_missing || e.code() != ErrorCode::CorruptChunk) throw;
    }
  }
  return out;
}

CodeObject code_in(const fs::path& dir) {
  const fs::path p = dir / kCodeFileName;
  if (!fs::exists(p)) fail(ErrorCode::NeedSearch, "no " + std::string(kCodeFileName) + " in " + dir.string());
  return load_code(p);
}

}  // namespace

RepairOutcome repair_file(const fs::path& dir, int failed, const std::optional<std::vector<int>>& helpers,
                          bool allow_generic) {
  const CodeObject code = code_in(dir);
  const auto chunks = read_dir(dir, code.code().nodes(), failed, false);
  RepairOutcome out = repair_chunks(code, chunks, failed, helpers, allow_generic);
  write_chunk(dir / chunk_name(failed), out.chunk);
  return out;
}

void decode_file(const fs::path& dir, const fs::path& output) {
  const CodeObject code = code_in(dir);
  const auto bytes = decode_chunks(code, read_dir(dir, code.code().nodes(), -1, true));
  write_atomic(output, bytes);
}

CodeObject resolve_code(const std::optional<fs::path>& code_file, Family family, int n, int k, int r,
                        std::optional<int> d, const Field& f) {
  if (code_file) return load_code(*code_file);
  if (family != Family::Alpha1) {
    fail(ErrorCode::NeedSearch, std::string(to_string(family)) +
                                    " codes come from a search; run `search` and pass --code");
  }
  return CodeObject::create(family, n, k, r, d, f, 0);
}

}  // namespace rrc
