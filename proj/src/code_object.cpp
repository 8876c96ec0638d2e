#include "rrc/code_object.hpp"

#include <zlib.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rrc/error.hpp"

namespace rrc {
namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json matrix_json(const FieldMatrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.entries()}};
}

json matrices_json(const std::vector<FieldMatrix>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(matrix_json(m));
  return out;
}

FieldMatrix matrix_from(const Field& f, const json& j) {
  return FieldMatrix(f, j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                     j.at("data").get<std::vector<Elem>>());
}

std::vector<FieldMatrix> matrices_from(const Field& f, const json& j) {
  std::vector<FieldMatrix> out;
  for (const auto& m : j) out.push_back(matrix_from(f, m));
  return out;
}

std::uint32_t crc_of(const std::string& s) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size())));
}

json components_json(const HybridComponents& h) {
  return json{{"v", matrix_json(h.v)},         {"y", matrix_json(h.y)},
              {"u", matrix_json(h.u)},         {"lambda", matrix_json(h.lambda)},
              {"E", matrices_json(h.E)},       {"F", matrix_json(h.F)},
              {"L1", matrix_json(h.L1)},       {"a", matrix_json(h.a)},
              {"kappa", matrix_json(h.kappa)}, {"delta", matrices_json(h.delta)},
              {"c", matrix_json(h.c)},         {"mu", matrix_json(h.mu)},
              {"omega", matrix_json(h.omega)}, {"G", matrices_json(h.G)},
              {"mix", matrices_json(h.mix)}};
}

HybridComponents components_from(const Field& f, const json& j) {
  HybridComponents h{matrix_from(f, j.at("v")),       matrix_from(f, j.at("y")),
                     matrix_from(f, j.at("u")),       matrix_from(f, j.at("lambda")),
                     matrices_from(f, j.at("E")),     matrix_from(f, j.at("F")),
                     matrix_from(f, j.at("L1")),      matrix_from(f, j.at("a")),
                     matrix_from(f, j.at("kappa")),   matrices_from(f, j.at("delta")),
                     matrix_from(f, j.at("c")),       matrix_from(f, j.at("mu")),
                     matrix_from(f, j.at("omega")),   matrices_from(f, j.at("G")),
                     matrices_from(f, j.at("mix"))};
  return h;
}

CodeParams hybrid_params(int n, int k, int r, int d) {
  RawParams raw;
  raw.n = n;
  raw.k = k;
  raw.r = r;
  raw.d = d;
  return validate(raw);
}

}  // namespace

CodeObject CodeObject::create(Family family, int n, int k, int r, std::optional<int> d,
                              const Field& f, std::uint64_t seed, int max_attempts) {
  switch (family) {
    case Family::Alpha1: {
      Alpha1Code c = build_alpha1(n, k, r, f);
      if (d && *d != c.code.params.d) {
        fail(ErrorCode::DegreeOutOfRange, "the alpha = 1 construction uses d = m = " +
                                              std::to_string(c.code.params.d));
      }
      return CodeObject(std::move(c));
    }
    case Family::HybridMsrr:
      return CodeObject(search_hybrid(n, k, r, d.value_or(r - 1), f, seed, max_attempts));
    case Family::Mbrr:
      return CodeObject(search_mbrr(n, k, r, d.value_or(r - 1), f, seed, max_attempts));
  }
  fail(ErrorCode::InvalidArgument, "unknown family");
}

Family CodeObject::family() const noexcept {
  return static_cast<Family>(v_.index() + 1);
}

const LinearCode& CodeObject::code() const noexcept {
  return std::visit([](const auto& c) -> const LinearCode& { return c.code; }, v_);
}

std::uint64_t CodeObject::seed() const noexcept {
  if (const auto* h = std::get_if<HybridMsrrCode>(&v_)) return h->seed;
  if (const auto* m = std::get_if<MbrrCode>(&v_)) return m->seed;
  return 0;
}

int CodeObject::attempts() const noexcept {
  if (const auto* h = std::get_if<HybridMsrrCode>(&v_)) return h->attempts;
  if (const auto* m = std::get_if<MbrrCode>(&v_)) return m->attempts;
  return 0;
}

std::string to_json(const CodeObject& c) {
  const LinearCode& lc = c.code();
  json body{{"format", "rrc-code"},
            {"version", kFormatVersion},
            {"family", to_string(c.family())},
            {"modulus", lc.field.modulus()},
            {"n", lc.params.n},
            {"k", lc.params.k},
            {"r", lc.params.r},
            {"d", lc.params.d},
            {"alpha", lc.alpha},
            {"file_size", lc.file_size},
            {"seed", c.seed()},
            {"attempts", c.attempts()}};
  if (const auto* h = std::get_if<HybridMsrrCode>(&c.get())) {
    body["components"] = components_json(h->parts);
  } else if (const auto* m = std::get_if<MbrrCode>(&c.get())) {
    body["components"] = json{{"Q", matrix_json(m->Q)}, {"Phi", matrix_json(m->Phi)},
                              {"P", matrix_json(m->P)}};
  }
  body["checksum"] = crc_of(body.dump());
  return body.dump(1) + "\n";
}

CodeObject code_from_json(const std::string& text) {
  json body;
  try {
    body = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::CorruptChunk, std::string("code object is not valid JSON: ") + e.what());
  }
  try {
    if (body.value("format", "") != "rrc-code" || body.value("version", 0) != kFormatVersion) {
      fail(ErrorCode::CorruptChunk, "not an rrc code object (format/version)");
    }
    const auto stored = body.at("checksum").get<std::uint32_t>();
    body.erase("checksum");
    if (crc_of(body.dump()) != stored) fail(ErrorCode::CorruptChunk, "code object checksum mismatch");

    const Field f(body.at("modulus").get<std::uint32_t>());
    const int n = body.at("n"), k = body.at("k"), r = body.at("r"), d = body.at("d");
    const Family family = parse_family(body.at("family").get<std::string>());
    std::optional<CodeObject> out;
    switch (family) {
      case Family::Alpha1:
        out.emplace(build_alpha1(n, k, r, f));
        break;
      case Family::HybridMsrr: {
        HybridComponents parts = components_from(f, body.at("components"));
        LinearCode lc = assemble_hybrid(hybrid_params(n, k, r, d), f, parts);
        out.emplace(HybridMsrrCode{std::move(lc), std::move(parts), body.at("seed"),
                                   body.at("attempts")});
        break;
      }
      case Family::Mbrr: {
        const json& comp = body.at("components");
        MbrrCode m{LinearCode{f, make_params(n, k, r, d), d, 0, FieldMatrix(f, 0, 0)},
                   matrix_from(f, comp.at("Q")), matrix_from(f, comp.at("Phi")),
                   matrix_from(f, comp.at("P")), body.at("seed"), body.at("attempts")};
        m.code = assemble_mbrr(m.code.params, f, m.Q, m.Phi, m.P);
        out.emplace(std::move(m));
        break;
      }
    }
    const LinearCode& lc = out->code();
    if (lc.params.d != d || lc.alpha != body.at("alpha").get<int>() ||
        lc.file_size != body.at("file_size").get<int>()) {
      fail(ErrorCode::CorruptChunk, "code object dimensions disagree with its parameters");
    }
    return std::move(*out);
  } catch (const json::exception& e) {
    fail(ErrorCode::CorruptChunk, std::string("malformed code object: ") + e.what());
  }
}

void save_code(const CodeObject& c, const std::filesystem::path& path) {
  const auto tmp = std::filesystem::path(path).concat(".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::Io, "cannot write " + tmp.string());
    out << to_json(c);
    if (!out.flush()) fail(ErrorCode::Io, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorCode::Io, "cannot move " + tmp.string() + " to " + path.string());
}

CodeObject load_code(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot read code object " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return code_from_json(buf.str());
}

}  // namespace rrc
