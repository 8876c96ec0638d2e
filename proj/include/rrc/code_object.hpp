#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>

#include "rrc/mbrr.hpp"
#include "rrc/msrr.hpp"

namespace rrc {

/// One constructed code of any family, as persisted beside the chunks.
class CodeObject {
 public:
  using Variant = std::variant<Alpha1Code, HybridMsrrCode, MbrrCode>;

  explicit CodeObject(Variant v) : v_(std::move(v)) {}

  /// Alpha1 builds directly (d must equal m); the other two families run
  /// their seeded search.
  static CodeObject create(Family family, int n, int k, int r, std::optional<int> d,
                           const Field& f, std::uint64_t seed, int max_attempts = 1000);

  Family family() const noexcept;
  const LinearCode& code() const noexcept;
  std::uint64_t seed() const noexcept;
  int attempts() const noexcept;  // 0 for alpha1
  const Variant& get() const noexcept { return v_; }

 private:
  Variant v_;
};

/// Text container: params, modulus, seed and every component matrix in
/// row-major integer form, plus a CRC32 over the canonical dump of the rest.
std::string to_json(const CodeObject& c);
/// Throws CorruptChunk on checksum mismatch or malformed content.
CodeObject code_from_json(const std::string& text);

void save_code(const CodeObject& c, const std::filesystem::path& path);
/// Throws Io when the file is missing or unreadable.
CodeObject load_code(const std::filesystem::path& path);

}  // namespace rrc
