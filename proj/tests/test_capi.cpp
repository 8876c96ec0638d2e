#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "rrc/rrc.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("rrc-capi-" + std::to_string(std::random_device{}()) + "-" +
            std::to_string(::testing::UnitTest::GetInstance()->random_seed()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

std::vector<char> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spill(const fs::path& p, const std::vector<char>& bytes) {
  std::ofstream(p, std::ios::binary).write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::vector<char> random_bytes(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<char> v(n);
  for (auto& c : v) c = static_cast<char>(rng());
  return v;
}

}  // namespace

TEST(CApi, StatusNamesAndLastError) {
  EXPECT_STREQ(rrc_status_name(RRC_OK), "OK");
  EXPECT_STREQ(rrc_status_name(RRC_NEED_SEARCH), "NeedSearch");
  EXPECT_STREQ(rrc_status_name(RRC_IO), "Io");
  EXPECT_STREQ(rrc_status_name(RRC_INTERNAL), "Internal");
  EXPECT_STREQ(rrc_status_name(static_cast<rrc_status>(999)), "Unknown");

  rrc_code* code = nullptr;
  EXPECT_EQ(rrc_code_search("alpha1", 10, 8, 7, -1, 11, 1, 0, &code), RRC_NOT_MULTIPLE);
  EXPECT_EQ(code, nullptr);
  EXPECT_NE(std::strstr(rrc_last_error(), "multiple"), nullptr);
  EXPECT_EQ(rrc_code_search("nope", 10, 8, 5, -1, 11, 1, 0, &code), RRC_INVALID_ARGUMENT);
  EXPECT_EQ(rrc_code_search("alpha1", 10, 8, 5, -1, 12, 1, 0, &code), RRC_INVALID_ARGUMENT);
  EXPECT_EQ(rrc_code_search("alpha1", 10, 8, 5, -1, 11, 1, 0, nullptr), RRC_INVALID_ARGUMENT);
  // success clears the message
  ASSERT_EQ(rrc_code_search("alpha1", 10, 8, 5, -1, 11, 1, 0, &code), RRC_OK);
  EXPECT_STREQ(rrc_last_error(), "");
  rrc_code_free(code);
  rrc_code_free(nullptr);
}

TEST(CApi, InfoVerifyAndPersistence) {
  TempDir tmp;
  rrc_code* code = nullptr;
  ASSERT_EQ(rrc_code_search("mbrr", 12, 8, 4, -1, 11, 1, 0, &code), RRC_OK) << rrc_last_error();
  rrc_code_info info{};
  ASSERT_EQ(rrc_code_get_info(code, &info), RRC_OK);
  EXPECT_EQ(info.family, RRC_MBRR);
  EXPECT_EQ(info.d, 3);
  EXPECT_EQ(info.alpha, 3);
  EXPECT_EQ(info.file_size, 23);
  EXPECT_EQ(info.modulus, 11u);
  int ok = 0;
  ASSERT_EQ(rrc_code_verify(code, &ok), RRC_OK);
  EXPECT_EQ(ok, 1);

  const std::string path = (tmp.path / "code.json").string();
  ASSERT_EQ(rrc_code_save(code, path.c_str()), RRC_OK);
  rrc_code* back = nullptr;
  ASSERT_EQ(rrc_code_load(path.c_str(), &back), RRC_OK);
  rrc_code_info again{};
  ASSERT_EQ(rrc_code_get_info(back, &again), RRC_OK);
  EXPECT_EQ(again.seed, info.seed);
  EXPECT_EQ(again.attempts, info.attempts);
  rrc_code_free(back);
  rrc_code_free(code);

  EXPECT_EQ(rrc_code_load((tmp.path / "missing.json").string().c_str(), &back), RRC_IO);
  auto text = slurp(path);
  text[text.size() / 2] ^= 1;
  spill(path, text);
  EXPECT_EQ(rrc_code_load(path.c_str(), &back), RRC_CORRUPT_CHUNK);
}

TEST(CApi, ResolveNeedsSearchForSearchedFamilies) {
  rrc_code* code = nullptr;
  EXPECT_EQ(rrc_code_resolve(nullptr, "mbrr", 12, 8, 4, -1, 65537, &code), RRC_NEED_SEARCH);
  EXPECT_EQ(rrc_code_resolve(nullptr, "hybrid", 12, 8, 4, -1, 65537, &code), RRC_NEED_SEARCH);
  ASSERT_EQ(rrc_code_resolve(nullptr, "alpha1", 10, 8, 5, -1, 65537, &code), RRC_OK);
  rrc_code_info info{};
  rrc_code_get_info(code, &info);
  EXPECT_EQ(info.d, 4);
  rrc_code_free(code);
}

TEST(CApi, FileRoundTripWithBandwidth) {
  TempDir tmp;
  rrc_code* code = nullptr;
  ASSERT_EQ(rrc_code_search("mbrr", 12, 8, 4, 3, 65537, 1, 0, &code), RRC_OK) << rrc_last_error();
  const auto input = random_bytes(10007, 5);
  spill(tmp.path / "in.bin", input);
  const fs::path dir = tmp.path / "chunks";
  ASSERT_EQ(rrc_encode_file(code, (tmp.path / "in.bin").string().c_str(), dir.string().c_str()),
            RRC_OK)
      << rrc_last_error();
  rrc_code_free(code);

  const fs::path victim = dir / "node-05.rrc";
  const auto original = slurp(victim);
  fs::remove(victim);
  const int helpers[] = {0, 2, 3};
  rrc_bandwidth bw{};
  ASSERT_EQ(rrc_repair_file(dir.string().c_str(), 4, helpers, 3, 0, &bw), RRC_OK) << rrc_last_error();
  EXPECT_EQ(slurp(victim), original);
  // 10007 bytes -> 5004 symbols -> 218 stripes of 23
  EXPECT_EQ(bw.stripes, 218u);
  EXPECT_EQ(bw.symbol_bytes, 3);
  EXPECT_EQ(bw.cross_per_stripe, 3);
  EXPECT_EQ(bw.intra_per_stripe, 6);
  EXPECT_EQ(bw.cross_rack_symbols, 218u * 3);
  EXPECT_EQ(bw.cross_rack_bytes, 218u * 3 * 3);
  EXPECT_EQ(bw.intra_rack_bytes, 218u * 6 * 3);
  ASSERT_EQ(bw.helper_count, 3);
  EXPECT_EQ(bw.helpers[0], 0);
  EXPECT_EQ(bw.helpers[1], 2);
  EXPECT_EQ(bw.helpers[2], 3);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(bw.helper_symbols[i], 1);
  EXPECT_EQ(bw.generic, 0);

  const int host[] = {1, 2, 3};
  EXPECT_EQ(rrc_repair_file(dir.string().c_str(), 4, host, 3, 0, &bw), RRC_INVALID_HELPERS);

  const fs::path out = tmp.path / "out.bin";
  ASSERT_EQ(rrc_decode_file(dir.string().c_str(), out.string().c_str()), RRC_OK);
  EXPECT_EQ(slurp(out), input);

  EXPECT_EQ(rrc_encode_file(nullptr, "x", "y"), RRC_INVALID_ARGUMENT);
}

TEST(CApi, Analysis) {
  char* s = nullptr;
  ASSERT_EQ(rrc_analyze_tradeoff(12, 8, 4, 3, "1", 4, &s), RRC_OK);
  const std::string csv = s;
  rrc_string_free(s);
  EXPECT_NE(csv.find("rrc,12,8,4,3,1,1/8,3/16,"), std::string::npos);
  EXPECT_NE(csv.find("rc,12,8,4,3,1,11/60,3/20,"), std::string::npos);

  int certified = 0;
  ASSERT_EQ(rrc_analyze_mincut(9, 5, 3, 2, "1", "1", 100000, 1, &certified, &s), RRC_OK);
  EXPECT_EQ(certified, 1);
  EXPECT_EQ(std::string(s).rfind("certified, bound=5", 0), 0u);
  rrc_string_free(s);

  ASSERT_EQ(rrc_analyze_bounds("mbrr", 12, 8, 4, 3, &s), RRC_OK);
  EXPECT_STREQ(s, "11362");
  rrc_string_free(s);
  ASSERT_EQ(rrc_analyze_bounds("hybrid", 12, 8, 4, 3, &s), RRC_OK);
  EXPECT_STREQ(s, "2656");
  rrc_string_free(s);
  EXPECT_EQ(rrc_analyze_bounds("hybrid", 12, 6, 4, 3, &s), RRC_NOT_CONSTRUCTIBLE);
  EXPECT_EQ(rrc_analyze_mincut(9, 5, 3, 2, "0", "1", 10, 1, nullptr, nullptr),
            RRC_INVALID_ARGUMENT);
}
