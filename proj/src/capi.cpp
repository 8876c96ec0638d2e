#include "rrc/rrc.h"

#include <cstdlib>
#include <cstring>
#include <sstream>

#include "rrc/codec.hpp"
#include "rrc/error.hpp"
#include "rrc/flowgraph.hpp"
#include "rrc/tradeoff.hpp"

struct rrc_code {
  rrc::CodeObject obj;
};

namespace {

using rrc::ErrorCode;

static_assert(static_cast<int>(ErrorCode::InvalidArgument) + 1 == RRC_INVALID_ARGUMENT);
static_assert(static_cast<int>(ErrorCode::SearchFailed) + 1 == RRC_SEARCH_FAILED);
static_assert(static_cast<int>(ErrorCode::Io) + 1 == RRC_IO);

thread_local std::string last_error;

template <class Fn>
rrc_status guarded(Fn&& fn) {
  last_error.clear();
  try {
    fn();
    return RRC_OK;
  } catch (const rrc::Error& e) {
    last_error = e.what();
    return static_cast<rrc_status>(static_cast<int>(e.code()) + 1);
  } catch (const std::exception& e) {
    last_error = e.what();
    return RRC_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) rrc::fail(ErrorCode::InvalidArgument, std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::optional<int> degree(int d) { return d < 0 ? std::nullopt : std::optional<int>(d); }

rrc::CodeParams params_at(int n, int k, int r, int d) {
  rrc::RawParams raw;
  raw.n = n;
  raw.k = k;
  raw.r = r;
  raw.d = degree(d);
  return rrc::validate(raw);
}

}  // namespace

extern "C" {

const char* rrc_status_name(rrc_status s) {
  if (s == RRC_OK) return "OK";
  if (s == RRC_INTERNAL) return "Internal";
  if (s < RRC_OK || s > RRC_IO) return "Unknown";
  return rrc::to_string(static_cast<ErrorCode>(static_cast<int>(s) - 1));
}

const char* rrc_last_error(void) { return last_error.c_str(); }

void rrc_string_free(char* s) { std::free(s); }

rrc_status rrc_code_search(const char* family, int n, int k, int r, int d, uint32_t modulus,
                           uint64_t seed, int max_attempts, rrc_code** out) {
  return guarded([&] {
    need(family, "family");
    need(out, "out");
    *out = nullptr;
    *out = new rrc_code{rrc::CodeObject::create(rrc::parse_family(family), n, k, r, degree(d),
                                                rrc::Field(modulus), seed,
                                                max_attempts > 0 ? max_attempts : 1000)};
  });
}

rrc_status rrc_code_resolve(const char* code_path, const char* family, int n, int k, int r, int d,
                            uint32_t modulus, rrc_code** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    std::optional<std::filesystem::path> path;
    if (code_path) path = code_path;
    const rrc::Family fam = family ? rrc::parse_family(family) : rrc::Family::Alpha1;
    *out = new rrc_code{path ? rrc::load_code(*path)
                             : rrc::resolve_code(std::nullopt, fam, n, k, r, degree(d),
                                                 rrc::Field(modulus))};
  });
}

rrc_status rrc_code_load(const char* path, rrc_code** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    *out = new rrc_code{rrc::load_code(path)};
  });
}

rrc_status rrc_code_save(const rrc_code* code, const char* path) {
  return guarded([&] {
    need(code, "code");
    need(path, "path");
    rrc::save_code(code->obj, path);
  });
}

void rrc_code_free(rrc_code* code) { delete code; }

rrc_status rrc_code_get_info(const rrc_code* code, rrc_code_info* out) {
  return guarded([&] {
    need(code, "code");
    need(out, "out");
    const rrc::LinearCode& c = code->obj.code();
    *out = rrc_code_info{static_cast<rrc_family>(code->obj.family()),
                         c.params.n, c.params.k, c.params.r, c.params.d, c.alpha, c.file_size,
                         c.field.modulus(), code->obj.seed(), code->obj.attempts()};
  });
}

rrc_status rrc_code_verify(const rrc_code* code, int* ok) {
  return guarded([&] {
    need(code, "code");
    need(ok, "ok");
    const auto& v = code->obj.get();
    if (const auto* h = std::get_if<rrc::HybridMsrrCode>(&v)) {
      *ok = rrc::verify_hybrid(*h).all();
    } else if (const auto* m = std::get_if<rrc::MbrrCode>(&v)) {
      *ok = rrc::verify_mbrr(*m).all();
    } else {
      *ok = rrc::verify_fault_tolerance(code->obj.code());
    }
  });
}

rrc_status rrc_encode_file(const rrc_code* code, const char* input, const char* out_dir) {
  return guarded([&] {
    need(code, "code");
    need(input, "input");
    need(out_dir, "out_dir");
    rrc::encode_file(code->obj, input, out_dir);
  });
}

rrc_status rrc_repair_file(const char* dir, int node, const int* helpers, size_t helper_count,
                           int allow_generic, rrc_bandwidth* report) {
  return guarded([&] {
    need(dir, "dir");
    std::optional<std::vector<int>> hs;
    if (helper_count > 0) {
      need(helpers, "helpers");
      hs.emplace(helpers, helpers + helper_count);
    }
    const rrc::RepairOutcome out = rrc::repair_file(dir, node, hs, allow_generic != 0);
    if (!report) return;
    const rrc::BandwidthReport& b = out.report;
    rrc_bandwidth r{};
    r.stripes = b.stripes;
    r.symbol_bytes = b.symbol_bytes;
    r.cross_per_stripe = b.cross_per_stripe;
    r.intra_per_stripe = b.intra_per_stripe;
    r.cross_rack_symbols = b.cross_rack_symbols();
    r.intra_rack_symbols = b.intra_rack_symbols();
    r.cross_rack_bytes = b.cross_rack_bytes();
    r.intra_rack_bytes = b.intra_rack_bytes();
    for (const auto& [rack, sym] : b.per_rack_per_stripe) {
      if (r.helper_count == RRC_MAX_RACKS) break;
      r.helpers[r.helper_count] = rack;
      r.helper_symbols[r.helper_count] = sym;
      ++r.helper_count;
    }
    r.generic = out.generic;
    *report = r;
  });
}

rrc_status rrc_decode_file(const char* dir, const char* output) {
  return guarded([&] {
    need(dir, "dir");
    need(output, "output");
    rrc::decode_file(dir, output);
  });
}

rrc_status rrc_analyze_tradeoff(int n, int k, int r, int d, const char* file_size, int steps,
                                char** csv) {
  return guarded([&] {
    need(csv, "csv");
    const rrc::Rational b = file_size ? rrc::parse_rational(file_size) : rrc::Rational(1);
    std::ostringstream out;
    rrc::write_tradeoff_csv(out, rrc::tradeoff_rows(params_at(n, k, r, d), b, steps > 0 ? steps : 4));
    *csv = dup(out.str());
  });
}

rrc_status rrc_analyze_mincut(int n, int k, int r, int d, const char* alpha, const char* beta,
                              size_t budget, uint64_t seed, int* certified, char** report) {
  return guarded([&] {
    need(alpha, "alpha");
    need(beta, "beta");
    const rrc::CodeParams p = rrc::with_storage(params_at(n, k, r, d), rrc::parse_rational(alpha),
                                                rrc::parse_rational(beta));
    const rrc::CertifyReport rep = rrc::certify_bound(p, budget, seed);
    if (certified) *certified = rep.certified;
    if (report) {
      std::ostringstream out;
      out << (rep.certified ? "certified" : "NOT certified") << ", bound=" << rrc::to_exact(rep.bound)
          << " adversarial=" << rrc::to_exact(rep.adversarial_cut)
          << " min_observed=" << rrc::to_exact(rep.min_observed)
          << " scenarios=" << rep.scenarios_checked
          << (rep.exhaustive ? " (exhaustive)" : " (sampled)");
      *report = dup(out.str());
    }
  });
}

rrc_status rrc_analyze_bounds(const char* family, int n, int k, int r, int d, char** value) {
  return guarded([&] {
    need(family, "family");
    need(value, "value");
    const rrc::Family fam = rrc::parse_family(family);
    rrc::BigInt bound;
    if (fam == rrc::Family::Alpha1) {
      bound = params_at(n, k, r, d).n;  // Cauchy generator: n distinct points
    } else if (fam == rrc::Family::HybridMsrr) {
      bound = rrc::field_bound_hybrid(params_at(n, k, r, d));
    } else {
      bound = rrc::field_bound_mbrr(params_at(n, k, r, d));
    }
    *value = dup(bound.str());
  });
}

}  // extern "C"
