/* C interface to the rack-aware regenerating code library.
 *
 * Every call returns an rrc_status; on failure rrc_last_error() holds a
 * message for the calling thread until its next call. Node and rack
 * indices are 0-based. Strings returned through char** are owned by the
 * caller and released with rrc_string_free. */
#ifndef RRC_H
#define RRC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RRC_API __declspec(dllexport)
#else
#define RRC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rrc_status {
  RRC_OK = 0,
  RRC_INVALID_ARGUMENT,
  RRC_NOT_MULTIPLE,
  RRC_DEGREE_OUT_OF_RANGE,
  RRC_THRESHOLD_OUT_OF_RANGE,
  RRC_NON_INVERTIBLE,
  RRC_SINGULAR_MATRIX,
  RRC_INVALID_POINTS,
  RRC_FIELD_TOO_SMALL,
  RRC_NOT_CONSTRUCTIBLE,
  RRC_HOMOGENEOUS_USE_MSR,
  RRC_SEARCH_FAILED,
  RRC_UNSUPPORTED_REGIME,
  RRC_UNSUPPORTED_REPAIR_TARGET,
  RRC_INVALID_HELPERS,
  RRC_INVALID_SCENARIO,
  RRC_BELOW_MINIMUM_BANDWIDTH,
  RRC_BAD_INPUT,
  RRC_DECODE_FAILED,
  RRC_NEED_SEARCH,
  RRC_CORRUPT_CHUNK,
  RRC_IO,
  RRC_INTERNAL /* unexpected C++ exception */
} rrc_status;

typedef enum rrc_family { RRC_ALPHA1 = 1, RRC_HYBRID_MSRR = 2, RRC_MBRR = 3 } rrc_family;

typedef struct rrc_code rrc_code;

typedef struct rrc_code_info {
  rrc_family family;
  int n, k, r, d;
  int alpha;     /* symbols per node per stripe */
  int file_size; /* data symbols per stripe */
  uint32_t modulus;
  uint64_t seed;
  int attempts; /* search draws used, 0 for alpha1 */
} rrc_code_info;

#define RRC_MAX_RACKS 64

typedef struct rrc_bandwidth {
  uint64_t stripes;
  int symbol_bytes;
  int cross_per_stripe;
  int intra_per_stripe;
  uint64_t cross_rack_symbols;
  uint64_t intra_rack_symbols;
  uint64_t cross_rack_bytes;
  uint64_t intra_rack_bytes;
  int helper_count;
  int helpers[RRC_MAX_RACKS];        /* helper racks, 0-based */
  int helper_symbols[RRC_MAX_RACKS]; /* symbols per stripe from each */
  int generic;                       /* 1 when the projection fallback ran */
} rrc_bandwidth;

RRC_API const char* rrc_status_name(rrc_status s);
RRC_API const char* rrc_last_error(void);
RRC_API void rrc_string_free(char* s);

/* family: "alpha1", "hybrid" or "mbrr". d < 0 picks the family default
 * (m for alpha1, r - 1 otherwise). max_attempts <= 0 means 1000. */
RRC_API rrc_status rrc_code_search(const char* family, int n, int k, int r, int d,
                                   uint32_t modulus, uint64_t seed, int max_attempts,
                                   rrc_code** out);
/* Loads code_path when given; otherwise builds alpha1 on the spot and
 * returns RRC_NEED_SEARCH for the searched families. */
RRC_API rrc_status rrc_code_resolve(const char* code_path, const char* family, int n, int k,
                                    int r, int d, uint32_t modulus, rrc_code** out);
RRC_API rrc_status rrc_code_load(const char* path, rrc_code** out);
RRC_API rrc_status rrc_code_save(const rrc_code* code, const char* path);
RRC_API void rrc_code_free(rrc_code* code);
RRC_API rrc_status rrc_code_get_info(const rrc_code* code, rrc_code_info* out);
/* Full family verification; *ok = 1 when every check passes. */
RRC_API rrc_status rrc_code_verify(const rrc_code* code, int* ok);

RRC_API rrc_status rrc_encode_file(const rrc_code* code, const char* input, const char* out_dir);
/* helpers may be NULL / 0 for the default choice. */
RRC_API rrc_status rrc_repair_file(const char* dir, int node, const int* helpers,
                                   size_t helper_count, int allow_generic, rrc_bandwidth* report);
RRC_API rrc_status rrc_decode_file(const char* dir, const char* output);

/* Rationals are passed as text: "3", "3/2" or "0.25". */
RRC_API rrc_status rrc_analyze_tradeoff(int n, int k, int r, int d, const char* file_size,
                                        int steps, char** csv);
RRC_API rrc_status rrc_analyze_mincut(int n, int k, int r, int d, const char* alpha,
                                      const char* beta, size_t budget, uint64_t seed,
                                      int* certified, char** report);
/* Field-size bound of the family at (n, k, r, d) as a decimal string. */
RRC_API rrc_status rrc_analyze_bounds(const char* family, int n, int k, int r, int d,
                                      char** value);

#ifdef __cplusplus
}
#endif

#endif
