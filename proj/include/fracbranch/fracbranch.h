/* C interface to the fracbranch solver.
 *
 * Every function returns an fb_status; on failure a message is available
 * from fb_last_error() on the calling thread until the next call. Handles
 * are opaque and owned by the caller, who releases them with the matching
 * *_free function. Strings returned through char** are released with
 * fb_string_free.
 */
#ifndef FRACBRANCH_H
#define FRACBRANCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(FRACBRANCH_BUILDING_LIBRARY)
#    define FB_API __declspec(dllexport)
#  else
#    define FB_API __declspec(dllimport)
#  endif
#else
#  define FB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fb_status {
  FB_OK = 0,
  FB_ERR_INTERNAL = 1,
  FB_ERR_CONFIG = 2,   /* invalid configuration */
  FB_ERR_LIMIT = 3,    /* runtime limit exhausted (walk step cap) */
  FB_ERR_DOMAIN = 4,   /* argument outside a function's domain */
  FB_ERR_IO = 5,
  FB_ERR_INVALID_ARGUMENT = 6
} fb_status;

typedef struct fb_config fb_config;
typedef struct fb_profile fb_profile;

typedef struct fb_profile_row {
  double radius;
  double estimate;
  double std_error;
  uint64_t n;
  double truncation_fraction;
  int has_exact; /* exact and abs_error are valid iff non-zero */
  double exact;
  double abs_error;
} fb_profile_row;

FB_API const char* fb_version(void);
FB_API const char* fb_last_error(void);
FB_API void fb_string_free(char* s);

/* Configuration */
FB_API fb_status fb_config_load_file(const char* path, fb_config** out);
FB_API fb_status fb_config_load_string(const char* json, fb_config** out);
FB_API void fb_config_free(fb_config* config);
FB_API fb_status fb_config_set_samples(fb_config* config, uint64_t samples);
FB_API fb_status fb_config_set_seed(fb_config* config, uint64_t seed);
FB_API fb_status fb_config_set_workers(fb_config* config, unsigned workers);
FB_API fb_status fb_config_set_output(fb_config* config, const char* path);
/* Output path of the config; empty string when unset. Borrowed pointer. */
FB_API const char* fb_config_output(const fb_config* config);

/* Radial profile. fb_solve runs the experiment and, when the config has an
 * output path, writes the CSV there (no partial file on failure). */
FB_API fb_status fb_solve(const fb_config* config, fb_profile** out);
FB_API void fb_profile_free(fb_profile* profile);
FB_API size_t fb_profile_size(const fb_profile* profile);
FB_API fb_status fb_profile_get_row(const fb_profile* profile, size_t index, fb_profile_row* out);
FB_API fb_status fb_profile_csv(const fb_profile* profile, char** out);
FB_API fb_status fb_profile_write_csv(const fb_profile* profile, const char* path);
FB_API fb_status fb_profile_summary(const fb_profile* profile, char** out);

/* Existence check; writes the report as a JSON object. */
FB_API fb_status fb_check(const fb_config* config, char** json_out);

/* Built-in property checks. *passed is 1 when all checks pass. */
FB_API fb_status fb_selftest(char** report_out, int* passed);

/* Numeric primitives */
FB_API fb_status fb_gamma(double x, double* out);
FB_API fb_status fb_hyp2f1(double a, double b, double c, double z, double* out);
FB_API fb_status fb_phi_exact(const double* x, size_t d, int k, double s, double* out);
FB_API fb_status fb_psi_source(const double* x, size_t d, int k, double s, double* out);
/* s* and gamma(s*) for the law P(degree = degrees[i]) = probs[i]. */
FB_API fb_status fb_gamma_star(const int* degrees, const double* probs, size_t count, double* s_star,
                               double* gamma);

#ifdef __cplusplus
}
#endif

#endif /* FRACBRANCH_H */
