#ifndef VALNET_H
#define VALNET_H

#include <stdbool.h>
#include <stddef.h>

typedef enum VnAlgebra {
  VN_ALGEBRA_PROBABILITY = 0,
  VN_ALGEBRA_KAPPA = 1,
  VN_ALGEBRA_POSSIBILITY = 2,
} VnAlgebra;

typedef enum VnCriterion {
  VN_CRITERION_VN_SEPARATION = 0,
  VN_CRITERION_D_SEPARATION = 1,
  VN_CRITERION_MORALIZATION = 2,
  VN_CRITERION_NUMERIC = 3,
} VnCriterion;

// Result codes shared by every fallible call.
typedef enum VnStatus {
  VN_STATUS_OK = 0,
  VN_STATUS_NULL_POINTER = 1,
  VN_STATUS_INVALID_UTF8 = 2,
  // Malformed model text or arguments.
  VN_STATUS_PARSE_ERROR = 3,
  // Well-formed input that violates a model or algebra rule.
  VN_STATUS_MODEL_ERROR = 4,
  // The output buffer is too small; the required length was reported.
  VN_STATUS_BUFFER_TOO_SMALL = 5,
  // The operation is not defined for this model or algebra.
  VN_STATUS_UNSUPPORTED = 6,
  VN_STATUS_PANIC = 7,
} VnStatus;

typedef enum VnVerdict {
  VN_VERDICT_INDEPENDENT = 0,
  VN_VERDICT_NOT_DERIVABLE = 1,
  VN_VERDICT_NOT_INDEPENDENT = 2,
} VnVerdict;

// A parsed model together with its validated network.
typedef struct VnModel VnModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses and validates model text. On success `*out` receives a handle
// that must be released with `vn_model_free`.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum VnStatus vn_model_parse(const char *text_ptr, struct VnModel **out);

// Releases a model handle. Null is ignored.
//
// # Safety
// `model` must come from `vn_model_parse` and not be used afterwards.
void vn_model_free(struct VnModel *model);

// Number of variables, or 0 for a null handle.
//
// # Safety
// `model` must be null or a live handle.
size_t vn_model_variable_count(const struct VnModel *model);

// Number of valuation nodes, or 0 for a null handle.
//
// # Safety
// `model` must be null or a live handle.
size_t vn_model_node_count(const struct VnModel *model);

// True when every node carries a table.
//
// # Safety
// `model` must be null or a live handle.
bool vn_model_has_tables(const struct VnModel *model);

// The algebra of the model's tables.
//
// # Safety
// `model` must be a live handle and `out` a valid pointer.
enum VnStatus vn_model_algebra(const struct VnModel *model_ptr, enum VnAlgebra *out);

// Decides `r ⊥ s | v` with the chosen criterion. d-separation and
// moralization need a `dag` model; the numeric criterion needs
// probability or kappa tables.
//
// # Safety
// `model` must be a live handle, the three sets NUL-terminated strings and
// `out` a valid pointer.
enum VnStatus vn_model_query(const struct VnModel *model_ptr,
                             const char *r,
                             const char *s,
                             const char *v,
                             enum VnCriterion criterion,
                             enum VnVerdict *out);

// Writes the marginal for `target` (row-major in the listed order, last
// variable fastest) into `buf`. Kappa ranks are written as doubles with
// infinity for impossible configurations. `*written` always receives the
// required length; if `len` is smaller, nothing is written and
// `BufferTooSmall` is returned.
//
// # Safety
// `model` must be a live handle, `target` a NUL-terminated string, `buf`
// valid for `len` doubles (or null when `len` is 0) and `written` valid.
enum VnStatus vn_model_marginal(const struct VnModel *model_ptr,
                                const char *target,
                                double *buf,
                                size_t len,
                                size_t *written);

// Graphviz rendering of the network.
//
// # Safety
// `model` must be a live handle and `out` a valid pointer.
enum VnStatus vn_model_dot(const struct VnModel *model_ptr, char **out);

// Canonical model text.
//
// # Safety
// `model` must be a live handle and `out` a valid pointer.
enum VnStatus vn_model_serialize(const struct VnModel *model_ptr, char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void vn_string_free(char *s);

// Message for the most recent failure on this thread, or null after a
// success. Valid until the next call into the library on this thread.
const char *vn_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VALNET_H */
