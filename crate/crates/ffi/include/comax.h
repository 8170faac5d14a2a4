#ifndef COMAX_H
#define COMAX_H

/* Generated by cbindgen from crates/ffi/src; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ComaxStatus {
  COMAX_STATUS_OK = 0,
  COMAX_STATUS_NULL_POINTER = 1,
  COMAX_STATUS_INVALID_ARGUMENT = 2,
  COMAX_STATUS_INVALID_CAPACITY = 3,
  COMAX_STATUS_DOMAIN_MISMATCH = 4,
  COMAX_STATUS_PARSE = 5,
  COMAX_STATUS_NOT_STABILIZED = 6,
  COMAX_STATUS_INVALID_FUNCTIONAL = 7,
  COMAX_STATUS_PANIC = 8,
} ComaxStatus;

/**
 * A validated capacity on a finite space.
 */
typedef struct ComaxCapacity ComaxCapacity;

/**
 * A real functional on the functions of a finite space.
 */
typedef struct ComaxFunctional ComaxFunctional;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL after a success.
 * The pointer stays valid until the next `comax_*` call on the same thread.
 */
const char *comax_last_error(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be NULL or a string obtained from this library, freed once.
 */
void comax_string_free(char *s);

/**
 * Builds a capacity from a dense table of `2^size` values indexed by subset bitmask.
 *
 * # Safety
 * `values` must point to `len` readable doubles; `out` must be writable.
 */
enum ComaxStatus comax_capacity_new(size_t size,
                                    const double *values,
                                    size_t len,
                                    struct ComaxCapacity **out);

/**
 * Parses a capacity from JSON (`{"size", "values"}` or a density `{"weights"}`).
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum ComaxStatus comax_capacity_from_json(const char *json, struct ComaxCapacity **out);

/**
 * Serializes a capacity as JSON; release the result with `comax_string_free`.
 *
 * # Safety
 * `capacity` must be a live handle; `out` must be writable.
 */
enum ComaxStatus comax_capacity_to_json(const struct ComaxCapacity *capacity, char **out);

/**
 * The possibility capacity `A ↦ max_{x∈A} weights[x]`; the weights must lie in
 * [0, 1] with maximum 1.
 *
 * # Safety
 * `weights` must point to `len` readable doubles; `out` must be writable.
 */
enum ComaxStatus comax_capacity_from_density(const double *weights,
                                             size_t len,
                                             struct ComaxCapacity **out);

/**
 * The Dirac capacity at `point`.
 *
 * # Safety
 * `out` must be writable.
 */
enum ComaxStatus comax_capacity_dirac(size_t size, size_t point, struct ComaxCapacity **out);

/**
 * A random capacity, reproducible from `seed`.
 *
 * # Safety
 * `out` must be writable.
 */
enum ComaxStatus comax_capacity_random(size_t size, uint64_t seed, struct ComaxCapacity **out);

/**
 * # Safety
 * `capacity` must be NULL or a handle from this library, freed once.
 */
void comax_capacity_free(struct ComaxCapacity *capacity);

/**
 * Number of points of the underlying space, or 0 for NULL.
 *
 * # Safety
 * `capacity` must be NULL or a live handle.
 */
size_t comax_capacity_size(const struct ComaxCapacity *capacity);

/**
 * The value on the subset with bitmask `bits`.
 *
 * # Safety
 * `capacity` must be a live handle; `out` must be writable.
 */
enum ComaxStatus comax_capacity_value(const struct ComaxCapacity *capacity,
                                      uint32_t bits,
                                      double *out);

/**
 * Whether the capacity is maxitive, `c(A ∪ B) = max(c(A), c(B))`.
 *
 * # Safety
 * `capacity` must be a live handle; `out` must be writable.
 */
enum ComaxStatus comax_capacity_is_possibility(const struct ComaxCapacity *capacity, bool *out);

/**
 * Image of a capacity under the map `x ↦ image[x]` into a space of `codomain_size` points.
 *
 * # Safety
 * `image` must point to `len` readable entries; `out` must be writable.
 */
enum ComaxStatus comax_capacity_pushforward(const struct ComaxCapacity *capacity,
                                            const size_t *image,
                                            size_t len,
                                            size_t codomain_size,
                                            struct ComaxCapacity **out);

/**
 * The max-plus integral `max_t ln c({φ ≥ t}) + t`.
 *
 * # Safety
 * `values` must point to `len` readable doubles; `out` must be writable.
 */
enum ComaxStatus comax_maxplus_integral(const struct ComaxCapacity *capacity,
                                        const double *values,
                                        size_t len,
                                        double *out);

/**
 * The Choquet integral.
 *
 * # Safety
 * `values` must point to `len` readable doubles; `out` must be writable.
 */
enum ComaxStatus comax_choquet_integral(const struct ComaxCapacity *capacity,
                                        const double *values,
                                        size_t len,
                                        double *out);

/**
 * The Sugeno integral; every value must lie in [0, 1].
 *
 * # Safety
 * `values` must point to `len` readable doubles; `out` must be writable.
 */
enum ComaxStatus comax_sugeno_integral(const struct ComaxCapacity *capacity,
                                       const double *values,
                                       size_t len,
                                       double *out);

/**
 * `φ ↦ ∫ φ dc` as a functional handle.
 *
 * # Safety
 * `capacity` must be a live handle; `out` must be writable.
 */
enum ComaxStatus comax_functional_from_capacity(const struct ComaxCapacity *capacity,
                                                struct ComaxFunctional **out);

/**
 * Wraps a C callback as a functional on a space of `size` points.
 *
 * # Safety
 * `eval` must be callable with `user_data` from any thread for as long as the
 * returned handle lives, and must not unwind.
 */
enum ComaxStatus comax_functional_from_callback(size_t size,
                                                double (*eval)(const double *values,
                                                               size_t len,
                                                               void *user_data),
                                                void *user_data,
                                                struct ComaxFunctional **out);

/**
 * # Safety
 * `functional` must be NULL or a handle from this library, freed once.
 */
void comax_functional_free(struct ComaxFunctional *functional);

/**
 * Evaluates a functional on the function with the given values.
 *
 * # Safety
 * `values` must point to `len` readable doubles; `out` must be writable.
 */
enum ComaxStatus comax_functional_eval(const struct ComaxFunctional *functional,
                                       const double *values,
                                       size_t len,
                                       double *out);

/**
 * Recovers the capacity represented by a comonotonically maxitive functional.
 *
 * # Safety
 * `functional` must be a live handle; `out` must be writable.
 */
enum ComaxStatus comax_reconstruct(const struct ComaxFunctional *functional,
                                   double tol,
                                   struct ComaxCapacity **out);

/**
 * Largest tablewise gap between a capacity and the reconstruction of its integral.
 *
 * # Safety
 * `capacity` must be a live handle; `out` must be writable.
 */
enum ComaxStatus comax_roundtrip(const struct ComaxCapacity *capacity, double tol, double *out);

/**
 * Randomized axiom checks as a JSON report; release it with `comax_string_free`.
 *
 * # Safety
 * `functional` must be a live handle; `out` must be writable.
 */
enum ComaxStatus comax_property_report_json(const struct ComaxFunctional *functional,
                                            uint64_t trials,
                                            uint64_t seed,
                                            double tol,
                                            char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COMAX_H */
