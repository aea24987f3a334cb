#ifndef FIVELIST_H
#define FIVELIST_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FlStatus {
  FL_OK = 0,
  FL_NULL_ARGUMENT = 1,
  FL_PARSE_ERROR = 2,
  FL_INVALID_INPUT = 3,
  FL_IO_ERROR = 4,
  FL_INCOMPLETE_LIBRARY = 5,
  FL_BUFFER_TOO_SMALL = 6,
  FL_OUT_OF_RANGE = 7,
  FL_INTERNAL = 8,
} FlStatus;

/*
 Verdict of `fl_record_check`.
 */
typedef enum FlVerdict {
  FL_POSSIBLY_CRITICAL = 0,
  FL_PROVABLY_REDUCIBLE = 1,
  FL_CONTAINS_OBSTRUCTION = 2,
  FL_IS_K7 = 3,
  FL_CERTIFIED5_CHOOSABLE = 4,
  FL_UNRESOLVED = 5,
} FlVerdict;

/*
 Cycle-canvas candidates by circumference.
 */
typedef struct FlCycleLibrary FlCycleLibrary;

/*
 A parsed canvas or torus record.
 */
typedef struct FlRecord FlRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the last failed call on this thread.

 # Safety
 `buf` must point to `len` writable bytes; `needed` may be null.
 */
enum FlStatus fl_last_error(char *buf, size_t len, size_t *needed);

/*
 Parses the first record of a NUL-terminated text.

 # Safety
 `text` must be a valid C string and `out` a valid pointer.
 */
enum FlStatus fl_record_parse(const char *text, struct FlRecord **out);

/*
 # Safety
 `rec` must come from `fl_record_parse` and not be used afterwards; null is ignored.
 */
void fl_record_free(struct FlRecord *rec);

/*
 Canonical key of a record, as hex.

 # Safety
 `rec` must be a live handle; `buf` must point to `len` writable bytes.
 */
enum FlStatus fl_record_key(const struct FlRecord *rec, char *buf, size_t len, size_t *needed);

/*
 Number of vertices of a record.

 # Safety
 `rec` must be a live handle and `out` a valid pointer.
 */
enum FlStatus fl_record_vertices(const struct FlRecord *rec, size_t *out);

/*
 Criticality filter for canvases, classification for torus records.

 # Safety
 `rec` must be a live handle and `out` a valid pointer.
 */
enum FlStatus fl_record_check(const struct FlRecord *rec, enum FlVerdict *out);

/*
 Enumerates cycle-canvas candidates of circumference `3..=max_circ`.

 # Safety
 `out` must be a valid pointer.
 */
enum FlStatus fl_cycles_enumerate(size_t max_circ, struct FlCycleLibrary **out);

/*
 Number of candidates and their largest vertex count (0 when empty) for one
 circumference.

 # Safety
 `lib` must be a live handle; `count` and `max_vertices` valid pointers.
 */
enum FlStatus fl_cycles_class(const struct FlCycleLibrary *lib,
                              size_t circumference,
                              size_t *count,
                              size_t *max_vertices);

/*
 # Safety
 `lib` must come from `fl_cycles_enumerate` and not be used afterwards; null is ignored.
 */
void fl_cycles_free(struct FlCycleLibrary *lib);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FIVELIST_H */
