#ifndef QTT_H
#define QTT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum QttStatus {
  QTT_STATUS_OK = 0,
  QTT_STATUS_NULL_ARGUMENT = 1,
  QTT_STATUS_INVALID_UTF8 = 2,
  QTT_STATUS_ELABORATION_FAILED = 3,
  QTT_STATUS_RUNTIME_FAILED = 4,
  QTT_STATUS_NOT_FOUND = 5,
  QTT_STATUS_INTERNAL = 6,
} QttStatus;

/**
 * Opaque session handle.
 */
typedef struct QttSession QttSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * A new session with the prelude loaded. Free with `qtt_session_free`.
 */
struct QttSession *qtt_session_new(void);

/**
 * # Safety
 * `s` must come from `qtt_session_new` and not be used afterwards.
 */
void qtt_session_free(struct QttSession *s);

/**
 * Message of the most recent failure; empty if none. Owned by the
 * session and valid until the next call on it.
 *
 * # Safety
 * `s` must be a live session or null.
 */
const char *qtt_last_error(const struct QttSession *s);

/**
 * Elaborates source text as a module called `name`.
 *
 * # Safety
 * `name` and `source` must be NUL-terminated strings.
 */
enum QttStatus qtt_load_source(struct QttSession *s, const char *name, const char *source);

/**
 * Elaborates a file and its imports.
 *
 * # Safety
 * `path` must be a NUL-terminated string.
 */
enum QttStatus qtt_load_file(struct QttSession *s, const char *path);

/**
 * `term : type` with the type normalized.
 *
 * # Safety
 * `term` must be a NUL-terminated string and `out` writable.
 */
enum QttStatus qtt_type_of(struct QttSession *s, const char *term, char **out);

/**
 * Normal form of a closed term.
 *
 * # Safety
 * `term` must be a NUL-terminated string and `out` writable.
 */
enum QttStatus qtt_normalize(struct QttSession *s, const char *term, char **out);

/**
 * Reports for every hole, or "no holes".
 *
 * # Safety
 * `out` must be writable.
 */
enum QttStatus qtt_holes(struct QttSession *s, char **out);

/**
 * Run-time form of a definition.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` writable.
 */
enum QttStatus qtt_dump_erased(struct QttSession *s, const char *name, char **out);

/**
 * Runs an entry point with `stdin_text` as its input (may be null) and
 * returns everything it printed.
 *
 * # Safety
 * `entry` must be a NUL-terminated string, `stdin_text` one or null, and
 * `out` writable.
 */
enum QttStatus qtt_run(struct QttSession *s, const char *entry, const char *stdin_text, char **out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `p` must come from this library, or be null.
 */
void qtt_string_free(char *p);

/**
 * Static name of a status code.
 */
const char *qtt_status_name(enum QttStatus st);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QTT_H */
