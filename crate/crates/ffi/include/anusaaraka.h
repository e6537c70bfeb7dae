#ifndef ANUSAARAKA_H
#define ANUSAARAKA_H

#include <stdbool.h>
#include <stdint.h>

// Result codes.
typedef enum AnkStatus {
  ANK_STATUS_OK = 0,
  // A required pointer argument was null.
  ANK_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  ANK_STATUS_INVALID_UTF8 = 2,
  // The lexicon could not be loaded or failed validation.
  ANK_STATUS_LEXICON = 3,
  // The detail level was not 0, 1 or 2.
  ANK_STATUS_INVALID_DETAIL = 4,
  // The notation text did not parse.
  ANK_STATUS_NOTATION = 5,
  // The edit command did not parse.
  ANK_STATUS_COMMAND_SYNTAX = 6,
  // The edit command was rejected by the document.
  ANK_STATUS_EDIT = 7,
  // The output contained a NUL byte.
  ANK_STATUS_INTERIOR_NUL = 8,
  // The library panicked; the handle arguments are left unchanged.
  ANK_STATUS_INTERNAL = 9,
} AnkStatus;

// A translated or parsed document that post-editing commands act on.
typedef struct AnkDocument AnkDocument;

// A loaded language-pair lexicon. Immutable; may be shared across threads.
typedef struct AnkLexicon AnkLexicon;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Loads the lexicon directory `dir`. With `validate` nonzero, a lexicon with
// cross-reference problems is rejected and the first problem reported.
//
// # Safety
// `dir` must be a NUL-terminated string; `out` must be writable.
enum AnkStatus ank_lexicon_load(const char *dir, bool validate, struct AnkLexicon **out);

// # Safety
// `lex` must come from [`ank_lexicon_load`] and not be used afterwards.
void ank_lexicon_free(struct AnkLexicon *lex);

// Translates `text` and renders it at `detail` (0, 1 or 2).
//
// # Safety
// Pointers must be valid; `out` receives a string for [`ank_string_free`].
enum AnkStatus ank_translate(const struct AnkLexicon *lex,
                             const char *text,
                             uint8_t detail,
                             char **out);

// Pre-editing diagnostics for `text` as a JSON array.
//
// # Safety
// Pointers must be valid; `out` receives a string for [`ank_string_free`].
enum AnkStatus ank_check(const struct AnkLexicon *lex, const char *text, char **out);

// Runs the pipeline on `text` and keeps the document for editing.
//
// # Safety
// Pointers must be valid; `out` receives a handle for [`ank_document_free`].
enum AnkStatus ank_document_translate(const struct AnkLexicon *lex,
                                      const char *text,
                                      struct AnkDocument **out);

// Parses level-2 notation into a document.
//
// # Safety
// Pointers must be valid; `out` receives a handle for [`ank_document_free`].
enum AnkStatus ank_document_parse(const char *notation, struct AnkDocument **out);

// Applies one post-editing command line such as `0/1 resolve_vibhakti meM`.
// The document is replaced on success and untouched on failure.
//
// # Safety
// Pointers must be valid.
enum AnkStatus ank_document_apply(struct AnkDocument *doc,
                                  const struct AnkLexicon *lex,
                                  const char *command);

// Renders the document at `detail` (0, 1 or 2).
//
// # Safety
// Pointers must be valid; `out` receives a string for [`ank_string_free`].
enum AnkStatus ank_document_render(const struct AnkDocument *doc, uint8_t detail, char **out);

// # Safety
// `doc` must come from this library and not be used afterwards.
void ank_document_free(struct AnkDocument *doc);

// # Safety
// `s` must be a string returned by this library, or null.
void ank_string_free(char *s);

// Message of the last failed call on this thread, or null. Valid until the
// next call into the library on the same thread; do not free.
const char *ank_last_error(void);

// Library version, statically allocated.
const char *ank_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ANUSAARAKA_H */
