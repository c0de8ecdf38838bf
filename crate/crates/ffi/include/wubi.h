#ifndef WUBI_H
#define WUBI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WubiStatus {
  WUBI_STATUS_OK = 0,
  WUBI_STATUS_NULL_POINTER = 1,
  WUBI_STATUS_INVALID_UTF8 = 2,
  WUBI_STATUS_PARSE = 3,
  WUBI_STATUS_UNKNOWN_CHARACTER = 4,
  WUBI_STATUS_MIXED_TOKEN = 5,
  WUBI_STATUS_MALFORMED_INPUT = 6,
  WUBI_STATUS_DECODE = 7,
  WUBI_STATUS_LENGTH_MISMATCH = 8,
  WUBI_STATUS_INVALID_ARGUMENT = 9,
  WUBI_STATUS_IO = 10,
  WUBI_STATUS_PANIC = 11,
} WubiStatus;

// Opaque handle to a learned BPE model.
typedef struct WubiBpe WubiBpe;

// Opaque codec handle (table plus punctuation map).
typedef struct WubiCodec WubiCodec;

typedef struct WubiSignificance {
  double p_value;
  double delta;
  double bleu_a;
  double bleu_b;
  size_t samples;
  size_t b_at_least_a;
  uint64_t seed;
} WubiSignificance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or NULL. The pointer
// stays valid until the next call into this library on the same thread.
const char *wubi_last_error(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be NULL or a pointer obtained from this library and not yet freed.
void wubi_string_free(char *s);

// Codec over the built-in table and punctuation map. Never NULL.
struct WubiCodec *wubi_codec_new_default(void);

// Loads a codec from a table file and an optional (NULL) punctuation map file.
//
// # Safety
// Paths must be NULL or NUL-terminated strings; `out` must be writable.
enum WubiStatus wubi_codec_from_files(const char *table_path,
                                      const char *punct_path,
                                      struct WubiCodec **out);

// # Safety
// `codec` must be NULL or a handle from this library and not yet freed.
void wubi_codec_free(struct WubiCodec *codec);

// Encodes one segmented sentence. `lenient` non-zero selects lenient mode.
//
// # Safety
// `codec` must be a live handle, `sentence` a NUL-terminated string and
// `out` writable.
enum WubiStatus wubi_encode(const struct WubiCodec *codec,
                            const char *sentence,
                            int lenient,
                            char **out);

// Decodes one Wubi sentence back to segmented Chinese.
//
// # Safety
// As for [`wubi_encode`].
enum WubiStatus wubi_decode(const struct WubiCodec *codec, const char *encoded, char **out);

// Loads a merges file written by `wubi bpe-learn`.
//
// # Safety
// `path` must be a NUL-terminated string and `out` writable.
enum WubiStatus wubi_bpe_load(const char *path, struct WubiBpe **out);

// # Safety
// `bpe` must be NULL or a handle from this library and not yet freed.
void wubi_bpe_free(struct WubiBpe *bpe);

// Splits every word of `sentence` into subwords marked with `@@`.
//
// # Safety
// `bpe` must be a live handle, `sentence` a NUL-terminated string and `out`
// writable.
enum WubiStatus wubi_bpe_apply(const struct WubiBpe *bpe, const char *sentence, char **out);

// Corpus BLEU (0..100) of `n` hypotheses against `n` references.
//
// # Safety
// `hyps` and `refs` must point to `n` NUL-terminated strings each.
enum WubiStatus wubi_corpus_bleu(const char *const *hyps,
                                 const char *const *refs,
                                 size_t n,
                                 double *out_bleu);

// Paired bootstrap test of system A over system B on `n` sentences.
//
// # Safety
// The three arrays must each hold `n` NUL-terminated strings; `out` must be
// writable.
enum WubiStatus wubi_paired_bootstrap(const char *const *hyp_a,
                                      const char *const *hyp_b,
                                      const char *const *refs,
                                      size_t n,
                                      size_t samples,
                                      uint64_t seed,
                                      struct WubiSignificance *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* WUBI_H */
