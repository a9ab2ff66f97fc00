#ifndef EQP_H
#define EQP_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Opaque handle to a loaded equivariant presentation. */
typedef struct eqp_presentation eqp_presentation;

typedef enum eqp_status {
  EQP_OK = 0,           /* operation completed and every check passed */
  EQP_CHECK_FAILED = 1, /* operation ran but a verification check or trace failed */
  EQP_BAD_INPUT = 2,    /* malformed text/JSON or semantically invalid input */
  EQP_CAP_EXCEEDED = 3, /* an enumeration or size cap was hit */
  EQP_INTERNAL = 4,     /* library invariant violation */
} eqp_status;

/* Library version string; static storage, do not free. */
const char* eqp_version(void);

/* Message for the most recent non-OK return on the calling thread; static
   storage, valid until the next library call on that thread. Empty string if
   the last call succeeded. */
const char* eqp_last_error(void);

/* Every char** output is a NUL-terminated UTF-8 JSON document allocated with
   malloc; release it with eqp_string_free. Outputs are written only on the
   return statuses documented per call and are otherwise left untouched. */
void eqp_string_free(char* s);
void eqp_presentation_free(eqp_presentation* p);

/* Loads a presentation from its JSON file format. On EQP_OK the caller owns
   *out. */
eqp_status eqp_presentation_from_json(const char* json_text, eqp_presentation** out);

/* Built-in families: "z2sum" n=2..4, "star" n=3..4, "hyperoct" n=2..3. */
eqp_status eqp_builtin(const char* name, int n, eqp_presentation** out);

eqp_status eqp_presentation_to_json(const eqp_presentation* p, char** json_out);

/* Runs the validation battery (action well-definedness, coset enumeration,
   relator and generation checks, iota compatibility in weak mode) and writes
   the report. max_cosets == 0 selects the default cap. expect_order < 0 skips
   the order comparison; otherwise the realized group order must equal it.
   Returns EQP_OK when everything passed, EQP_CHECK_FAILED when the battery
   completed with failures; the report is written in both cases. */
eqp_status eqp_verify(const eqp_presentation* p, size_t max_cosets, long long expect_order,
                      char** report_json);

/* Converts a weak presentation into a finite one over the same group by
   adjoining derived relators, and emits the certificate bundle whose traces
   rewrite every conjugation relator into the new relator set. Both outputs
   are written only on EQP_OK. max_cosets == 0 selects the default cap. */
eqp_status eqp_deweak(const eqp_presentation* p, size_t max_cosets, eqp_presentation** finite_out,
                      char** bundle_json);

/* Replays every derivation trace in a certificate bundle against the
   presentation the bundle was issued for. A trace passes when its start word
   is the conjugation relator shape for its symbol pair, every step replays,
   the replay lands exactly on the recorded end word, and (in weak mode) the
   end word is the single conjugated symbol. Returns EQP_OK / EQP_CHECK_FAILED
   with the report written in both cases. */
eqp_status eqp_trace_check(const eqp_presentation* p, const char* bundle_json, char** report_json);

/* Second-homology report: invariant factors, representatives, the induced
   action of each gamma generator, module generation rank, and the five-term
   diagnostics. Written only on EQP_OK; diagnostic failures inside the report
   return EQP_CHECK_FAILED with the report written. */
eqp_status eqp_h2(const eqp_presentation* p, char** report_json);

/* Abelianization of the realized group from the expanded relator matrix. */
eqp_status eqp_abelianize(const eqp_presentation* p, char** json_out);

/* Orbit summary: sizes, transitivity, stabilizer orders, transversal words. */
eqp_status eqp_orbits(const eqp_presentation* p, char** json_out);

#ifdef __cplusplus
}
#endif

#endif
