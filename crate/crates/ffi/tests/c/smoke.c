#include <stdio.h>
#include <string.h>
#include "golden.h"

#define CHECK(call)                                                 \
  do {                                                              \
    GoldenStatus s_ = (call);                                       \
    if (s_ != GOLDEN_STATUS_OK) {                                   \
      char *m_ = golden_last_error();                               \
      fprintf(stderr, "%s -> %d: %s\n", #call, (int)s_, m_ ? m_ : ""); \
      golden_string_free(m_);                                       \
      return 1;                                                     \
    }                                                               \
  } while (0)

int main(void) {
  GoldenNumber *alpha = NULL, *fs = NULL, *ft = NULL;
  CHECK(golden_number_parse("3/2", &alpha));

  int kind = -1;
  size_t m = 0;
  char *word = NULL;
  CHECK(golden_matching_index(alpha, 1000, &kind, &m, &word));
  if (kind != 0 || m != 2 || strcmp(word, "10") != 0) return 2;
  golden_string_free(word);

  CHECK(golden_frequencies(alpha, &fs, &ft));
  char *text = NULL;
  CHECK(golden_number_to_string(fs, &text));
  printf("freq_s %s\n", text);
  golden_string_free(text);

  GoldenAtlas *atlas = NULL;
  CHECK(golden_atlas_enumerate(6, &atlas));
  if (golden_atlas_len(atlas) == 0) return 3;

  GoldenNumber *bad = NULL;
  if (golden_number_parse("not a number", &bad) != GOLDEN_STATUS_PARSE) return 4;

  golden_atlas_free(atlas);
  golden_number_free(fs);
  golden_number_free(ft);
  golden_number_free(alpha);
  printf("ok %s\n", golden_version());
  return 0;
}
