#include <math.h>
#include <stdio.h>
#include "tailspace.h"

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "line %d: %s\n", __LINE__, #cond);         \
      return 1;                                                  \
    }                                                            \
  } while (0)

int main(void) {
  double values[4] = {1, -1, 1, -1};
  TsFunction *f = NULL;
  CHECK(ts_function_new(2, values, 4, &f) == TS_STATUS_OK);
  CHECK(ts_function_dim(f) == 2);

  double coeffs[4];
  CHECK(ts_fwht(f, coeffs, 4) == TS_STATUS_OK);
  CHECK(fabs(coeffs[1] - 1.0) < 1e-12 && fabs(coeffs[0]) < 1e-12);

  int64_t k = 0;
  CHECK(ts_tail_level(f, true, &k) == TS_STATUS_OK && k == 0);

  char *exact = NULL;
  double total = 0;
  CHECK(ts_total_pivotal(f, &total, &exact) == TS_STATUS_OK);
  CHECK(total == 1.0);
  ts_string_free(exact);

  CHECK(ts_fwht(f, coeffs, 2) == TS_STATUS_BUFFER_TOO_SMALL);
  CHECK(ts_last_error_message() != NULL);

  uint32_t rows[1] = {7};
  TsCode *c = NULL;
  uint32_t w = 0;
  CHECK(ts_code_new(3, rows, 1, &c) == TS_STATUS_OK);
  CHECK(ts_code_min_weight(c, &w) == TS_STATUS_OK && w == 3);
  ts_code_free(c);
  ts_function_free(f);
  puts("ok");
  return 0;
}
