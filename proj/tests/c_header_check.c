/* Copyright 2026 The JLSE Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
/* Compiles the public header as C and makes a round trip through the
 * shared library. */
#include <stdio.h>
#include <string.h>

#include "jlse/c_api.h"

int main(void) {
  jlse_dataset* ds = NULL;
  jlse_dataset_info info;
  double est[5 * 2];
  if (strlen(jlse_version()) == 0) return 1;
  if (jlse_dataset_generate("pendulum", 5, 10, 1, &ds) != JLSE_OK) {
    fprintf(stderr, "%s\n", jlse_last_error());
    return 1;
  }
  if (jlse_dataset_info_get(ds, &info) != JLSE_OK || info.n != 2 || info.m != 1) return 1;
  if (jlse_filter_run(ds, JLSE_SPLIT_TEST, 0, est) != JLSE_OK) return 1;
  jlse_dataset_free(ds);
  if (jlse_dataset_generate("vdp", 5, 3, 1, &ds) != JLSE_ERR_USAGE) return 1;
  printf("c api ok\n");
  return 0;
}
