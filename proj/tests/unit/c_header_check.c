/*
Copyright 2026 bekktail developers
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/


/* The public header must compile as C. */
#include <stdio.h>

#include "bekktail/bekktail.h"

int main(void) {
    double a = 0.0;
    if (bekk_solve_component_tail_index(1.0, &a) != BEKK_OK) return 1;
    printf("bekktail %s alpha(1) = %.6f\n", bekk_version(), a);
    return (a > 1.999 && a < 2.001) ? 0 : 1;
}
