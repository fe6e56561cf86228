// Copyright 2026 The sykspectra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Generates the pinned <r> reference table by direct sampling of GOE, GUE
// and GSE matrices. The output file ships with the repository; rerun this
// tool to regenerate it.

#include <CLI11.hpp>
#include <cstdio>

#include "syk/rmt.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate the RMT <r> reference table by direct sampling"};
  std::string out_path = "data/rmt_reference.json";
  int dim = 1000;
  int n_matrices = 500;
  std::uint64_t seed = 20260809;
  app.add_option("--out", out_path, "Output JSON path");
  app.add_option("--dim", dim, "Matrix dimension per sample");
  app.add_option("--matrices", n_matrices, "Number of matrices per ensemble");
  app.add_option("--seed", seed, "Base seed");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto table = syk::RmtReferenceTable::compute(dim, n_matrices, seed);
    table.save(out_path);
    for (const auto ensemble :
         {syk::RmtEnsemble::GOE, syk::RmtEnsemble::GUE, syk::RmtEnsemble::GSE,
          syk::RmtEnsemble::Poisson}) {
      const auto& v = table.value(ensemble);
      std::printf("%-8s <r> = %.6f +- %.6f  (dim %d, %d matrices)\n",
                  syk::rmt_name(ensemble), v.mean_r, v.std_error, v.dim, v.n_matrices);
    }
    std::printf("wrote %s\n", out_path.c_str());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
