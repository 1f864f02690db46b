// Copyright 2026 The qrelx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "qrelx/experiment.hpp"

namespace qrelx {

/// "seed,fraction,K,tau_baseline,tau_expanded,n_pseudo,n_zero_queries".
void write_sweep_csv(std::ostream& out, const SweepResult& result);

/// "seed,fraction,decile,count,positive_fraction".
void write_sweep_deciles_csv(std::ostream& out, const SweepResult& result);

/// Line chart of tau against K for one qrel fraction: the seed-averaged
/// expanded tau as a polyline and the seed-averaged baseline as a horizontal
/// reference polyline.
std::string render_tau_svg(std::span<const SweepRow> rows, double fraction);

/// Writes sweep.csv, deciles.csv (when present) and tau_fraction_<f>.svg per
/// fraction into `out_dir`, creating it if needed. Returns the written paths.
std::vector<std::filesystem::path> emit_report(const SweepResult& result, const std::filesystem::path& out_dir);

}  // namespace qrelx
