// Copyright 2026 The busqed Authors
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

#include <string>
#include <vector>

namespace busqed {

// Sampled scalar observables of a run: one time axis (seconds), one column
// per labelled observable.
struct TimeSeries {
    std::vector<double> times;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> columns;  // columns[k][i], k indexes labels

    std::size_t num_samples() const { return times.size(); }
    const std::vector<double>& column(const std::string& label) const;
};

}  // namespace busqed
