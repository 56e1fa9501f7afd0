// Copyright 2026 The ssir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SSIR_PARALLEL_HPP_
#define SSIR_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace ssir {

// Runs fn(0) .. fn(count - 1) on up to `workers` threads (0 = hardware
// concurrency). Tasks must write to disjoint outputs; callers reduce in
// index order afterwards so results do not depend on the worker count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  int workers = 0);

}  // namespace ssir

#endif  // SSIR_PARALLEL_HPP_
