// Copyright 2026 The Coarselab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

namespace coarselab {

// Selects the kernel flavour for the pair-scan style computations. The
// serial path is the reference; the parallel path must agree with it
// bit-for-bit (merges are ordered so ties resolve identically).
enum class Execution { serial, parallel };

// Number of worker threads OpenMP would use, or 1 without OpenMP.
int max_threads();

}  // namespace coarselab
