// Copyright 2026 The RBlur Authors
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

#ifndef RBLUR_RANDOM_H_
#define RBLUR_RANDOM_H_

#include <cstdint>
#include <random>

namespace rblur {

using Rng = std::mt19937_64;

// Independent stream for work item `index` under `master_seed`. Every
// parallel consumer (batch images, certification sample blocks) derives its
// generator this way so results never depend on scheduling.
inline Rng derive_stream(std::uint64_t master_seed, std::uint64_t index,
                         std::uint64_t domain = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(domain),
                    static_cast<std::uint32_t>(domain >> 32)};
  return Rng(seq);
}

}  // namespace rblur

#endif  // RBLUR_RANDOM_H_
