// Copyright 2026 The eprbsim Authors
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

#ifndef EPRB_PARALLEL_H_
#define EPRB_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace eprb {

/// Number of worker threads used by library-level parallel loops.
/// Defaults to std::thread::hardware_concurrency(), overridable through the
/// EPRB_THREADS environment variable or set_thread_count(). Results never
/// depend on this value.
std::size_t thread_count();
void set_thread_count(std::size_t n);  // 0 restores the default

/// Runs fn(i) for every i in [0, n) on up to thread_count() threads.
/// Each index is processed exactly once; the first exception thrown by any
/// task is rethrown on the calling thread after all workers have stopped.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace eprb

#endif  // EPRB_PARALLEL_H_
