// Copyright 2026 The clh-kit Authors
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

#include <stdexcept>
#include <string>

namespace clh {

// Malformed or inconsistent input (CLI exit code 1).
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A configured cap or search budget was exceeded (CLI exit code 3).
struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numerical self-check failed, e.g. unstable block structure.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace clh
