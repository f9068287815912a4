// Copyright 2026 The mcvqc Authors
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

#include "mcvqc/error.hpp"

namespace mcvqc {

const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::Capacity: return "capacity";
        case ErrorCode::InvalidArgument: return "invalid_argument";
        case ErrorCode::DimensionMismatch: return "dimension_mismatch";
        case ErrorCode::Format: return "format";
        case ErrorCode::Io: return "io";
        case ErrorCode::Config: return "config";
        case ErrorCode::StaleCache: return "stale_cache";
        case ErrorCode::NonFinite: return "non_finite";
    }
    return "unknown";
}

}  // namespace mcvqc
