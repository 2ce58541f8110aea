// Copyright 2026 The Leakaudit Authors
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

#ifndef LEAKAUDIT_STATUS_MACROS_H_
#define LEAKAUDIT_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define LEAKAUDIT_CONCAT_INNER_(a, b) a##b
#define LEAKAUDIT_CONCAT_(a, b) LEAKAUDIT_CONCAT_INNER_(a, b)

#define LEAKAUDIT_RETURN_IF_ERROR(expr)          \
  do {                                           \
    ::absl::Status _leakaudit_status = (expr);   \
    if (!_leakaudit_status.ok()) {               \
      return _leakaudit_status;                  \
    }                                            \
  } while (false)

#define LEAKAUDIT_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, expr) \
  auto tmp = (expr);                                     \
  if (!tmp.ok()) {                                       \
    return tmp.status();                                 \
  }                                                      \
  lhs = std::move(*tmp)

// Evaluates `expr` (an absl::StatusOr) and either assigns the value to `lhs`
// or returns the error status from the enclosing function.
#define LEAKAUDIT_ASSIGN_OR_RETURN(lhs, expr) \
  LEAKAUDIT_ASSIGN_OR_RETURN_IMPL_(           \
      LEAKAUDIT_CONCAT_(_leakaudit_statusor_, __LINE__), lhs, expr)

#endif  // LEAKAUDIT_STATUS_MACROS_H_
