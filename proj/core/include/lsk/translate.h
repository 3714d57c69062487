// Copyright 2026 The LSK Authors
// SPDX-License-Identifier: Apache-2.0
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

#pragma once

#include <string>
#include <vector>

#include "lsk/dataset.h"
#include "lsk/gateway.h"

namespace lsk {

struct TranslationOutcome {
  // Same item_id, labels and gold label as the input; texts in the target
  // language where translation succeeded, source text otherwise.
  McqItem item;
  bool complete = true;
  // "question" or "choice:B" for each field left untranslated.
  std::vector<std::string> failed_fields;
  // Chat calls issued (re-asks included).
  int calls = 0;
};

// Translates the question and each choice with separate calls, reassembling
// positionally. A field whose reply lacks the `{Language}_translation` key is
// re-asked once; a field that still fails, or whose call exhausts retries,
// keeps its source text and marks the outcome incomplete. Translating into
// the item's own language copies it without any call. Auth and bad-request
// errors propagate.
TranslationOutcome TranslateItem(const McqItem& item, Language target,
                                 ChatClient& client);

}  // namespace lsk
