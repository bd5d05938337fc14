// Copyright 2026 The hsid Authors. All Rights Reserved.
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

// Convenience header pulling in the whole public API.

#ifndef HSID_HSID_HPP_
#define HSID_HSID_HPP_

#include "hsid/dataset.hpp"
#include "hsid/error.hpp"
#include "hsid/estimate.hpp"
#include "hsid/excitation.hpp"
#include "hsid/model.hpp"
#include "hsid/persistence.hpp"
#include "hsid/preprocess.hpp"
#include "hsid/structure.hpp"
#include "hsid/validate.hpp"

#endif  // HSID_HSID_HPP_
