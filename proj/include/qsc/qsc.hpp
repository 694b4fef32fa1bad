// Copyright 2026 The qsc developers
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

#include "qsc/comparison.hpp"
#include "qsc/hermitian.hpp"
#include "qsc/io.hpp"
#include "qsc/oracle.hpp"
#include "qsc/orderings.hpp"
#include "qsc/policy.hpp"
#include "qsc/random.hpp"
#include "qsc/sdp.hpp"
#include "qsc/states.hpp"
