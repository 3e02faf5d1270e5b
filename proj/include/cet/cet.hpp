//------------------------------------------------------------------------------
//
//   Copyright 2026 The cet Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------
#pragma once

#include "cet/error.hpp"
#include "cet/factorization.hpp"
#include "cet/multiletter.hpp"
#include "cet/oracle.hpp"
#include "cet/prob_core.hpp"
#include "cet/simcode.hpp"
#include "cet/solver.hpp"
#include "cet/wyner_region.hpp"
