// Copyright 2026 The flcu Authors
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

#include "flcu/acceptance.hpp"
#include "flcu/bits.hpp"
#include "flcu/circuit.hpp"
#include "flcu/density_matrix.hpp"
#include "flcu/estimators.hpp"
#include "flcu/experiments.hpp"
#include "flcu/heavy_hex.hpp"
#include "flcu/io.hpp"
#include "flcu/lcu_diagonal.hpp"
#include "flcu/problems.hpp"
#include "flcu/qaoa.hpp"
#include "flcu/qpd.hpp"
#include "flcu/random.hpp"
#include "flcu/sample_set.hpp"
#include "flcu/statevector.hpp"
#include "flcu/su2.hpp"
#include "flcu/vqopt.hpp"
