// SPDX-License-Identifier: Apache-2.0
//
// pilotopt - pilot assignment optimization toolkit for multi-cell massive MIMO
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "pilotopt/encoding.hpp"
#include "pilotopt/harness.hpp"
#include "pilotopt/io.hpp"
#include "pilotopt/kmeans.hpp"
#include "pilotopt/metrics.hpp"
#include "pilotopt/rng.hpp"
#include "pilotopt/solvers.hpp"
#include "pilotopt/topology.hpp"
