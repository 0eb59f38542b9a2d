// Copyright 2026 The evcoop Authors.
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

#ifndef EVCOOP_EVCOOP_HPP
#define EVCOOP_EVCOOP_HPP

#include "evcoop/aumann.hpp"
#include "evcoop/cfn_io.hpp"
#include "evcoop/characteristic.hpp"
#include "evcoop/coalition.hpp"
#include "evcoop/error.hpp"
#include "evcoop/game.hpp"
#include "evcoop/grid.hpp"
#include "evcoop/harness.hpp"
#include "evcoop/ingest.hpp"
#include "evcoop/lp.hpp"
#include "evcoop/record_format.hpp"
#include "evcoop/routing_model.hpp"
#include "evcoop/routing_solver.hpp"
#include "evcoop/routing_validate.hpp"
#include "evcoop/scenario.hpp"
#include "evcoop/scenario_io.hpp"
#include "evcoop/sweep.hpp"
#include "evcoop/transport.hpp"

#endif  // EVCOOP_EVCOOP_HPP
