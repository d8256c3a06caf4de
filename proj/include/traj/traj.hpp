// Copyright 2026 The trajassign Authors
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

#ifndef TRAJ_TRAJ_HPP_
#define TRAJ_TRAJ_HPP_

#include "traj/baselines.hpp"
#include "traj/dataset.hpp"
#include "traj/geometry.hpp"
#include "traj/global_align.hpp"
#include "traj/local_align.hpp"
#include "traj/param_selection.hpp"
#include "traj/scoring.hpp"
#include "traj/semicontinuous.hpp"
#include "traj/trajectory.hpp"

#endif  // TRAJ_TRAJ_HPP_
