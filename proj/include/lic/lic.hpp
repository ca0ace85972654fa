// Copyright 2026 The LIC Authors. All Rights Reserved.
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


// Umbrella header.

#pragma once

#include "lic/behavior_store.hpp"
#include "lic/bench.hpp"
#include "lic/checkpoint.hpp"
#include "lic/clock_esu.hpp"
#include "lic/clock_gsu.hpp"
#include "lic/config.hpp"
#include "lic/dataset_io.hpp"
#include "lic/eval.hpp"
#include "lic/eval_metrics.hpp"
#include "lic/grad_check.hpp"
#include "lic/params.hpp"
#include "lic/projection_cache.hpp"
#include "lic/ranker.hpp"
#include "lic/report_io.hpp"
#include "lic/simgen.hpp"
#include "lic/temporal.hpp"
#include "lic/tensor.hpp"
