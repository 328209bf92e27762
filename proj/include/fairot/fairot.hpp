// Copyright 2026 The fairot Authors
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

#include "fairot/barycenter.hpp"
#include "fairot/discrete_distribution.hpp"
#include "fairot/errors.hpp"
#include "fairot/grouped_dataset.hpp"
#include "fairot/io.hpp"
#include "fairot/kernel_regression.hpp"
#include "fairot/metrics.hpp"
#include "fairot/postprocess.hpp"
#include "fairot/synth.hpp"
#include "fairot/transport.hpp"
