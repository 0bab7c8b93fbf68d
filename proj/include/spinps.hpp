// Copyright 2026 The spinps Authors
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


// Umbrella header for the numerical core. File formats live in
// spinps/io.hpp, which additionally needs nlohmann/json.

#pragma once

#include "spinps/convolution.hpp"
#include "spinps/ensemble.hpp"
#include "spinps/error.hpp"
#include "spinps/parity.hpp"
#include "spinps/phasespace.hpp"
#include "spinps/quadrature.hpp"
#include "spinps/radon.hpp"
#include "spinps/rng.hpp"
#include "spinps/specialfn.hpp"
#include "spinps/spinstates.hpp"
#include "spinps/tomography.hpp"
