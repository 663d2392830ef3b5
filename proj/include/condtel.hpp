// Copyright 2026 The condtel Authors
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

#include "condtel/analysis.hpp"
#include "condtel/bk.hpp"
#include "condtel/errors.hpp"
#include "condtel/fock.hpp"
#include "condtel/numeric.hpp"
#include "condtel/oracle.hpp"
#include "condtel/squeeze.hpp"
#include "condtel/teleport.hpp"
#include "condtel/version.hpp"
