// SPDX-License-Identifier: Apache-2.0
//
// capstat - higher-order capacity statistics for MRC diversity receivers
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

#include "capstat/errors.hpp"
#include "capstat/fading.hpp"
#include "capstat/hos.hpp"
#include "capstat/linalg.hpp"
#include "capstat/mc.hpp"
#include "capstat/parallel.hpp"
#include "capstat/quad.hpp"
#include "capstat/specfun.hpp"
