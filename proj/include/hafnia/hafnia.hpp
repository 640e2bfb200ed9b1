/*
 * Copyright 2026 hafnia contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "hafnia/batteries.hpp"
#include "hafnia/blockpoly.hpp"
#include "hafnia/gram.hpp"
#include "hafnia/inequalities.hpp"
#include "hafnia/io.hpp"
#include "hafnia/linalg.hpp"
#include "hafnia/matfun.hpp"
#include "hafnia/matrix.hpp"
#include "hafnia/polarization.hpp"
#include "hafnia/report.hpp"
#include "hafnia/rng.hpp"
#include "hafnia/scalar.hpp"
#include "hafnia/wick.hpp"
