// Copyright 2026 The sga-games Authors
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


#ifndef SGA_SGA_HPP_
#define SGA_SGA_HPP_

#include "sga/core.hpp"
#include "sga/game.hpp"
#include "sga/catalog.hpp"
#include "sga/differentiation.hpp"
#include "sga/mechanics.hpp"
#include "sga/adjusters.hpp"
#include "sga/experiments.hpp"
#include "sga/config.hpp"

#endif  // SGA_SGA_HPP_
