// Copyright 2026 The qslack Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#ifndef QSLACK_QSLACK_HPP_INCLUDED
#define QSLACK_QSLACK_HPP_INCLUDED

#include "qslack/checked.hpp"
#include "qslack/constraint.hpp"
#include "qslack/harness.hpp"
#include "qslack/instance_io.hpp"
#include "qslack/oracle.hpp"
#include "qslack/qubo.hpp"
#include "qslack/rng.hpp"
#include "qslack/tabu.hpp"

#endif  // QSLACK_QSLACK_HPP_INCLUDED
