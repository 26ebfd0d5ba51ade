// Copyright 2026 The skillpdf Authors
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

#pragma once

#include "skillpdf/density.hpp"
#include "skillpdf/error.hpp"
#include "skillpdf/ingest.hpp"
#include "skillpdf/kernel.hpp"
#include "skillpdf/metrics.hpp"
#include "skillpdf/model.hpp"
#include "skillpdf/quadrature.hpp"
#include "skillpdf/random.hpp"
#include "skillpdf/rank_centrality.hpp"
