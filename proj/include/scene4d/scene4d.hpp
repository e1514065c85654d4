/* Copyright 2026 The scene4d Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include "scene4d/adapters/client.hpp"
#include "scene4d/adapters/stub.hpp"
#include "scene4d/adapters/types.hpp"
#include "scene4d/adapters/wire.hpp"
#include "scene4d/camera.hpp"
#include "scene4d/cim.hpp"
#include "scene4d/codec.hpp"
#include "scene4d/components.hpp"
#include "scene4d/depth_map.hpp"
#include "scene4d/depthproc.hpp"
#include "scene4d/errors.hpp"
#include "scene4d/frame.hpp"
#include "scene4d/grid.hpp"
#include "scene4d/inpaint.hpp"
#include "scene4d/oracle.hpp"
#include "scene4d/parallel.hpp"
#include "scene4d/pipeline/config.hpp"
#include "scene4d/pipeline/dataset.hpp"
#include "scene4d/pipeline/matrix.hpp"
#include "scene4d/pipeline/run.hpp"
#include "scene4d/pipeline/verify.hpp"
#include "scene4d/pwm.hpp"
#include "scene4d/resample.hpp"
