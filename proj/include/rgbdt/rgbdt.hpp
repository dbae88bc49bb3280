#pragma once

// Umbrella header for the full library.

#include "rgbdt/blobs.hpp"
#include "rgbdt/config_io.hpp"
#include "rgbdt/cues.hpp"
#include "rgbdt/image_io.hpp"
#include "rgbdt/kde.hpp"
#include "rgbdt/manifest.hpp"
#include "rgbdt/metrics.hpp"
#include "rgbdt/morphology.hpp"
#include "rgbdt/pipeline.hpp"
#include "rgbdt/scene.hpp"
#include "rgbdt/synth.hpp"
#include "rgbdt/types.hpp"
