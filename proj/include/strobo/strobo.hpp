#pragma once

// Umbrella header: the whole stroboscopic-composite toolkit.

#include "strobo/color.hpp"
#include "strobo/components.hpp"
#include "strobo/errors.hpp"
#include "strobo/frame_source.hpp"
#include "strobo/gmm.hpp"
#include "strobo/image.hpp"
#include "strobo/image_io.hpp"
#include "strobo/mask_ops.hpp"
#include "strobo/moments.hpp"
#include "strobo/morphology.hpp"
#include "strobo/pipeline.hpp"
#include "strobo/png_io.hpp"
#include "strobo/ppm.hpp"
#include "strobo/scale.hpp"
#include "strobo/strobe.hpp"
#include "strobo/synth.hpp"
#include "strobo/synth_io.hpp"
#include "strobo/y4m.hpp"
