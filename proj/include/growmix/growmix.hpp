#pragma once

// Umbrella header.

#include "growmix/dynamics.hpp"
#include "growmix/errors.hpp"
#include "growmix/io.hpp"
#include "growmix/matrix.hpp"
#include "growmix/mlcore.hpp"
#include "growmix/models.hpp"
#include "growmix/spectral.hpp"
#include "growmix/structure.hpp"
#include "growmix/sweep.hpp"
#include "growmix/theorems.hpp"
