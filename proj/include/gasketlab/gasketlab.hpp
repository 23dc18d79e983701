#pragma once

#include "affine_model.hpp"
#include "antirational.hpp"
#include "boundary_conjugacy.hpp"
#include "fraction.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "packing.hpp"
#include "polynomial.hpp"
#include "raster.hpp"
#include "reflection_group.hpp"
#include "schwarz.hpp"
#include "triangulation.hpp"
#include "verify.hpp"
