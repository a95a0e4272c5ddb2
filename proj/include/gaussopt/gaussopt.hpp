#pragma once

#include "core.hpp"
#include "fock.hpp"
#include "io.hpp"
#include "lie.hpp"
#include "linalg.hpp"
#include "models.hpp"
#include "objectives.hpp"
#include "optimizer.hpp"
#include "phase_space.hpp"
#include "purification.hpp"
#include "representations.hpp"
