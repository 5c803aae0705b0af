#pragma once

// Umbrella header.

#include "error.hpp"
#include "modular.hpp"
#include "field.hpp"
#include "projective.hpp"
#include "exceptional.hpp"
#include "superelliptic.hpp"
#include "drinfeld.hpp"
#include "supersingular.hpp"
#include "atlas.hpp"
#include "neron.hpp"
