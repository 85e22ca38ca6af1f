#pragma once

// Umbrella header: everything needed to decide and synthesize immobilizing
// contact sets on simplices.

#include "immob/contact.hpp"
#include "immob/errors.hpp"
#include "immob/io.hpp"
#include "immob/mat.hpp"
#include "immob/oracle.hpp"
#include "immob/random.hpp"
#include "immob/reference_case.hpp"
#include "immob/simplex.hpp"
#include "immob/spectral.hpp"
#include "immob/synthesis.hpp"
