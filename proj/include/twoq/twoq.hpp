#pragma once

#include "twoq/criteria.hpp"
#include "twoq/entanglement.hpp"
#include "twoq/errors.hpp"
#include "twoq/harness.hpp"
#include "twoq/io.hpp"
#include "twoq/matcore.hpp"
#include "twoq/quartic.hpp"
#include "twoq/states.hpp"
