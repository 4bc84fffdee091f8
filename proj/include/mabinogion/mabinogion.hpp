#pragma once

#include "mabinogion/asymptotics.hpp"
#include "mabinogion/exact.hpp"
#include "mabinogion/identities.hpp"
#include "mabinogion/mprocess.hpp"
#include "mabinogion/numeric.hpp"
#include "mabinogion/output.hpp"
#include "mabinogion/policy_a.hpp"
#include "mabinogion/recursion.hpp"
#include "mabinogion/rng.hpp"
#include "mabinogion/simulate.hpp"
#include "mabinogion/strategies.hpp"
#include "mabinogion/urn.hpp"
