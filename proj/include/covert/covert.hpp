#pragma once

#include "covert/asymptotics.hpp"
#include "covert/channel.hpp"
#include "covert/covert_power.hpp"
#include "covert/divergences.hpp"
#include "covert/error.hpp"
#include "covert/gamma_expansions.hpp"
#include "covert/mc_oracle.hpp"
#include "covert/numerics.hpp"
#include "covert/special_fn.hpp"
#include "covert/throughput.hpp"
#include "covert/tvd.hpp"
