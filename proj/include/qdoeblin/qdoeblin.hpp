#pragma once

#include "qdoeblin/tolerances.hpp"
#include "qdoeblin/error.hpp"
#include "qdoeblin/hermlin.hpp"
#include "qdoeblin/channel.hpp"
#include "qdoeblin/sdp.hpp"
#include "qdoeblin/doeblin.hpp"
#include "qdoeblin/oracles.hpp"
#include "qdoeblin/classical.hpp"
#include "qdoeblin/channel_io.hpp"
#include "qdoeblin/report.hpp"
#include "qdoeblin/sweep.hpp"
#include "qdoeblin/properties.hpp"
