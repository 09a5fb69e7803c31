#pragma once

#define GBPP_VERSION "0.1.0"
