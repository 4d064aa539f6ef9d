#pragma once

#define MONOSI_VERSION "0.1.0"
